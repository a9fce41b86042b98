#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "xhawkes/core.hpp"

namespace xhawkes {

/// Conditioning information at time s: the intensity and count at s.
struct ConditioningState {
    double s = 0.0;
    double lambda_s = 0.0;  ///< intensity at s (post-jump value when s = ell)
    double n_s = 0.0;       ///< count at s

    void validate() const {
        if (!std::isfinite(s) || !std::isfinite(lambda_s) || !std::isfinite(n_s)) {
            throw std::invalid_argument("ConditioningState: fields must be finite");
        }
        if (n_s < 0.0) throw std::invalid_argument("ConditioningState: n_s must be >= 0");
    }
};

/// Conditioning for a forecast from scratch: s = 0, lambda_s = lambda0, N_s = 0.
[[nodiscard]] inline ConditioningState fresh_start(const PhaseOneParams& p) {
    return {0.0, p.lambda0, 0.0};
}

namespace detail {

// Relative half-width around delta = m inside which the equal-decay branch is
// used; the general branch stays accurate up to this boundary.
inline constexpr double kEqualBranchRelTol = 1e-6;

/// g(x) = (1 - e^{-x}) / x, extended by g(0) = 1.
inline double decay_mean(double x) {
    if (std::abs(x) < 1e-5) {
        return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    }
    return -std::expm1(-x) / x;
}

/// h(x) = (e^{-x} - 1 + x) / x^2, extended by h(0) = 1/2.
inline double decay_mean2(double x) {
    if (std::abs(x) < 1e-3) {
        return 0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x * x * x * x / 720.0;
    }
    return (std::expm1(-x) + x) / (x * x);
}

/// Solution of d/dt E[lambda] = c - d E[lambda] started at lambda_s:
/// lambda_s e^{-d dt} + c dt g(d dt); reduces to lambda_s + c dt when d = 0.
inline double lambda_forward(double lambda_s, double c, double d, double dt) {
    if (d == 0.0) return lambda_s + c * dt;
    return lambda_s * std::exp(-d * dt) + c * dt * decay_mean(d * dt);
}

/// Integral of lambda_forward over [s, s+dt]:
/// lambda_s dt g(d dt) + c dt^2 h(d dt); reduces to lambda_s dt + c dt^2 / 2 when d = 0.
inline double count_forward(double lambda_s, double c, double d, double dt) {
    if (d == 0.0) return lambda_s * dt + 0.5 * c * dt * dt;
    const double x = d * dt;
    return lambda_s * dt * decay_mean(x) + c * dt * dt * decay_mean2(x);
}

/// Decay gap delta - mean_mark, snapped to zero in the near-singular region.
inline double decay_gap(double delta, double mean_mark) {
    const double d = delta - mean_mark;
    return std::abs(d) <= kEqualBranchRelTol * delta ? 0.0 : d;
}

struct PhaseCoefficients {
    double c;  // drift: rho*mbar + delta*lambda0 before ell, alpha0*delta*lambda0 after
    double d;  // decay gap: delta - m before ell, delta - m_al after
};

inline PhaseCoefficients phase1_coeffs(const PhaseOneParams& p) {
    return {p.rho * p.mbar + p.delta * p.lambda0, decay_gap(p.delta, p.m)};
}

inline PhaseCoefficients phase2_coeffs(const PhaseOneParams& p, const ReactionParams& r) {
    return {r.alpha0 * p.delta * p.lambda0, decay_gap(p.delta, r.m_al)};
}

/// E[lambda_{ell^-} | F_s] for s < ell.
inline double expected_lambda_before_ell(const PhaseOneParams& p, const ConditioningState& st,
                                         double ell) {
    const auto [c, d] = phase1_coeffs(p);
    return lambda_forward(st.lambda_s, c, d, ell - st.s);
}

/// Post-jump intensity level at ell: alpha0 lambda0 + alpha1 (E[lambda_{ell^-}] - lambda0).
inline double expected_lambda_jump(const PhaseOneParams& p, const ReactionParams& r,
                                   double lam_ell_minus) {
    return (r.alpha0 - r.alpha1) * p.lambda0 + r.alpha1 * lam_ell_minus;
}

}  // namespace detail

/// E[lambda_t | F_s] for all time configurations relative to ell, with the
/// delta = m branches selected by relative tolerance on delta - m.
[[nodiscard]] inline double expected_lambda(const PhaseOneParams& p,
                                            const std::optional<ReactionParams>& r,
                                            const ConditioningState& st, double t) {
    st.validate();
    if (t < st.s) throw std::domain_error("expected_lambda: t < s");
    if (!r || t < r->ell) {
        const auto [c, d] = detail::phase1_coeffs(p);
        return detail::lambda_forward(st.lambda_s, c, d, t - st.s);
    }
    const auto [c2, d2] = detail::phase2_coeffs(p, *r);
    if (st.s >= r->ell) {
        // Both s and t in the second phase; lambda_s is the post-ell intensity.
        return detail::lambda_forward(st.lambda_s, c2, d2, t - st.s);
    }
    // s < ell <= t: propagate to ell^-, apply the reaction jump, then continue.
    const double lam_ell_minus = detail::expected_lambda_before_ell(p, st, r->ell);
    const double lam_jump = detail::expected_lambda_jump(p, *r, lam_ell_minus);
    return detail::lambda_forward(lam_jump, c2, d2, t - r->ell);
}

/// E[N_t | F_s]: all six branches (three time configurations x {delta = m, delta != m}).
[[nodiscard]] inline double expected_count(const PhaseOneParams& p,
                                           const std::optional<ReactionParams>& r,
                                           const ConditioningState& st, double t) {
    st.validate();
    if (t < st.s) throw std::domain_error("expected_count: t < s");
    if (!r || t <= r->ell) {
        const auto [c, d] = detail::phase1_coeffs(p);
        return st.n_s + detail::count_forward(st.lambda_s, c, d, t - st.s);
    }
    const auto [c2, d2] = detail::phase2_coeffs(p, *r);
    if (st.s >= r->ell) {
        return st.n_s + detail::count_forward(st.lambda_s, c2, d2, t - st.s);
    }
    // s < ell < t: E[N_ell | F_s] plus the post-reaction accumulation.
    const auto [c1, d1] = detail::phase1_coeffs(p);
    const double n_ell = st.n_s + detail::count_forward(st.lambda_s, c1, d1, r->ell - st.s);
    const double lam_ell_minus = detail::expected_lambda_before_ell(p, st, r->ell);
    const double lam_jump = detail::expected_lambda_jump(p, *r, lam_ell_minus);
    return n_ell + detail::count_forward(lam_jump, c2, d2, t - r->ell);
}

/// Expected per-interval increments E[N_{s+(k+1)D} - N_{s+kD} | F_s] on the
/// step-D grid up to the horizon; the trailing partial step is dropped.
[[nodiscard]] inline std::vector<double> expected_increments(
    const PhaseOneParams& p, const std::optional<ReactionParams>& r, const ConditioningState& st,
    double step, double horizon) {
    if (!(step > 0.0)) throw std::domain_error("expected_increments: step must be > 0");
    const auto k_max =
        static_cast<std::size_t>(std::floor((horizon - st.s) / step + 1e-9));
    std::vector<double> out;
    out.reserve(k_max);
    double prev = expected_count(p, r, st, st.s);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double cur = expected_count(p, r, st, st.s + static_cast<double>(k) * step);
        out.push_back(cur - prev);
        prev = cur;
    }
    return out;
}

}  // namespace xhawkes
