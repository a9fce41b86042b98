#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/expectation.hpp"
#include "xhawkes/intensity.hpp"
#include "xhawkes/nelder_mead.hpp"

namespace xhawkes {

enum class FitMethod { likelihood, mse_int, mse_ext };
enum class FitStrategy { full5, injected_rho, injected_rho_mbar };

/// Exposure term of the external Poisson factor in the likelihood: the window
/// length (tau - s), or the span between the last external events before s and
/// tau as written in the source formula (kept for comparison; ill-defined with
/// no external events).
enum class PoissonExposure { window, last_event_span };

struct OptimizerOptions {
    std::size_t max_iterations = 2000;
    double f_tol = 1e-8;
    double x_tol = 1e-8;
    int restarts = 3;
    bool log_transform = true;  ///< optimize in log-parameter space (positivity built in)
    PoissonExposure exposure = PoissonExposure::window;
    double delta_step = 2.0;    ///< interval length for the MSE objectives, days

    void validate() const {
        if (!(f_tol > 0.0) || !(x_tol > 0.0) || !(delta_step > 0.0)) {
            throw std::invalid_argument("OptimizerOptions: tolerances and delta_step must be > 0");
        }
    }
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool params_admissible(const PhaseOneParams& p) {
    return std::isfinite(p.lambda0) && std::isfinite(p.rho) && std::isfinite(p.mbar) &&
           std::isfinite(p.m) && std::isfinite(p.delta) && p.lambda0 > 0.0 && p.delta > 0.0 &&
           p.rho >= 0.0 && p.mbar >= 0.0 && p.m >= 0.0;
}

}  // namespace detail

/// Exact negative log-likelihood of the joint attack/vulnerability sample over
/// (s, tau], conditioning on the history in [t0, s]. Inadmissible parameters
/// and zero intensity at an event yield +infinity (objective sentinel).
[[nodiscard]] inline double neg_log_likelihood(const PhaseOneParams& p, const EventStream& ev,
                                               PoissonExposure exposure = PoissonExposure::window) {
    if (!detail::params_admissible(p)) return detail::kInf;
    const double s = ev.s;
    const double tau = ev.tau;

    // Compensator over [s, tau], with pre-s history contributing decayed tails.
    double integral = p.lambda0 * (tau - s);
    for (std::size_t i = 0; i < ev.internal_times.size(); ++i) {
        integral += detail::kernel_integral(ev.internal_times[i],
                                            detail::mark_or(ev.internal_marks, i, p.m),
                                            p.delta, s, tau);
    }
    for (std::size_t i = 0; i < ev.external_times.size(); ++i) {
        integral += detail::kernel_integral(ev.external_times[i],
                                            detail::mark_or(ev.external_marks, i, p.mbar),
                                            p.delta, s, tau);
    }

    // Log-intensities at internal events in (s, tau], by one chronological pass
    // carrying the decayed kernel sums. Internal events are processed before
    // external ones at ties so an event never sees a same-time jump.
    double sum_ln = 0.0;
    double s_int = 0.0;  // sum of mark * exp(-delta (t - T)) over internal T < t
    double s_ext = 0.0;
    double t_cur = -detail::kInf;
    std::size_t i = 0, k = 0;
    const auto& it = ev.internal_times;
    const auto& et = ev.external_times;
    while (i < it.size() || k < et.size()) {
        const bool take_internal =
            i < it.size() && (k >= et.size() || it[i] <= et[k]);
        const double t = take_internal ? it[i] : et[k];
        if (std::isfinite(t_cur)) {
            const double decay = std::exp(-p.delta * (t - t_cur));
            s_int *= decay;
            s_ext *= decay;
        }
        t_cur = t;
        if (take_internal) {
            if (t > s && t <= tau) {
                const double lam = p.lambda0 + s_int + s_ext;
                if (!(lam > 0.0)) return detail::kInf;
                sum_ln += std::log(lam);
            }
            s_int += detail::mark_or(ev.internal_marks, i, p.m);
            ++i;
        } else {
            s_ext += detail::mark_or(ev.external_marks, k, p.mbar);
            ++k;
        }
    }

    // External Poisson factor.
    const auto n_ext = static_cast<double>(ev.external_count(s, tau));
    double ext_part = 0.0;
    if (n_ext > 0.0 && p.rho <= 0.0) return detail::kInf;
    if (p.rho > 0.0) {
        double w = tau - s;
        if (exposure == PoissonExposure::last_event_span) {
            auto last_at_or_before = [&](double bound) {
                auto ub = std::upper_bound(et.begin(), et.end(), bound);
                return ub == et.begin() ? ev.t0 : *(ub - 1);
            };
            w = et.empty() ? 0.0 : last_at_or_before(tau) - last_at_or_before(s);
        }
        ext_part = -n_ext * std::log(p.rho) + p.rho * w;
    }

    const double nll = integral - sum_ln + ext_part;
    return std::isfinite(nll) ? nll : detail::kInf;
}

namespace detail {

inline std::size_t mse_interval_count(const EventStream& ev, double step) {
    const auto k = static_cast<std::size_t>(std::floor((ev.tau - ev.s) / step + 1e-9));
    if (k < 1) throw std::domain_error("mse: window shorter than one interval");
    return k;
}

inline double mse_objective(const PhaseOneParams& p, const EventStream& ev, double step,
                            bool with_external_term) {
    if (!(step > 0.0)) throw std::domain_error("mse: step must be > 0");
    const std::size_t k_max = mse_interval_count(ev, step);
    if (!params_admissible(p)) return kInf;

    const double lambda_s = intensity_at(p, std::nullopt, ev, ev.s);
    const ConditioningState st{ev.s, lambda_s, 0.0};
    const auto expected = expected_increments(p, std::nullopt, st, step, ev.s + static_cast<double>(k_max) * step);

    double acc = 0.0;
    for (std::size_t k = 0; k < k_max; ++k) {
        const double a = ev.s + static_cast<double>(k) * step;
        const double b = a + step;
        const double diff =
            expected[k] - static_cast<double>(ev.internal_count(a, b));
        acc += diff * diff;
        if (with_external_term) {
            const double ediff = p.rho * step - static_cast<double>(ev.external_count(a, b));
            acc += ediff * ediff;
        }
    }
    const double val = acc / (ev.tau - ev.s);
    return std::isfinite(val) ? val : kInf;
}

}  // namespace detail

/// Mean squared error between model and observed internal increments on the
/// step grid, normalized by the window length.
[[nodiscard]] inline double mse_int(const PhaseOneParams& p, const EventStream& ev, double step) {
    return detail::mse_objective(p, ev, step, false);
}

/// mse_int augmented with the external increment distance (rho*step vs observed).
[[nodiscard]] inline double mse_ext(const PhaseOneParams& p, const EventStream& ev, double step) {
    return detail::mse_objective(p, ev, step, true);
}

namespace detail {

inline std::vector<double> encode(const std::vector<double>& theta, bool log_space) {
    std::vector<double> x(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        x[i] = log_space ? std::log(std::max(theta[i], 1e-8)) : theta[i];
    }
    return x;
}

inline std::vector<double> decode(const std::vector<double>& x, bool log_space) {
    std::vector<double> theta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        theta[i] = log_space ? std::exp(x[i]) : x[i];
    }
    return theta;
}

}  // namespace detail

/// Minimizes an objective over the model parameters by simplex descent in
/// log-parameter space (positivity enforced by the transform).
[[nodiscard]] inline PhaseOneParams minimize(
    const std::function<double(const PhaseOneParams&)>& objective, const PhaseOneParams& init,
    const OptimizerOptions& opts = {}, NelderMeadResult* stats = nullptr) {
    opts.validate();
    const std::vector<double> theta0{init.lambda0, init.rho, init.mbar, init.m, init.delta};
    auto wrapped = [&](const std::vector<double>& x) {
        const auto th = detail::decode(x, opts.log_transform);
        return objective(PhaseOneParams{th[0], th[1], th[2], th[3], th[4]});
    };
    NelderMeadOptions nm{opts.max_iterations, opts.f_tol, opts.x_tol, opts.restarts};
    const auto res = nelder_mead(wrapped, detail::encode(theta0, opts.log_transform), nm);
    if (stats) *stats = res;
    const auto th = detail::decode(res.x, opts.log_transform);
    return PhaseOneParams{th[0], th[1], th[2], th[3], th[4]};
}

struct ConfidenceInterval {
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
};

struct HessianCi {
    std::array<ConfidenceInterval, 5> ci{};  // lambda0, rho, mbar, m, delta
    std::array<double, 5> std_error{};
    bool reliable = false;
};

namespace detail {

/// Dense symmetric solve helpers for the (at most 5x5) observed information.
inline bool invert_spd(std::vector<double>& a, std::size_t n) {
    // Gauss-Jordan with partial pivoting; returns false when singular.
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (a[piv * n + col] == 0.0 || !std::isfinite(a[piv * n + col])) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        }
        const double d = a[col * n + col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    a = std::move(inv);
    return true;
}

inline bool is_positive_definite(std::vector<double> a, std::size_t n) {
    // In-place Cholesky attempt.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(sum > 0.0) || !std::isfinite(sum)) return false;
                a[i * n + i] = std::sqrt(sum);
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
    }
    return true;
}

/// Central-difference Hessian of f over the coordinates listed in `free_idx`,
/// followed by inversion into a covariance; 95% intervals via normality.
inline HessianCi hessian_ci_impl(const std::function<double(const std::array<double, 5>&)>& f,
                                 const std::array<double, 5>& theta,
                                 const std::vector<std::size_t>& free_idx) {
    const std::size_t n = free_idx.size();
    std::array<double, 5> h{};
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = free_idx[a];
        h[i] = std::max(1e-4 * std::abs(theta[i]), 1e-6);
    }
    auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
        auto th = theta;
        th[i] += di;
        th[j] += dj;
        return f(th);
    };
    const double f0 = f(theta);
    std::vector<double> hess(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = free_idx[a];
        hess[a * n + a] =
            (at(i, h[i], i, 0.0) - 2.0 * f0 + at(i, -h[i], i, 0.0)) / (h[i] * h[i]);
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t j = free_idx[b];
            const double v = (at(i, h[i], j, h[j]) - at(i, h[i], j, -h[j]) -
                              at(i, -h[i], j, h[j]) + at(i, -h[i], j, -h[j])) /
                             (4.0 * h[i] * h[j]);
            hess[a * n + b] = hess[b * n + a] = v;
        }
    }

    HessianCi out;
    bool finite = true;
    for (double v : hess) finite = finite && std::isfinite(v);
    const bool pd = finite && is_positive_definite(hess, n);
    std::vector<double> cov = hess;
    const bool inverted = finite && invert_spd(cov, n);
    out.reliable = pd && inverted;
    if (inverted) {
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t i = free_idx[a];
            const double var = cov[a * n + a];
            if (var > 0.0 && std::isfinite(var)) {
                const double se = std::sqrt(var);
                out.std_error[i] = se;
                out.ci[i] = {theta[i] - 1.96 * se, theta[i] + 1.96 * se};
            } else {
                out.reliable = false;
            }
        }
    }
    return out;
}

}  // namespace detail

/// 95% confidence intervals at a likelihood optimum: the covariance is the
/// inverse of the finite-difference Hessian of the exact -ln L.
[[nodiscard]] inline HessianCi confidence_intervals(
    const PhaseOneParams& p_hat, const EventStream& ev,
    PoissonExposure exposure = PoissonExposure::window) {
    auto f = [&](const std::array<double, 5>& th) {
        return neg_log_likelihood(PhaseOneParams{th[0], th[1], th[2], th[3], th[4]}, ev, exposure);
    };
    std::vector<std::size_t> free_idx;
    const std::array<double, 5> theta{p_hat.lambda0, p_hat.rho, p_hat.mbar, p_hat.m, p_hat.delta};
    const bool external_active = p_hat.rho > 0.0 && !ev.external_times.empty();
    for (std::size_t i = 0; i < 5; ++i) {
        if (!external_active && (i == 1 || i == 2)) continue;  // rho, mbar not identified
        free_idx.push_back(i);
    }
    return detail::hessian_ci_impl(f, theta, free_idx);
}

struct CalibrationResult {
    PhaseOneParams params;
    FitMethod method = FitMethod::likelihood;
    FitStrategy strategy = FitStrategy::full5;
    double neg_log_lik = std::numeric_limits<double>::quiet_NaN();
    double mse_int_per_event = std::numeric_limits<double>::quiet_NaN();
    double mse_ext_per_event = std::numeric_limits<double>::quiet_NaN();
    double phi_norm = std::numeric_limits<double>::quiet_NaN();
    double phibar_norm = std::numeric_limits<double>::quiet_NaN();
    double ergodicity_ratio = std::numeric_limits<double>::quiet_NaN();
    std::array<ConfidenceInterval, 5> ci95{};  // lambda0, rho, mbar, m, delta
    std::array<double, 5> ci_std_error{};
    bool has_ci = false;
    bool ci_reliable = false;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Method-of-moments flavored starting point: half the internal rate as the
/// baseline, the empirical external rate, unit decay, and the remaining rate
/// share split between the kernels.
[[nodiscard]] inline PhaseOneParams default_init(const EventStream& ev) {
    const double span = std::max(ev.tau - ev.s, 1e-6);
    const double full_span = std::max(ev.tau - ev.t0, 1e-6);
    const double r_int =
        std::max(static_cast<double>(ev.internal_count(ev.s, ev.tau)) / span, 1.0 / span);
    const double r_ext = static_cast<double>(ev.external_times.size()) / full_span;
    const double delta = 1.0;
    const double share = 0.5;  // rate share not explained by the baseline guess
    return PhaseOneParams{0.5 * r_int, std::max(r_ext, 1e-3), 0.5 * delta * share,
                          0.5 * delta * share, delta};
}

namespace detail {

inline void fill_diagnostics(CalibrationResult& res, const EventStream& ev,
                             const OptimizerOptions& opts) {
    const auto& p = res.params;
    res.phi_norm = phi_norm(p);
    res.phibar_norm = phibar_norm(p);
    res.ergodicity_ratio = res.phi_norm < 1.0
                               ? ergodicity_ratio(p)
                               : std::numeric_limits<double>::quiet_NaN();
    res.neg_log_lik = neg_log_likelihood(p, ev, opts.exposure);
    const auto events = static_cast<double>(ev.internal_count(ev.s, ev.tau));
    try {
        res.mse_int_per_event = events > 0.0 ? mse_int(p, ev, opts.delta_step) / events
                                             : std::numeric_limits<double>::quiet_NaN();
        res.mse_ext_per_event = events > 0.0 ? mse_ext(p, ev, opts.delta_step) / events
                                             : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::domain_error&) {
        // window shorter than one MSE interval; leave the fields NaN
    }
}

}  // namespace detail

/// Fits the first-phase parameters by the chosen method and injection strategy.
/// injected_rho fixes rho at the empirical external rate over [t0, tau];
/// injected_rho_mbar additionally fixes the product rho*mbar at its value under
/// `init` (mbar recovered as product/rho afterwards).
[[nodiscard]] inline CalibrationResult fit(const EventStream& ev, FitMethod method,
                                           FitStrategy strategy, const PhaseOneParams& init,
                                           const OptimizerOptions& opts = {}) {
    ev.validate();
    init.validate();
    opts.validate();

    auto objective = [&](const PhaseOneParams& p) {
        switch (method) {
            case FitMethod::likelihood:
                return neg_log_likelihood(p, ev, opts.exposure);
            case FitMethod::mse_int:
                return mse_int(p, ev, opts.delta_step);
            case FitMethod::mse_ext:
                return mse_ext(p, ev, opts.delta_step);
        }
        return detail::kInf;
    };

    double rho_fixed = init.rho;
    double product_fixed = init.rho * init.mbar;
    if (strategy != FitStrategy::full5) {
        const double full_span = ev.tau - ev.t0;
        if (!(full_span > 0.0)) throw std::domain_error("fit: empty observation window");
        rho_fixed = static_cast<double>(ev.external_times.size()) / full_span;
        if (strategy == FitStrategy::injected_rho_mbar && !(rho_fixed > 0.0)) {
            throw std::domain_error("fit: injected_rho_mbar requires observed external events");
        }
    }

    // Free coordinates per strategy; fixed ones are substituted on evaluation.
    std::vector<std::size_t> free_idx;
    switch (strategy) {
        case FitStrategy::full5:
            free_idx = {0, 1, 2, 3, 4};
            break;
        case FitStrategy::injected_rho:
            free_idx = {0, 2, 3, 4};
            break;
        case FitStrategy::injected_rho_mbar:
            free_idx = {0, 3, 4};
            break;
    }

    auto assemble = [&](const std::vector<double>& th) {
        PhaseOneParams p{init.lambda0, rho_fixed, init.mbar, init.m, init.delta};
        double* slots[5] = {&p.lambda0, &p.rho, &p.mbar, &p.m, &p.delta};
        for (std::size_t a = 0; a < free_idx.size(); ++a) *slots[free_idx[a]] = th[a];
        if (strategy == FitStrategy::injected_rho_mbar) p.mbar = product_fixed / p.rho;
        return p;
    };

    std::vector<double> theta0;
    {
        const std::array<double, 5> init_arr{init.lambda0, rho_fixed, init.mbar, init.m,
                                             init.delta};
        for (auto i : free_idx) theta0.push_back(init_arr[i]);
    }

    auto wrapped = [&](const std::vector<double>& x) {
        return objective(assemble(detail::decode(x, opts.log_transform)));
    };
    NelderMeadOptions nm{opts.max_iterations, opts.f_tol, opts.x_tol, opts.restarts};
    const auto nm_res = nelder_mead(wrapped, detail::encode(theta0, opts.log_transform), nm);

    CalibrationResult res;
    res.params = assemble(detail::decode(nm_res.x, opts.log_transform));
    res.method = method;
    res.strategy = strategy;
    res.converged = nm_res.converged;
    res.iterations = nm_res.iterations;
    detail::fill_diagnostics(res, ev, opts);
    if (method == FitMethod::likelihood) {
        const auto ci = confidence_intervals(res.params, ev, opts.exposure);
        res.ci95 = ci.ci;
        res.ci_std_error = ci.std_error;
        res.has_ci = true;
        res.ci_reliable = ci.reliable;
    }
    return res;
}

/// Likelihood fit of a standard Hawkes process without external excitation:
/// rho and mbar are forced to zero, external events are ignored, and only
/// (lambda0, m, delta) are optimized.
[[nodiscard]] inline CalibrationResult fit_internal_only(const EventStream& ev,
                                                         const PhaseOneParams& init,
                                                         const OptimizerOptions& opts = {}) {
    EventStream stripped = ev;
    stripped.external_times.clear();
    stripped.external_marks.clear();
    stripped.validate();
    opts.validate();

    auto assemble = [&](const std::vector<double>& th) {
        return PhaseOneParams{th[0], 0.0, 0.0, th[1], th[2]};
    };
    auto wrapped = [&](const std::vector<double>& x) {
        return neg_log_likelihood(assemble(detail::decode(x, opts.log_transform)), stripped,
                                  opts.exposure);
    };
    const std::vector<double> theta0{init.lambda0, init.m, init.delta};
    NelderMeadOptions nm{opts.max_iterations, opts.f_tol, opts.x_tol, opts.restarts};
    const auto nm_res = nelder_mead(wrapped, detail::encode(theta0, opts.log_transform), nm);

    CalibrationResult res;
    res.params = assemble(detail::decode(nm_res.x, opts.log_transform));
    res.method = FitMethod::likelihood;
    res.strategy = FitStrategy::full5;
    res.converged = nm_res.converged;
    res.iterations = nm_res.iterations;
    detail::fill_diagnostics(res, stripped, opts);
    const auto ci = confidence_intervals(res.params, stripped, opts.exposure);
    res.ci95 = ci.ci;
    res.ci_std_error = ci.std_error;
    res.has_ci = true;
    res.ci_reliable = ci.reliable;
    return res;
}

}  // namespace xhawkes
