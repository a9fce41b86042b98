#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/intensity.hpp"
#include "xhawkes/simulation.hpp"

namespace xhawkes {

/// Kolmogorov-Smirnov test summary against Exp(1).
struct KsReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool rejected_at_5pct = false;
};

/// Compensator values Lambda(t0, T_k) at every internal event, computed in one
/// pass over the merged history (first-phase model). By the time-rescaling
/// theorem these are unit-rate Poisson jump times under the true parameters.
[[nodiscard]] inline std::vector<double> rescale_times(const PhaseOneParams& p,
                                                       const EventStream& ev) {
    p.validate();
    std::vector<double> out;
    out.reserve(ev.internal_times.size());

    double acc = 0.0;          // Lambda(t0, t_cur)
    double weighted = 0.0;     // sum of mark * exp(-delta (t_cur - T)) over past events
    double t_cur = ev.t0;
    std::size_t i = 0, k = 0;
    const auto& it = ev.internal_times;
    const auto& et = ev.external_times;
    while (i < it.size() || k < et.size()) {
        const bool take_internal = i < it.size() && (k >= et.size() || it[i] <= et[k]);
        const double t = take_internal ? it[i] : et[k];
        const double gap = t - t_cur;
        const double decay = std::exp(-p.delta * gap);
        acc += p.lambda0 * gap + weighted / p.delta * (1.0 - decay);
        weighted *= decay;
        t_cur = t;
        if (take_internal) {
            out.push_back(acc);
            weighted += detail::mark_or(ev.internal_marks, i, p.m);
            ++i;
        } else {
            weighted += detail::mark_or(ev.external_marks, k, p.mbar);
            ++k;
        }
    }
    return out;
}

namespace detail {

/// Asymptotic Kolmogorov distribution Q(x) = 2 sum (-1)^{k-1} e^{-2 k^2 x^2}.
inline double kolmogorov_q(double x) {
    if (x <= 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * x * x);
        sum += sign * term;
        if (term < 1e-10) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace detail

/// Two-sided KS test of the inter-arrivals of rescaled times against Exp(1);
/// p-value from the asymptotic Kolmogorov distribution.
[[nodiscard]] inline KsReport ks_exp1(std::vector<double> theta) {
    if (theta.empty()) throw std::domain_error("ks_exp1: empty sample");
    std::sort(theta.begin(), theta.end());
    const auto n = static_cast<double>(theta.size());
    double d = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double cdf = -std::expm1(-theta[i]);
        const double hi = static_cast<double>(i + 1) / n - cdf;
        const double lo = cdf - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    KsReport rep;
    rep.statistic = d;
    rep.n = theta.size();
    rep.p_value = detail::kolmogorov_q(std::sqrt(n) * d);
    rep.rejected_at_5pct = rep.p_value < 0.05;
    return rep;
}

/// Adjacent differences of the rescaled times (the residual inter-arrivals).
[[nodiscard]] inline std::vector<double> residual_interarrivals(const std::vector<double>& taus) {
    std::vector<double> theta;
    theta.reserve(taus.size());
    double prev = 0.0;
    for (double v : taus) {
        theta.push_back(v - prev);
        prev = v;
    }
    return theta;
}

/// Predictive band on a held-out window: simulate the fitted model over the
/// window length and report the 5th/95th percentile band against the observed
/// internal count in (s, tau] of the held-out stream.
struct PredictiveCheck {
    double lower = 0.0;   ///< 5th percentile
    double upper = 0.0;   ///< 95th percentile
    std::uint64_t observed = 0;
    bool inside = false;
    double mean = 0.0;
};

[[nodiscard]] inline PredictiveCheck predictive_check(const PhaseOneParams& p,
                                                      const EventStream& heldout,
                                                      std::size_t n_paths, std::uint64_t seed,
                                                      const SimulationOptions& opts = {}) {
    heldout.validate();
    const double horizon = heldout.tau - heldout.s;
    const auto dist = simulate_count_distribution(p, std::nullopt, horizon, n_paths, seed, opts);
    PredictiveCheck out;
    out.lower = dist.percentile(5.0);
    out.upper = dist.percentile(95.0);
    out.observed = heldout.internal_count(heldout.s, heldout.tau);
    out.inside = static_cast<double>(out.observed) >= out.lower &&
                 static_cast<double>(out.observed) <= out.upper;
    out.mean = dist.mean();
    return out;
}

}  // namespace xhawkes
