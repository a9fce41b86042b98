#pragma once

// Test-only oracles, independent of the closed-form code paths they check.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/intensity.hpp"
#include "xhawkes/rng.hpp"

namespace oracle {

/// Composite Simpson quadrature of a scalar function with panels split at the
/// given breakpoints (kernel kinks), n subintervals per panel. The integrand
/// is left-continuous with jumps at the breakpoints, so each panel's left
/// endpoint is sampled a hair inside the panel (the right limit).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::vector<double> breaks, int per_panel = 512) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (hi <= lo) continue;
        const int n = per_panel;
        const double h = (hi - lo) / (2.0 * n);
        // One-sided limits at the panel edges: the integrand jumps exactly at
        // the breakpoints (event times and the reaction time).
        double acc = f(lo + 1e-10 * (hi - lo)) + f(hi - 1e-10 * (hi - lo));
        for (int k = 1; k < 2 * n; ++k) {
            acc += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
        }
        total += acc * h / 3.0;
    }
    return total;
}

/// Quadrature of the model intensity over [a, b]; independent route for the
/// closed-form compensator.
inline double quad_intensity(const xhawkes::PhaseOneParams& p,
                             const std::optional<xhawkes::ReactionParams>& r,
                             const xhawkes::EventStream& ev, double a, double b,
                             int per_panel = 512) {
    std::vector<double> breaks = ev.internal_times;
    breaks.insert(breaks.end(), ev.external_times.begin(), ev.external_times.end());
    if (r) breaks.push_back(r->ell);
    return simpson([&](double t) { return xhawkes::intensity_at(p, r, ev, t); }, a, b, breaks,
                   per_panel);
}

/// Trapezoid rule on a uniform grid split at event times.
inline double trapezoid_intensity(const xhawkes::PhaseOneParams& p,
                                  const std::optional<xhawkes::ReactionParams>& r,
                                  const xhawkes::EventStream& ev, double a, double b,
                                  int points_per_unit = 4000) {
    std::vector<double> breaks = ev.internal_times;
    breaks.insert(breaks.end(), ev.external_times.begin(), ev.external_times.end());
    if (r) breaks.push_back(r->ell);
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::max(a, breaks[i]);
        const double hi = std::min(b, breaks[i + 1]);
        if (hi <= lo) continue;
        const int n = std::max(8, static_cast<int>((hi - lo) * points_per_unit));
        const double h = (hi - lo) / n;
        double acc = 0.5 * (xhawkes::intensity_at(p, r, ev, lo + 1e-10 * (hi - lo)) +
                            xhawkes::intensity_at(p, r, ev, hi - 1e-10 * (hi - lo)));
        for (int k = 1; k < n; ++k) acc += xhawkes::intensity_at(p, r, ev, lo + k * h);
        total += acc * h;
    }
    return total;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    double mu = 0.0;
    for (double x : xs) mu += x;
    mu /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mu) * (x - mu);
    var /= static_cast<double>(xs.size() - 1);
    return {mu, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// Random subcritical parameter draw for property tests.
inline xhawkes::PhaseOneParams random_subcritical(xhawkes::Philox4x64& rng) {
    xhawkes::PhaseOneParams p;
    p.lambda0 = 0.2 + 1.5 * rng.uniform01();
    p.rho = 0.05 + 0.8 * rng.uniform01();
    p.mbar = 0.1 + 1.2 * rng.uniform01();
    p.delta = 0.5 + 2.0 * rng.uniform01();
    p.m = (0.1 + 0.75 * rng.uniform01()) * p.delta;  // branching ratio in (0.1, 0.85)
    return p;
}

}  // namespace oracle
