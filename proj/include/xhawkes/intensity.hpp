#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "xhawkes/core.hpp"

namespace xhawkes {

namespace detail {

/// Mark of event i, falling back to the given mean when the stream carries none.
inline double mark_or(const std::vector<double>& marks, std::size_t i, double mean) {
    return marks.empty() ? mean : marks[i];
}

/// Sum of mark * exp(-delta (t - T)) over events strictly before t, restricted
/// to T in [from, infinity).
inline double kernel_sum(const std::vector<double>& times, const std::vector<double>& marks,
                         double mean_mark, double delta, double t, double from) {
    double acc = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double T = times[i];
        if (T >= t) break;
        if (T < from) continue;
        acc += mark_or(marks, i, mean_mark) * std::exp(-delta * (t - T));
    }
    return acc;
}

/// Integral over [a, b] of the kernel tail of one event at T:
/// (mark/delta) * (exp(-delta (max(a,T) - T)) - exp(-delta (b - T))), zero for T >= b.
inline double kernel_integral(double T, double mark, double delta, double a, double b) {
    if (T >= b) return 0.0;
    const double lo = std::max(a, T);
    return mark / delta * (std::exp(-delta * (lo - T)) - std::exp(-delta * (b - T)));
}

/// Left limit of the first-phase intensity at ell.
inline double lambda_before_ell(const PhaseOneParams& p, const EventStream& ev, double ell) {
    return p.lambda0 +
           kernel_sum(ev.external_times, ev.external_marks, p.mbar, p.delta, ell, -1e300) +
           kernel_sum(ev.internal_times, ev.internal_marks, p.m, p.delta, ell, -1e300);
}

}  // namespace detail

/// Conditional intensity at time t, left-continuous in the event times: an
/// event's own jump is excluded at its occurrence time. Internal events at
/// exactly ell belong to the second phase.
[[nodiscard]] inline double intensity_at(const PhaseOneParams& p,
                                         const std::optional<ReactionParams>& r,
                                         const EventStream& ev, double t) {
    if (t < ev.t0) throw std::domain_error("intensity_at: t before window origin");
    if (!r || t < r->ell) {
        return p.lambda0 +
               detail::kernel_sum(ev.external_times, ev.external_marks, p.mbar, p.delta, t, -1e300) +
               detail::kernel_sum(ev.internal_times, ev.internal_marks, p.m, p.delta, t, -1e300);
    }
    const double ell = r->ell;
    const double carry = r->alpha1 * (detail::lambda_before_ell(p, ev, ell) - p.lambda0);
    if (t == ell) return r->alpha0 * p.lambda0 + carry;
    return r->alpha0 * p.lambda0 + carry * std::exp(-p.delta * (t - ell)) +
           detail::kernel_sum(ev.internal_times, ev.internal_marks, r->m_al, p.delta, t, ell);
}

/// Exact integral of the intensity over [a, b] (the compensator increment).
[[nodiscard]] inline double integrated_intensity(const PhaseOneParams& p,
                                                 const std::optional<ReactionParams>& r,
                                                 const EventStream& ev, double a, double b) {
    if (b < a) throw std::domain_error("integrated_intensity: b < a");
    if (a < ev.t0) throw std::domain_error("integrated_intensity: a before window origin");
    if (a == b) return 0.0;

    const double ell = r ? r->ell : std::numeric_limits<double>::infinity();
    double total = 0.0;

    // First-phase part on [a, min(b, ell)].
    if (a < ell) {
        const double b1 = std::min(b, ell);
        total += p.lambda0 * (b1 - a);
        for (std::size_t i = 0; i < ev.external_times.size(); ++i) {
            total += detail::kernel_integral(ev.external_times[i],
                                             detail::mark_or(ev.external_marks, i, p.mbar),
                                             p.delta, a, b1);
        }
        for (std::size_t i = 0; i < ev.internal_times.size(); ++i) {
            const double T = ev.internal_times[i];
            if (T >= ell) break;  // post-ell events carry the after-ell mark below
            total += detail::kernel_integral(T, detail::mark_or(ev.internal_marks, i, p.m),
                                             p.delta, a, b1);
        }
    }

    // Second-phase part on [max(a, ell), b].
    if (r && b > ell) {
        const double a2 = std::max(a, ell);
        total += r->alpha0 * p.lambda0 * (b - a2);
        const double carry = r->alpha1 * (detail::lambda_before_ell(p, ev, ell) - p.lambda0);
        total += carry / p.delta *
                 (std::exp(-p.delta * (a2 - ell)) - std::exp(-p.delta * (b - ell)));
        for (std::size_t i = 0; i < ev.internal_times.size(); ++i) {
            const double T = ev.internal_times[i];
            if (T < ell) continue;
            total += detail::kernel_integral(T, detail::mark_or(ev.internal_marks, i, r->m_al),
                                             p.delta, a2, b);
        }
    }
    return total;
}

/// Per-time shares of the first-phase intensity: (baseline, internal, external).
struct IntensityFractions {
    double time = 0.0;
    double baseline = 0.0;
    double internal_share = 0.0;
    double external_share = 0.0;
};

/// Decomposes the first-phase intensity on a grid into baseline, self-excited,
/// and externally-excited fractions; the three sum to one at every point.
[[nodiscard]] inline std::vector<IntensityFractions> decompose_intensity(
    const PhaseOneParams& p, const EventStream& ev, const std::vector<double>& grid) {
    std::vector<IntensityFractions> out;
    out.reserve(grid.size());
    for (double t : grid) {
        if (t < ev.t0) throw std::domain_error("decompose_intensity: t before window origin");
        const double ext =
            detail::kernel_sum(ev.external_times, ev.external_marks, p.mbar, p.delta, t, -1e300);
        const double in =
            detail::kernel_sum(ev.internal_times, ev.internal_marks, p.m, p.delta, t, -1e300);
        const double lam = p.lambda0 + ext + in;
        out.push_back({t, p.lambda0 / lam, in / lam, ext / lam});
    }
    return out;
}

}  // namespace xhawkes
