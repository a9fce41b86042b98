#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/expectation.hpp"
#include "xhawkes/simulation.hpp"

namespace xhawkes {

/// Daily assistance-capacity scenario over a pandemic window [0, tau] with the
/// reaction triggered at ell.
struct CapacityScenario {
    double capacity = 0.0;        ///< policyholders/day
    double ell = 0.0;             ///< reaction time, days
    double tau = 0.0;             ///< pandemic horizon, days
    double grid_step = 0.01;      ///< (alpha0, alpha1) scan resolution
    double m_al_grid_step = 0.0;  ///< fallback scan step; 0 means m/20

    void validate() const {
        if (!(capacity > 0.0)) throw std::invalid_argument("CapacityScenario: capacity must be > 0");
        if (!(0.0 < ell && ell < tau)) {
            throw std::invalid_argument("CapacityScenario: require 0 < ell < tau");
        }
        if (!(grid_step > 0.0 && grid_step <= 1.0)) {
            throw std::invalid_argument("CapacityScenario: grid_step must be in (0, 1]");
        }
        if (m_al_grid_step < 0.0) {
            throw std::invalid_argument("CapacityScenario: m_al_grid_step must be >= 0");
        }
    }
};

/// Capacity left per day in the reaction phase after absorbing the backlog
/// accumulated before ell: C - max(0, E[N_ell] - C*ell) / (tau - ell).
[[nodiscard]] inline double diminished_capacity(const PhaseOneParams& p,
                                                const CapacityScenario& sc) {
    p.validate();
    sc.validate();
    const double n_ell = expected_count(p, std::nullopt, fresh_start(p), sc.ell);
    const double backlog = std::max(0.0, n_ell - sc.capacity * sc.ell);
    const double c_d = sc.capacity - backlog / (sc.tau - sc.ell);
    if (!(c_d > 0.0)) {
        throw infeasible_error("diminished_capacity: backlog exhausts the daily capacity");
    }
    return c_d;
}

/// True when every expected daily increment E[N_{t+1} - N_t | F_0] for integer
/// days t in {ell, ..., tau-1} stays within the diminished capacity.
[[nodiscard]] inline bool is_feasible(const PhaseOneParams& p, const CapacityScenario& sc,
                                      double alpha0, double alpha1, double m_al) {
    if (alpha0 == 0.0 && alpha1 == 0.0) {
        throw std::invalid_argument("is_feasible: (alpha0, alpha1) = (0,0) is degenerate");
    }
    // 0 < m_al <= m, except that m = 0 (no self-excitation) forces m_al = 0.
    if (m_al < 0.0 || m_al > p.m || (m_al == 0.0 && p.m > 0.0)) {
        throw std::invalid_argument("is_feasible: require 0 < m_al <= m");
    }
    const double c_d = diminished_capacity(p, sc);
    const ReactionParams r{sc.ell, alpha0, alpha1, m_al};
    const auto st = fresh_start(p);
    double prev = expected_count(p, r, st, sc.ell);
    for (double t = sc.ell; t + 1.0 <= sc.tau + 1e-9; t += 1.0) {
        const double cur = expected_count(p, r, st, t + 1.0);
        if (cur - prev > c_d) return false;
        prev = cur;
    }
    return true;
}

/// Result of the reaction-parameter search.
struct ReactionSelection {
    double diminished_capacity = 0.0;
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double m_al = 0.0;
    bool feasible_found = false;
    std::vector<double> alpha_grid;                       ///< shared axis for both alphas
    std::vector<std::uint8_t> feasible_mask;              ///< row-major [alpha0][alpha1]
    std::vector<std::pair<double, double>> frontier;      ///< feasible pts whose raises fail
};

namespace detail {

struct GridScan {
    std::vector<double> axis;
    std::vector<std::uint8_t> mask;
    bool any_feasible = false;
    std::size_t best_i0 = 0, best_i1 = 0;  // lexicographic max (alpha1, then alpha0)
};

inline GridScan scan_alpha_grid(const PhaseOneParams& p, const CapacityScenario& sc,
                                double m_al) {
    GridScan g;
    const auto n = static_cast<std::size_t>(std::llround(1.0 / sc.grid_step));
    g.axis.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        g.axis.push_back(static_cast<double>(k) * sc.grid_step);
    }
    g.mask.assign(g.axis.size() * g.axis.size(), 0);
    for (std::size_t i0 = 0; i0 < g.axis.size(); ++i0) {
        for (std::size_t i1 = 0; i1 < g.axis.size(); ++i1) {
            const bool ok = is_feasible(p, sc, g.axis[i0], g.axis[i1], m_al);
            g.mask[i0 * g.axis.size() + i1] = ok ? 1 : 0;
            if (ok && (!g.any_feasible || g.axis[i1] > g.axis[g.best_i1] ||
                       (i1 == g.best_i1 && g.axis[i0] > g.axis[g.best_i0]))) {
                g.any_feasible = true;
                g.best_i0 = i0;
                g.best_i1 = i1;
            }
        }
    }
    return g;
}

inline std::vector<std::pair<double, double>> frontier_of(const GridScan& g) {
    std::vector<std::pair<double, double>> out;
    const std::size_t n = g.axis.size();
    for (std::size_t i0 = 0; i0 < n; ++i0) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            if (!g.mask[i0 * n + i1]) continue;
            const bool up0_ok = i0 + 1 < n && g.mask[(i0 + 1) * n + i1];
            const bool up1_ok = i1 + 1 < n && g.mask[i0 * n + i1 + 1];
            if (!up0_ok && !up1_ok) out.emplace_back(g.axis[i0], g.axis[i1]);
        }
    }
    return out;
}

}  // namespace detail

/// Scans the (alpha0, alpha1) grid with m_al = m and picks the feasible point
/// that is lexicographically largest in (alpha1, alpha0): keep patching speed
/// untouched as long as possible, then reduce the baseline least. Only when no
/// point is feasible does the search lower m_al on its own grid.
[[nodiscard]] inline ReactionSelection select_reaction(const PhaseOneParams& p,
                                                       const CapacityScenario& sc) {
    ReactionSelection sel;
    sel.diminished_capacity = diminished_capacity(p, sc);

    const double m_step = sc.m_al_grid_step > 0.0 ? sc.m_al_grid_step : p.m / 20.0;
    std::vector<double> m_al_values{p.m};
    for (double v = p.m - m_step; v > 1e-12; v -= m_step) m_al_values.push_back(v);

    for (double m_al : m_al_values) {
        const auto grid = detail::scan_alpha_grid(p, sc, m_al);
        if (!grid.any_feasible) continue;
        sel.feasible_found = true;
        sel.alpha0 = grid.axis[grid.best_i0];
        sel.alpha1 = grid.axis[grid.best_i1];
        sel.m_al = m_al;
        sel.alpha_grid = grid.axis;
        sel.feasible_mask = grid.mask;
        sel.frontier = detail::frontier_of(grid);
        return sel;
    }
    // Nothing feasible anywhere; keep the stage-1 grid for reporting.
    const auto grid = detail::scan_alpha_grid(p, sc, p.m);
    sel.alpha_grid = grid.axis;
    sel.feasible_mask = grid.mask;
    sel.m_al = p.m;
    return sel;
}

/// First integer day whose expected cumulative count exceeds the cumulative
/// capacity C*t (one-phase model from a fresh start); none when no breach.
[[nodiscard]] inline std::optional<double> first_breach_expected(const PhaseOneParams& p,
                                                                 double capacity,
                                                                 double horizon) {
    const auto st = fresh_start(p);
    for (double t = 1.0; t <= horizon + 1e-9; t += 1.0) {
        if (expected_count(p, std::nullopt, st, t) > capacity * t) return t;
    }
    return std::nullopt;
}

/// Trajectory flavor of the breach search: first integer day with simulated
/// cumulative count above C*t on the seeded one-phase path.
[[nodiscard]] inline std::optional<double> first_breach_on_path(const PhaseOneParams& p,
                                                                double capacity, double horizon,
                                                                std::uint64_t seed) {
    const auto traj = simulate_two_phase(p, std::nullopt, 0.0, horizon, seed);
    const auto& times = traj.events.internal_times;
    for (double t = 1.0; t <= horizon + 1e-9; t += 1.0) {
        const auto count = static_cast<double>(
            std::upper_bound(times.begin(), times.end(), t) - times.begin());
        if (count > capacity * t) return t;
    }
    return std::nullopt;
}

}  // namespace xhawkes
