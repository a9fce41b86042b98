#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "xhawkes/core.hpp"
#include "xhawkes/intensity.hpp"
#include "xhawkes/rng.hpp"

namespace xhawkes {

/// Mark distributions for internal events before/after the reaction time and
/// for external events.
struct MarkTriple {
    MarkDistribution before;
    MarkDistribution after;
    MarkDistribution external;
};

struct SimulationOptions {
    std::size_t max_events = 1'000'000;   ///< per-path cap; exceeding it raises explosion_error
    double intensity_grid_step = 0.0;     ///< > 0 to record intensity samples on that grid
};

/// One simulated path; internal events carry a phase label.
struct Trajectory {
    EventStream events;
    std::vector<std::uint8_t> after_reaction;  ///< per internal event: 1 if at or after ell
    std::uint64_t seed = 0;
    std::vector<double> intensity_grid;    ///< filled when intensity_grid_step > 0
    std::vector<double> intensity_values;
};

/// Terminal counts of a path bundle over a fixed horizon.
class CountDistribution {
  public:
    CountDistribution(double horizon, std::vector<std::uint64_t> counts)
        : horizon_(horizon), counts_(std::move(counts)), sorted_(counts_) {
        std::sort(sorted_.begin(), sorted_.end());
    }

    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] std::size_t n_paths() const { return counts_.size(); }
    [[nodiscard]] const std::vector<std::uint64_t>& counts() const { return counts_; }

    /// Nearest-rank percentile, level in [0, 100].
    [[nodiscard]] double percentile(double level) const {
        if (sorted_.empty()) throw std::domain_error("CountDistribution: no paths");
        const double rank = std::ceil(level / 100.0 * static_cast<double>(sorted_.size()));
        const auto idx = static_cast<std::size_t>(
            std::clamp(rank - 1.0, 0.0, static_cast<double>(sorted_.size() - 1)));
        return static_cast<double>(sorted_[idx]);
    }

    [[nodiscard]] double mean() const {
        double acc = 0.0;
        for (auto c : counts_) acc += static_cast<double>(c);
        return acc / static_cast<double>(counts_.size());
    }

    [[nodiscard]] double variance() const {
        const double mu = mean();
        double acc = 0.0;
        for (auto c : counts_) {
            const double d = static_cast<double>(c) - mu;
            acc += d * d;
        }
        return counts_.size() > 1 ? acc / static_cast<double>(counts_.size() - 1) : 0.0;
    }

  private:
    double horizon_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> sorted_;
};

namespace detail {

inline double draw_mark(const MarkDistribution& dist, Philox4x64& rng) {
    switch (dist.kind) {
        case MarkDistribution::Kind::constant:
            return dist.mean;
        case MarkDistribution::Kind::exponential:
            return rng.exponential(1.0 / dist.mean);
        case MarkDistribution::Kind::lognormal: {
            const double sigma = dist.shape;
            const double mu = std::log(dist.mean) - 0.5 * sigma * sigma;
            return std::exp(mu + sigma * rng.standard_normal());
        }
    }
    return dist.mean;
}

/// Homogeneous Poisson sample on [a, b) via exponential gaps.
inline std::vector<double> poisson_times(double rho, double a, double b, Philox4x64& rng) {
    std::vector<double> out;
    if (rho <= 0.0) return out;
    double t = a;
    while (true) {
        t += rng.exponential(rho);
        if (t >= b) break;
        out.push_back(t);
    }
    return out;
}

}  // namespace detail

/// External (vulnerability) arrivals: homogeneous Poisson(rho) on [a, b).
/// Identical seeds give bit-identical output.
[[nodiscard]] inline std::vector<double> simulate_external(double rho, double a, double b,
                                                           std::uint64_t seed) {
    if (b < a) throw std::domain_error("simulate_external: b < a");
    if (rho < 0.0) throw std::domain_error("simulate_external: rho must be >= 0");
    Philox4x64 rng(seed, 0);
    return detail::poisson_times(rho, a, b, rng);
}

namespace detail {

/// Exact thinning on [a, b]. The dominating rate is the current intensity,
/// refreshed at every accepted internal event, every external event, at ell,
/// and at rejected candidates; between those epochs the intensity only decays,
/// so the bound is valid. External events are pre-generated and cut at ell
/// when a reaction is present.
inline Trajectory thinning_run(const PhaseOneParams& p, const std::optional<ReactionParams>& r,
                               double a, double b, std::uint64_t seed, Philox4x64& rng,
                               const std::optional<MarkTriple>& marks,
                               const SimulationOptions& opts) {
    p.validate();
    if (r) {
        r->validate(p);
        if (!(a < r->ell && r->ell < b)) {
            throw std::invalid_argument("simulate_two_phase: ell must lie inside the window");
        }
    }
    if (b < a) throw std::domain_error("simulate_two_phase: b < a");

    const double ell = r ? r->ell : std::numeric_limits<double>::infinity();
    const bool random_marks = marks.has_value();

    const double ext_end = std::min(b, ell);
    std::vector<double> ext_times = poisson_times(p.rho, a, ext_end, rng);
    std::vector<double> ext_marks;
    if (random_marks) {
        ext_marks.reserve(ext_times.size());
        for (std::size_t i = 0; i < ext_times.size(); ++i) {
            ext_marks.push_back(draw_mark(marks->external, rng));
        }
    }

    Trajectory traj;
    traj.seed = seed;
    auto& ev = traj.events;
    ev.t0 = a;
    ev.s = a;
    ev.tau = b;
    ev.external_times = ext_times;
    ev.external_marks = ext_marks;

    double t = a;
    double base = p.lambda0;
    double excess = 0.0;  // sum of all kernel contributions at t+, decays at rate delta
    bool reacted = !r.has_value() ? true : false;
    std::size_t ext_idx = 0;

    auto decay_to = [&](double u) {
        excess *= std::exp(-p.delta * (u - t));
        t = u;
    };

    while (t < b) {
        const double bound = base + excess;
        double next_epoch = b;
        if (ext_idx < ext_times.size()) next_epoch = std::min(next_epoch, ext_times[ext_idx]);
        if (!reacted) next_epoch = std::min(next_epoch, ell);

        double cand = next_epoch;
        if (bound > 0.0) {
            cand = t + rng.exponential(bound);
        }
        if (cand >= next_epoch) {
            decay_to(next_epoch);
            if (ext_idx < ext_times.size() && next_epoch == ext_times[ext_idx]) {
                excess += random_marks ? ext_marks[ext_idx] : p.mbar;
                ++ext_idx;
            } else if (!reacted && next_epoch == ell) {
                excess = r->alpha1 * excess;
                base = r->alpha0 * p.lambda0;
                reacted = true;
            }
            continue;
        }
        const double u = rng.uniform01();
        const double lam_cand = base + excess * std::exp(-p.delta * (cand - t));
        decay_to(cand);
        if (u * bound <= lam_cand) {
            const bool after = r && cand >= ell;
            double mark;
            if (random_marks) {
                mark = draw_mark(after ? marks->after : marks->before, rng);
            } else {
                mark = after ? r->m_al : p.m;
            }
            excess += mark;
            ev.internal_times.push_back(cand);
            if (random_marks) ev.internal_marks.push_back(mark);
            traj.after_reaction.push_back(after ? 1 : 0);
            if (ev.internal_times.size() > opts.max_events) {
                throw explosion_error("thinning: event cap exceeded (supercritical input?)");
            }
        }
    }

    if (opts.intensity_grid_step > 0.0) {
        for (double g = a; g <= b + 1e-12; g += opts.intensity_grid_step) {
            traj.intensity_grid.push_back(g);
            traj.intensity_values.push_back(intensity_at(p, r, ev, std::min(g, b)));
        }
    }
    return traj;
}

}  // namespace detail

/// Simulates one joint external/internal path on [a, b] by thinning.
[[nodiscard]] inline Trajectory simulate_two_phase(const PhaseOneParams& p,
                                                   const std::optional<ReactionParams>& r,
                                                   double a, double b, std::uint64_t seed,
                                                   const std::optional<MarkTriple>& marks = {},
                                                   const SimulationOptions& opts = {}) {
    Philox4x64 rng(seed, 0);
    return detail::thinning_run(p, r, a, b, seed, rng, marks, opts);
}

namespace detail {

/// Runs fn(i) for i in [0, n) across hardware threads; exceptions propagate.
template <typename Fn>
void parallel_paths(std::size_t n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace detail

/// Terminal-count distribution over [0, horizon] from n_paths independent
/// thinning runs; path i uses the stream (seed, i), so results do not depend
/// on scheduling order.
[[nodiscard]] inline CountDistribution simulate_count_distribution(
    const PhaseOneParams& p, const std::optional<ReactionParams>& r, double horizon,
    std::size_t n_paths, std::uint64_t seed, const SimulationOptions& opts = {}) {
    if (n_paths < 1) throw std::domain_error("simulate_count_distribution: n_paths must be >= 1");
    std::vector<std::uint64_t> counts(n_paths, 0);
    detail::parallel_paths(n_paths, [&](std::size_t i) {
        Philox4x64 rng(seed, i);
        Trajectory traj = detail::thinning_run(p, r, 0.0, horizon, seed, rng, {}, opts);
        counts[i] = traj.events.internal_times.size();
    });
    return CountDistribution(horizon, std::move(counts));
}

}  // namespace xhawkes
