#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "xhawkes/core.hpp"

namespace xhawkes {

struct NelderMeadOptions {
    std::size_t max_iterations = 2000;  ///< per restart
    double f_tol = 1e-8;                ///< spread of simplex objective values
    double x_tol = 1e-8;                ///< max coordinate spread of the simplex
    int restarts = 3;                   ///< rebuilds around the incumbent best
    double initial_step = 0.25;         ///< per-coordinate displacement of the initial simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

inline double guarded(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Simplex {
    std::vector<std::vector<double>> pts;
    std::vector<double> vals;

    void sort_by_value() {
        std::vector<std::size_t> order(pts.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> np(pts.size());
        std::vector<double> nv(pts.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            np[i] = std::move(pts[order[i]]);
            nv[i] = vals[order[i]];
        }
        pts = std::move(np);
        vals = std::move(nv);
    }
};

inline NelderMeadResult nelder_mead_once(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
    double f0, double step, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    Simplex sx;
    sx.pts.push_back(x0);
    sx.vals.push_back(f0);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = x0;
        p[i] += step;
        sx.pts.push_back(p);
        sx.vals.push_back(guarded(f, p));
    }

    NelderMeadResult res;
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        sx.sort_by_value();
        if (!std::isfinite(sx.vals[0])) {
            throw convergence_error("nelder_mead: objective non-finite at every probe");
        }
        const double f_spread = sx.vals[n] - sx.vals[0];
        double x_spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                x_spread = std::max(x_spread, std::abs(sx.pts[i][j] - sx.pts[0][j]));
            }
        }
        if (f_spread <= opts.f_tol && x_spread <= opts.x_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += sx.pts[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coef * (sx.pts[n][j] - centroid[j]);
            }
            return p;
        };

        const auto reflected = blend(-1.0);
        const double fr = guarded(f, reflected);
        if (fr < sx.vals[0]) {
            const auto expanded = blend(-2.0);
            const double fe = guarded(f, expanded);
            if (fe < fr) {
                sx.pts[n] = expanded;
                sx.vals[n] = fe;
            } else {
                sx.pts[n] = reflected;
                sx.vals[n] = fr;
            }
            continue;
        }
        if (fr < sx.vals[n - 1]) {
            sx.pts[n] = reflected;
            sx.vals[n] = fr;
            continue;
        }
        const bool outside = fr < sx.vals[n];
        const auto contracted = blend(outside ? -0.5 : 0.5);
        const double fc = guarded(f, contracted);
        if (fc < std::min(fr, sx.vals[n])) {
            sx.pts[n] = contracted;
            sx.vals[n] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                sx.pts[i][j] = sx.pts[0][j] + 0.5 * (sx.pts[i][j] - sx.pts[0][j]);
            }
            sx.vals[i] = guarded(f, sx.pts[i]);
        }
    }
    sx.sort_by_value();
    res.x = sx.pts[0];
    res.value = sx.vals[0];
    return res;
}

}  // namespace detail

/// Derivative-free simplex descent. The returned value is the best vertex over
/// all restarts; each restart rebuilds the simplex around the incumbent best
/// with a halved step.
[[nodiscard]] inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
    const NelderMeadOptions& opts = {}) {
    if (x0.empty()) throw std::invalid_argument("nelder_mead: empty start point");
    const double f0 = detail::guarded(f, x0);
    if (!std::isfinite(f0)) {
        throw convergence_error("nelder_mead: objective not finite at the start point");
    }
    NelderMeadResult best;
    best.x = x0;
    best.value = f0;
    double step = opts.initial_step;
    std::size_t total_iters = 0;
    bool converged = false;
    const int rounds = std::max(1, opts.restarts);
    for (int k = 0; k < rounds; ++k) {
        auto r = detail::nelder_mead_once(f, best.x, best.value, step, opts);
        total_iters += r.iterations;
        converged = r.converged;
        if (r.value < best.value) {
            best.x = r.x;
            best.value = r.value;
        }
        step *= 0.5;
    }
    best.iterations = total_iters;
    best.converged = converged;
    return best;
}

}  // namespace xhawkes
