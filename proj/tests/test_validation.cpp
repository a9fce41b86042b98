#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>

#include "oracles.hpp"
#include "xhawkes/calibration.hpp"
#include "xhawkes/simulation.hpp"
#include "xhawkes/validation.hpp"

using namespace xhawkes;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhaseOneParams kTable4{0.6, 0.2, 0.8, 0.5, 1.5};
}

TEST_CASE("rescaled times: pure Poisson and single-kernel closed forms", "[validation]") {
    PhaseOneParams pois{2.0, 0.0, 0.0, 0.0, 1.0};
    EventStream ev;
    ev.t0 = 0.0;
    ev.s = 0.0;
    ev.tau = 5.0;
    ev.internal_times = {1.0, 2.0, 3.0};
    ev.validate();
    const auto taus = rescale_times(pois, ev);
    REQUIRE(taus.size() == 3);
    CHECK_THAT(taus[0], WithinAbs(2.0, 1e-12));
    CHECK_THAT(taus[1], WithinAbs(4.0, 1e-12));
    CHECK_THAT(taus[2], WithinAbs(6.0, 1e-12));
}

TEST_CASE("rescaled times agree with the quadrature compensator", "[validation]") {
    Philox4x64 rng(31, 0);
    for (int rep = 0; rep < 6; ++rep) {
        const auto p = oracle::random_subcritical(rng);
        const auto traj = simulate_two_phase(p, std::nullopt, 0.0, 10.0, 600 + rep);
        const auto& ev = traj.events;
        if (ev.internal_times.empty()) continue;
        const auto taus = rescale_times(p, ev);
        double prev = 0.0;
        for (std::size_t k = 0; k < taus.size(); ++k) {
            CHECK(taus[k] > prev);
            prev = taus[k];
        }
        const std::size_t last = taus.size() - 1;
        const double quad =
            oracle::quad_intensity(p, std::nullopt, ev, 0.0, ev.internal_times[last]);
        CHECK_THAT(taus[last], WithinRel(quad, 1e-7));
    }
}

TEST_CASE("KS statistic for a single point and domain errors", "[validation]") {
    const auto rep = ks_exp1({std::log(2.0)});
    CHECK_THAT(rep.statistic, WithinAbs(0.5, 1e-12));
    CHECK(rep.n == 1);
    CHECK_THROWS_AS(ks_exp1({}), std::domain_error);
}

TEST_CASE("KS null calibration and power", "[validation]") {
    int rejections = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        Philox4x64 rng(9000 + static_cast<std::uint64_t>(s), 0);
        std::vector<double> theta(500);
        for (auto& v : theta) v = rng.exponential(1.0);
        if (ks_exp1(theta).rejected_at_5pct) ++rejections;
    }
    CHECK(rejections >= 1);   // 5% +/- 3 sigma of 200
    CHECK(rejections <= 19);

    int power_rejections = 0;
    for (int s = 0; s < 100; ++s) {
        Philox4x64 rng(500 + static_cast<std::uint64_t>(s), 0);
        std::vector<double> theta(500);
        for (auto& v : theta) v = rng.exponential(2.0);
        if (ks_exp1(theta).rejected_at_5pct) ++power_rejections;
    }
    CHECK(power_rejections >= 99);
}

TEST_CASE("rescaling with the true parameters yields unit-mean residuals", "[validation]") {
    std::vector<double> all_theta;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto traj = simulate_two_phase(kTable4, std::nullopt, 0.0, 200.0, s);
        for (double v : residual_interarrivals(rescale_times(kTable4, traj.events))) {
            all_theta.push_back(v);
        }
    }
    const auto ms = oracle::mean_stderr(all_theta);
    CHECK(std::abs(ms.mean - 1.0) <= 3.0 * ms.stderr_);
}

TEST_CASE("fit-then-rescale p-values look uniform over replicates", "[validation]") {
    // Null calibration with estimated parameters: the p-value sample should not
    // be wildly non-uniform (KS against U(0,1) at the 1% level).
    std::vector<double> pvals;
    OptimizerOptions fast;
    fast.restarts = 2;
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto traj = simulate_two_phase(kTable4, std::nullopt, 0.0, 300.0, 7000 + s);
        auto ev = traj.events;
        ev.s = 150.0;
        const auto res = fit(ev, FitMethod::likelihood, FitStrategy::full5, default_init(ev), fast);
        const auto taus = rescale_times(res.params, ev);
        if (taus.size() < 2) continue;
        pvals.push_back(ks_exp1(residual_interarrivals(taus)).p_value);
    }
    REQUIRE(pvals.size() >= 50);
    std::sort(pvals.begin(), pvals.end());
    const auto n = static_cast<double>(pvals.size());
    double d = 0.0;
    for (std::size_t i = 0; i < pvals.size(); ++i) {
        d = std::max({d, static_cast<double>(i + 1) / n - pvals[i],
                      pvals[i] - static_cast<double>(i) / n});
    }
    const double ks_p = detail::kolmogorov_q(std::sqrt(n) * d);
    CHECK(ks_p > 0.01);
}

TEST_CASE("predictive band: coverage, degenerate path count, variance ordering", "[validation]") {
    // Coverage by construction: data simulated from the model falls inside the
    // 5-95 band most of the time.
    int inside = 0;
    const int reps = 100;
    const auto band_dist = simulate_count_distribution(kTable4, std::nullopt, 150.0, 4000, 1);
    const double lo = band_dist.percentile(5.0);
    const double hi = band_dist.percentile(95.0);
    for (int repi = 0; repi < reps; ++repi) {
        const auto traj = simulate_two_phase(kTable4, std::nullopt, 0.0, 150.0,
                                             40000 + static_cast<std::uint64_t>(repi));
        const auto obs = static_cast<double>(traj.events.internal_times.size());
        if (obs >= lo && obs <= hi) ++inside;
    }
    CHECK(inside >= 80);
    CHECK(inside <= 99);

    EventStream heldout;
    heldout.t0 = 0.0;
    heldout.s = 0.0;
    heldout.tau = 30.0;
    heldout.internal_times = {1.0, 2.0, 3.0};
    heldout.validate();
    const auto single = predictive_check(kTable4, heldout, 1, 5);
    CHECK(single.lower == single.upper);

    // Same long-run mean rate, different split between external and internal
    // drivers: the internally-driven configuration has the wider distribution.
    PhaseOneParams ext_driven{1.0, 2.0, 0.5, 0.1, 1.5};
    PhaseOneParams int_driven{0.5, 2.0, 0.0, 0.9, 1.5};
    // Match means: (rho*mbar/delta + lambda0)/(1 - m/delta).
    const double mean_ext = (2.0 * ext_driven.mbar / 1.5 + 1.0) / (1.0 - 0.1 / 1.5);
    int_driven.mbar = (mean_ext * (1.0 - 0.9 / 1.5) - int_driven.lambda0) * 1.5 / 2.0;
    REQUIRE(int_driven.mbar > 0.0);
    const auto d_ext = simulate_count_distribution(ext_driven, std::nullopt, 100.0, 6000, 9);
    const auto d_int = simulate_count_distribution(int_driven, std::nullopt, 100.0, 6000, 9);
    CHECK_THAT(d_ext.mean(), WithinRel(d_int.mean(), 0.05));
    CHECK(d_int.percentile(95.0) - d_int.percentile(5.0) >
          d_ext.percentile(95.0) - d_ext.percentile(5.0));
}
