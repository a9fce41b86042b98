#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xhawkes {

/// Raised when a simulated path exceeds the configured event cap.
struct explosion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an optimizer cannot make progress (non-finite objective everywhere).
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a capacity scenario admits no reaction in expectation.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a quantity is undefined in the supercritical regime (m/delta >= 1).
struct supercritical_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised by the CSV loaders when a required column is missing.
struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// First-phase model parameters. Rates are per day, times in days.
struct PhaseOneParams {
    double lambda0 = 0.0;  ///< baseline intensity, events/day
    double rho = 0.0;      ///< external (vulnerability) Poisson rate, events/day
    double mbar = 0.0;     ///< mean external mark (intensity jump per vulnerability)
    double m = 0.0;        ///< mean internal mark before the reaction time
    double delta = 0.0;    ///< exponential decay rate, 1/day

    void validate() const {
        if (!std::isfinite(lambda0) || !std::isfinite(rho) || !std::isfinite(mbar) ||
            !std::isfinite(m) || !std::isfinite(delta)) {
            throw std::invalid_argument("PhaseOneParams: all fields must be finite");
        }
        if (lambda0 <= 0.0) throw std::invalid_argument("PhaseOneParams: lambda0 must be > 0");
        if (delta <= 0.0) throw std::invalid_argument("PhaseOneParams: delta must be > 0");
        if (rho < 0.0) throw std::invalid_argument("PhaseOneParams: rho must be >= 0");
        if (mbar < 0.0) throw std::invalid_argument("PhaseOneParams: mbar must be >= 0");
        if (m < 0.0) throw std::invalid_argument("PhaseOneParams: m must be >= 0");
    }
};

/// Second-phase (reaction) controls: at time `ell` the baseline is scaled by
/// `alpha0`, accumulated excitation by `alpha1`, external input is cut, and
/// internal marks shrink to `m_al`.
struct ReactionParams {
    double ell = 0.0;     ///< phase-switch time, days
    double alpha0 = 1.0;  ///< baseline scale in [0,1]
    double alpha1 = 1.0;  ///< carry-over scale in [0,1]
    double m_al = 0.0;    ///< mean internal mark after ell

    void validate(const PhaseOneParams& p) const {
        if (!std::isfinite(ell) || !std::isfinite(alpha0) || !std::isfinite(alpha1) ||
            !std::isfinite(m_al)) {
            throw std::invalid_argument("ReactionParams: all fields must be finite");
        }
        if (ell <= 0.0) throw std::invalid_argument("ReactionParams: ell must be > 0");
        if (alpha0 < 0.0 || alpha0 > 1.0) throw std::invalid_argument("ReactionParams: alpha0 must be in [0,1]");
        if (alpha1 < 0.0 || alpha1 > 1.0) throw std::invalid_argument("ReactionParams: alpha1 must be in [0,1]");
        if (alpha0 == 0.0 && alpha1 == 0.0) {
            throw std::invalid_argument("ReactionParams: (alpha0, alpha1) = (0,0) is degenerate");
        }
        if (m_al < 0.0) throw std::invalid_argument("ReactionParams: m_al must be >= 0");
        if (m_al > p.m) throw std::invalid_argument("ReactionParams: m_al must not exceed m");
    }
};

/// Mark (jump-size) distribution. The expectation formulas depend only on the
/// mean; random marks matter for simulation only.
struct MarkDistribution {
    enum class Kind { constant, exponential, lognormal };

    Kind kind = Kind::constant;
    double mean = 1.0;
    double shape = 1.0;  ///< lognormal sigma; unused otherwise

    void validate() const {
        if (!(mean > 0.0) || !std::isfinite(mean)) {
            throw std::invalid_argument("MarkDistribution: mean must be positive and finite");
        }
        if (kind == Kind::lognormal && (!(shape > 0.0) || !std::isfinite(shape))) {
            throw std::invalid_argument("MarkDistribution: lognormal shape must be positive");
        }
    }
};

/// Observed (or simulated) event history on a window. Times are day offsets.
/// `t0 <= s <= tau`; `s` is where inference / forecasting starts.
struct EventStream {
    double t0 = 0.0;
    double s = 0.0;
    double tau = 0.0;
    std::vector<double> internal_times;  ///< attack times, strictly ascending
    std::vector<double> external_times;  ///< vulnerability times, strictly ascending
    std::vector<double> internal_marks;  ///< per-event marks; empty means "use the mean"
    std::vector<double> external_marks;

    void validate() const {
        if (!(t0 <= s && s <= tau)) {
            throw std::domain_error("EventStream: require t0 <= s <= tau");
        }
        auto check = [&](const std::vector<double>& ts, const std::vector<double>& marks,
                         const char* what) {
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (!std::isfinite(ts[i]) || ts[i] < t0 || ts[i] > tau) {
                    throw std::domain_error(std::string("EventStream: ") + what +
                                            " time outside [t0, tau]");
                }
                if (i > 0 && !(ts[i - 1] < ts[i])) {
                    throw std::domain_error(std::string("EventStream: ") + what +
                                            " times must be strictly ascending");
                }
            }
            if (!marks.empty() && marks.size() != ts.size()) {
                throw std::domain_error(std::string("EventStream: ") + what +
                                        " marks must be empty or match times");
            }
        };
        check(internal_times, internal_marks, "internal");
        check(external_times, external_marks, "external");
    }

    /// Number of internal events in (a, b].
    [[nodiscard]] std::size_t internal_count(double a, double b) const {
        return count_in(internal_times, a, b);
    }
    /// Number of external events in (a, b].
    [[nodiscard]] std::size_t external_count(double a, double b) const {
        return count_in(external_times, a, b);
    }

  private:
    static std::size_t count_in(const std::vector<double>& ts, double a, double b) {
        auto lo = std::upper_bound(ts.begin(), ts.end(), a);
        auto hi = std::upper_bound(ts.begin(), ts.end(), b);
        return static_cast<std::size_t>(hi - lo);
    }
};

/// Branching ratio ||phi|| = m/delta: expected direct offspring per attack.
[[nodiscard]] inline double phi_norm(const PhaseOneParams& p) {
    if (!(p.delta > 0.0)) throw std::domain_error("phi_norm: delta must be > 0");
    return p.m / p.delta;
}

/// External kernel norm ||phibar|| = mbar/delta.
[[nodiscard]] inline double phibar_norm(const PhaseOneParams& p) {
    if (!(p.delta > 0.0)) throw std::domain_error("phibar_norm: delta must be > 0");
    return p.mbar / p.delta;
}

/// Long-run mean intensity (rho*||phibar|| + lambda0) / (1 - ||phi||).
/// Defined only in the subcritical regime.
[[nodiscard]] inline double ergodicity_ratio(const PhaseOneParams& p) {
    const double phi = phi_norm(p);
    if (phi >= 1.0) {
        throw supercritical_error("ergodicity_ratio: undefined for m/delta >= 1");
    }
    return (p.rho * phibar_norm(p) + p.lambda0) / (1.0 - phi);
}

}  // namespace xhawkes
