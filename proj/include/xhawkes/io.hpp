#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xhawkes/calibration.hpp"
#include "xhawkes/core.hpp"
#include "xhawkes/planner.hpp"
#include "xhawkes/validation.hpp"

namespace xhawkes {

using json = nlohmann::json;

inline void to_json(json& j, const PhaseOneParams& p) {
    j = json{{"lambda0", p.lambda0}, {"rho", p.rho}, {"mbar", p.mbar},
             {"m", p.m},             {"delta", p.delta}};
}

inline void from_json(const json& j, PhaseOneParams& p) {
    j.at("lambda0").get_to(p.lambda0);
    j.at("rho").get_to(p.rho);
    j.at("mbar").get_to(p.mbar);
    j.at("m").get_to(p.m);
    j.at("delta").get_to(p.delta);
}

inline void to_json(json& j, const ReactionParams& r) {
    j = json{{"ell", r.ell}, {"alpha0", r.alpha0}, {"alpha1", r.alpha1}, {"m_al", r.m_al}};
}

inline void from_json(const json& j, ReactionParams& r) {
    j.at("ell").get_to(r.ell);
    j.at("alpha0").get_to(r.alpha0);
    j.at("alpha1").get_to(r.alpha1);
    j.at("m_al").get_to(r.m_al);
}

inline void to_json(json& j, const EventStream& ev) {
    j = json{{"t0", ev.t0},
             {"s", ev.s},
             {"tau", ev.tau},
             {"internal_times", ev.internal_times},
             {"external_times", ev.external_times}};
    if (!ev.internal_marks.empty()) j["internal_marks"] = ev.internal_marks;
    if (!ev.external_marks.empty()) j["external_marks"] = ev.external_marks;
}

inline void from_json(const json& j, EventStream& ev) {
    j.at("t0").get_to(ev.t0);
    j.at("s").get_to(ev.s);
    j.at("tau").get_to(ev.tau);
    j.at("internal_times").get_to(ev.internal_times);
    j.at("external_times").get_to(ev.external_times);
    if (j.contains("internal_marks")) j.at("internal_marks").get_to(ev.internal_marks);
    if (j.contains("external_marks")) j.at("external_marks").get_to(ev.external_marks);
    ev.validate();
}

namespace detail {

inline json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace detail

inline const char* to_string(FitMethod m) {
    switch (m) {
        case FitMethod::likelihood: return "likelihood";
        case FitMethod::mse_int: return "mse_int";
        case FitMethod::mse_ext: return "mse_ext";
    }
    return "likelihood";
}

inline const char* to_string(FitStrategy s) {
    switch (s) {
        case FitStrategy::full5: return "full5";
        case FitStrategy::injected_rho: return "injected_rho";
        case FitStrategy::injected_rho_mbar: return "injected_rho_mbar";
    }
    return "full5";
}

inline FitMethod fit_method_from_string(const std::string& s) {
    if (s == "likelihood") return FitMethod::likelihood;
    if (s == "mse_int") return FitMethod::mse_int;
    if (s == "mse_ext") return FitMethod::mse_ext;
    throw std::invalid_argument("unknown method: " + s);
}

inline FitStrategy fit_strategy_from_string(const std::string& s) {
    if (s == "full5") return FitStrategy::full5;
    if (s == "injected_rho") return FitStrategy::injected_rho;
    if (s == "injected_rho_mbar") return FitStrategy::injected_rho_mbar;
    throw std::invalid_argument("unknown strategy: " + s);
}

inline void to_json(json& j, const CalibrationResult& r) {
    static constexpr const char* names[5] = {"lambda0", "rho", "mbar", "m", "delta"};
    json ci = json::object();
    if (r.has_ci) {
        for (std::size_t i = 0; i < 5; ++i) {
            ci[names[i]] = json{{"lower", detail::number_or_null(r.ci95[i].lower)},
                                {"upper", detail::number_or_null(r.ci95[i].upper)}};
        }
    }
    j = json{{"params", r.params},
             {"method", to_string(r.method)},
             {"strategy", to_string(r.strategy)},
             {"neg_log_lik", detail::number_or_null(r.neg_log_lik)},
             {"mse_int_per_event", detail::number_or_null(r.mse_int_per_event)},
             {"mse_ext_per_event", detail::number_or_null(r.mse_ext_per_event)},
             {"phi_norm", detail::number_or_null(r.phi_norm)},
             {"phibar_norm", detail::number_or_null(r.phibar_norm)},
             {"ergodicity_ratio", detail::number_or_null(r.ergodicity_ratio)},
             {"ci95", ci},
             {"ci_reliable", r.ci_reliable},
             {"converged", r.converged},
             {"iterations", r.iterations}};
}

inline void to_json(json& j, const KsReport& r) {
    j = json{{"statistic", r.statistic},
             {"p_value", r.p_value},
             {"n", r.n},
             {"rejected_at_5pct", r.rejected_at_5pct}};
}

inline void to_json(json& j, const PredictiveCheck& c) {
    j = json{{"band_lower", c.lower},
             {"band_upper", c.upper},
             {"observed", c.observed},
             {"inside", c.inside},
             {"mean", c.mean}};
}

inline void to_json(json& j, const ReactionSelection& s) {
    json frontier = json::array();
    for (const auto& [a0, a1] : s.frontier) {
        frontier.push_back(json{{"alpha0", a0}, {"alpha1", a1}});
    }
    j = json{{"diminished_capacity", s.diminished_capacity},
             {"feasible", s.feasible_found},
             {"alpha0", s.alpha0},
             {"alpha1", s.alpha1},
             {"m_al", s.m_al},
             {"frontier", frontier},
             {"n_feasible", std::count(s.feasible_mask.begin(), s.feasible_mask.end(), 1)}};
}

/// Loads {"phase1": {...}, "reaction": {...}} parameter files; the reaction
/// block is optional.
struct ParamsFile {
    PhaseOneParams phase1;
    std::optional<ReactionParams> reaction;
};

inline ParamsFile load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open params file: " + path);
    json j;
    in >> j;
    ParamsFile out;
    out.phase1 = j.at("phase1").get<PhaseOneParams>();
    out.phase1.validate();
    if (j.contains("reaction") && !j["reaction"].is_null()) {
        out.reaction = j["reaction"].get<ReactionParams>();
        out.reaction->validate(out.phase1);
    }
    return out;
}

/// Fixed-precision numeric formatting for reproducible text outputs.
inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw schema_error("cannot write file: " + path);
    out << content;
}

}  // namespace xhawkes
