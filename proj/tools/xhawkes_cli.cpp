// Command-line front end: simulation, expectation curves, calibration,
// validation, intensity decomposition, reaction planning, and CSV ingestion.
// Emits plot data (CSV or JSON records) and machine-readable result JSON.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xhawkes/io.hpp"
#include "xhawkes/xhawkes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xhawkes;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct OutputSink {
    fs::path dir;
    std::string format = "csv";  // csv | json

    void ensure() const { fs::create_directories(dir); }

    /// Writes tabular records as CSV (or a JSON array). Values are serialized
    /// through nlohmann's shortest-round-trip dump, so re-runs are byte-identical.
    void write_records(const std::string& stem, const std::vector<std::string>& columns,
                       const std::vector<json>& records) const {
        ensure();
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : records) arr.push_back(r);
            write_text_file((dir / (stem + ".json")).string(), arr.dump(2) + "\n");
            return;
        }
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out += columns[c];
            out += c + 1 < columns.size() ? ',' : '\n';
        }
        for (const auto& r : records) {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                const auto& v = r.at(columns[c]);
                out += v.is_string() ? v.get<std::string>() : v.dump();
                out += c + 1 < columns.size() ? ',' : '\n';
            }
        }
        write_text_file((dir / (stem + ".csv")).string(), out);
    }

    void write_json(const std::string& stem, const json& j) const {
        ensure();
        write_text_file((dir / (stem + ".json")).string(), j.dump(2) + "\n");
    }
};

fs::path default_out_dir() {
    if (const char* env = std::getenv("XHAWKES_OUT")) return env;
    return ".";
}

EventStream load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open stream file: " + path);
    json j;
    in >> j;
    return j.get<EventStream>();
}

struct MappingConfig {
    AttackColumns attacks;
    VulnColumns vulns;
    double cvss_min = 5.0;
};

MappingConfig load_mapping(const std::string& path) {
    MappingConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open mapping file: " + path);
    json j;
    in >> j;
    if (j.contains("attacks")) {
        const auto& a = j["attacks"];
        if (a.contains("date")) cfg.attacks.date = a["date"].get<std::string>();
        if (a.contains("cve")) cfg.attacks.cve = a["cve"].get<std::string>();
        if (a.contains("attack_class")) cfg.attacks.attack_class = a["attack_class"].get<std::string>();
        if (a.contains("country")) cfg.attacks.country = a["country"].get<std::string>();
        if (a.contains("target_class")) cfg.attacks.target_class = a["target_class"].get<std::string>();
    }
    if (j.contains("vulns")) {
        const auto& v = j["vulns"];
        if (v.contains("cve")) cfg.vulns.cve = v["cve"].get<std::string>();
        if (v.contains("published")) cfg.vulns.published = v["published"].get<std::string>();
        if (v.contains("cvss")) cfg.vulns.cvss = v["cvss"].get<std::string>();
        if (v.contains("assume_exploited")) cfg.vulns.assume_exploited = v["assume_exploited"].get<bool>();
    }
    if (j.contains("cvss_min")) cfg.cvss_min = j["cvss_min"].get<double>();
    return cfg;
}

Date parse_date_or_throw(const std::string& text, const char* flag) {
    Date d;
    if (!parse_date(text, d)) {
        throw schema_error(std::string("unparseable date for ") + flag + ": " + text);
    }
    return d;
}

// ---------------------------------------------------------------------------

void cmd_simulate(const ParamsFile& params, double t0, double tau, std::uint64_t seed,
                  std::size_t paths, double grid_step, std::size_t max_events,
                  const OutputSink& sink) {
    SimulationOptions opts;
    opts.max_events = max_events;
    if (paths <= 1) {
        opts.intensity_grid_step = grid_step;
        const auto traj = simulate_two_phase(params.phase1, params.reaction, t0, tau, seed,
                                             std::nullopt, opts);
        std::vector<json> events;
        std::size_t ii = 0;
        for (double t : traj.events.internal_times) {
            events.push_back({{"time", t},
                              {"kind", "internal"},
                              {"after_reaction", static_cast<int>(traj.after_reaction[ii++])}});
        }
        for (double t : traj.events.external_times) {
            events.push_back({{"time", t}, {"kind", "external"}, {"after_reaction", 0}});
        }
        std::sort(events.begin(), events.end(),
                  [](const json& a, const json& b) { return a["time"] < b["time"]; });
        sink.write_records("events", {"time", "kind", "after_reaction"}, events);

        std::vector<json> intensity;
        for (std::size_t i = 0; i < traj.intensity_grid.size(); ++i) {
            intensity.push_back({{"t", traj.intensity_grid[i]},
                                 {"intensity", traj.intensity_values[i]}});
        }
        sink.write_records("intensity", {"t", "intensity"}, intensity);

        std::vector<json> daily;
        std::size_t cumulative = 0;
        for (double day = std::floor(t0); day < tau; day += 1.0) {
            const auto n = traj.events.internal_count(day, std::min(day + 1.0, tau));
            cumulative += n;
            daily.push_back({{"day", day}, {"count", n}, {"cumulative", cumulative}});
        }
        sink.write_records("daily_counts", {"day", "count", "cumulative"}, daily);
        sink.write_json("summary", {{"seed", seed},
                                    {"n_internal", traj.events.internal_times.size()},
                                    {"n_external", traj.events.external_times.size()}});
        return;
    }

    const auto dist =
        simulate_count_distribution(params.phase1, params.reaction, tau - t0, paths, seed, opts);
    std::vector<json> counts;
    for (std::size_t i = 0; i < dist.counts().size(); ++i) {
        counts.push_back({{"path", i}, {"count", dist.counts()[i]}});
    }
    sink.write_records("counts", {"path", "count"}, counts);

    std::map<std::uint64_t, std::size_t> hist;
    for (auto c : dist.counts()) ++hist[c];
    std::vector<json> hrec;
    for (const auto& [count, n] : hist) hrec.push_back({{"count", count}, {"paths", n}});
    sink.write_records("count_histogram", {"count", "paths"}, hrec);
    sink.write_json("summary", {{"seed", seed},
                                {"n_paths", dist.n_paths()},
                                {"horizon", dist.horizon()},
                                {"mean", dist.mean()},
                                {"p5", dist.percentile(5.0)},
                                {"p95", dist.percentile(95.0)}});
}

void cmd_expect(const ParamsFile& params, double tau, double grid_step, const OutputSink& sink) {
    const auto st = fresh_start(params.phase1);
    std::vector<json> curve;
    for (double t = 0.0; t <= tau + 1e-9; t += grid_step) {
        json rec{{"t", t},
                 {"one_phase", expected_count(params.phase1, std::nullopt, st, t)}};
        if (params.reaction) {
            rec["two_phase"] = expected_count(params.phase1, params.reaction, st, t);
        }
        curve.push_back(rec);
    }
    std::vector<std::string> cols{"t", "one_phase"};
    if (params.reaction) cols.push_back("two_phase");
    sink.write_records("expectation", cols, curve);

    if (!params.reaction) return;
    std::vector<json> sweeps;
    auto add_sweep = [&](const std::string& name, double value, const ReactionParams& r) {
        for (double t = 0.0; t <= tau + 1e-9; t += grid_step) {
            sweeps.push_back({{"param", name},
                              {"value", value},
                              {"t", t},
                              {"expected_count", expected_count(params.phase1, r, st, t)}});
        }
    };
    const auto base = *params.reaction;
    for (double a0 : {0.0, 0.5, 1.0}) {
        auto r = base;
        r.alpha0 = a0;
        r.alpha1 = 1.0;
        add_sweep("alpha0", a0, r);
    }
    for (double a1 : {0.0, 0.5, 1.0}) {
        auto r = base;
        r.alpha0 = 1.0;
        r.alpha1 = a1;
        add_sweep("alpha1", a1, r);
    }
    for (double f : {1.0, 0.5, 0.25}) {
        auto r = base;
        r.m_al = params.phase1.m * f;
        add_sweep("m_al", r.m_al, r);
    }
    sink.write_records("sweeps", {"param", "value", "t", "expected_count"}, sweeps);
}

void cmd_calibrate(const EventStream& ev, const std::string& method_s,
                   const std::string& strategy_s, bool no_external, double delta_step,
                   const std::string& exposure_s, const std::optional<PhaseOneParams>& init_opt,
                   const OutputSink& sink) {
    OptimizerOptions opts;
    opts.delta_step = delta_step;
    opts.exposure = exposure_s == "paper" ? PoissonExposure::last_event_span
                                          : PoissonExposure::window;
    const PhaseOneParams init = init_opt ? *init_opt : default_init(ev);
    CalibrationResult res;
    if (no_external) {
        res = fit_internal_only(ev, init, opts);
    } else {
        res = fit(ev, fit_method_from_string(method_s), fit_strategy_from_string(strategy_s),
                  init, opts);
    }
    sink.write_json("calibration", res);
}

void cmd_validate(const EventStream& ev, const PhaseOneParams& p,
                  const std::optional<EventStream>& heldout, std::size_t paths,
                  std::uint64_t seed, const OutputSink& sink) {
    const auto taus = rescale_times(p, ev);
    json out;
    if (!taus.empty()) {
        out["ks"] = ks_exp1(residual_interarrivals(taus));
    } else {
        out["ks"] = nullptr;
    }
    if (heldout) {
        out["predictive"] = predictive_check(p, *heldout, paths, seed);
    } else {
        out["predictive"] = nullptr;
    }
    sink.write_json("validation", out);
}

void cmd_decompose(const EventStream& ev, const PhaseOneParams& p, double grid_step,
                   const OutputSink& sink) {
    std::vector<double> grid;
    for (double t = ev.t0; t <= ev.tau + 1e-9; t += grid_step) grid.push_back(t);
    std::vector<json> recs;
    for (const auto& f : decompose_intensity(p, ev, grid)) {
        recs.push_back({{"t", f.time},
                        {"baseline", f.baseline},
                        {"internal", f.internal_share},
                        {"external", f.external_share}});
    }
    sink.write_records("decompose", {"t", "baseline", "internal", "external"}, recs);
}

void cmd_react(const PhaseOneParams& p, const CapacityScenario& sc,
               const std::optional<std::uint64_t>& breach_seed, const OutputSink& sink) {
    const auto sel = select_reaction(p, sc);

    json out = sel;
    out["first_breach_expected"] = nullptr;
    if (const auto day = first_breach_expected(p, sc.capacity, sc.tau)) {
        out["first_breach_expected"] = *day;
    }
    if (breach_seed) {
        out["first_breach_trajectory"] = nullptr;
        if (const auto day = first_breach_on_path(p, sc.capacity, sc.tau, *breach_seed)) {
            out["first_breach_trajectory"] = *day;
        }
    }
    sink.write_json("reaction", out);

    std::vector<json> grid;
    const std::size_t n = sel.alpha_grid.size();
    for (std::size_t i0 = 0; i0 < n; ++i0) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            grid.push_back({{"alpha0", sel.alpha_grid[i0]},
                            {"alpha1", sel.alpha_grid[i1]},
                            {"feasible", static_cast<int>(sel.feasible_mask[i0 * n + i1])}});
        }
    }
    sink.write_records("feasibility_grid", {"alpha0", "alpha1", "feasible"}, grid);

    // Daily expected increments for the chosen point vs the capacity line.
    std::vector<json> incs;
    const auto st = fresh_start(p);
    const auto one = expected_increments(p, std::nullopt, st, 1.0, sc.tau);
    std::vector<double> two;
    if (sel.feasible_found) {
        const ReactionParams r{sc.ell, sel.alpha0, sel.alpha1, sel.m_al};
        two = expected_increments(p, r, st, 1.0, sc.tau);
    }
    for (std::size_t k = 0; k < one.size(); ++k) {
        json rec{{"day", k},
                 {"one_phase", one[k]},
                 {"diminished_capacity", sel.diminished_capacity}};
        if (!two.empty()) rec["two_phase"] = two[k];
        incs.push_back(rec);
    }
    std::vector<std::string> cols{"day", "one_phase", "diminished_capacity"};
    if (!two.empty()) cols.insert(cols.begin() + 2, "two_phase");
    sink.write_records("increments", cols, incs);
}

void cmd_ingest(const std::string& attacks_path, const std::string& vulns_path,
                const MappingConfig& mapping, const Date& t0, const Date& s, const Date& tau,
                std::uint64_t seed, const OutputSink& sink) {
    LoadReport attack_rep, vuln_rep;
    const auto attacks = load_attacks(attacks_path, mapping.attacks, &attack_rep);
    std::vector<VulnRecord> vulns;
    if (!vulns_path.empty()) {
        vulns = load_vulns(vulns_path, mapping.vulns, mapping.cvss_min, &vuln_rep);
    }
    std::size_t dropped = 0;
    const auto ev = build_event_stream(attacks, vulns, t0, s, tau, seed, &dropped);
    sink.write_json("stream", ev);

    // Day-resolution export (round-trips the source dates).
    std::vector<json> events;
    for (double t : ev.internal_times) {
        Date d = t0;
        d.serial += static_cast<std::int64_t>(std::floor(t));
        events.push_back({{"day_offset", std::floor(t)}, {"kind", "internal"}});
    }
    for (double t : ev.external_times) {
        events.push_back({{"day_offset", std::floor(t)}, {"kind", "external"}});
    }
    std::sort(events.begin(), events.end(), [](const json& a, const json& b) {
        return a["day_offset"] < b["day_offset"];
    });
    sink.write_records("events", {"day_offset", "kind"}, events);

    json yearly = json::object();
    for (const auto& [year, count] : yearly_counts(attacks)) {
        yearly[std::to_string(year)] = count;
    }
    json autocorr = nullptr;
    try {
        autocorr = monthly_autocorrelation(attacks);
    } catch (const std::domain_error&) {
        // fewer than 3 months or degenerate counts; reported as null
    }
    sink.write_json("summary", {{"n_attacks", attacks.size()},
                                {"n_vulns", vulns.size()},
                                {"skipped_attack_rows", attack_rep.skipped},
                                {"skipped_vuln_rows", vuln_rep.skipped},
                                {"dropped_outside_window", dropped},
                                {"window_days", ev.tau},
                                {"inference_start_day", ev.s},
                                {"yearly_attack_counts", yearly},
                                {"monthly_autocorrelation", autocorr}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase Hawkes process with external excitation: simulation, "
                 "calibration, validation, and reaction planning"};
    app.require_subcommand(1);

    std::string params_path, stream_path, heldout_path, attacks_path, vulns_path, mapping_path;
    std::string t0_s, s_s, tau_s;
    std::string method = "likelihood", strategy = "full5", exposure = "window", format = "csv";
    std::string out_dir = default_out_dir().string();
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::size_t paths = 1, val_paths = 10000, max_events = 1'000'000;
    double t0 = 0.0, tau = 10.0, grid_step = 0.1, dec_grid = 1.0, delta_step = 2.0;
    double capacity = 5.0, ell = 3.0, cvss_min = 5.0, mal_step = 0.0, react_grid = 0.01;
    bool no_external = false;
    std::string init_path;
    std::optional<std::uint64_t> breach_seed;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (default: $XHAWKES_OUT or .)");
        cmd->add_option("--format", format, "tabular output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (required)")
            ->required()
            ->each([&](const std::string&) { have_seed = true; });
    };

    auto* sim = app.add_subcommand("simulate", "simulate trajectories by thinning");
    sim->add_option("--params-file", params_path, "phase-1 (+ optional reaction) JSON")->required();
    add_seed(sim);
    sim->add_option("--t0", t0, "window start (days)");
    sim->add_option("--tau", tau, "window end / horizon (days)");
    sim->add_option("--paths", paths, "number of paths (1 emits a full trajectory)");
    sim->add_option("--grid-step", grid_step, "intensity sampling step for single paths");
    sim->add_option("--max-events", max_events, "per-path event cap");
    add_out(sim);

    auto* exp = app.add_subcommand("expect", "closed-form expectation curves and sweeps");
    exp->add_option("--params-file", params_path, "phase-1 (+ optional reaction) JSON")->required();
    exp->add_option("--tau", tau, "horizon (days)");
    exp->add_option("--grid-step", grid_step, "curve sampling step");
    add_out(exp);

    auto* cal = app.add_subcommand("calibrate", "fit first-phase parameters");
    cal->add_option("--stream", stream_path, "EventStream JSON (alternative to CSV inputs)");
    cal->add_option("--attacks", attacks_path, "attack CSV export");
    cal->add_option("--vulns", vulns_path, "vulnerability CSV export");
    cal->add_option("--mapping", mapping_path, "column-mapping JSON");
    cal->add_option("--t0", t0_s, "window origin date");
    cal->add_option("--s", s_s, "inference start date");
    cal->add_option("--tau", tau_s, "window end date");
    cal->add_option("--seed", seed, "jitter seed when ingesting CSV inputs");
    cal->add_option("--method", method, "objective")
        ->check(CLI::IsMember({"likelihood", "mse_int", "mse_ext"}));
    cal->add_option("--strategy", strategy, "injection strategy")
        ->check(CLI::IsMember({"full5", "injected_rho", "injected_rho_mbar"}));
    cal->add_flag("--no-external", no_external, "fit a standard Hawkes model without externals");
    cal->add_option("--delta-step", delta_step, "MSE interval length (days)");
    cal->add_option("--exposure", exposure, "Poisson exposure convention")
        ->check(CLI::IsMember({"window", "paper"}));
    cal->add_option("--init-file", init_path, "starting parameters JSON");
    add_out(cal);

    auto* val = app.add_subcommand("validate", "time-rescaling KS test and predictive band");
    val->add_option("--stream", stream_path, "fitted-window EventStream JSON")->required();
    val->add_option("--params-file", params_path, "fitted parameters JSON")->required();
    val->add_option("--heldout-stream", heldout_path, "held-out EventStream JSON");
    val->add_option("--paths", val_paths, "trajectories for the predictive band");
    add_seed(val);
    add_out(val);

    auto* dec = app.add_subcommand("decompose", "intensity decomposition fractions");
    dec->add_option("--stream", stream_path, "EventStream JSON")->required();
    dec->add_option("--params-file", params_path, "parameters JSON")->required();
    dec->add_option("--grid-step", dec_grid, "sampling step (days)");
    add_out(dec);

    auto* rea = app.add_subcommand("react", "feasibility scan and reaction-parameter selection");
    rea->add_option("--params-file", params_path, "phase-1 parameters JSON")->required();
    rea->add_option("--capacity", capacity, "daily assistance capacity")->required();
    rea->add_option("--ell", ell, "reaction time (days)")->required();
    rea->add_option("--tau", tau, "pandemic horizon (days)")->required();
    rea->add_option("--grid-step", react_grid, "(alpha0, alpha1) grid step");
    rea->add_option("--mal-step", mal_step, "m_al fallback step (default m/20)");
    rea->add_option("--breach-seed", [&breach_seed](const std::vector<std::string>& v) {
        breach_seed = std::stoull(v[0]);
        return true;
    }, "also report the first capacity breach on this seeded trajectory");
    add_out(rea);

    auto* ing = app.add_subcommand("ingest", "load CSV exports into a normalized stream");
    ing->add_option("--attacks", attacks_path, "attack CSV export")->required();
    ing->add_option("--vulns", vulns_path, "vulnerability CSV export");
    ing->add_option("--mapping", mapping_path, "column-mapping JSON");
    ing->add_option("--cvss-min", cvss_min, "CVSS threshold (inclusive)");
    ing->add_option("--t0", t0_s, "window origin date")->required();
    ing->add_option("--s", s_s, "inference start date")->required();
    ing->add_option("--tau", tau_s, "window end date")->required();
    add_seed(ing);
    add_out(ing);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cout << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        std::cerr << e.what() << std::endl;
        return kExitUsage;
    }

    OutputSink sink{out_dir, format};
    try {
        if (sim->parsed()) {
            const auto params = load_params_file(params_path);
            cmd_simulate(params, t0, tau, seed, paths, grid_step, max_events, sink);
        } else if (exp->parsed()) {
            const auto params = load_params_file(params_path);
            cmd_expect(params, tau, grid_step, sink);
        } else if (cal->parsed()) {
            EventStream ev;
            if (!stream_path.empty()) {
                ev = load_stream(stream_path);
            } else {
                if (attacks_path.empty() || t0_s.empty() || s_s.empty() || tau_s.empty()) {
                    std::cout << json{{"error",
                                       {{"type", "usage"},
                                        {"message", "calibrate needs --stream or --attacks with "
                                                    "--t0/--s/--tau"}}}}
                                     .dump(2)
                              << std::endl;
                    return kExitUsage;
                }
                if (!cal->count("--seed")) {
                    std::cout << json{{"error",
                                       {{"type", "usage"},
                                        {"message", "--seed is required when ingesting CSV "
                                                    "inputs (tie-breaking jitter)"}}}}
                                     .dump(2)
                              << std::endl;
                    return kExitUsage;
                }
                const auto mapping = load_mapping(mapping_path);
                const auto attacks = load_attacks(attacks_path, mapping.attacks);
                std::vector<VulnRecord> vulns;
                if (!vulns_path.empty()) {
                    vulns = load_vulns(vulns_path, mapping.vulns, mapping.cvss_min);
                }
                ev = build_event_stream(attacks, vulns, parse_date_or_throw(t0_s, "--t0"),
                                        parse_date_or_throw(s_s, "--s"),
                                        parse_date_or_throw(tau_s, "--tau"), seed);
            }
            std::optional<PhaseOneParams> init;
            if (!init_path.empty()) init = load_params_file(init_path).phase1;
            cmd_calibrate(ev, method, strategy, no_external, delta_step, exposure, init, sink);
        } else if (val->parsed()) {
            const auto params = load_params_file(params_path);
            const auto ev = load_stream(stream_path);
            std::optional<EventStream> heldout;
            if (!heldout_path.empty()) heldout = load_stream(heldout_path);
            cmd_validate(ev, params.phase1, heldout, val_paths, seed, sink);
        } else if (dec->parsed()) {
            const auto params = load_params_file(params_path);
            cmd_decompose(load_stream(stream_path), params.phase1, dec_grid, sink);
        } else if (rea->parsed()) {
            const auto params = load_params_file(params_path);
            CapacityScenario sc{capacity, ell, tau, react_grid, mal_step};
            cmd_react(params.phase1, sc, breach_seed, sink);
        } else if (ing->parsed()) {
            const auto mapping_cfg = [&] {
                auto m = load_mapping(mapping_path);
                if (ing->count("--cvss-min")) m.cvss_min = cvss_min;
                return m;
            }();
            cmd_ingest(attacks_path, vulns_path, mapping_cfg,
                       parse_date_or_throw(t0_s, "--t0"), parse_date_or_throw(s_s, "--s"),
                       parse_date_or_throw(tau_s, "--tau"), seed, sink);
        }
    } catch (const explosion_error& e) {
        std::cout << json{{"error", {{"type", "explosion"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        return kExitNumeric;
    } catch (const convergence_error& e) {
        std::cout << json{{"error", {{"type", "convergence"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        return kExitNumeric;
    } catch (const infeasible_error& e) {
        std::cout << json{{"error", {{"type", "infeasible"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        return kExitNumeric;
    } catch (const supercritical_error& e) {
        std::cout << json{{"error", {{"type", "supercritical"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cout << json{{"error", {{"type", "data"}, {"message", e.what()}}}}.dump(2)
                  << std::endl;
        std::cerr << e.what() << std::endl;
        return kExitData;
    }
    return 0;
}
