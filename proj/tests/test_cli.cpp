#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xhawkes/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = XHAWKES_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const auto out_file = fs::temp_directory_path() / "xhawkes_cli_stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    res.stdout_text = ss.str();
    return res;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_params(const fs::path& dir, bool with_reaction) {
    json j{{"phase1",
            {{"lambda0", 0.6}, {"rho", 0.2}, {"mbar", 0.8}, {"m", 0.5}, {"delta", 1.5}}}};
    if (with_reaction) {
        j["reaction"] = {{"ell", 3.0}, {"alpha0", 0.8}, {"alpha1", 0.5}, {"m_al", 0.25}};
    }
    const auto path = dir / "params.json";
    std::ofstream(path) << j.dump(2);
    return path.string();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

/// Minimal structural validator for the draft-07 subset used by the shipped
/// schemas: type, required, properties (recursive), enum.
bool matches_schema(const json& value, const json& schema) {
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        auto type_ok = [&](const std::string& tn) {
            if (tn == "object") return value.is_object();
            if (tn == "array") return value.is_array();
            if (tn == "string") return value.is_string();
            if (tn == "number") return value.is_number();
            if (tn == "integer") return value.is_number_integer() || value.is_number_unsigned();
            if (tn == "boolean") return value.is_boolean();
            if (tn == "null") return value.is_null();
            return false;
        };
        if (t.is_string()) {
            if (!type_ok(t.get<std::string>())) return false;
        } else if (t.is_array()) {
            bool any = false;
            for (const auto& tn : t) any = any || type_ok(tn.get<std::string>());
            if (!any) return false;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) found = found || e == value;
        if (!found) return false;
    }
    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!value.contains(key.get<std::string>())) return false;
            }
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema["properties"].items()) {
                if (value.contains(key) && !matches_schema(value[key], sub)) return false;
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (const auto& item : value) {
            if (!matches_schema(item, schema["items"])) return false;
        }
    }
    return true;
}

fs::path repo_schema(const std::string& name) {
    return fs::path(XHAWKES_CLI_PATH).parent_path().parent_path().parent_path() / "schemas" /
           name;
}

}  // namespace

TEST_CASE("simulate writes trajectory files that match the summary", "[cli]") {
    const auto dir = fresh_dir("cli_sim");
    const auto params = write_params(dir, true);
    const auto res = run_cli("simulate --params-file " + params +
                             " --seed 42 --tau 10 --out " + dir.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "events.csv"));
    REQUIRE(fs::exists(dir / "intensity.csv"));
    REQUIRE(fs::exists(dir / "daily_counts.csv"));
    const auto summary = read_json(dir / "summary.json");
    std::ifstream events(dir / "events.csv");
    std::string line;
    std::getline(events, line);  // header
    std::size_t internals = 0, externals = 0;
    while (std::getline(events, line)) {
        if (line.find("internal") != std::string::npos) ++internals;
        if (line.find("external") != std::string::npos) ++externals;
    }
    CHECK(internals == summary["n_internal"].get<std::size_t>());
    CHECK(externals == summary["n_external"].get<std::size_t>());
}

TEST_CASE("missing seed is a usage error", "[cli]") {
    const auto dir = fresh_dir("cli_noseed");
    const auto params = write_params(dir, false);
    const auto res = run_cli("simulate --params-file " + params + " --out " + dir.string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("stochastic outputs are byte-identical under the same seed", "[cli]") {
    const auto dir_a = fresh_dir("cli_det_a");
    const auto dir_b = fresh_dir("cli_det_b");
    const auto params = write_params(dir_a, true);
    REQUIRE(run_cli("simulate --params-file " + params + " --seed 9 --tau 10 --paths 200 --out " +
                    dir_a.string())
                .exit_code == 0);
    REQUIRE(run_cli("simulate --params-file " + params + " --seed 9 --tau 10 --paths 200 --out " +
                    dir_b.string())
                .exit_code == 0);
    CHECK(read_file(dir_a / "counts.csv") == read_file(dir_b / "counts.csv"));
    CHECK(read_file(dir_a / "count_histogram.csv") == read_file(dir_b / "count_histogram.csv"));
    CHECK(read_file(dir_a / "summary.json") == read_file(dir_b / "summary.json"));
}

TEST_CASE("expect emits ordered one- and two-phase curves plus sweeps", "[cli]") {
    const auto dir = fresh_dir("cli_expect");
    const auto params = write_params(dir, true);
    const auto res = run_cli("expect --params-file " + params + " --tau 10 --grid-step 0.5 --out " +
                             dir.string() + " --format json");
    REQUIRE(res.exit_code == 0);
    const auto curve = read_json(dir / "expectation.json");
    REQUIRE(curve.is_array());
    for (const auto& rec : curve) {
        const double t = rec["t"].get<double>();
        if (t > 3.0 + 0.25) {
            CHECK(rec["two_phase"].get<double>() < rec["one_phase"].get<double>());
        }
    }
    const auto sweeps = read_json(dir / "sweeps.json");
    // Monotone ordering in alpha0 at the horizon.
    double at_02 = -1, at_1 = -1;
    for (const auto& rec : sweeps) {
        if (rec["param"] == "alpha0" && rec["t"].get<double>() == 10.0) {
            if (rec["value"].get<double>() == 0.0) at_02 = rec["expected_count"].get<double>();
            if (rec["value"].get<double>() == 1.0) at_1 = rec["expected_count"].get<double>();
        }
    }
    REQUIRE(at_02 >= 0);
    CHECK(at_02 < at_1);
}

TEST_CASE("ingest -> calibrate -> validate -> decompose pipeline", "[cli]") {
    const auto dir = fresh_dir("cli_pipe");

    // Small synthetic export: enough days to calibrate something.
    std::ofstream attacks(dir / "attacks.csv");
    attacks << "Date,Attack\n";
    xhawkes::Philox4x64 rng(5, 0);
    for (int day = 0; day < 120; ++day) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 2.2);
        for (int i = 0; i < n; ++i) {
            attacks << "2021-" << (day / 30 + 1 < 10 ? "0" : "") << day / 30 + 1 << "-"
                    << (day % 30 + 1 < 10 ? "0" : "") << day % 30 + 1 << ",x\n";
        }
    }
    attacks.close();
    std::ofstream vulns(dir / "vulns.csv");
    vulns << "cveID,published,cvss\n";
    for (int day = 0; day < 120; day += 7) {
        vulns << "CVE-" << day << ",2021-" << (day / 30 + 1 < 10 ? "0" : "") << day / 30 + 1
              << "-" << (day % 30 + 1 < 10 ? "0" : "") << day % 30 + 1 << ",7.5\n";
    }
    vulns.close();

    auto res = run_cli("ingest --attacks " + (dir / "attacks.csv").string() + " --vulns " +
                       (dir / "vulns.csv").string() +
                       " --t0 2021-01-01 --s 2021-02-01 --tau 2021-04-30 --seed 3 --out " +
                       dir.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "stream.json"));
    const auto summary = read_json(dir / "summary.json");
    CHECK(summary["n_attacks"].get<int>() > 100);
    CHECK(matches_schema(read_json(dir / "stream.json"), read_json(repo_schema("event_stream.schema.json"))));

    res = run_cli("calibrate --stream " + (dir / "stream.json").string() +
                  " --method likelihood --strategy full5 --out " + dir.string());
    REQUIRE(res.exit_code == 0);
    const auto calib = read_json(dir / "calibration.json");
    CHECK(calib["method"] == "likelihood");
    CHECK(calib["params"]["lambda0"].get<double>() > 0.0);
    CHECK(matches_schema(calib, read_json(repo_schema("calibration_result.schema.json"))));

    // Fitted params file for the downstream commands.
    json fitted{{"phase1", calib["params"]}};
    std::ofstream(dir / "fitted.json") << fitted.dump(2);

    res = run_cli("validate --stream " + (dir / "stream.json").string() + " --params-file " +
                  (dir / "fitted.json").string() + " --heldout-stream " +
                  (dir / "stream.json").string() + " --paths 500 --seed 4 --out " + dir.string());
    REQUIRE(res.exit_code == 0);
    const auto validation = read_json(dir / "validation.json");
    CHECK(validation["ks"]["p_value"].is_number());
    CHECK(matches_schema(validation, read_json(repo_schema("validation_report.schema.json"))));

    res = run_cli("decompose --stream " + (dir / "stream.json").string() + " --params-file " +
                  (dir / "fitted.json").string() + " --grid-step 1.0 --out " + dir.string() +
                  " --format json");
    REQUIRE(res.exit_code == 0);
    const auto rows = read_json(dir / "decompose.json");
    for (const auto& r : rows) {
        const double sum = r["baseline"].get<double>() + r["internal"].get<double>() +
                           r["external"].get<double>();
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("react reproduces the NVD scenario end to end", "[cli]") {
    const auto dir = fresh_dir("cli_react");
    json j{{"phase1",
            {{"lambda0", 2.4195}, {"rho", 48.849}, {"mbar", 0.077413}, {"m", 0.67139},
             {"delta", 1.8697}}}};
    std::ofstream(dir / "nvd.json") << j.dump(2);
    const auto res = run_cli("react --params-file " + (dir / "nvd.json").string() +
                             " --capacity 5 --ell 3 --tau 10 --grid-step 0.01 --out " +
                             dir.string());
    REQUIRE(res.exit_code == 0);
    const auto sel = read_json(dir / "reaction.json");
    CHECK(std::abs(sel["diminished_capacity"].get<double>() - 4.696) < 5e-3);
    CHECK(sel["feasible"].get<bool>());
    CHECK(sel["first_breach_expected"].get<double>() == 2.0);
    CHECK(matches_schema(sel, read_json(repo_schema("reaction_selection.schema.json"))));
    REQUIRE(fs::exists(dir / "feasibility_grid.csv"));
    REQUIRE(fs::exists(dir / "increments.csv"));
}

TEST_CASE("data errors and numeric failures map to distinct exit codes", "[cli]") {
    const auto dir = fresh_dir("cli_err");
    auto res = run_cli("simulate --params-file /nonexistent.json --seed 1 --out " + dir.string());
    CHECK(res.exit_code == 3);
    CHECK(matches_schema(json::parse(res.stdout_text), read_json(repo_schema("error.schema.json"))));

    // Supercritical simulation trips the explosion cap -> numeric failure.
    json boom{{"phase1",
               {{"lambda0", 5.0}, {"rho", 0.0}, {"mbar", 0.0}, {"m", 3.0}, {"delta", 1.0}}}};
    std::ofstream(dir / "boom.json") << boom.dump(2);
    res = run_cli("simulate --params-file " + (dir / "boom.json").string() +
                  " --seed 1 --tau 100 --max-events 2000 --out " + dir.string());
    CHECK(res.exit_code == 4);
    const auto err = json::parse(res.stdout_text);
    CHECK(err["error"]["type"] == "explosion");
}
