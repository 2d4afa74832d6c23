#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "iscat/cost_oracle.hpp"
#include "iscat/config.hpp"
#include "iscat/io.hpp"
#include "iscat/scenarios.hpp"

namespace fs = std::filesystem;
using namespace iscat;

namespace {

const fs::path kWork = fs::temp_directory_path() / "iscat_cli_test";

int run_cli(const std::string& args) {
    const std::string command = std::string(ISCAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return std::system(command.c_str());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Drops wall-clock content: summary elapsed lines and the trailing elapsed
// column of trace rows. Everything else must reproduce byte-for-byte.
std::string strip_timings(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("elapsed_s=", 0) == 0) continue;
        if (!line.empty() && line[0] != '#' && std::count(line.begin(), line.end(), ',') == 4) {
            line = line.substr(0, line.rfind(','));
        }
        out << line << "\n";
    }
    return out.str();
}

std::map<std::string, std::string> parse_summary(const fs::path& path) {
    std::map<std::string, std::string> values;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos) values[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return values;
}

void write_tiny_config(const fs::path& path) {
    std::ofstream out(path);
    out << "scenario = tc1\n"
        << "fine_n_side = 12\n"
        << "inversion_n_side = 8\n"
        << "views = 6\n"
        << "probes = 6\n"
        << "particles = 3\n"
        << "iterations = 4\n"
        << "initial_samples = 5\n"
        << "go_iterations = 10\n"
        << "seed = 1\n";
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        write_tiny_config(kWork / "run.cfg");
    }
    std::string cfg() const { return (kWork / "run.cfg").string(); }
};

}  // namespace

TEST_CASE("config files parse and reject unknown keys") {
    const Workspace ws;
    const RunConfig config = RunConfig::from_file(ws.cfg());
    CHECK(config.scenario == "tc1");
    CHECK(config.fine_n_side == 12);
    CHECK(config.iterations.value() == 4);

    std::ofstream bad(kWork / "bad.cfg");
    bad << "not_a_key = 3\n";
    bad.close();
    CHECK_THROWS_AS(RunConfig::from_file((kWork / "bad.cfg").string()),
                    std::invalid_argument);

    RunConfig overridden = config;
    overridden.apply("mode", "go");
    CHECK(overridden.mode == SearchMode::Go);
    CHECK_THROWS_AS(overridden.apply("mode", "both"), std::invalid_argument);
    CHECK(overridden.hash_hex() != config.hash_hex());

    // every scenario resolves
    for (const auto& name : scenario_names()) {
        CHECK_NOTHROW(scenario_by_name(name));
    }
}

TEST_CASE("synth is reproducible byte-for-byte") {
    const Workspace ws;
    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "a").string() + " synth") ==
            0);
    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "b").string() + " synth") ==
            0);
    const std::string a = read_file(kWork / "a" / "dataset.csv");
    CHECK(a == read_file(kWork / "b" / "dataset.csv"));
    CHECK(a.find("config_hash=") != std::string::npos);
    CHECK(a.find("# L_D,n_side_fw,V,M,rho_O,snr_db,seed") != std::string::npos);

    const ScatteringDataset dataset = read_dataset_csv((kWork / "a" / "dataset.csv").string());
    CHECK(dataset.n_side_fw == 12);
    CHECK(dataset.setup.views == 6);
    CHECK_FALSE(dataset.snr_db.has_value());
}

TEST_CASE("invert writes a complete reproducible bundle") {
    const Workspace ws;
    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "d").string() + " synth") ==
            0);
    const std::string dataset = (kWork / "d" / "dataset.csv").string();

    for (const std::string out : {"r1", "r2"}) {
        REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / out).string() +
                        " invert --dataset " + dataset) == 0);
    }
    for (const std::string name : {"summary.txt", "contrast.csv", "contrast.pgm",
                                   "trace.csv", "best_dof.txt"}) {
        CAPTURE(name);
        CHECK(fs::exists(kWork / "r1" / name));
        CHECK(strip_timings(read_file(kWork / "r1" / name)) ==
              strip_timings(read_file(kWork / "r2" / name)));
    }

    const auto summary = parse_summary(kWork / "r1" / "summary.txt");
    CHECK(summary.count("phi_final") == 1);
    CHECK(std::stod(summary.at("phi_final")) >= 0.0);
    CHECK(std::stol(summary.at("fw_calls")) <= 5 + 4);
    CHECK(summary.at("mode") == "sbd");
    CHECK(std::stod(summary.at("xi")) >= 0.0);  // truth known for tc1

    // the summary's forward-call count matches the trace audit
    const std::string trace = read_file(kWork / "r1" / "trace.csv");
    const auto last_comma_line = trace.substr(0, trace.find_last_of('\n'));
    const auto last_line = last_comma_line.substr(last_comma_line.find_last_of('\n') + 1);
    std::vector<std::string> fields;
    std::istringstream fstream(last_line);
    std::string field;
    while (std::getline(fstream, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 5);
    CHECK(std::stol(fields[3]) == std::stol(summary.at("fw_calls")));
}

TEST_CASE("batch aggregates what the per-seed summaries say") {
    const Workspace ws;
    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "d").string() + " synth") ==
            0);
    const std::string dataset = (kWork / "d" / "dataset.csv").string();
    REQUIRE(run_cli("--config " + ws.cfg() + " --set seeds=1,2,3 --out " +
                    (kWork / "batch").string() + " batch --dataset " + dataset) == 0);

    std::vector<double> phis;
    for (const int seed : {1, 2, 3}) {
        const fs::path dir = kWork / "batch" / ("seed_" + std::to_string(seed));
        CHECK(fs::exists(dir / "summary.txt"));
        phis.push_back(std::stod(parse_summary(dir / "summary.txt").at("phi_final")));
    }
    std::sort(phis.begin(), phis.end());

    const std::string aggregate = read_file(kWork / "batch" / "aggregate.csv");
    std::istringstream in(aggregate);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("phi_final,", 0) == 0) {
            std::istringstream fstream(line);
            std::string field;
            std::getline(fstream, field, ',');
            std::getline(fstream, field, ',');
            CHECK(std::stod(field) == doctest::Approx(phis[1]).epsilon(1e-15));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("landscape reproduces anchor costs and wants its inputs") {
    const Workspace ws;
    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "d").string() + " synth") ==
            0);
    const std::string dataset = (kWork / "d" / "dataset.csv").string();

    // missing DoF file: clean usage error
    CHECK(run_cli("--config " + ws.cfg() + " --out " + (kWork / "l").string() +
                  " landscape --dataset " + dataset + " --xi1 /missing.txt --xi2 /m2.txt") !=
          0);

    RunConfig config = RunConfig::from_file(ws.cfg());
    Scenario scenario = config.resolve_scenario();
    Eigen::VectorXd xi1 = scenario.truth().values;
    xi1[2] = 3.0;
    Eigen::VectorXd xi2 = scenario.truth().values;
    xi2[4] = 0.3;
    write_dof_values((kWork / "xi1.txt").string(), xi1);
    write_dof_values((kWork / "xi2.txt").string(), xi2);

    REQUIRE(run_cli("--config " + ws.cfg() + " --out " + (kWork / "l").string() +
                    " landscape --dataset " + dataset + " --xi1 " +
                    (kWork / "xi1.txt").string() + " --xi2 " +
                    (kWork / "xi2.txt").string()) == 0);

    const ScatteringDataset data = read_dataset_csv(dataset);
    const ForwardCostOracle oracle(data, scenario.inversion_grid, scenario.layout,
                                   scenario.spline_points);
    const double phi_act = oracle(scenario.truth().values);
    const double phi_1 = oracle(xi1);
    const double phi_2 = oracle(xi2);

    std::istringstream in(read_file(kWork / "l" / "landscape.csv"));
    std::string line;
    int rows = 0;
    bool anchor_act = false, anchor_1 = false, anchor_2 = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'a') continue;
        ++rows;
        std::istringstream fstream(line);
        std::string a_text, b_text, phi_text;
        std::getline(fstream, a_text, ',');
        std::getline(fstream, b_text, ',');
        std::getline(fstream, phi_text, ',');
        const double a = std::stod(a_text), b = std::stod(b_text);
        const double phi = std::stod(phi_text);
        if (a == -1.0 && b == 1.0) anchor_act = std::abs(phi - phi_act) < 1e-12;
        if (a == 0.0 && b == 1.0) anchor_1 = std::abs(phi - phi_1) < 1e-12;
        if (a == -1.0 && b == 0.0) anchor_2 = std::abs(phi - phi_2) < 1e-12;
    }
    CHECK(rows == 41 * 41);
    CHECK(anchor_act);
    CHECK(anchor_1);
    CHECK(anchor_2);
}
