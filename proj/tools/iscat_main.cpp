// Command-line front end: synthesize benchmark datasets, run inversions,
// sample cost landscapes and batch multi-seed campaigns.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "iscat/config.hpp"
#include "iscat/io.hpp"
#include "iscat/metrics.hpp"
#include "iscat/optimizer.hpp"
#include "iscat/scenarios.hpp"

namespace fs = std::filesystem;
using namespace iscat;

namespace {

std::vector<std::string> run_header(const RunConfig& config, std::uint64_t seed) {
    return {"config_hash=" + config.hash_hex(), "seed=" + std::to_string(seed)};
}

struct SeedOutcome {
    std::uint64_t seed;
    double phi_final;
    double phi_initial;
    std::optional<double> xi;
    long fw_calls;
    double elapsed_s;
};

SeedOutcome invert_one(const RunConfig& config, const Scenario& scenario,
                       const ScatteringDataset& dataset, std::uint64_t seed,
                       const fs::path& out_dir) {
    RunConfig seeded = config;
    seeded.seed = seed;
    InversionConfig inversion = seeded.inversion_config(scenario);

    const InversionResult result = run(inversion, dataset, scenario.inversion_grid);

    fs::create_directories(out_dir);
    const auto header = run_header(seeded, seed);
    write_contrast_csv((out_dir / "contrast.csv").string(), result.contrast, header);
    write_contrast_pgm((out_dir / "contrast.pgm").string(), result.contrast);
    write_trace_csv((out_dir / "trace.csv").string(), result.trace, header);
    write_dof_values((out_dir / "best_dof.txt").string(), result.best_values, header);
    if (seeded.dump_model && result.model) {
        write_model_csv((out_dir / "model.csv").string(), *result.model, result.training);
    }

    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.phi_final = result.best_phi;
    outcome.phi_initial = result.trace.front().best_true_phi;
    outcome.fw_calls = result.fw_calls;
    outcome.elapsed_s = result.elapsed_s;
    if (scenario.has_truth) {
        const ContrastMap truth =
            decode_to_contrast(scenario.truth(), scenario.inversion_grid,
                               seeded.samples_per_segment);
        outcome.xi = error_index(truth, result.contrast);
    }

    const double saving =
        inversion.mode == SearchMode::Sbd
            ? time_saving(inversion.particles, seeded.go_iterations,
                          inversion.initial_samples, inversion.iterations)
            : 0.0;

    std::ofstream summary(out_dir / "summary.txt");
    for (const auto& line : header) summary << "# " << line << "\n";
    summary << "mode=" << (inversion.mode == SearchMode::Sbd ? "sbd" : "go") << "\n";
    summary << "phi_final=" << format_g17(outcome.phi_final) << "\n";
    summary << "phi_initial=" << format_g17(outcome.phi_initial) << "\n";
    summary << "xi=" << (outcome.xi ? format_g17(*outcome.xi) : "unavailable") << "\n";
    summary << "fw_calls=" << outcome.fw_calls << "\n";
    summary << "time_saving_vs_go=" << format_g17(saving) << "\n";
    summary << "elapsed_s=" << format_g17(outcome.elapsed_s) << "\n";
    return outcome;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Quartiles by the same midpoint rule applied to the sorted halves.
std::pair<double, double> quartiles(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n < 2) return {values.front(), values.front()};
    const std::vector<double> lower(values.begin(), values.begin() + n / 2);
    const std::vector<double> upper(values.begin() + (n + 1) / 2, values.end());
    return {median(lower), median(upper)};
}

int cmd_synth(const RunConfig& config) {
    const Scenario scenario = config.resolve_scenario();
    const ScatteringDataset dataset = synthesize_dataset(
        scenario.truth(), scenario.fine_grid, scenario.setup, config.snr_db, config.seed);
    if (config.fine_n_side == config.inversion_n_side && !config.allow_inverse_crime) {
        throw std::invalid_argument(
            "inverse-crime guard: fine_n_side equals inversion_n_side "
            "(pass --allow-inverse-crime to proceed)");
    }
    fs::create_directories(config.out);
    const fs::path path = fs::path(config.out) / "dataset.csv";
    write_dataset_csv(path.string(), dataset, run_header(config, config.seed));
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_invert(const RunConfig& config, const std::string& dataset_path) {
    const Scenario scenario = config.resolve_scenario();
    const ScatteringDataset dataset = read_dataset_csv(dataset_path);
    const SeedOutcome outcome =
        invert_one(config, scenario, dataset, config.seed, config.out);
    std::cout << "phi_final=" << format_g17(outcome.phi_final)
              << " xi=" << (outcome.xi ? format_g17(*outcome.xi) : "unavailable")
              << " fw_calls=" << outcome.fw_calls << "\n";
    return 0;
}

int cmd_landscape(const RunConfig& config, const std::string& dataset_path,
                  const std::string& xi1_path, const std::string& xi2_path,
                  const std::string& xiact_path) {
    const Scenario scenario = config.resolve_scenario();
    const ScatteringDataset dataset = read_dataset_csv(dataset_path);

    LandscapeRequest request;
    request.xi_1 = read_dof_values(xi1_path);
    request.xi_2 = read_dof_values(xi2_path);
    request.xi_act = xiact_path.empty() ? scenario.truth().values : read_dof_values(xiact_path);
    request.bounds = scenario.bounds;

    const ForwardCostOracle oracle(dataset, scenario.inversion_grid, scenario.layout,
                                   scenario.spline_points, config.samples_per_segment);
    const LandscapeResult result =
        landscape(request, [&](const Eigen::VectorXd& xi) { return oracle(xi); });

    fs::create_directories(config.out);
    auto header = run_header(config, config.seed);
    header.push_back("interpolated points are clamped into the scenario bounds");
    const fs::path path = fs::path(config.out) / "landscape.csv";
    write_landscape_csv(path.string(), result, header);
    std::cout << "wrote " << path.string() << " (" << oracle.calls() << " forward solves)\n";
    return 0;
}

int cmd_batch(const RunConfig& config, const std::string& dataset_path) {
    const Scenario scenario = config.resolve_scenario();
    const ScatteringDataset dataset = read_dataset_csv(dataset_path);
    std::vector<std::uint64_t> seeds = config.seeds;
    if (seeds.empty()) seeds.push_back(config.seed);

    std::vector<SeedOutcome> outcomes(seeds.size());
    std::mutex log_mutex;
    const int workers = std::max(1, std::min<int>(config.workers, seeds.size()));
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex next_mutex;
    auto work = [&] {
        for (;;) {
            std::size_t index;
            {
                std::lock_guard lock(next_mutex);
                if (next >= seeds.size()) return;
                index = next++;
            }
            const fs::path out_dir =
                fs::path(config.out) / ("seed_" + std::to_string(seeds[index]));
            outcomes[index] = invert_one(config, scenario, dataset, seeds[index], out_dir);
            std::lock_guard lock(log_mutex);
            std::cout << "seed " << seeds[index]
                      << ": phi=" << format_g17(outcomes[index].phi_final) << "\n";
        }
    };
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();

    std::vector<double> phis, xis, calls, times;
    for (const auto& outcome : outcomes) {
        phis.push_back(outcome.phi_final);
        if (outcome.xi) xis.push_back(*outcome.xi);
        calls.push_back(static_cast<double>(outcome.fw_calls));
        times.push_back(outcome.elapsed_s);
    }

    fs::create_directories(config.out);
    const fs::path path = fs::path(config.out) / "aggregate.csv";
    std::ofstream out(path);
    for (const auto& line : run_header(config, config.seed)) out << "# " << line << "\n";
    out << "metric,median,q1,q3\n";
    auto report = [&](const std::string& name, std::vector<double> values) {
        if (values.empty()) {
            out << name << ",unavailable,unavailable,unavailable\n";
            return;
        }
        const auto [q1, q3] = quartiles(values);
        out << name << ',' << format_g17(median(values)) << ',' << format_g17(q1) << ','
            << format_g17(q3) << "\n";
    };
    report("phi_final", phis);
    report("xi", xis);
    report("fw_calls", calls);
    report("elapsed_s", times);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spline-coded microwave inverse scattering with a surrogate-driven swarm"};
    app.require_subcommand(1);

    std::string config_path, dataset_path, xi1_path, xi2_path, xiact_path;
    std::vector<std::string> overrides;
    std::optional<std::string> scenario_flag, mode_flag, out_flag;
    std::optional<std::uint64_t> seed_flag;
    bool allow_crime = false;

    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--set", overrides, "override a config key (key=value)");
    app.add_option("--scenario", scenario_flag, "scenario name (tc1..tc5)");
    app.add_option("--mode", mode_flag, "sbd or go");
    app.add_option("--seed", seed_flag, "random seed");
    app.add_option("--out", out_flag, "output directory");
    app.add_flag("--allow-inverse-crime", allow_crime,
                 "permit equal synthesis and inversion discretizations");

    auto* synth = app.add_subcommand("synth", "synthesize a benchmark dataset");
    auto* invert = app.add_subcommand("invert", "invert a dataset");
    auto* landscape_cmd = app.add_subcommand("landscape", "sample the 2-D cost landscape");
    auto* batch = app.add_subcommand("batch", "run the seed list and aggregate");
    for (auto* cmd : {invert, landscape_cmd, batch}) {
        cmd->add_option("--dataset", dataset_path, "dataset CSV file")->required();
    }
    landscape_cmd->add_option("--xi1", xi1_path, "first solution DoF file")->required();
    landscape_cmd->add_option("--xi2", xi2_path, "second solution DoF file")->required();
    landscape_cmd->add_option("--xiact", xiact_path,
                              "actual solution DoF file (default: scenario truth)");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config =
            config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
        for (const auto& entry : overrides) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("--set expects key=value, got '" + entry + "'");
            }
            config.apply(entry.substr(0, eq), entry.substr(eq + 1));
        }
        if (scenario_flag) config.apply("scenario", *scenario_flag);
        if (mode_flag) config.apply("mode", *mode_flag);
        if (seed_flag) config.seed = *seed_flag;
        if (out_flag) config.out = *out_flag;
        if (allow_crime) config.allow_inverse_crime = true;

        if (synth->parsed()) return cmd_synth(config);
        if (invert->parsed()) return cmd_invert(config, dataset_path);
        if (landscape_cmd->parsed()) {
            return cmd_landscape(config, dataset_path, xi1_path, xi2_path, xiact_path);
        }
        if (batch->parsed()) return cmd_batch(config, dataset_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
