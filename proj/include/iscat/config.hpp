#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iscat/optimizer.hpp"
#include "iscat/scenarios.hpp"

namespace iscat {

// Flat key = value run configuration with command-line overrides. Unknown
// keys are rejected. A custom scene (layout/spline_points/scene/bounds_*)
// replaces the scenario's coded truth and search box.
struct RunConfig {
    std::string scenario = "tc1";
    SearchMode mode = SearchMode::Sbd;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;  // batch; defaults to {seed} when empty
    std::optional<double> snr_db;
    int fine_n_side = 40;
    int inversion_n_side = 20;
    std::optional<double> domain_side;
    std::optional<int> views;
    std::optional<int> probes;
    std::optional<double> observation_radius;

    int particles = 10;
    std::optional<int> iterations;       // defaults to the scenario's value
    std::optional<int> initial_samples;  // defaults to the scenario's value
    int go_iterations = 100;             // reference budget for the time-saving report
    double inertia = 0.4;
    double cognitive = 2.0;
    double social = 2.0;
    double velocity_clamp = 0.5;
    bool fit_beta = false;
    bool allow_inverse_crime = false;
    bool dump_model = false;
    int samples_per_segment = kDefaultSamplesPerSegment;
    int workers = 1;
    std::string out = "out";

    // Optional explicit scene.
    std::optional<DofLayout> custom_layout;
    std::optional<int> custom_spline_points;
    std::optional<Eigen::VectorXd> custom_scene;
    std::optional<Eigen::VectorXd> custom_bounds_lower;
    std::optional<Eigen::VectorXd> custom_bounds_upper;

    void apply(const std::string& key, const std::string& value);
    static RunConfig from_file(const std::string& path);

    // Canonical text of every setting, and its FNV-1a hash; both go into
    // output-file headers so a run can be reproduced from its artifacts.
    std::string canonical_text() const;
    std::string hash_hex() const;

    // Scenario with all overrides applied (grids, setup, custom scene).
    Scenario resolve_scenario() const;
    // Swarm settings for this config against the resolved scenario.
    InversionConfig inversion_config(const Scenario& scenario) const;
};

}  // namespace iscat
