#pragma once

#include <string>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/grid.hpp"

namespace iscat {

// Benchmark scene library. tc1..tc4 are synthetic scenes with a known coded
// truth; tc5 is the experimental-data ingestion preset (canonical CSV input,
// no synthetic truth, so reconstruction error is unavailable).
struct Scenario {
    std::string name;
    DofLayout layout = DofLayout::Single;
    int spline_points = 4;
    Eigen::VectorXd true_values;  // empty when has_truth is false
    Bounds bounds;
    Grid fine_grid{2.0, 40};
    Grid inversion_grid{2.0, 20};
    MeasurementSetup setup{18, 18, 3.0};
    int default_initial_samples = 40;  // S0 = 5 K
    int default_iterations = 100;
    bool has_truth = true;

    DofVector truth() const;
};

Scenario scenario_by_name(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace iscat
