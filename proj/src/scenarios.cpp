#include "iscat/scenarios.hpp"

#include <stdexcept>

namespace iscat {

namespace {

Eigen::VectorXd concat(std::initializer_list<double> scalars,
                       std::initializer_list<double> tail) {
    Eigen::VectorXd v(scalars.size() + tail.size());
    Eigen::Index i = 0;
    for (double s : scalars) v[i++] = s;
    for (double s : tail) v[i++] = s;
    return v;
}

Bounds single_bounds(int q_count, double tau_re_max) {
    Bounds b;
    const int k_count = dof_count(DofLayout::Single, q_count);
    b.lower.resize(k_count);
    b.upper.resize(k_count);
    b.lower << -0.5, -0.5, 0.0, 0.0, Eigen::VectorXd::Constant(q_count, 0.1);
    b.upper << 0.5, 0.5, tau_re_max, 1.0, Eigen::VectorXd::Constant(q_count, 0.8);
    return b;
}

Scenario make_tc1() {
    Scenario s;
    s.name = "tc1";
    s.layout = DofLayout::Single;
    s.spline_points = 4;
    s.true_values = concat({0.0, 0.0, 4.0, 0.0}, {0.5, 0.5, 0.5, 0.5});
    s.bounds = single_bounds(4, 6.0);
    s.default_initial_samples = 40;  // 5 K, K = 8
    s.default_iterations = 100;
    return s;
}

Scenario make_tc2() {
    Scenario s;
    s.name = "tc2";
    s.layout = DofLayout::Single;
    s.spline_points = 8;
    s.true_values =
        concat({0.0, 0.0, 4.0, 0.0}, {0.55, 0.3, 0.45, 0.6, 0.35, 0.55, 0.25, 0.4});
    s.bounds = single_bounds(8, 6.0);
    s.default_initial_samples = 60;  // 5 K, K = 12
    s.default_iterations = 80;
    return s;
}

Bounds dc_bounds(int q_count) {
    Bounds b;
    const int k_count = dof_count(DofLayout::DoublyConnected, q_count);
    b.lower.resize(k_count);
    b.upper.resize(k_count);
    b.lower << -0.5, -0.5, 0.0, 0.0, 0.0, 0.0, Eigen::VectorXd::Constant(q_count, 0.1), 0.05;
    b.upper << 0.5, 0.5, 6.0, 1.0, 6.0, 1.0, Eigen::VectorXd::Constant(q_count, 0.8), 0.95;
    return b;
}

Scenario make_tc3(bool hollow) {
    Scenario s;
    s.name = hollow ? "tc3a" : "tc3b";
    s.layout = DofLayout::DoublyConnected;
    s.spline_points = 4;
    const double tau_out = hollow ? 3.0 : 2.0;
    const double tau_int = hollow ? 0.0 : 4.0;
    const double upsilon = hollow ? 0.6 : 0.4;
    s.true_values =
        concat({0.0, 0.0, tau_out, 0.0, tau_int, 0.0}, {0.6, 0.6, 0.6, 0.6, upsilon});
    s.bounds = dc_bounds(4);
    s.default_initial_samples = 55;  // 5 K, K = 11
    s.default_iterations = 85;
    return s;
}

Scenario make_tc4() {
    Scenario s;
    s.name = "tc4";
    s.layout = DofLayout::MultiObject;
    s.spline_points = 4;
    s.true_values = concat({-0.5, -0.5, 0.5, 0.5, 4.0, 0.0, 4.0, 0.0},
                           {0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3});
    const int k_count = dof_count(DofLayout::MultiObject, 4);
    s.bounds.lower.resize(k_count);
    s.bounds.upper.resize(k_count);
    s.bounds.lower << -0.8, -0.8, -0.8, -0.8, 0.0, 0.0, 0.0, 0.0,
        Eigen::VectorXd::Constant(8, 0.1);
    s.bounds.upper << 0.8, 0.8, 0.8, 0.8, 6.0, 1.0, 6.0, 1.0,
        Eigen::VectorXd::Constant(8, 0.5);
    s.default_initial_samples = 80;  // 5 K, K = 16
    s.default_iterations = 60;
    return s;
}

Scenario make_tc5() {
    // FoamDielInt-style ingestion preset: 2 GHz, so 0.2 m of investigation
    // square is 1.334 wavelengths and the 1.67 m observation circle is 11.14.
    // Data come from a pre-normalized canonical CSV; no synthetic truth.
    constexpr double lambda_m = 0.149896229;  // c / 2 GHz
    Scenario s;
    s.name = "tc5";
    s.layout = DofLayout::DoublyConnected;
    s.spline_points = 4;
    s.has_truth = false;
    s.fine_grid = Grid(0.2 / lambda_m, 40);
    s.inversion_grid = Grid(0.2 / lambda_m, 20);
    s.setup = MeasurementSetup{8, 241, 1.67 / lambda_m};
    const int k_count = dof_count(DofLayout::DoublyConnected, 4);
    s.bounds.lower.resize(k_count);
    s.bounds.upper.resize(k_count);
    s.bounds.lower << -0.3, -0.3, 0.0, 0.0, 0.0, 0.0, Eigen::VectorXd::Constant(4, 0.05), 0.05;
    s.bounds.upper << 0.3, 0.3, 1.5, 0.5, 4.0, 0.5, Eigen::VectorXd::Constant(4, 0.6), 0.95;
    s.default_initial_samples = 55;
    s.default_iterations = 85;
    return s;
}

}  // namespace

DofVector Scenario::truth() const {
    if (!has_truth) {
        throw std::runtime_error("scenario " + name + " has no synthetic truth");
    }
    DofVector dof{layout, spline_points, true_values, bounds};
    dof.validate();
    return dof;
}

Scenario scenario_by_name(const std::string& name) {
    if (name == "tc1") return make_tc1();
    if (name == "tc2") return make_tc2();
    if (name == "tc3a") return make_tc3(true);
    if (name == "tc3b") return make_tc3(false);
    if (name == "tc4") return make_tc4();
    if (name == "tc5") return make_tc5();
    throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<std::string> scenario_names() {
    return {"tc1", "tc2", "tc3a", "tc3b", "tc4", "tc5"};
}

}  // namespace iscat
