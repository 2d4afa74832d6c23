#include "iscat/forward.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "iscat/rng.hpp"
#include "iscat/specfun.hpp"

namespace iscat {

using std::complex;

double MeasurementSetup::view_angle(int v) const {
    return 2.0 * std::numbers::pi * (v - 1) / views;
}

Eigen::Vector2d MeasurementSetup::probe_position(int m) const {
    const double angle = 2.0 * std::numbers::pi * (m - 1) / probes;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

void MeasurementSetup::validate(double domain_side) const {
    if (views < 1 || probes < 1 || !(radius > 0.0)) {
        throw std::invalid_argument("MeasurementSetup: views, probes, radius must be positive");
    }
    if (!(radius > domain_side * std::numbers::sqrt2 / 2.0)) {
        throw std::invalid_argument(
            "MeasurementSetup: observation circle must lie outside the investigation square");
    }
}

namespace {

// j (pi k0 a / 2) J1(k0 a): common prefactor of the off-center cell integral.
complex<double> offcell_prefactor(const Grid& grid) {
    const double a = grid.equivalent_radius();
    const double j1_ka = cylinder_functions(k0 * a).j1;
    return complex<double>(0.0, 0.5 * std::numbers::pi * k0 * a * j1_ka);
}

}  // namespace

Eigen::MatrixXcd green_external(const Grid& grid, const MeasurementSetup& setup) {
    setup.validate(grid.side);
    const complex<double> factor = offcell_prefactor(grid);
    Eigen::MatrixXcd g(setup.probes, grid.size());
    for (int m = 1; m <= setup.probes; ++m) {
        const Eigen::Vector2d probe = setup.probe_position(m);
        if (std::max(std::abs(probe.x()), std::abs(probe.y())) < 0.5 * grid.side) {
            throw std::invalid_argument("green_external: probe lies inside a cell of the grid");
        }
        for (int n = 0; n < grid.size(); ++n) {
            const double rho = (probe - grid.center(n)).norm();
            g(m - 1, n) = factor * cylinder_functions(k0 * rho).h1_0();
        }
    }
    return g;
}

Eigen::MatrixXcd green_internal(const Grid& grid) {
    const complex<double> factor = offcell_prefactor(grid);
    const double a = grid.equivalent_radius();
    const complex<double> self =
        complex<double>(0.0, 0.5 * std::numbers::pi * k0 * a) * cylinder_functions(k0 * a).h1_1() -
        1.0;

    // Cell separations live on a lattice: only n_side^2 distinct offset
    // magnitudes exist, so the Hankel evaluations are memoized per offset.
    const int n_side = grid.n_side;
    Eigen::MatrixXcd offset(n_side, n_side);
    for (int dy = 0; dy < n_side; ++dy) {
        for (int dx = 0; dx < n_side; ++dx) {
            if (dx == 0 && dy == 0) {
                offset(0, 0) = self;
            } else {
                const double rho = grid.cell() * std::hypot(double(dx), double(dy));
                offset(dx, dy) = factor * cylinder_functions(k0 * rho).h1_0();
            }
        }
    }

    Eigen::MatrixXcd g(grid.size(), grid.size());
    for (int n = 0; n < grid.size(); ++n) {
        const int nx = n % n_side, ny = n / n_side;
        for (int p = 0; p < grid.size(); ++p) {
            const int px = p % n_side, py = p / n_side;
            g(n, p) = offset(std::abs(nx - px), std::abs(ny - py));
        }
    }
    return g;
}

Eigen::VectorXcd incident_field(const Grid& grid, int v, const MeasurementSetup& setup) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> points(grid.size(), 2);
    for (int n = 0; n < grid.size(); ++n) points.row(n) = grid.center(n).transpose();
    return incident_field(points, v, setup);
}

Eigen::VectorXcd incident_field(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                                int v, const MeasurementSetup& setup) {
    if (v < 1 || v > setup.views) throw std::invalid_argument("incident_field: bad view index");
    const double phi = setup.view_angle(v);
    const double kx = k0 * std::cos(phi);
    const double ky = k0 * std::sin(phi);
    Eigen::VectorXcd field(points.rows());
    for (Eigen::Index n = 0; n < points.rows(); ++n) {
        const double phase = kx * points(n, 0) + ky * points(n, 1);
        field[n] = complex<double>(std::cos(phase), std::sin(phase));
    }
    return field;
}

Eigen::MatrixXcd incident_fields(const Grid& grid, const MeasurementSetup& setup) {
    Eigen::MatrixXcd incident(grid.size(), setup.views);
    for (int v = 1; v <= setup.views; ++v) incident.col(v - 1) = incident_field(grid, v, setup);
    return incident;
}

TotalFieldSolver::TotalFieldSolver(const Eigen::MatrixXcd& green_int,
                                   const Eigen::VectorXcd& tau) {
    if (green_int.rows() != green_int.cols() || green_int.rows() != tau.size()) {
        throw std::invalid_argument("TotalFieldSolver: dimension mismatch");
    }
    for (int n = 0; n < tau.size(); ++n) {
        if (tau[n] != 0.0) support_.push_back(n);
    }
    const int s_count = static_cast<int>(support_.size());
    if (s_count == 0) return;  // empty scatterer: T = incident

    tau_support_.resize(s_count);
    green_cols_.resize(green_int.rows(), s_count);
    for (int j = 0; j < s_count; ++j) {
        tau_support_[j] = tau[support_[j]];
        green_cols_.col(j) = green_int.col(support_[j]);
    }

    Eigen::MatrixXcd system(s_count, s_count);
    for (int i = 0; i < s_count; ++i) {
        for (int j = 0; j < s_count; ++j) {
            system(i, j) = -green_cols_(support_[i], j) * tau_support_[j];
        }
        system(i, i) += 1.0;
    }
    lu_.compute(system);
    const double rcond = lu_.rcond();
    if (!(rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "TotalFieldSolver: system is numerically singular (rcond = " << rcond
            << "); the contrast is resonant";
        throw std::runtime_error(msg.str());
    }
}

Eigen::MatrixXcd TotalFieldSolver::support_currents(const Eigen::MatrixXcd& incident) const {
    const int s_count = static_cast<int>(support_.size());
    Eigen::MatrixXcd incident_support(s_count, incident.cols());
    for (int j = 0; j < s_count; ++j) incident_support.row(j) = incident.row(support_[j]);
    if (s_count == 0) return incident_support;
    return tau_support_.asDiagonal() * lu_.solve(incident_support).eval();
}

Eigen::MatrixXcd TotalFieldSolver::solve(const Eigen::MatrixXcd& incident) const {
    if (support_.empty()) return incident;
    return incident + green_cols_ * support_currents(incident);
}

Eigen::VectorXcd TotalFieldSolver::solve(const Eigen::VectorXcd& incident) const {
    return Eigen::VectorXcd(solve(Eigen::MatrixXcd(incident)));
}

Eigen::VectorXcd total_field_solve(const Eigen::MatrixXcd& green_int,
                                   const ContrastMap& contrast,
                                   const Eigen::VectorXcd& incident) {
    return TotalFieldSolver(green_int, contrast.values).solve(incident);
}

Eigen::VectorXcd equivalent_currents(const Eigen::VectorXcd& tau,
                                     const Eigen::VectorXcd& total) {
    if (tau.size() != total.size()) {
        throw std::invalid_argument("equivalent_currents: dimension mismatch");
    }
    return tau.cwiseProduct(total);
}

Eigen::VectorXcd scattered_field(const Eigen::MatrixXcd& green_ext,
                                 const Eigen::VectorXcd& currents) {
    if (green_ext.cols() != currents.size()) {
        throw std::invalid_argument("scattered_field: dimension mismatch");
    }
    return green_ext * currents;
}

Eigen::MatrixXcd scattered_views(const Eigen::MatrixXcd& green_ext,
                                 const Eigen::MatrixXcd& green_int,
                                 const Eigen::VectorXcd& tau,
                                 const Eigen::MatrixXcd& incident) {
    const TotalFieldSolver solver(green_int, tau);
    const auto& support = solver.support();
    if (support.empty()) {
        return Eigen::MatrixXcd::Zero(green_ext.rows(), incident.cols());
    }
    const Eigen::MatrixXcd currents = solver.support_currents(incident);
    Eigen::MatrixXcd ext_cols(green_ext.rows(), support.size());
    for (std::size_t j = 0; j < support.size(); ++j) {
        ext_cols.col(j) = green_ext.col(support[j]);
    }
    return ext_cols * currents;
}

ScatteringDataset synthesize_dataset(const ContrastMap& scene,
                                     const MeasurementSetup& setup,
                                     std::optional<double> snr_db, std::uint64_t seed) {
    const Grid& grid = scene.grid;
    setup.validate(grid.side);
    const Eigen::MatrixXcd g_ext = green_external(grid, setup);
    const Eigen::MatrixXcd g_int = green_internal(grid);
    const Eigen::MatrixXcd incident = incident_fields(grid, setup);
    Eigen::MatrixXcd scattered = scattered_views(g_ext, g_int, scene.values, incident);

    ScatteringDataset dataset{setup, grid.side, grid.n_side, std::move(scattered),
                              std::nullopt, seed};
    return snr_db ? with_noise(dataset, *snr_db, seed) : dataset;
}

ScatteringDataset with_noise(const ScatteringDataset& noiseless, double snr_db,
                             std::uint64_t seed) {
    ScatteringDataset noisy = noiseless;
    const double signal_power = noisy.scattered.squaredNorm() / noisy.scattered.size();
    const double noise_var = signal_power * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(0.5 * noise_var);
    Rng rng(seed);
    for (int v = 0; v < noisy.setup.views; ++v) {
        for (int m = 0; m < noisy.setup.probes; ++m) {
            const auto [z_re, z_im] = rng.normal_pair();
            noisy.scattered(m, v) += complex<double>(sigma * z_re, sigma * z_im);
        }
    }
    noisy.snr_db = snr_db;
    noisy.seed = seed;
    return noisy;
}

ScatteringDataset synthesize_dataset(const DofVector& scene, const Grid& fine_grid,
                                     const MeasurementSetup& setup,
                                     std::optional<double> snr_db, std::uint64_t seed) {
    return synthesize_dataset(decode_to_contrast(scene, fine_grid), setup, snr_db, seed);
}

double realized_snr_db(const Eigen::MatrixXcd& clean, const Eigen::MatrixXcd& noisy) {
    if (clean.rows() != noisy.rows() || clean.cols() != noisy.cols()) {
        throw std::invalid_argument("realized_snr_db: dimension mismatch");
    }
    const double noise_power = (noisy - clean).squaredNorm();
    if (noise_power == 0.0) throw std::invalid_argument("realized_snr_db: no noise present");
    return 10.0 * std::log10(clean.squaredNorm() / noise_power);
}

void ensure_no_inverse_crime(const ScatteringDataset& dataset, const Grid& inversion_grid,
                             bool allow_inverse_crime) {
    if (dataset.n_side_fw == inversion_grid.n_side && !allow_inverse_crime) {
        throw std::invalid_argument(
            "inverse-crime guard: the dataset was generated on the inversion discretization "
            "(pass the override flag to proceed anyway)");
    }
}

}  // namespace iscat
