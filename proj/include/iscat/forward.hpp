#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "iscat/geometry.hpp"
#include "iscat/grid.hpp"

namespace iscat {

// V unit plane waves impinging from angles 2*pi*(v-1)/V and M field probes
// uniformly spaced on a circle of the given radius (in wavelengths) around
// the investigation domain.
struct MeasurementSetup {
    int views = 18;
    int probes = 18;
    double radius = 3.0;

    double view_angle(int v) const;                // 1-based view index
    Eigen::Vector2d probe_position(int m) const;   // 1-based probe index

    // The observation circle must clear the investigation square.
    void validate(double domain_side) const;
};

// Scattered-field samples S(m, v) collected with a setup, plus the
// discretization descriptor of the grid that generated them.
struct ScatteringDataset {
    MeasurementSetup setup;
    double domain_side = 2.0;
    int n_side_fw = 40;
    Eigen::MatrixXcd scattered;  // probes x views
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
};

// External Green's matrix (probes x cells): entry (m, n) is the closed-form
// equivalent-circle cell integral  j (pi k0 a / 2) J1(k0 a) H0^(1)(k0 rho_mn).
Eigen::MatrixXcd green_external(const Grid& grid, const MeasurementSetup& setup);

// Internal Green's operator (cells x cells); same closed form off-diagonal,
// and the analytic self-cell value  j (pi k0 a / 2) H1^(1)(k0 a) - 1  on the
// diagonal.
Eigen::MatrixXcd green_internal(const Grid& grid);

// Unit-amplitude plane wave exp(+j k0 (x cos phi_v + y sin phi_v)) sampled at
// the cell centers (or arbitrary points), consistent with the exp(-j 2 pi f t)
// time convention.
Eigen::VectorXcd incident_field(const Grid& grid, int v, const MeasurementSetup& setup);
Eigen::VectorXcd incident_field(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                                int v, const MeasurementSetup& setup);

// All views at once, cells x views.
Eigen::MatrixXcd incident_fields(const Grid& grid, const MeasurementSetup& setup);

// Factors [I - G_D diag(tau)] once and solves it for any number of incident
// columns; one factorization serves all views of a contrast. The system is
// solved exactly on the support of tau: zero-contrast cells carry no current,
// so the coupling block shrinks to the occupied cells and the full-length
// total field is recovered as incident + G_D J.
class TotalFieldSolver {
public:
    TotalFieldSolver(const Eigen::MatrixXcd& green_int, const Eigen::VectorXcd& tau);

    Eigen::VectorXcd solve(const Eigen::VectorXcd& incident) const;
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& incident) const;

    // Induced currents tau .* T on the support cells only (rows follow
    // support()); all other cells carry exactly zero current.
    Eigen::MatrixXcd support_currents(const Eigen::MatrixXcd& incident) const;
    const std::vector<int>& support() const { return support_; }

private:
    std::vector<int> support_;
    Eigen::VectorXcd tau_support_;
    Eigen::MatrixXcd green_cols_;  // G_D columns of the support cells
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// One-shot convenience over TotalFieldSolver.
Eigen::VectorXcd total_field_solve(const Eigen::MatrixXcd& green_int,
                                   const ContrastMap& contrast,
                                   const Eigen::VectorXcd& incident);

// Induced equivalent currents tau .* total, zero wherever tau is zero.
Eigen::VectorXcd equivalent_currents(const Eigen::VectorXcd& tau,
                                     const Eigen::VectorXcd& total);

// Scattered field at the probes radiated by the currents.
Eigen::VectorXcd scattered_field(const Eigen::MatrixXcd& green_ext,
                                 const Eigen::VectorXcd& currents);

// Full per-contrast pipeline: total fields for every incident column, then
// currents, then probe samples (probes x views).
Eigen::MatrixXcd scattered_views(const Eigen::MatrixXcd& green_ext,
                                 const Eigen::MatrixXcd& green_int,
                                 const Eigen::VectorXcd& tau,
                                 const Eigen::MatrixXcd& incident);

// Runs the forward pipeline for the scene on its (fine) grid and optionally
// adds i.i.d. circular complex Gaussian noise calibrated so that the expected
// signal-to-noise ratio matches snr_db. Noise draws are seeded and ordered
// view-major then probe, so equal inputs give bit-identical datasets.
ScatteringDataset synthesize_dataset(const ContrastMap& scene,
                                     const MeasurementSetup& setup,
                                     std::optional<double> snr_db, std::uint64_t seed);
ScatteringDataset synthesize_dataset(const DofVector& scene, const Grid& fine_grid,
                                     const MeasurementSetup& setup,
                                     std::optional<double> snr_db, std::uint64_t seed);

// Noisy copy of an existing noiseless dataset (same calibration and draw
// order as synthesize_dataset, without re-running the forward pipeline).
ScatteringDataset with_noise(const ScatteringDataset& noiseless, double snr_db,
                             std::uint64_t seed);

// 10 log10(signal power / noise power) of a noisy copy of clean data.
double realized_snr_db(const Eigen::MatrixXcd& clean, const Eigen::MatrixXcd& noisy);

// Inverting on the discretization that generated the data is refused unless
// explicitly allowed.
void ensure_no_inverse_crime(const ScatteringDataset& dataset, const Grid& inversion_grid,
                             bool allow_inverse_crime);

}  // namespace iscat
