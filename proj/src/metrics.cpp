#include "iscat/metrics.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace iscat {

double cost_phi(const Eigen::MatrixXcd& measured, const Eigen::MatrixXcd& predicted) {
    if (measured.rows() != predicted.rows() || measured.cols() != predicted.cols()) {
        throw std::invalid_argument("cost_phi: dimension mismatch");
    }
    const double denom = measured.squaredNorm();
    if (!(denom > 0.0)) {
        throw std::invalid_argument("cost_phi: measured data are identically zero");
    }
    return (measured - predicted).squaredNorm() / denom;
}

double cost_phi(const ScatteringDataset& measured, const Eigen::MatrixXcd& predicted) {
    return cost_phi(measured.scattered, predicted);
}

double error_index(const ContrastMap& actual, const ContrastMap& retrieved) {
    if (!(actual.grid == retrieved.grid)) {
        throw std::invalid_argument("error_index: contrast maps live on different grids");
    }
    const int cells = actual.grid.size();
    double sum = 0.0;
    for (int n = 0; n < cells; ++n) {
        sum += std::abs(actual.values[n] - retrieved.values[n]) /
               std::abs(actual.values[n] + 1.0);
    }
    return sum / cells;
}

double prediction_error_eta(const Eigen::MatrixXd& positions, const GpModel& model,
                            const CostFunction& cost) {
    if (positions.rows() < 1) throw std::invalid_argument("prediction_error_eta: no positions");
    double sum = 0.0;
    int used = 0;
    for (Eigen::Index p = 0; p < positions.rows(); ++p) {
        const Eigen::VectorXd xi = positions.row(p).transpose();
        const double phi = cost(xi);
        if (phi < 1e-12) {
            std::cerr << "prediction_error_eta: skipping particle " << p
                      << " with near-zero true cost\n";
            continue;
        }
        sum += std::abs(phi - model.predict(xi).mean) / phi;
        ++used;
    }
    if (used == 0) {
        throw std::runtime_error("prediction_error_eta: all positions skipped, metric undefined");
    }
    return sum / positions.rows();
}

double time_saving(int particles, int iterations_go, int initial_samples, int iterations_sbd) {
    const double budget_go = static_cast<double>(particles) * iterations_go;
    if (!(budget_go > 0.0)) {
        throw std::invalid_argument("time_saving: the bare-search budget must be positive");
    }
    return (budget_go - (initial_samples + iterations_sbd)) / budget_go;
}

void LandscapeRequest::validate() const {
    const Eigen::Index k = xi_1.size();
    if (xi_2.size() != k || xi_act.size() != k || k == 0) {
        throw std::invalid_argument("LandscapeRequest: solution vectors must share one layout");
    }
    if (bounds.size() != k || !bounds.valid()) {
        throw std::invalid_argument("LandscapeRequest: invalid bounds");
    }
    if (!(a_min <= -1.0 && a_max >= 0.0 && b_min <= 0.0 && b_max >= 1.0)) {
        throw std::invalid_argument("LandscapeRequest: ranges must cover the anchor points");
    }
    if (a_count < 2 || b_count < 2) {
        throw std::invalid_argument("LandscapeRequest: need at least a 2x2 lattice");
    }
}

LandscapeResult landscape(const LandscapeRequest& request, const CostFunction& cost) {
    request.validate();
    LandscapeResult result;
    result.a = Eigen::VectorXd::LinSpaced(request.a_count, request.a_min, request.a_max);
    result.b = Eigen::VectorXd::LinSpaced(request.b_count, request.b_min, request.b_max);
    result.phi.resize(request.a_count, request.b_count);

    for (int i = 0; i < request.a_count; ++i) {
        const double a = result.a[i];
        for (int j = 0; j < request.b_count; ++j) {
            const double b = result.b[j];
            const Eigen::VectorXd xi = request.bounds.clamp(
                b * ((a + 1.0) * request.xi_1 - a * request.xi_act) +
                (b - 1.0) * a * request.xi_2);
            try {
                result.phi(i, j) = cost(xi);
            } catch (const std::exception& err) {
                std::cerr << "landscape: cell (" << a << ", " << b << ") failed: " << err.what()
                          << "\n";
                result.phi(i, j) = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    return result;
}

}  // namespace iscat
