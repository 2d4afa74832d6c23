#include "iscat/cost_oracle.hpp"

#include <stdexcept>

#include "iscat/metrics.hpp"

namespace iscat {

ForwardCostOracle::ForwardCostOracle(const ScatteringDataset& dataset,
                                     const Grid& inversion_grid, DofLayout layout,
                                     int spline_points, int samples_per_segment)
    : grid_(inversion_grid),
      layout_(layout),
      spline_points_(spline_points),
      samples_per_segment_(samples_per_segment),
      measured_(dataset.scattered) {
    dataset.setup.validate(grid_.side);
    if (dataset.scattered.rows() != dataset.setup.probes ||
        dataset.scattered.cols() != dataset.setup.views) {
        throw std::invalid_argument("ForwardCostOracle: dataset shape mismatch");
    }
    green_ext_ = green_external(grid_, dataset.setup);
    green_int_ = green_internal(grid_);
    incident_ = incident_fields(grid_, dataset.setup);
}

Eigen::MatrixXcd ForwardCostOracle::predicted(const Eigen::VectorXd& values) const {
    // The oracle evaluates any decodable point; box enforcement is the
    // caller's business (swarm positions are clamped, landscape cuts clamp
    // themselves), so the DoF carries a trivial box around the point.
    DofVector dof{layout_, spline_points_, values, Bounds{}};
    dof.bounds.lower = values - Eigen::VectorXd::Ones(values.size());
    dof.bounds.upper = values + Eigen::VectorXd::Ones(values.size());
    const ContrastMap contrast = decode_to_contrast(dof, grid_, samples_per_segment_);
    return scattered_views(green_ext_, green_int_, contrast.values, incident_);
}

double ForwardCostOracle::operator()(const Eigen::VectorXd& values) const {
    ++calls_;
    return cost_phi(measured_, predicted(values));
}

}  // namespace iscat
