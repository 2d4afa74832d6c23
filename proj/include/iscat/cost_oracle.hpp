#pragma once

#include <Eigen/Core>

#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/grid.hpp"

namespace iscat {

// Full-wave cost of a coded solution against a measured dataset: decode the
// DoF vector on the inversion grid, solve the forward problem for every view
// and return the normalized data mismatch. Green's matrices and incident
// fields are assembled once; every call is counted, which is the primary
// efficiency metric of an inversion run.
class ForwardCostOracle {
public:
    ForwardCostOracle(const ScatteringDataset& dataset, const Grid& inversion_grid,
                      DofLayout layout, int spline_points,
                      int samples_per_segment = kDefaultSamplesPerSegment);

    double operator()(const Eigen::VectorXd& values) const;

    // Scattered probe samples for a coded solution (not counted as a call).
    Eigen::MatrixXcd predicted(const Eigen::VectorXd& values) const;

    long calls() const { return calls_; }
    void reset_calls() { calls_ = 0; }

    const Grid& grid() const { return grid_; }
    DofLayout layout() const { return layout_; }
    int spline_points() const { return spline_points_; }

private:
    Grid grid_;
    DofLayout layout_;
    int spline_points_;
    int samples_per_segment_;
    Eigen::MatrixXcd measured_;
    Eigen::MatrixXcd green_ext_;
    Eigen::MatrixXcd green_int_;
    Eigen::MatrixXcd incident_;
    mutable long calls_ = 0;
};

}  // namespace iscat
