#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "iscat/bounds.hpp"
#include "iscat/grid.hpp"

namespace iscat {

// Closed scatterer boundary built from Q quadratic Bezier segments. Control
// points sit at fixed angles 2*pi*(q-1)/Q around the barycenter at radial
// distances radii[q-1]; each segment runs between consecutive control-point
// midpoints (virtual points) with the enclosed control point as its Bezier
// handle, so the assembled curve is closed and tangent-continuous.
struct SplineContour {
    Eigen::Vector2d barycenter = Eigen::Vector2d::Zero();
    Eigen::VectorXd radii;  // Q entries, all > 0

    int segments() const { return static_cast<int>(radii.size()); }
};

// Positions of the Q control points (1-based q maps to element q-1).
std::vector<Eigen::Vector2d> control_points(const SplineContour& contour);

// Virtual point V^q: midpoint of control points C^{q-1} and C^q, indices
// wrapping modulo Q. Segment q spans V^q .. V^{q+1} around C^q.
Eigen::Vector2d virtual_point(const SplineContour& contour, int q);

// Point of segment q at parameter alpha in [0, 1]:
//   (1-alpha)^2 V^q + 2 alpha (1-alpha) C^q + alpha^2 V^{q+1}.
Eigen::Vector2d bezier_eval(const SplineContour& contour, int q, double alpha);

// Closed polygon tracing all Q segments at uniform parameter steps;
// Q * samples_per_segment vertices, consecutive segments share endpoints.
Eigen::Matrix<double, Eigen::Dynamic, 2> contour_polyline(const SplineContour& contour,
                                                          int samples_per_segment);

// Even-odd (crossing number) containment with the half-open edge rule.
// Degenerate (collinear) polygons contain nothing.
bool point_in_contour(const Eigen::Matrix<double, Eigen::Dynamic, 2>& polygon,
                      const Eigen::Vector2d& p);

// Degree-of-freedom vector layouts. K counts:
//   Single          4 + Q   {x, y, Re tau, Im tau, rho_1..rho_Q}
//   DoublyConnected 7 + Q   {x, y, Re/Im tau_out, Re/Im tau_int, rho_out, upsilon}
//   MultiObject     8 + 2Q  {x1, y1, x2, y2, Re/Im tau_1, Re/Im tau_2, rho_1, rho_2}
enum class DofLayout { Single, DoublyConnected, MultiObject };

int dof_count(DofLayout layout, int spline_points);

struct DofVector {
    DofLayout layout = DofLayout::Single;
    int spline_points = 4;  // Q
    Eigen::VectorXd values;
    Bounds bounds;

    int size() const { return static_cast<int>(values.size()); }

    // Checks the layout size formula, bounds membership, positive radii and
    // (for the doubly-connected layout) the scale factor in (0, 1).
    void validate() const;
};

// Pixel-wise contrast over a grid; background cells are exactly zero.
struct ContrastMap {
    Grid grid;
    Eigen::VectorXcd values;
};

inline constexpr int kDefaultSamplesPerSegment = 32;

// Rasterizes the coded scatterer(s) onto the grid: a cell takes the object
// contrast iff its center lies inside the sampled contour polygon. For the
// doubly-connected layout the inner contour reuses the outer radii scaled by
// upsilon about the same barycenter; cells inside it take the internal
// contrast. For two objects the first one wins where they overlap.
ContrastMap decode_to_contrast(const DofVector& dof, const Grid& grid,
                               int samples_per_segment = kDefaultSamplesPerSegment);

}  // namespace iscat
