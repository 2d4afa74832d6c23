#include "iscat/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iscat {

namespace {

void check_contour(const SplineContour& contour) {
    if (contour.segments() < 3) {
        throw std::invalid_argument("spline contour needs at least 3 control points");
    }
    if (!(contour.radii.array() > 0.0).all()) {
        throw std::invalid_argument("spline contour radii must be positive");
    }
}

Eigen::Vector2d control_point_at(const SplineContour& contour, int index0) {
    const int q = ((index0 % contour.segments()) + contour.segments()) % contour.segments();
    const double angle = q * 2.0 * std::numbers::pi / contour.segments();
    return contour.barycenter +
           contour.radii[q] * Eigen::Vector2d(std::cos(angle), std::sin(angle));
}

}  // namespace

std::vector<Eigen::Vector2d> control_points(const SplineContour& contour) {
    check_contour(contour);
    std::vector<Eigen::Vector2d> points(contour.segments());
    for (int q = 0; q < contour.segments(); ++q) {
        points[q] = control_point_at(contour, q);
    }
    return points;
}

Eigen::Vector2d virtual_point(const SplineContour& contour, int q) {
    check_contour(contour);
    return 0.5 * (control_point_at(contour, q - 2) + control_point_at(contour, q - 1));
}

Eigen::Vector2d bezier_eval(const SplineContour& contour, int q, double alpha) {
    check_contour(contour);
    if (q < 1 || q > contour.segments()) {
        throw std::domain_error("bezier_eval: segment index out of range");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("bezier_eval: parameter must lie in [0, 1]");
    }
    const Eigen::Vector2d v0 = virtual_point(contour, q);
    const Eigen::Vector2d c = control_point_at(contour, q - 1);
    const Eigen::Vector2d v1 = virtual_point(contour, q + 1);
    const double one_minus = 1.0 - alpha;
    return one_minus * one_minus * v0 + 2.0 * alpha * one_minus * c + alpha * alpha * v1;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> contour_polyline(const SplineContour& contour,
                                                          int samples_per_segment) {
    check_contour(contour);
    if (samples_per_segment < 2) {
        throw std::invalid_argument("contour_polyline: need at least 2 samples per segment");
    }
    const int q_count = contour.segments();
    Eigen::Matrix<double, Eigen::Dynamic, 2> polygon(q_count * samples_per_segment, 2);
    int row = 0;
    for (int q = 1; q <= q_count; ++q) {
        for (int j = 0; j < samples_per_segment; ++j) {
            // alpha = 1 is the next segment's alpha = 0; skip it to close cleanly.
            const double alpha = static_cast<double>(j) / samples_per_segment;
            polygon.row(row++) = bezier_eval(contour, q, alpha).transpose();
        }
    }
    return polygon;
}

bool point_in_contour(const Eigen::Matrix<double, Eigen::Dynamic, 2>& polygon,
                      const Eigen::Vector2d& p) {
    const Eigen::Index n = polygon.rows();
    if (n < 3) return false;

    // Degenerate (all collinear) polygons enclose no area.
    {
        const Eigen::Vector2d a = polygon.row(0);
        const Eigen::Vector2d d = Eigen::Vector2d(polygon.row(1)) - a;
        bool collinear = true;
        for (Eigen::Index i = 2; i < n && collinear; ++i) {
            const Eigen::Vector2d e = Eigen::Vector2d(polygon.row(i)) - a;
            collinear = std::abs(d.x() * e.y() - d.y() * e.x()) <= 0.0;
        }
        if (collinear) return false;
    }

    // Crossing number with half-open edges: an edge counts when exactly one
    // endpoint is strictly above the horizontal ray, so shared vertices are
    // counted once and boundary-adjacent queries stay deterministic.
    bool inside = false;
    for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
        const double xi = polygon(i, 0), yi = polygon(i, 1);
        const double xj = polygon(j, 0), yj = polygon(j, 1);
        if ((yi > p.y()) != (yj > p.y())) {
            const double x_cross = (xj - xi) * (p.y() - yi) / (yj - yi) + xi;
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

int dof_count(DofLayout layout, int spline_points) {
    switch (layout) {
        case DofLayout::Single: return 4 + spline_points;
        case DofLayout::DoublyConnected: return 7 + spline_points;
        case DofLayout::MultiObject: return 8 + 2 * spline_points;
    }
    throw std::logic_error("dof_count: unknown layout");
}

void DofVector::validate() const {
    if (spline_points < 3) {
        throw std::invalid_argument("DofVector: need at least 3 spline control points");
    }
    if (size() != dof_count(layout, spline_points)) {
        throw std::invalid_argument("DofVector: value count does not match layout");
    }
    if (!bounds.valid() || bounds.size() != values.size()) {
        throw std::invalid_argument("DofVector: invalid bounds");
    }
    if (!bounds.contains(values)) {
        throw std::invalid_argument("DofVector: values outside declared bounds");
    }
    if (layout == DofLayout::DoublyConnected) {
        const double upsilon = values[size() - 1];
        if (!(upsilon > 0.0 && upsilon < 1.0)) {
            throw std::invalid_argument("DofVector: scale factor must lie in (0, 1)");
        }
    }
}

ContrastMap decode_to_contrast(const DofVector& dof, const Grid& grid,
                               int samples_per_segment) {
    dof.validate();
    const int q_count = dof.spline_points;
    const Eigen::VectorXd& v = dof.values;
    ContrastMap map{grid, Eigen::VectorXcd::Zero(grid.size())};

    switch (dof.layout) {
        case DofLayout::Single: {
            SplineContour contour{{v[0], v[1]}, v.segment(4, q_count)};
            const auto polygon = contour_polyline(contour, samples_per_segment);
            const std::complex<double> tau{v[2], v[3]};
            for (int n = 0; n < grid.size(); ++n) {
                if (point_in_contour(polygon, grid.center(n))) map.values[n] = tau;
            }
            break;
        }
        case DofLayout::DoublyConnected: {
            const double upsilon = v[6 + q_count];
            SplineContour outer{{v[0], v[1]}, v.segment(6, q_count)};
            SplineContour inner{{v[0], v[1]}, upsilon * v.segment(6, q_count)};
            const auto outer_poly = contour_polyline(outer, samples_per_segment);
            const auto inner_poly = contour_polyline(inner, samples_per_segment);
            const std::complex<double> tau_out{v[2], v[3]};
            const std::complex<double> tau_int{v[4], v[5]};
            for (int n = 0; n < grid.size(); ++n) {
                const Eigen::Vector2d c = grid.center(n);
                if (point_in_contour(inner_poly, c)) {
                    map.values[n] = tau_int;
                } else if (point_in_contour(outer_poly, c)) {
                    map.values[n] = tau_out;
                }
            }
            break;
        }
        case DofLayout::MultiObject: {
            SplineContour first{{v[0], v[1]}, v.segment(8, q_count)};
            SplineContour second{{v[2], v[3]}, v.segment(8 + q_count, q_count)};
            const auto first_poly = contour_polyline(first, samples_per_segment);
            const auto second_poly = contour_polyline(second, samples_per_segment);
            const std::complex<double> tau_1{v[4], v[5]};
            const std::complex<double> tau_2{v[6], v[7]};
            for (int n = 0; n < grid.size(); ++n) {
                const Eigen::Vector2d c = grid.center(n);
                if (point_in_contour(first_poly, c)) {
                    map.values[n] = tau_1;  // first object wins overlaps
                } else if (point_in_contour(second_poly, c)) {
                    map.values[n] = tau_2;
                }
            }
            break;
        }
    }
    return map;
}

}  // namespace iscat
