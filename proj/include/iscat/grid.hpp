#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace iscat {

// All lengths are expressed in wavelengths, so the background wavenumber is
// fixed at 2*pi per wavelength.
constexpr double k0 = 2.0 * std::numbers::pi;

// Uniform square partition of the investigation domain, centered on the
// origin. Cell n = iy * n_side + ix (x fastest), centers on a regular
// lattice. The equivalent radius is that of the circle with the cell's area,
// used by the closed-form cell integrals of the Green's kernels.
struct Grid {
    double side = 2.0;  // L_D
    int n_side = 20;

    Grid() = default;
    Grid(double side_, int n_side_) : side(side_), n_side(n_side_) {
        if (!(side > 0.0) || n_side < 1) {
            throw std::invalid_argument("Grid: side must be positive and n_side >= 1");
        }
    }

    int size() const { return n_side * n_side; }
    double cell() const { return side / n_side; }
    double equivalent_radius() const { return cell() / std::sqrt(std::numbers::pi); }

    double x(int n) const { return -0.5 * side + (n % n_side + 0.5) * cell(); }
    double y(int n) const { return -0.5 * side + (n / n_side + 0.5) * cell(); }
    Eigen::Vector2d center(int n) const { return {x(n), y(n)}; }

    bool operator==(const Grid& other) const = default;
};

}  // namespace iscat
