#pragma once

#include <complex>

namespace iscat {

// Order-0/1 cylinder functions at a common positive argument. The Hankel
// combinations H1_0 = J0 + iY0 and H1_1 = J1 + iY1 are what the 2D Green's
// kernels consume.
struct CylinderFunctionValue {
    double j0;
    double j1;
    double y0;
    double y1;

    std::complex<double> h1_0() const { return {j0, y0}; }
    std::complex<double> h1_1() const { return {j1, y1}; }
};

// Evaluates J0, J1, Y0, Y1 at x. Accurate to ~1e-12 relative to the local
// oscillation envelope for x in (1e-8, 1e4]. Throws std::domain_error for
// x <= 1e-8 or non-finite x; the kernels never need smaller separations
// (the self-cell term is handled analytically by the forward module).
CylinderFunctionValue cylinder_functions(double x);

}  // namespace iscat
