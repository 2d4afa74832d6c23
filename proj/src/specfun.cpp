#include "iscat/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iscat {
namespace {

// Compensated double-double arithmetic (Dekker/Knuth, FMA products). The
// ascending series below suffer catastrophic cancellation for moderate x:
// at x = 25 the largest J0 term is ~1e9 while the sum is ~1e-1, so plain
// doubles lose ten digits. Carrying ~32 significant digits through the sum
// keeps the seam against the asymptotic branch below 1e-12.
struct Dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline Dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline Dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd add(Dd a, Dd b) {
    Dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd add(Dd a, double b) {
    Dd s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd mul(Dd a, Dd b) {
    Dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd mul(Dd a, double b) {
    Dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd div(Dd a, double b) {
    const double q0 = a.hi / b;
    const Dd p = two_prod(q0, b);
    const double q1 = ((a.hi - p.hi) - p.lo + a.lo) / b;
    return quick_two_sum(q0, q1);
}

inline Dd reciprocal(double b) {
    const double q0 = 1.0 / b;
    const double q1 = std::fma(-q0, b, 1.0) / b;
    return quick_two_sum(q0, q1);
}

constexpr double kEulerGamma = 0.577215664901532860606512090082;
constexpr double kSeriesAsymptoticSplit = 16.0;

// Ascending series (order 0 and 1, with the log-free companion sums for
// Y0/Y1). All four power sums share the ratio q = x^2/4.
CylinderFunctionValue by_series(double x) {
    const Dd q = div(two_prod(x, x), 4.0);

    Dd t{1.0, 0.0};                   // (-q)^k / (k!)^2
    Dd sum_j0 = t;
    Dd sum_h0{0.0, 0.0};              // sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2

    Dd u{1.0, 0.0};                   // (-q)^k / (k! (k+1)!)
    Dd sum_j1 = u;
    Dd harmonic{0.0, 0.0};            // H_k
    Dd sum_h1 = add(mul(harmonic, 2.0), reciprocal(1.0));  // (H_k + H_{k+1}) u_k at k=0

    for (int k = 1; k <= 400; ++k) {
        t = mul(t, q);
        t = div(t, static_cast<double>(-k) * k);
        sum_j0 = add(sum_j0, t);

        harmonic = add(harmonic, reciprocal(static_cast<double>(k)));
        sum_h0 = add(sum_h0, mul(t, -harmonic.hi));
        sum_h0 = add(sum_h0, mul(t, -harmonic.lo));

        u = mul(u, q);
        u = div(u, static_cast<double>(-k) * (k + 1));
        sum_j1 = add(sum_j1, u);
        Dd h_pair = add(mul(harmonic, 2.0), reciprocal(static_cast<double>(k + 1)));
        sum_h1 = add(sum_h1, mul(u, h_pair.hi));
        sum_h1 = add(sum_h1, mul(u, h_pair.lo));

        if (std::abs(t.hi) < 1e-40 && std::abs(u.hi) < 1e-40) break;
    }

    const double log_term = std::log(0.5 * x) + kEulerGamma;
    const double two_over_pi = 2.0 / std::numbers::pi;

    const Dd j0 = sum_j0;
    const Dd j1 = mul(sum_j1, 0.5 * x);
    Dd y0 = mul(add(mul(j0, log_term), sum_h0), two_over_pi);
    Dd y1 = add(mul(j1, log_term), mul(reciprocal(x), -1.0));
    y1 = add(y1, mul(sum_h1, -0.25 * x));
    y1 = mul(y1, two_over_pi);

    return {j0.hi + j0.lo, j1.hi + j1.lo, y0.hi + y0.lo, y1.hi + y1.lo};
}

// Hankel asymptotic amplitude/phase sums P, Q for order nu. Terms are
// generated recursively and the expansion is truncated at its smallest term.
void asymptotic_pq(double nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    p = term;
    q = 0.0;
    double prev = std::abs(term);
    for (int j = 1; j <= 40; ++j) {
        const double odd = 2.0 * j - 1.0;
        term *= (mu - odd * odd) / (8.0 * j * x);
        if (std::abs(term) >= prev) break;  // divergent tail reached
        prev = std::abs(term);
        const double sign = ((j >> 1) & 1) ? -1.0 : 1.0;
        if (j & 1) {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if (std::abs(term) < 1e-17) break;
    }
}

// J/Y via P,Q and the shared phase chi0 = x - pi/4. Both orders are written
// in terms of sin/cos of chi0 (chi1 = chi0 - pi/2), which keeps the phase
// reduction common so identities like the Wronskian do not pick up
// independent phase rounding.
CylinderFunctionValue by_asymptotic(double x) {
    double p0, q0, p1, q1;
    asymptotic_pq(0.0, x, p0, q0);
    asymptotic_pq(1.0, x, p1, q1);

    const double sx = std::sin(x);
    const double cx = std::cos(x);
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    const double cos_chi = (cx + sx) * inv_sqrt2;  // cos(x - pi/4)
    const double sin_chi = (sx - cx) * inv_sqrt2;  // sin(x - pi/4)

    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    return {
        amp * (p0 * cos_chi - q0 * sin_chi),
        amp * (p1 * sin_chi + q1 * cos_chi),
        amp * (p0 * sin_chi + q0 * cos_chi),
        amp * (-p1 * cos_chi + q1 * sin_chi),
    };
}

}  // namespace

CylinderFunctionValue cylinder_functions(double x) {
    if (!std::isfinite(x) || !(x > 1e-8)) {
        throw std::domain_error("cylinder_functions: argument must be finite and > 1e-8");
    }
    return x < kSeriesAsymptoticSplit ? by_series(x) : by_asymptotic(x);
}

}  // namespace iscat
