#pragma once

#include <functional>

#include <Eigen/Core>

#include "iscat/bounds.hpp"
#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/surrogate.hpp"

namespace iscat {

using CostFunction = std::function<double(const Eigen::VectorXd&)>;

// Normalized data mismatch: sum |S - S~|^2 / sum |S|^2 over all views and
// probes. Throws when the measured data are identically zero.
double cost_phi(const Eigen::MatrixXcd& measured, const Eigen::MatrixXcd& predicted);
double cost_phi(const ScatteringDataset& measured, const Eigen::MatrixXcd& predicted);

// Pixel-averaged reconstruction error (1/N) sum |tau - tau~| / |tau + 1|.
// The modulus in the denominator keeps the metric real for complex
// contrasts; real scenes reduce to the plain ratio.
double error_index(const ContrastMap& actual, const ContrastMap& retrieved);

// Normalized surrogate prediction error over a set of positions (rows):
// mean of |Phi - Phi_hat| / Phi, skipping positions whose true cost is below
// 1e-12. Throws when every position is skipped.
double prediction_error_eta(const Eigen::MatrixXd& positions, const GpModel& model,
                            const CostFunction& cost);

// ((P I_GO) - (S0 + I_SbD)) / (P I_GO); the fraction of forward solves a
// surrogate-driven run saves over the bare multi-agent search.
double time_saving(int particles, int iterations_go, int initial_samples, int iterations_sbd);

// 2-D cut through the cost landscape spanned by two solutions and the actual
// one: Phi(a, b) = Phi{ b [(a+1) xi1 - a xi_act] + (b-1) a xi2 }. The anchor
// points (-1,1), (0,1), (-1,0) reproduce the three anchor costs.
struct LandscapeRequest {
    Eigen::VectorXd xi_1;
    Eigen::VectorXd xi_2;
    Eigen::VectorXd xi_act;
    double a_min = -1.5, a_max = 0.5;
    double b_min = -0.5, b_max = 1.5;
    int a_count = 41, b_count = 41;
    Bounds bounds;  // interpolated points are clamped into this box

    void validate() const;
};

struct LandscapeResult {
    Eigen::VectorXd a;   // lattice abscissas
    Eigen::VectorXd b;
    Eigen::MatrixXd phi;  // phi(i, j) at (a[i], b[j]); NaN marks a failed cell
};

LandscapeResult landscape(const LandscapeRequest& request, const CostFunction& cost);

}  // namespace iscat
