#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "iscat/bounds.hpp"
#include "iscat/rng.hpp"

namespace iscat {

// Evaluated input/output pairs feeding the cost surrogate. Inputs stay within
// their bounds, outputs are finite and nonnegative, and no two inputs come
// closer than 1e-9 in bounds-normalized distance (which would make the
// correlation matrix numerically singular).
struct TrainingSet {
    Bounds bounds;
    Eigen::MatrixXd inputs;   // size x K
    Eigen::VectorXd outputs;  // size

    int size() const { return static_cast<int>(outputs.size()); }
    int dimensions() const { return static_cast<int>(bounds.size()); }

    bool is_near_duplicate(const Eigen::VectorXd& x) const;
    void add(const Eigen::VectorXd& x, double value);
    void validate() const;
};

// Latin hypercube design: one point per stratum and dimension, strata
// assigned by an independent random permutation per dimension.
Eigen::MatrixXd lhs_sample(int samples, const Bounds& bounds, Rng& rng);
Eigen::MatrixXd lhs_sample(int samples, const Bounds& bounds, std::uint64_t seed);

struct HyperParams {
    Eigen::VectorXd gamma;  // > 0, per dimension
    Eigen::VectorXd beta;   // in [1, 2], per dimension
};

// prod_k exp(-gamma_k |u_a,k - u_b,k|^beta_k) on bounds-normalized inputs.
double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const HyperParams& params, const Bounds& bounds);

struct GpFitOptions {
    bool fit_beta = false;     // fit beta in [1, 2] alongside gamma
    double beta_value = 2.0;   // kernel exponent used when fit_beta is off
    int starts = 5;            // Nelder-Mead restarts from a LHS over log10 gamma
    int max_evals = 200;       // likelihood evaluations per restart
    double log10_gamma_min = -3.0;
    double log10_gamma_max = 3.0;
};

// Concentrated log-likelihood of the hyperparameters on a training set;
// -inf when the correlation matrix cannot be factorized.
double concentrated_log_likelihood(const TrainingSet& training, const HyperParams& params);

// Maximizes the concentrated log-likelihood by multi-start Nelder-Mead over
// log10 gamma (and beta when opted in). Deterministic given the rng state.
HyperParams fit_hyperparameters(const TrainingSet& training, Rng& rng,
                                const GpFitOptions& options = {});

// Warm restart: one simplex from the previous optimum plus one fresh start.
HyperParams refit_hyperparameters(const TrainingSet& training, const HyperParams& previous,
                                  Rng& rng, const GpFitOptions& options = {});

struct GpPrediction {
    double mean;
    double variance;       // clamped at zero against roundoff
    double lower;          // mean - 2 sqrt(variance)
    double upper;          // mean + 2 sqrt(variance)
    double lower_clamped;  // max(lower, 0): the cost is nonnegative
};

// Trained ordinary-Kriging model: constant trend, process variance, and the
// Cholesky factorization of the (nugget-stabilized) correlation matrix.
// Immutable after training; safe for concurrent prediction.
class GpModel {
public:
    GpModel(const TrainingSet& training, const HyperParams& params);

    GpPrediction predict(const Eigen::VectorXd& x) const;

    double trend() const { return trend_; }
    double process_variance() const { return process_variance_; }
    double nugget() const { return nugget_; }
    const HyperParams& hyperparameters() const { return params_; }
    int training_size() const { return static_cast<int>(outputs_.size()); }

private:
    Bounds bounds_;
    Eigen::MatrixXd inputs_norm_;  // S x K, normalized
    Eigen::VectorXd outputs_;
    HyperParams params_;
    double trend_ = 0.0;             // chi
    double process_variance_ = 0.0;  // nu^2
    double nugget_ = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;          // R^-1 (phi - 1 chi)
    Eigen::VectorXd rinv_ones_;
    double ones_rinv_ones_ = 0.0;
};

// Convenience: fit hyperparameters then train.
GpModel fit_and_train(const TrainingSet& training, Rng& rng, const GpFitOptions& options = {});

}  // namespace iscat
