#include "iscat/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace iscat {

namespace {

constexpr double kDuplicateDistance = 1e-9;
constexpr double kNuggetScale = 1e-10;

}  // namespace

bool TrainingSet::is_near_duplicate(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd u = bounds.normalize(x);
    for (int s = 0; s < size(); ++s) {
        const Eigen::VectorXd v = bounds.normalize(inputs.row(s).transpose());
        if ((u - v).norm() <= kDuplicateDistance) return true;
    }
    return false;
}

void TrainingSet::add(const Eigen::VectorXd& x, double value) {
    if (!bounds.valid() || x.size() != bounds.size()) {
        throw std::invalid_argument("TrainingSet: sample dimension mismatch");
    }
    if (!bounds.contains(x)) {
        throw std::invalid_argument("TrainingSet: sample outside bounds");
    }
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument("TrainingSet: output must be finite and nonnegative");
    }
    if (is_near_duplicate(x)) {
        throw std::invalid_argument("TrainingSet: near-duplicate sample rejected");
    }
    inputs.conservativeResize(size() + 1, bounds.size());
    inputs.row(inputs.rows() - 1) = x.transpose();
    outputs.conservativeResize(outputs.size() + 1);
    outputs[outputs.size() - 1] = value;
}

void TrainingSet::validate() const {
    if (!bounds.valid()) throw std::invalid_argument("TrainingSet: invalid bounds");
    if (inputs.rows() != outputs.size() || inputs.cols() != bounds.size()) {
        throw std::invalid_argument("TrainingSet: shape mismatch");
    }
    for (int s = 0; s < size(); ++s) {
        if (!bounds.contains(inputs.row(s).transpose())) {
            throw std::invalid_argument("TrainingSet: sample outside bounds");
        }
        if (!std::isfinite(outputs[s]) || outputs[s] < 0.0) {
            throw std::invalid_argument("TrainingSet: invalid output value");
        }
    }
}

Eigen::MatrixXd lhs_sample(int samples, const Bounds& bounds, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("lhs_sample: need at least one sample");
    if (!bounds.valid()) throw std::invalid_argument("lhs_sample: invalid bounds");
    const int dims = static_cast<int>(bounds.size());
    Eigen::MatrixXd result(samples, dims);
    std::vector<int> strata(samples);
    for (int k = 0; k < dims; ++k) {
        for (int s = 0; s < samples; ++s) strata[s] = s;
        for (int s = samples - 1; s > 0; --s) {
            std::swap(strata[s], strata[rng.index(s + 1)]);
        }
        const double width = (bounds.upper[k] - bounds.lower[k]) / samples;
        for (int s = 0; s < samples; ++s) {
            result(s, k) = bounds.lower[k] + (strata[s] + rng.uniform01()) * width;
        }
    }
    return result;
}

Eigen::MatrixXd lhs_sample(int samples, const Bounds& bounds, std::uint64_t seed) {
    Rng rng(seed);
    return lhs_sample(samples, bounds, rng);
}

namespace {

void check_hyperparams(const HyperParams& params, int dims) {
    if (params.gamma.size() != dims || params.beta.size() != dims) {
        throw std::invalid_argument("hyperparameters: dimension mismatch");
    }
    if (!(params.gamma.array() > 0.0).all()) {
        throw std::invalid_argument("hyperparameters: gamma must be positive");
    }
    if (!((params.beta.array() >= 1.0) && (params.beta.array() <= 2.0)).all()) {
        throw std::invalid_argument("hyperparameters: beta must lie in [1, 2]");
    }
}

// Pairwise |u_s,k - u_t,k| on normalized inputs, cached so likelihood
// evaluations only exponentiate.
struct PairwiseDistances {
    explicit PairwiseDistances(const TrainingSet& training) {
        const int s_count = training.size();
        const int dims = training.dimensions();
        norm.resize(s_count, dims);
        for (int s = 0; s < s_count; ++s) {
            norm.row(s) = training.bounds.normalize(training.inputs.row(s).transpose());
        }
        absdiff.reserve(dims);
        for (int k = 0; k < dims; ++k) {
            Eigen::MatrixXd d(s_count, s_count);
            for (int s = 0; s < s_count; ++s) {
                for (int t = 0; t <= s; ++t) {
                    d(s, t) = d(t, s) = std::abs(norm(s, k) - norm(t, k));
                }
            }
            absdiff.push_back(std::move(d));
        }
    }

    Eigen::MatrixXd correlation_matrix(const HyperParams& params) const {
        const int s_count = static_cast<int>(norm.rows());
        Eigen::MatrixXd log_r = Eigen::MatrixXd::Zero(s_count, s_count);
        for (int k = 0; k < static_cast<int>(absdiff.size()); ++k) {
            if (params.beta[k] == 2.0) {
                log_r.noalias() -= params.gamma[k] * absdiff[k].array().square().matrix();
            } else {
                log_r -= params.gamma[k] * absdiff[k].array().pow(params.beta[k]).matrix();
            }
        }
        return log_r.array().exp();
    }

    Eigen::MatrixXd norm;
    std::vector<Eigen::MatrixXd> absdiff;
};

struct LikelihoodParts {
    bool ok = false;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    double trend = 0.0;
    double process_variance = 0.0;
};

LikelihoodParts evaluate_likelihood(const Eigen::MatrixXd& correlation,
                                    const Eigen::VectorXd& outputs) {
    const int s_count = static_cast<int>(outputs.size());
    Eigen::MatrixXd r = correlation;
    const double nugget = kNuggetScale * r.trace() / s_count;
    r.diagonal().array() += nugget;

    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) return {};

    double log_det = 0.0;
    for (int s = 0; s < s_count; ++s) log_det += 2.0 * std::log(llt.matrixLLT()(s, s));

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s_count);
    const Eigen::VectorXd rinv_ones = llt.solve(ones);
    const Eigen::VectorXd rinv_phi = llt.solve(outputs);
    const double denom = ones.dot(rinv_ones);
    if (!(denom > 0.0)) return {};

    LikelihoodParts parts;
    parts.trend = ones.dot(rinv_phi) / denom;
    const Eigen::VectorXd resid = outputs.array() - parts.trend;
    parts.process_variance = resid.dot(rinv_phi - parts.trend * rinv_ones) / s_count;
    if (parts.process_variance < 0.0) parts.process_variance = 0.0;
    parts.log_likelihood =
        -0.5 * (s_count * std::log(std::max(parts.process_variance, 1e-300)) + log_det);
    parts.ok = std::isfinite(parts.log_likelihood);
    return parts;
}

// Bounded Nelder-Mead (reflection/expansion/contraction/shrink) minimizer;
// candidates are clamped into the box.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                            const Eigen::VectorXd& start, const Bounds& box, int max_evals) {
    const int dims = static_cast<int>(start.size());
    const double step = 0.25;
    int evals = 0;
    auto eval = [&](Eigen::VectorXd x) {
        x = box.clamp(x);
        ++evals;
        return std::make_pair(objective(x), x);
    };

    std::vector<std::pair<double, Eigen::VectorXd>> simplex;
    simplex.reserve(dims + 1);
    simplex.push_back(eval(start));
    for (int k = 0; k < dims; ++k) {
        Eigen::VectorXd vertex = start;
        vertex[k] += step * (box.upper[k] - box.lower[k]);
        simplex.push_back(eval(vertex));
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    order();

    while (evals < max_evals) {
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dims);
        for (int i = 0; i < dims; ++i) centroid += simplex[i].second;
        centroid /= dims;

        const auto& worst = simplex[dims];
        auto reflected = eval(centroid + (centroid - worst.second));
        if (reflected.first < simplex[0].first) {
            auto expanded = eval(centroid + 2.0 * (centroid - worst.second));
            simplex[dims] = expanded.first < reflected.first ? expanded : reflected;
        } else if (reflected.first < simplex[dims - 1].first) {
            simplex[dims] = reflected;
        } else {
            auto contracted = eval(centroid + 0.5 * (worst.second - centroid));
            if (contracted.first < worst.first) {
                simplex[dims] = contracted;
            } else {
                for (int i = 1; i <= dims; ++i) {
                    simplex[i] = eval(simplex[0].second +
                                      0.5 * (simplex[i].second - simplex[0].second));
                    if (evals >= max_evals) break;
                }
            }
        }
        order();
        if ((simplex[dims].second - simplex[0].second).norm() < 1e-10) break;
    }
    return simplex[0].second;
}

HyperParams unpack_point(const Eigen::VectorXd& point, int dims,
                         const GpFitOptions& options) {
    HyperParams params;
    params.gamma.resize(dims);
    for (int k = 0; k < dims; ++k) params.gamma[k] = std::pow(10.0, point[k]);
    params.beta = options.fit_beta ? Eigen::VectorXd(point.tail(dims))
                                   : Eigen::VectorXd::Constant(dims, options.beta_value);
    return params;
}

bool outputs_degenerate(const TrainingSet& training) {
    const double lo = training.outputs.minCoeff();
    const double hi = training.outputs.maxCoeff();
    return hi - lo <= 1e-14 * std::max(1.0, std::abs(hi));
}

HyperParams search_hyperparameters(const TrainingSet& training,
                                   const std::vector<Eigen::VectorXd>& starts,
                                   const GpFitOptions& options) {
    const int dims = training.dimensions();
    if (training.size() < dims + 1) {
        std::cerr << "fit_hyperparameters: training set smaller than K+1; "
                     "the likelihood surface may be flat\n";
    }
    if (outputs_degenerate(training)) {
        return {Eigen::VectorXd::Ones(dims),
                Eigen::VectorXd::Constant(dims, options.fit_beta ? 2.0 : options.beta_value)};
    }

    const PairwiseDistances cache(training);
    auto objective = [&](const Eigen::VectorXd& point) {
        const HyperParams params = unpack_point(point, dims, options);
        const auto parts = evaluate_likelihood(cache.correlation_matrix(params),
                                               training.outputs);
        return parts.ok ? -parts.log_likelihood : std::numeric_limits<double>::infinity();
    };

    const int search_dims = options.fit_beta ? 2 * dims : dims;
    Bounds box;
    box.lower = Eigen::VectorXd::Constant(search_dims, options.log10_gamma_min);
    box.upper = Eigen::VectorXd::Constant(search_dims, options.log10_gamma_max);
    if (options.fit_beta) {
        box.lower.tail(dims).setConstant(1.0);
        box.upper.tail(dims).setConstant(2.0);
    }

    double best_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_point = Eigen::VectorXd::Zero(search_dims);
    for (const auto& start : starts) {
        const Eigen::VectorXd candidate =
            nelder_mead(objective, box.clamp(start), box, options.max_evals);
        const double value = objective(candidate);
        if (value < best_value) {
            best_value = value;
            best_point = candidate;
        }
    }
    if (!std::isfinite(best_value)) {
        // Every candidate failed to factorize; fall back to the kernel default.
        return {Eigen::VectorXd::Ones(dims),
                Eigen::VectorXd::Constant(dims, options.fit_beta ? 2.0 : options.beta_value)};
    }
    return unpack_point(best_point, dims, options);
}

std::vector<Eigen::VectorXd> lhs_starts(int count, int search_dims, const GpFitOptions& options,
                                        int dims, Rng& rng) {
    Bounds box;
    box.lower = Eigen::VectorXd::Constant(search_dims, options.log10_gamma_min);
    box.upper = Eigen::VectorXd::Constant(search_dims, options.log10_gamma_max);
    if (options.fit_beta) {
        box.lower.tail(dims).setConstant(1.0);
        box.upper.tail(dims).setConstant(2.0);
    }
    const Eigen::MatrixXd points = lhs_sample(count, box, rng);
    std::vector<Eigen::VectorXd> starts;
    starts.reserve(count);
    for (int s = 0; s < count; ++s) starts.push_back(points.row(s).transpose());
    return starts;
}

}  // namespace

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const HyperParams& params, const Bounds& bounds) {
    check_hyperparams(params, static_cast<int>(bounds.size()));
    const Eigen::VectorXd ua = bounds.normalize(a);
    const Eigen::VectorXd ub = bounds.normalize(b);
    double log_r = 0.0;
    for (Eigen::Index k = 0; k < ua.size(); ++k) {
        log_r -= params.gamma[k] * std::pow(std::abs(ua[k] - ub[k]), params.beta[k]);
    }
    return std::exp(log_r);
}

double concentrated_log_likelihood(const TrainingSet& training, const HyperParams& params) {
    training.validate();
    check_hyperparams(params, training.dimensions());
    const PairwiseDistances cache(training);
    return evaluate_likelihood(cache.correlation_matrix(params), training.outputs)
        .log_likelihood;
}

HyperParams fit_hyperparameters(const TrainingSet& training, Rng& rng,
                                const GpFitOptions& options) {
    training.validate();
    const int dims = training.dimensions();
    const int search_dims = options.fit_beta ? 2 * dims : dims;
    return search_hyperparameters(
        training, lhs_starts(options.starts, search_dims, options, dims, rng), options);
}

HyperParams refit_hyperparameters(const TrainingSet& training, const HyperParams& previous,
                                  Rng& rng, const GpFitOptions& options) {
    training.validate();
    const int dims = training.dimensions();
    check_hyperparams(previous, dims);
    const int search_dims = options.fit_beta ? 2 * dims : dims;

    Eigen::VectorXd warm(search_dims);
    warm.head(dims) = previous.gamma.array().log10();
    if (options.fit_beta) warm.tail(dims) = previous.beta;

    std::vector<Eigen::VectorXd> starts{warm};
    auto fresh = lhs_starts(1, search_dims, options, dims, rng);
    starts.insert(starts.end(), fresh.begin(), fresh.end());
    return search_hyperparameters(training, starts, options);
}

GpModel::GpModel(const TrainingSet& training, const HyperParams& params)
    : bounds_(training.bounds), outputs_(training.outputs), params_(params) {
    training.validate();
    check_hyperparams(params, training.dimensions());

    const int s_count = training.size();
    inputs_norm_.resize(s_count, training.dimensions());
    for (int s = 0; s < s_count; ++s) {
        inputs_norm_.row(s) = bounds_.normalize(training.inputs.row(s).transpose());
    }

    const PairwiseDistances cache(training);
    Eigen::MatrixXd r = cache.correlation_matrix(params_);
    nugget_ = kNuggetScale * r.trace() / s_count;
    r.diagonal().array() += nugget_;
    llt_.compute(r);
    if (llt_.info() != Eigen::Success) {
        throw std::runtime_error(
            "GpModel: correlation matrix is not positive definite even with the nugget; "
            "remove duplicate training samples");
    }

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s_count);
    rinv_ones_ = llt_.solve(ones);
    const Eigen::VectorXd rinv_phi = llt_.solve(outputs_);
    ones_rinv_ones_ = ones.dot(rinv_ones_);
    trend_ = ones.dot(rinv_phi) / ones_rinv_ones_;
    const Eigen::VectorXd resid = outputs_.array() - trend_;
    process_variance_ = std::max(0.0, resid.dot(rinv_phi - trend_ * rinv_ones_) / s_count);
    alpha_ = rinv_phi - trend_ * rinv_ones_;
}

GpPrediction GpModel::predict(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd u = bounds_.normalize(x);
    const int s_count = training_size();
    Eigen::VectorXd r(s_count);
    for (int s = 0; s < s_count; ++s) {
        double log_r = 0.0;
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            const double d = std::abs(u[k] - inputs_norm_(s, k));
            log_r -= params_.beta[k] == 2.0 ? params_.gamma[k] * d * d
                                            : params_.gamma[k] * std::pow(d, params_.beta[k]);
        }
        r[s] = std::exp(log_r);
    }

    const double mean = trend_ + r.dot(alpha_);
    const Eigen::VectorXd rinv_r = llt_.solve(r);
    const double ones_rinv_r = rinv_ones_.dot(r);
    const double one_minus = 1.0 - ones_rinv_r;
    double variance =
        process_variance_ * (1.0 - r.dot(rinv_r) + one_minus * one_minus / ones_rinv_ones_);
    if (variance < 0.0) variance = 0.0;

    const double spread = 2.0 * std::sqrt(variance);
    return {mean, variance, mean - spread, mean + spread, std::max(mean - spread, 0.0)};
}

GpModel fit_and_train(const TrainingSet& training, Rng& rng, const GpFitOptions& options) {
    return GpModel(training, fit_hyperparameters(training, rng, options));
}

}  // namespace iscat
