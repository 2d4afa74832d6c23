#include "iscat/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "iscat/metrics.hpp"

namespace iscat {

void InversionConfig::validate() const {
    if (particles < 2) throw std::invalid_argument("InversionConfig: need at least 2 particles");
    if (iterations < 1) throw std::invalid_argument("InversionConfig: need at least 1 iteration");
    if (mode == SearchMode::Sbd && initial_samples < 1) {
        throw std::invalid_argument("InversionConfig: need at least 1 initial sample");
    }
    if (!(inertia >= 0.0) || !(cognitive > 0.0) || !(social > 0.0)) {
        throw std::invalid_argument("InversionConfig: coefficients must be positive");
    }
    if (!(velocity_clamp > 0.0 && velocity_clamp <= 1.0)) {
        throw std::invalid_argument("InversionConfig: velocity clamp fraction must be in (0, 1]");
    }
    if (spline_points < 3) {
        throw std::invalid_argument("InversionConfig: need at least 3 spline control points");
    }
    if (!bounds.valid() || bounds.size() != dof_count(layout, spline_points)) {
        throw std::invalid_argument("InversionConfig: bounds do not match the DoF layout");
    }
}

namespace swarm {

int rank_best_promising(const Eigen::VectorXd& lower_bounds) {
    int best = 0;
    for (int p = 1; p < lower_bounds.size(); ++p) {
        if (lower_bounds[p] < lower_bounds[best]) best = p;
    }
    return best;
}

void update_velocities_positions(Eigen::MatrixXd& positions, Eigen::MatrixXd& velocities,
                                 const Eigen::MatrixXd& personal_best,
                                 const Eigen::VectorXd& global_best,
                                 const InversionConfig& config, Rng& rng) {
    const Eigen::VectorXd range = config.bounds.range_safe();
    for (Eigen::Index p = 0; p < positions.rows(); ++p) {
        for (Eigen::Index k = 0; k < positions.cols(); ++k) {
            const double r1 = rng.uniform01();
            const double r2 = rng.uniform01();
            double v = config.inertia * velocities(p, k) +
                       config.cognitive * r1 * (personal_best(p, k) - positions(p, k)) +
                       config.social * r2 * (global_best[k] - positions(p, k));
            const double v_max = config.velocity_clamp * range[k];
            v = std::clamp(v, -v_max, v_max);

            double x = positions(p, k) + v;
            if (x < config.bounds.lower[k]) {
                x = config.bounds.lower[k];
                v = 0.0;
            } else if (x > config.bounds.upper[k]) {
                x = config.bounds.upper[k];
                v = 0.0;
            }
            velocities(p, k) = v;
            positions(p, k) = x;
        }
    }
}

}  // namespace swarm

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Evaluates the oracle at an in-bounds point, replacing failed samples by
// fresh uniform draws (up to 10 retries).
double evaluate_with_retries(const ForwardCostOracle& oracle, Eigen::VectorXd& point,
                             const Bounds& bounds, Rng& rng) {
    for (int attempt = 0;; ++attempt) {
        try {
            return oracle(point);
        } catch (const std::exception& err) {
            if (attempt >= 10) throw;
            std::cerr << "cost oracle failed (" << err.what() << "); resampling\n";
            for (Eigen::Index k = 0; k < point.size(); ++k) {
                point[k] = rng.uniform(bounds.lower[k], bounds.upper[k]);
            }
        }
    }
}

struct BestSample {
    Eigen::VectorXd values;
    double phi = std::numeric_limits<double>::infinity();
};

InversionResult run_sbd(const InversionConfig& config, const ForwardCostOracle& oracle,
                        const SurrogateOverride& surrogate_override) {
    const Clock::time_point start = Clock::now();
    const int dims = static_cast<int>(config.bounds.size());
    Rng rng(config.seed);
    GpFitOptions fit_options;
    fit_options.fit_beta = config.fit_beta;

    // Step 1: initial design, forward-evaluated, and the first digital twin.
    TrainingSet training{config.bounds, Eigen::MatrixXd(0, dims), Eigen::VectorXd(0)};
    const Eigen::MatrixXd design = lhs_sample(config.initial_samples, config.bounds, rng);
    for (int s = 0; s < config.initial_samples; ++s) {
        Eigen::VectorXd point = design.row(s).transpose();
        double phi = evaluate_with_retries(oracle, point, config.bounds, rng);
        while (training.is_near_duplicate(point)) {
            std::cerr << "initial design produced a near-duplicate; resampling\n";
            for (Eigen::Index k = 0; k < point.size(); ++k) {
                point[k] = rng.uniform(config.bounds.lower[k], config.bounds.upper[k]);
            }
            phi = evaluate_with_retries(oracle, point, config.bounds, rng);
        }
        training.add(point, phi);
    }
    HyperParams params = fit_hyperparameters(training, rng, fit_options);
    GpModel model(training, params);

    Eigen::MatrixXd positions(config.particles, dims);
    Eigen::MatrixXd velocities(config.particles, dims);
    for (int p = 0; p < config.particles; ++p) {
        for (int k = 0; k < dims; ++k) {
            positions(p, k) = rng.uniform(config.bounds.lower[k], config.bounds.upper[k]);
        }
    }
    const Eigen::VectorXd range = config.bounds.range_safe();
    for (int p = 0; p < config.particles; ++p) {
        for (int k = 0; k < dims; ++k) {
            const double v_max = config.velocity_clamp * range[k];
            velocities(p, k) = rng.uniform(-v_max, v_max);
        }
    }
    Eigen::MatrixXd personal_best = positions;

    // The global best is always a forward-verified training sample.
    BestSample best;
    for (int s = 0; s < training.size(); ++s) {
        if (training.outputs[s] < best.phi) {
            best.phi = training.outputs[s];
            best.values = training.inputs.row(s).transpose();
        }
    }

    auto lower_bound_of = [&](const Eigen::VectorXd& x) {
        return surrogate_override ? surrogate_override(x) : model.predict(x).lower;
    };

    std::vector<TraceRow> trace;
    trace.push_back({0, best.phi, training.size(), oracle.calls(), seconds_since(start)});

    for (int i = 1; i <= config.iterations; ++i) {
        // 2(a)-(b): rank the swarm by the surrogate's lower confidence bound.
        Eigen::VectorXd lower(config.particles);
        Eigen::VectorXd lower_raw(config.particles);
        for (int p = 0; p < config.particles; ++p) {
            const Eigen::VectorXd xi = positions.row(p).transpose();
            if (surrogate_override) {
                lower_raw[p] = surrogate_override(xi);
                lower[p] = std::max(lower_raw[p], 0.0);
            } else {
                const GpPrediction pred = model.predict(xi);
                lower[p] = pred.lower_clamped;
                lower_raw[p] = pred.lower;
            }
        }
        const int bp = swarm::rank_best_promising(lower);

        // 2(c): reinforce the twin only when the promising particle may beat
        // the incumbent; otherwise the training set carries over unchanged.
        if (lower_raw[bp] < best.phi) {
            Eigen::VectorXd candidate = positions.row(bp).transpose();
            if (training.is_near_duplicate(candidate)) {
                // Re-simulating a known point cannot improve the twin and
                // would break the correlation matrix conditioning.
            } else {
                try {
                    const double phi = oracle(candidate);
                    training.add(candidate, phi);
                    params = refit_hyperparameters(training, params, rng, fit_options);
                    model = GpModel(training, params);
                    if (phi < best.phi) {
                        best.phi = phi;
                        best.values = candidate;
                    }
                } catch (const std::exception& err) {
                    std::cerr << "reinforcement failed at iteration " << i << ": " << err.what()
                              << "\n";
                }
            }
        }

        // 2(d): personal bests under the current model.
        for (int p = 0; p < config.particles; ++p) {
            const double l_pos = lower_bound_of(positions.row(p).transpose());
            const double l_best = lower_bound_of(personal_best.row(p).transpose());
            if (l_pos < l_best) personal_best.row(p) = positions.row(p);
        }

        trace.push_back({i, best.phi, training.size(), oracle.calls(), seconds_since(start)});
        if (i == config.iterations) break;

        // 2(g)-(h): move the swarm.
        swarm::update_velocities_positions(positions, velocities, personal_best, best.values,
                                           config, rng);
    }

    InversionResult result{SearchMode::Sbd,
                           best.values,
                           best.phi,
                           decode_to_contrast(
                               DofVector{config.layout, config.spline_points, best.values,
                                         config.bounds},
                               oracle.grid(), config.samples_per_segment),
                           std::move(training),
                           std::move(model),
                           std::move(positions),
                           std::move(trace),
                           oracle.calls(),
                           seconds_since(start)};
    return result;
}

InversionResult run_go(const InversionConfig& config, const ForwardCostOracle& oracle) {
    const Clock::time_point start = Clock::now();
    const int dims = static_cast<int>(config.bounds.size());
    Rng rng(config.seed);

    Eigen::MatrixXd positions(config.particles, dims);
    Eigen::MatrixXd velocities(config.particles, dims);
    for (int p = 0; p < config.particles; ++p) {
        for (int k = 0; k < dims; ++k) {
            positions(p, k) = rng.uniform(config.bounds.lower[k], config.bounds.upper[k]);
        }
    }
    const Eigen::VectorXd range = config.bounds.range_safe();
    for (int p = 0; p < config.particles; ++p) {
        for (int k = 0; k < dims; ++k) {
            const double v_max = config.velocity_clamp * range[k];
            velocities(p, k) = rng.uniform(-v_max, v_max);
        }
    }

    Eigen::MatrixXd personal_best = positions;
    Eigen::VectorXd personal_score =
        Eigen::VectorXd::Constant(config.particles, std::numeric_limits<double>::infinity());
    BestSample best;

    // The first iteration scores the initial swarm, so the forward budget is
    // exactly particles * iterations.
    std::vector<TraceRow> trace;
    for (int i = 1; i <= config.iterations; ++i) {
        for (int p = 0; p < config.particles; ++p) {
            const Eigen::VectorXd xi = positions.row(p).transpose();
            const double phi = oracle(xi);
            if (phi < personal_score[p]) {
                personal_score[p] = phi;
                personal_best.row(p) = xi.transpose();
            }
            if (phi < best.phi) {
                best.phi = phi;
                best.values = xi;
            }
        }
        trace.push_back({i, best.phi, 0, oracle.calls(), seconds_since(start)});
        if (i == config.iterations) break;
        swarm::update_velocities_positions(positions, velocities, personal_best, best.values,
                                           config, rng);
    }

    InversionResult result{SearchMode::Go,
                           best.values,
                           best.phi,
                           decode_to_contrast(
                               DofVector{config.layout, config.spline_points, best.values,
                                         config.bounds},
                               oracle.grid(), config.samples_per_segment),
                           TrainingSet{config.bounds, Eigen::MatrixXd(0, dims),
                                       Eigen::VectorXd(0)},
                           std::nullopt,
                           std::move(positions),
                           std::move(trace),
                           oracle.calls(),
                           seconds_since(start)};
    return result;
}

}  // namespace

InversionResult run(const InversionConfig& config, const ScatteringDataset& dataset,
                    const Grid& inversion_grid, const SurrogateOverride& surrogate_override) {
    config.validate();
    ensure_no_inverse_crime(dataset, inversion_grid, config.allow_inverse_crime);
    const ForwardCostOracle oracle(dataset, inversion_grid, config.layout, config.spline_points,
                                   config.samples_per_segment);
    return config.mode == SearchMode::Sbd ? run_sbd(config, oracle, surrogate_override)
                                          : run_go(config, oracle);
}

}  // namespace iscat
