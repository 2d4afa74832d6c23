#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "iscat/cost_oracle.hpp"
#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/surrogate.hpp"

namespace iscat {

enum class SearchMode { Sbd, Go };

// Swarm search settings. Sbd runs the reinforced loop: particles are ranked
// by the surrogate's lower confidence bound and only the promising one may
// trigger a forward solve per iteration, so the forward budget is bounded by
// initial_samples + iterations. Go runs the identical swarm with every
// particle forward-evaluated every iteration (particles * iterations solves).
struct InversionConfig {
    SearchMode mode = SearchMode::Sbd;
    int particles = 10;
    int iterations = 100;       // I_SbD or I_GO
    int initial_samples = 40;   // S0, Sbd only
    double inertia = 0.4;       // w
    double cognitive = 2.0;     // l1
    double social = 2.0;        // l2
    double velocity_clamp = 0.5;  // fraction of each range
    bool fit_beta = false;
    std::uint64_t seed = 1;
    bool allow_inverse_crime = false;
    int samples_per_segment = kDefaultSamplesPerSegment;

    DofLayout layout = DofLayout::Single;
    int spline_points = 4;
    Bounds bounds;

    void validate() const;
};

struct TraceRow {
    int iteration;
    double best_true_phi;
    int training_size;  // S_i (0 in Go mode)
    long fw_calls;
    double elapsed_s;
};

struct InversionResult {
    SearchMode mode;
    Eigen::VectorXd best_values;      // psi at the last iteration
    double best_phi;                  // its forward-verified cost
    ContrastMap contrast;             // decoded on the inversion grid
    TrainingSet training;             // Sbd: the final reinforced set
    std::optional<GpModel> model;     // Sbd: the final digital twin
    Eigen::MatrixXd final_positions;  // particles x K
    std::vector<TraceRow> trace;
    long fw_calls;
    double elapsed_s;
};

// Test hook: when set, replaces the surrogate's lower-bound predictions used
// for ranking and personal bests (the reinforcement bookkeeping is unchanged).
using SurrogateOverride = std::function<double(const Eigen::VectorXd&)>;

// Full inversion on a measured dataset. Deterministic: equal (config,
// dataset, seed) give identical results in both modes.
InversionResult run(const InversionConfig& config, const ScatteringDataset& dataset,
                    const Grid& inversion_grid,
                    const SurrogateOverride& surrogate_override = nullptr);

// The individual swarm steps are exposed for tests.
namespace swarm {

// Index (0-based) of the particle with the lowest clamped lower confidence
// bound; ties break to the lowest index.
int rank_best_promising(const Eigen::VectorXd& lower_bounds);

// One velocity/position step. Draws two uniforms per particle per dimension
// (particle-major, dimension-major), clamps velocities to the fraction of
// each range and positions into the bounds, zeroing a clamped component's
// velocity.
void update_velocities_positions(Eigen::MatrixXd& positions, Eigen::MatrixXd& velocities,
                                 const Eigen::MatrixXd& personal_best,
                                 const Eigen::VectorXd& global_best,
                                 const InversionConfig& config, Rng& rng);

}  // namespace swarm

}  // namespace iscat
