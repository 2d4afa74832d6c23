#pragma once

#include <string>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/metrics.hpp"
#include "iscat/optimizer.hpp"
#include "iscat/surrogate.hpp"

namespace iscat {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double value);

// Scattered-field dataset file. Two comment lines carry the field names and
// their values (snr_db written as "none" when absent), then one row
// v,m,x_m,y_m,re_s,im_s per sample, view-major. Extra comment lines are
// preserved as written and ignored on read.
void write_dataset_csv(const std::string& path, const ScatteringDataset& dataset,
                       const std::vector<std::string>& extra_comments = {});
ScatteringDataset read_dataset_csv(const std::string& path);

// Contrast map as x,y,re_tau,im_tau rows, row-major by grid index, and as an
// 8-bit binary PGM of |tau| linearly scaled to [0, max].
void write_contrast_csv(const std::string& path, const ContrastMap& map,
                        const std::vector<std::string>& extra_comments = {});
ContrastMap read_contrast_csv(const std::string& path);
void write_contrast_pgm(const std::string& path, const ContrastMap& map);

// Convergence trace: i,best_true_phi,S_i,fw_calls,elapsed_s.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::vector<std::string>& extra_comments = {});

// Landscape lattice: a,b,phi rows (phi may be nan for failed cells).
void write_landscape_csv(const std::string& path, const LandscapeResult& result,
                         const std::vector<std::string>& extra_comments = {});

// DoF vector as one value per line; '#' lines are ignored.
void write_dof_values(const std::string& path, const Eigen::VectorXd& values,
                      const std::vector<std::string>& extra_comments = {});
Eigen::VectorXd read_dof_values(const std::string& path);

// Digital-twin dump for reproducibility debugging: hyperparameters, trend,
// process variance and the training set.
void write_model_csv(const std::string& path, const GpModel& model,
                     const TrainingSet& training);

}  // namespace iscat
