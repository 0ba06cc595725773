#pragma once

// Riemannian gradient descent on Sp(2N,R) with Armijo backtracking, a
// multistart harness, and a Levenberg-Marquardt search for stationary
// points of ||G||^2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symland/landscape.hpp"

namespace symland {

// How the first trial step of each Armijo search is chosen.
enum class TrialStep {
  Fixed,            // always cfg.step
  Expand,           // min(step_cap, 2 * last accepted step)
  BarzilaiBorwein,  // <s, y> / <y, y> in the trivialized coordinates, Expand when <s, y> <= 0
};

struct FlowConfig {
  double step = 0.1;         // initial trial step
  int max_iters = 50000;
  double grad_tol = 1e-8;
  double beta = 0.5;         // backtracking factor
  double armijo = 1e-4;      // sufficient-decrease constant
  std::uint64_t seed = 0;
  int starts = 20;
  double spread = 1.0;       // random start scale
  TrialStep trial = TrialStep::BarzilaiBorwein;
  double step_cap = 1e3;
  int recertify_every = 100;
  double drift_tol = 1e-8;
  bool record = true;        // keep per-iteration records

  /// ValidationError on out-of-range fields.
  void validate() const;
};

struct IterRecord {
  int iter = 0;
  double value = 0.0;
  double grad_norm = 0.0;
};

struct Trajectory {
  std::vector<IterRecord> iterates;
  Mat terminal;
  int iterations = 0;
  double final_value = 0.0;
  double final_grad = 0.0;
  bool converged = false;        // ||G|| <= grad_tol
  bool monotone = true;          // no accepted step increased J
  double max_sympl_residual = 0.0;
  int projections = 0;
  std::optional<double> converged_to;  // nearest critical value within 1e-4
};

/// Nearest value within tol, if any.
std::optional<double> match_value(double v, const std::vector<double>& values, double tol = 1e-4);

Trajectory descend(const Mat& w, const Mat& s0, const FlowConfig& cfg,
                   const std::vector<double>& critical_values = {});

struct HistogramBin {
  double value = 0.0;
  int count = 0;
};

struct MultistartSummary {
  int starts = 0;
  int converged = 0;         // ||G|| <= grad_tol
  int reached_minimum = 0;   // J <= 1e-6
  int max_iterations = 0;
  bool all_monotone = true;
  double max_sympl_residual = 0.0;
  std::vector<HistogramBin> histogram;  // terminal values, unmatched ones as-is
  std::vector<Trajectory> runs;         // by start index
};

/// Worker count: hardware concurrency capped by SYMLAND_THREADS.
int worker_count(int jobs);

MultistartSummary multistart(const Mat& w, const FlowConfig& cfg,
                             const std::vector<double>& critical_values = {});

struct StationaryResult {
  Mat s;
  double grad_norm = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes ||G(S)||_F^2 from s0 (Levenberg-Marquardt, retraction S exp(JY)).
StationaryResult find_stationary(const Mat& w, const Mat& s0, int max_iters = 200,
                                 double tol = 1e-10);

}  // namespace symland
