#pragma once

// Full landscape analysis of one target and its JSON rendering.

#include <optional>
#include <string>
#include <vector>

#include "symland/compactland.hpp"
#include "symland/hessian.hpp"

namespace symland {

struct SubmanifoldReport {
  CriticalIndexSet idx;
  Mat representative;
  CriticalValue value;
  DimensionInfo dimension;
  Inertia inertia;        // trace form, canonical frame
  Inertia exact_inertia;  // second variation at (S*, W)
  std::optional<Inertia> analytic;
  std::optional<Inertia> analytic_ascending;
  CriticalKind kind = CriticalKind::Saddle;
  double critical_residual = 0.0;
  double path_agreement = 0.0;
  double sigma_residual = 0.0;
  std::optional<SaddleWitness> witness;
};

struct Diagnostics {
  CountRecord count;
  bool enum_discrepancy = false;
  // Direct value at the unit-cluster orbit with n0 - m0 = 2 versus the
  // printed squared exponent.
  double unit_probe_direct = 0.0;
  double unit_probe_printed = 0.0;
  bool unit_exponent_discrepancy = false;
  double max_closed_form_gap = 0.0;  // |closed form - constructive|
  bool analytic_mismatch = false;    // decreasing-omega reading vs numeric
  bool ascending_mismatch = false;   // increasing-omega reading vs numeric
  bool exact_inertia_mismatch = false;
  std::vector<std::string> notes;
};

struct AnalysisReport {
  Mat target;
  Vec d;
  SingularSpectrum spectrum;
  std::vector<SubmanifoldReport> submanifolds;
  Diagnostics diagnostics;
  int minima = 0;
  bool minimum_is_target = false;
  std::optional<std::vector<CompactCritical>> compact;
};

AnalysisReport analyze(const SymplecticMatrix& w, const Tolerances& tol = {});

/// CriticalReport JSON. `target_path` is recorded when non-empty.
std::string report_to_json(const AnalysisReport& report, const std::string& target_path = "");

}  // namespace symland
