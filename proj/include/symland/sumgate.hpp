#pragma once

// The two-mode SUM gate (q1, q2; p1, p2) -> (q1, q1 + q2; p1 - p2, p2) and
// the reference data for its landscape.

#include <string>
#include <vector>

#include "symland/hessian.hpp"

namespace symland::sum {

double golden();  // (sqrt 5 + 1) / 2
double xi();      // sqrt((5 - sqrt 5) / 10)
double eta();     // sqrt((5 + sqrt 5) / 10)

Mat gate();

/// Reference left factor, in the frame E = diag(w, 1/w, 1/w, w).
Mat reference_u();
/// Right factor solved from the gate and reference_u: E^{-1} U^T SUM.
Mat derived_v();
/// Quarter turn on mode 2 taking the canonical frame to the reference one.
Mat frame_turn();

Mat reference_p(int k);  // k = 1..4, reference frame
Mat reference_s2();      // three decimals
Mat reference_s3_at_zero();
Mat reference_s4();
Mat reference_q();       // 10 x 10, canonical variable order

struct TableRow {
  int mp, mpp, mppp;
  double value;
  int d0, dpos, dneg;
  CriticalKind kind;
  int dimension;
};
const std::vector<TableRow>& table();

struct VerifyOptions {
  double fixture_tol = 1e-3;    // three-decimal fixtures and table values
  double exact_tol = 1e-12;     // Q matrix and closed-form matrices
  double omega_perturbation = 0.0;
};

struct CheckGroup {
  std::string name;
  int checks = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct VerifyResult {
  std::vector<CheckGroup> groups;
  bool passed() const;
};

VerifyResult verify(const VerifyOptions& opts = {});

}  // namespace symland::sum
