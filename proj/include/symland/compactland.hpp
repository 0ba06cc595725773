#pragma once

// The distance landscape restricted to the compact subgroup OSp(2N,R).
// Critical points are S* = W R^T D_m R with D_m = diag(-I_m, I_{N-m}; -I_m, I_{N-m}).

#include <vector>

#include "symland/hessian.hpp"

namespace symland {

struct CompactCritical {
  int m = 0;
  Mat representative;
  double value = 0.0;
  Inertia inertia;  // over the N^2-dimensional tangent space
  int dimension = 0;
};

Mat compact_d(int n, int m);

/// ||W^T S - S^T W||_F; zero exactly at compact critical points.
double compact_stationarity(const Mat& s, const Mat& w);

/// All N + 1 orbits, m = 0..N. PreconditionError unless W is orthogonal.
std::vector<CompactCritical> compact_enumerate(const SymplecticMatrix& w,
                                               double tol = Tolerances{}.sympl);

/// Diagonal coefficients of the distance-form HQF at the orbit m, in the
/// order a_11..a_NN, then (a_kl, c_kl) for k < l. a_jj gets 2 delta_j,
/// each of a_kl and c_kl gets 2 (delta_k + delta_l).
Vec compact_hqf(int m, int n);

/// Sign counts of compact_hqf.
Inertia compact_inertia_formula(int m, int n);

/// t^2 coefficient of ||S exp(tK) - W||^2 over K in osp(2N), assembled on
/// the (A symmetric, C skew) coordinates.
Mat compact_hqf_numeric(const Mat& s, const Mat& w);

struct CompactComparison {
  Inertia compact;
  Inertia full;
  Inertia difference;
  bool difference_ok = false;  // difference == (N^2 + N, 0, 0)
};
CompactComparison compact_vs_full(int m, int n);

}  // namespace symland
