#pragma once

// Hessian quadratic form at critical points, its inertia, and the
// minimum/saddle classification.
//
// Tangent coordinates: S exp(t J X), X symmetric, X = [[A, C^T], [C, B]].
// The variable vector x lists the upper triangle of A row-major, then the
// upper triangle of B, then all of C row-major; dim = N(2N+1).

#include <optional>
#include <string>
#include <vector>

#include "symland/landscape.hpp"

namespace symland {

/// Symmetric X from the canonical variable vector.
Mat x_to_symmetric(const Vec& x, int n);
/// Inverse of x_to_symmetric.
Vec symmetric_to_x(const Mat& x, int n);
inline int hqf_dim(int n) { return n * (2 * n + 1); }

/// Q_kl = (H(e_k + e_l) - H(e_k) - H(e_l)) / 2 for a quadratic functional H.
template <class F>
Mat polarize(F&& h, int dim) {
  Vec diag(dim);
  Vec e = Vec::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    e(k) = 1.0;
    diag(k) = h(e);
    e(k) = 0.0;
  }
  Mat q(dim, dim);
  for (int k = 0; k < dim; ++k) {
    q(k, k) = diag(k);
    for (int l = k + 1; l < dim; ++l) {
      e(k) = e(l) = 1.0;
      q(k, l) = q(l, k) = 0.5 * (h(e) - diag(k) - diag(l));
      e(k) = e(l) = 0.0;
    }
  }
  return q;
}

/// Tr[JX (P^2 - E P) JX + JX P^2 (JX)^T] for symmetric P, diagonal E.
double hqf_value(const Mat& x_sym, const Mat& p, const Mat& e);

struct HessianForm {
  int n = 0;
  int dim = 0;
  Mat q;                // canonical frame
  Mat q_block;          // block frame, evaluated from the trace form
  Mat q_block_formula;  // block frame, from H(A, B, C)
  Mat frame;            // T, block = T canonical T^T
  double path_agreement = 0.0;  // max |q_block - q_block_formula|
  double sigma_residual = 0.0;  // || Sigma_general - (Theta^2 - Omega Phi) ||
};

HessianForm assemble_hqf(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);
HessianForm assemble_hqf(const CriticalIndexSet& idx, const Objective& obj);

/// Exact t^2 coefficient of J(S exp(tJY)) as a form on Y (same variable
/// order): Tr(A K A) + Tr(A^T M A), A = JY, M = S^T S, K = M - W^T S.
Mat second_variation(const Mat& s, const Mat& w);

enum class ZeroPolicy {
  Equilibrated,  // diagonal rescaling (a congruence) before the eigen-solve
  Raw,
};

struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  double threshold = 0.0;

  bool same_counts(const Inertia& o) const {
    return pos == o.pos && neg == o.neg && zero == o.zero;
  }
};

/// Zero iff |lambda| <= tau * max|lambda|. DegenerateFormError on Q == 0.
Inertia inertia_of(const Mat& q, ZeroPolicy policy = ZeroPolicy::Equilibrated, double tau = 1e-7);

/// Closed-form counts. Cross terms run over clusters in decreasing omega.
/// Empty when the index set or spectrum is outside the covered cases.
std::optional<Inertia> analytic_inertia(const CriticalIndexSet& idx,
                                        const SingularSpectrum& spectrum);
/// Same counts with the cross terms summed in increasing omega; kept for
/// diagnostics only.
std::optional<Inertia> analytic_inertia_ascending(const CriticalIndexSet& idx,
                                                  const SingularSpectrum& spectrum);

/// Full-group inertia at the unit-cluster orbit with m negative signs.
Inertia unit_cluster_inertia(int n, int m);
Inertia unit_cluster_inertia(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);

struct SaddleWitness {
  Vec plus;   // block-frame variable vector, H > 0
  Vec minus;  // H < 0 when found
  double h_plus = 0.0;
  double h_minus = 0.0;
  double lambda_plus = 0.0;
  std::optional<double> lambda_minus;  // set when the proof family works
  std::string method_minus;            // "proof-family", "eigenvector" or "none"
};

SaddleWitness saddle_witness(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);

enum class CriticalKind { Minimum, Saddle };
const char* to_string(CriticalKind kind);

struct Classification {
  CriticalIndexSet idx;
  Inertia inertia;
  DimensionInfo dimension;
  CriticalKind kind = CriticalKind::Saddle;
};

Classification classify(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);
Classification classify(const CriticalIndexSet& idx, const Objective& obj);

struct ClassificationSummary {
  std::vector<Classification> entries;
  int minima = 0;
  bool minimum_is_target = false;  // the unique minimum rebuilds W
  bool ok() const { return minima == 1 && minimum_is_target; }
};

ClassificationSummary classify_all(const Objective& obj);

}  // namespace symland
