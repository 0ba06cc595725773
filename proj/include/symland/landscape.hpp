#pragma once

// The distance landscape J(S) = ||S - W||_F^2 on Sp(2N,R): objective,
// gradient, and the enumeration/construction of critical submanifolds.
//
// Canonical frame: W = U0 E V0 with E = diag(e, 1/e), e descending. Top
// positions are grouped by cluster in decreasing omega, the unit cluster
// last. Critical points are S* = U0 R^T P R V0 with P = D L.

#include <optional>
#include <string>
#include <vector>

#include "symland/sympcore.hpp"

namespace symland {

struct SpectrumCluster {
  double omega = 1.0;  // > 1
  int multiplicity = 0;
};

struct SingularSpectrum {
  int n0 = 0;
  std::vector<SpectrumCluster> clusters;  // strictly increasing omega

  int n() const;
  /// Throws ValidationError if the invariants do not hold.
  void validate() const;
  static SingularSpectrum from_values(const Vec& d, double cluster_tol = Tolerances{}.cluster);
};

/// omega_b^(1/3) <= omega_a <= omega_b, closed on both ends.
bool precedes(double omega_a, double omega_b);

/// Angle of the rotation pattern for a type III pair, in [0, pi/2].
double pair_angle(double omega_a, double omega_b);

struct PairUsage {
  int alpha = 0;  // omega_alpha <= omega_beta
  int beta = 0;
  int count = 0;
  double angle = 0.0;

  bool operator==(const PairUsage& o) const {
    return alpha == o.alpha && beta == o.beta && count == o.count;
  }
};

/// Admissible pairs (alpha <= beta) of a spectrum, angle filled in.
std::vector<PairUsage> admissible_pairs(const SingularSpectrum& spectrum);

struct CriticalIndexSet {
  int m0 = 0;
  std::vector<int> mp;           // type I count per cluster
  std::vector<int> mpp;          // type II count per cluster
  std::vector<PairUsage> mppp;   // one entry per admissible pair

  bool has_type_iii() const;
  bool operator==(const CriticalIndexSet& o) const;
  bool operator<(const CriticalIndexSet& o) const;
  std::string label() const;
};

/// Pure type I set: the global minimum S* = W.
CriticalIndexSet minimum_index_set(const SingularSpectrum& spectrum);

/// Throws ValidationError when idx does not fit the spectrum.
void validate_index_set(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);

/// Top-half positions per cluster (ascending cluster index), and the unit
/// positions, in the canonical frame.
struct PositionLayout {
  std::vector<std::vector<int>> cluster;
  std::vector<int> unit;
};
PositionLayout canonical_layout(const SingularSpectrum& spectrum);

/// diag(e, 1/e) assembled from the cluster values.
Mat canonical_e(const SingularSpectrum& spectrum);

enum class SlotRole { TypeI, TypeII, UnitPlus, UnitMinus, PairTop, PairBottom };

struct CharacteristicMatrix {
  Mat p;
  Vec d;            // diagonal of D (2N)
  Mat l;
  std::vector<SlotRole> roles;  // per top position
  std::vector<int> partner;     // pair partner position, -1 otherwise
  std::vector<double> pair_d;   // d of the pair at that position, 0 otherwise
  Mat block_frame;  // T: in the block frame P_b = T P T^T has L_b = diag(Phi, Phi)
  CriticalIndexSet source;
};

CharacteristicMatrix build_characteristic(const CriticalIndexSet& idx,
                                          const SingularSpectrum& spectrum);

class Objective {
 public:
  static Objective from(const SymplecticMatrix& w, const Tolerances& tol = {});

  const SymplecticMatrix& w() const { return w_; }
  const SymplecticSVD& svd() const { return svd_; }
  const SingularSpectrum& spectrum() const { return spectrum_; }
  const Mat& e_d() const { return e_d_; }
  const Mat& u0() const { return svd_.u.matrix(); }
  const Mat& v0() const { return svd_.v.matrix(); }
  const Tolerances& tol() const { return tol_; }
  int n() const { return w_.n(); }

 private:
  Objective(SymplecticMatrix w, SymplecticSVD svd, SingularSpectrum spectrum, Tolerances tol);

  SymplecticMatrix w_;
  SymplecticSVD svd_;
  SingularSpectrum spectrum_;
  Mat e_d_;
  Tolerances tol_;
};

double objective_value(const Mat& s, const Mat& w);
double objective_value(const SymplecticMatrix& s, const SymplecticMatrix& w);

/// G = sym((S^T S - W^T S) J); d/dt J(S exp(tJY)) at 0 equals 2 Tr(Y G).
AlgebraElement gradient(const Mat& s, const Mat& w);
AlgebraElement gradient(const SymplecticMatrix& s, const SymplecticMatrix& w);

/// ||(S^T S - (S^T S)^{-1}) - (S^T W - (S^T W)^{-1})||_F.
double critical_residual(const Mat& s, const Mat& w);
double critical_residual(const SymplecticMatrix& s, const SymplecticMatrix& w);

/// Every admissible index set, sorted lexicographically.
std::vector<CriticalIndexSet> enumerate_critical(const SingularSpectrum& spectrum);

/// U0 R^T P R V0. R defaults to the identity; it must stabilize E_d.
SymplecticMatrix build_representative(const CriticalIndexSet& idx, const Objective& obj,
                                      const std::optional<OrthoSymplectic>& r = std::nullopt);

struct CriticalValue {
  double constructive = 0.0;          // ||P - E_d||_F^2 == ||S* - W||_F^2
  double closed_form = 0.0;           // unit term 8(n0 - m0)
  double closed_form_as_printed = 0.0;  // unit term 8(n0 - m0)^2
};
CriticalValue critical_value(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);

struct DimensionInfo {
  std::optional<int> formula;  // empty when type III blocks are present
  int tangent_rank = 0;        // rank of the linearized stabilizer action

  int best() const { return formula ? *formula : tangent_rank; }
};
DimensionInfo submanifold_dimension(const CriticalIndexSet& idx, const SingularSpectrum& spectrum);

struct CountRecord {
  int enumerated = 0;
  std::optional<double> printed_even_odd;  // only for one fully degenerate cluster
  double upper_bound = 0.0;              // summed from m = 0
  double upper_bound_as_printed = 0.0;   // summed from m = 1
};
CountRecord count_formula(const SingularSpectrum& spectrum);

}  // namespace symland
