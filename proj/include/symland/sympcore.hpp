#pragma once

// Structured linear algebra on the real symplectic group Sp(2N,R).
//
// Coordinates are ordered (q_1..q_N; p_1..p_N) and the symplectic form is
//   J = [[0, I_N], [-I_N, 0]].
// All value types are immutable after construction.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "symland/errors.hpp"

namespace symland {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

/// Numerical tolerances shared by all modules.
struct Tolerances {
  double sympl = 1e-9;    // symplectic / orthogonal residual
  double recon = 1e-9;    // relative reconstruction error
  double cluster = 1e-7;  // singular-value degeneracy grouping
  double crit = 1e-8;     // critical-condition residual
};

class SymplecticForm {
 public:
  explicit SymplecticForm(int n);

  int n() const { return n_; }
  const Mat& matrix() const { return j_; }

 private:
  int n_;
  Mat j_;
};

/// The 2N x 2N matrix J.
Mat symplectic_form(int n);

/// ||M^T J M - J||_F. Throws DimensionError for non-square or odd input.
double check_symplectic(const Mat& m);

/// ||M^T M - I||_F.
double check_orthogonal(const Mat& m);

/// A dense matrix certified to satisfy S^T J S = J.
class SymplecticMatrix {
 public:
  /// Validates ||S^T J S - J||_F <= tol * (1 + ||S||_F^2); throws
  /// StructureError otherwise.
  static SymplecticMatrix from(Mat m, double tol = Tolerances{}.sympl);
  static SymplecticMatrix identity(int n);

  int n() const { return static_cast<int>(m_.rows() / 2); }
  const Mat& matrix() const { return m_; }
  double residual() const { return residual_; }

 private:
  SymplecticMatrix(Mat m, double residual)
      : m_(std::move(m)), residual_(residual) {}

  Mat m_;
  double residual_;
};

/// Element JY of sp(2N,R), stored through its symmetric matrix Y.
class AlgebraElement {
 public:
  /// Y is symmetrized on construction.
  explicit AlgebraElement(const Mat& y);

  int n() const { return static_cast<int>(y_.rows() / 2); }
  const Mat& y() const { return y_; }
  Mat generator() const;  // J * Y

 private:
  Mat y_;
};

/// Orthogonal symplectic matrix [[X, Y], [-Y, X]], the image of the
/// unitary X - iY.
class OrthoSymplectic {
 public:
  static OrthoSymplectic from(const Mat& m, double tol = Tolerances{}.sympl);
  static OrthoSymplectic identity(int n);

  int n() const { return base_.n(); }
  const SymplecticMatrix& base() const { return base_; }
  const Mat& matrix() const { return base_.matrix(); }
  double orth_residual() const { return orth_residual_; }

  /// The unitary X - iY this matrix represents.
  CMat unitary() const;

 private:
  OrthoSymplectic(SymplecticMatrix base, double orth)
      : base_(std::move(base)), orth_residual_(orth) {}

  SymplecticMatrix base_;
  double orth_residual_;
};

/// S = U * diag(d, 1/d) * V with U, V orthogonal symplectic and d
/// descending, d_i >= 1.
struct SymplecticSVD {
  OrthoSymplectic u;
  Vec d;
  OrthoSymplectic v;

  Mat middle() const;  // diag(d, 1/d)
  Mat reconstruct() const;
};

/// Group of values within cluster tolerance. `members` index the input.
struct ValueCluster {
  double value = 0.0;
  std::vector<int> members;
};

/// Union-find clustering: i ~ j when |d_i - d_j| <= tol * max(1, d_i).
/// Clusters come out in decreasing value order.
std::vector<ValueCluster> cluster_values(const Vec& d, double tol);

struct StabilizerFactor {
  enum class Kind { OSp, O };
  Kind kind;
  int size;  // n for OSp(2n) or O(n)
};

/// Stab(D) = OSp(2 n0) x O(n_1) x ... x O(n_r).
struct StabilizerDescriptor {
  bool has_unit_block = false;
  int n0 = 0;
  std::vector<StabilizerFactor> factors;
  int dimension = 0;
};

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& s);

/// J^T M^T J; the inverse for any symplectic M.
Mat symplectic_inverse(const Mat& m);

SymplecticSVD symplectic_svd(const SymplecticMatrix& s,
                             const Tolerances& tol = {});

/// Closest structured factorization of a nearly-symplectic matrix. Used
/// to pull iterates back onto the group after drift; no structure check.
Mat project_to_group(const Mat& m, const Tolerances& tol = {});

/// [[X, Y], [-Y, X]]; requires X - iY unitary within tol.
OrthoSymplectic osp_from_unitary(const Mat& x, const Mat& y,
                                 double tol = Tolerances{}.sympl);

/// Descriptor for the N values d_i >= 1 (top half of D).
StabilizerDescriptor stabilizer_of(const Vec& d,
                                   double cluster_tol = Tolerances{}.cluster);

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant.
Mat expm(const Mat& a);

SymplecticMatrix exp_algebra(const AlgebraElement& a, double t = 1.0);

/// exp(JY) with Y symmetric, entries i.i.d. normal with standard deviation
/// `spread`. Deterministic for a fixed seed.
SymplecticMatrix random_symplectic(int n, std::uint64_t seed, double spread);

/// Haar-ish random element of OSp(2N) via QR of a complex Gaussian.
OrthoSymplectic random_orthosymplectic(int n, std::uint64_t seed);

/// Complex coordinates of a real 2N vector: (q, p) -> q + i p. Under this
/// map J acts as multiplication by -i and the first N columns of an
/// OrthoSymplectic matrix become the columns of its unitary.
Eigen::VectorXcd to_complex(const Vec& v);

}  // namespace symland
