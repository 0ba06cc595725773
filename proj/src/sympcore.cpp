#include "symland/sympcore.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace symland {
namespace {

void require_even_square(const Mat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw DimensionError(std::string(who) + ": expected a non-empty 2N x 2N matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Mat osp_block(const Mat& x, const Mat& y) {
  const Eigen::Index n = x.rows();
  Mat r(2 * n, 2 * n);
  r << x, y, -y, x;
  return r;
}

// Closest unitary in Frobenius norm (polar factor).
CMat unitarize(const CMat& z) {
  Eigen::JacobiSVD<CMat> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Orthonormal basis (n0 columns) of the complex span of `b`, chosen by
// pivoted Gram-Schmidt on the projected coordinate axes so that an
// axis-aligned span returns the axes themselves.
CMat canonical_basis(const CMat& b, int n0) {
  const Eigen::Index n = b.rows();
  Eigen::JacobiSVD<CMat> svd(b, Eigen::ComputeThinU);
  const CMat ub = svd.matrixU().leftCols(n0);
  CMat resid = ub * ub.adjoint();
  CMat basis(n, n0);
  for (int k = 0; k < n0; ++k) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double nj = resid.col(j).norm();
      if (nj > best_norm + 1e-12) {
        best_norm = nj;
        best = j;
      }
    }
    Eigen::VectorXcd v = resid.col(best) / best_norm;
    basis.col(k) = v;
    resid -= v * (v.adjoint() * resid);
  }
  return basis;
}

struct CoreResult {
  Mat u;
  Vec d;
  Mat v;
};

// Shared by symplectic_svd (strict) and project_to_group (lenient).
CoreResult structured_svd_core(const Mat& s, const Tolerances& tol, bool strict) {
  const int n = static_cast<int>(s.rows() / 2);
  Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullV);
  const Vec sigma = svd.singularValues();  // descending
  const Mat& z = svd.matrixV();

  if (strict) {
    for (int k = 0; k < n; ++k) {
      const double prod = sigma(k) * sigma(2 * n - 1 - k);
      if (std::abs(prod - 1.0) > tol.cluster) {
        throw PairingError("singular values " + std::to_string(sigma(k)) + " and " +
                           std::to_string(sigma(2 * n - 1 - k)) +
                           " are not reciprocal within cluster tolerance");
      }
    }
  }

  Vec d(n);
  int n0 = 0;
  for (int k = 0; k < n; ++k) {
    d(k) = std::sqrt(sigma(k) / sigma(2 * n - 1 - k));
    if (d(k) - 1.0 <= tol.cluster) ++n0;
  }
  const int nbig = n - n0;
  if (strict) {
    int unit_count = 0;
    for (int k = 0; k < 2 * n; ++k) {
      if (std::abs(sigma(k) - 1.0) <= tol.cluster) ++unit_count;
    }
    if (unit_count != 2 * n0) {
      throw PairingError("unit singular-value cluster has size " + std::to_string(unit_count) +
                         ", expected the even count " + std::to_string(2 * n0));
    }
  }

  CMat frame(n, n);
  for (int k = 0; k < nbig; ++k) frame.col(k) = to_complex(z.col(k));
  if (n0 > 0) {
    CMat b(n, 2 * n0);
    for (int k = 0; k < 2 * n0; ++k) b.col(k) = to_complex(z.col(nbig + k));
    frame.rightCols(n0) = canonical_basis(b, n0);
  }
  frame = unitarize(frame);

  Vec dd(n);
  for (int k = 0; k < n; ++k) dd(k) = k < nbig ? d(k) : 1.0;

  Mat o = osp_block(frame.real(), -frame.imag());
  // Left factor: its first N columns are S o_j / d_j.
  const Mat top = s * o.leftCols(n);
  CMat uc(n, n);
  for (int k = 0; k < n; ++k) uc.col(k) = to_complex(top.col(k) / dd(k));
  uc = unitarize(uc);

  // First significant entry of each U column positive.
  for (int k = 0; k < n; ++k) {
    const double scale = std::max(uc.col(k).norm(), 1.0);
    for (int r = 0; r < 2 * n; ++r) {
      const double entry = r < n ? uc(r, k).real() : uc(r - n, k).imag();
      if (std::abs(entry) > 1e-10 * scale) {
        if (entry < 0) {
          uc.col(k) = -uc.col(k);
          frame.col(k) = -frame.col(k);
        }
        break;
      }
    }
  }
  o = osp_block(frame.real(), -frame.imag());
  Mat u = osp_block(uc.real(), -uc.imag());
  return {std::move(u), std::move(dd), o.transpose()};
}

}  // namespace

SymplecticForm::SymplecticForm(int n) : n_(n), j_(symplectic_form(n)) {}

Mat symplectic_form(int n) {
  if (n < 1) throw DimensionError("symplectic_form: n must be positive");
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return j;
}

double check_symplectic(const Mat& m) {
  require_even_square(m, "check_symplectic");
  const Mat j = symplectic_form(static_cast<int>(m.rows() / 2));
  return (m.transpose() * j * m - j).norm();
}

double check_orthogonal(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("check_orthogonal: matrix must be square");
  return (m.transpose() * m - Mat::Identity(m.rows(), m.cols())).norm();
}

SymplecticMatrix SymplecticMatrix::from(Mat m, double tol) {
  const double res = check_symplectic(m);
  if (!std::isfinite(res) || res > tol * (1.0 + m.squaredNorm())) {
    throw StructureError("matrix is not symplectic: ||S^T J S - J||_F = " + std::to_string(res),
                         res);
  }
  return SymplecticMatrix(std::move(m), res);
}

SymplecticMatrix SymplecticMatrix::identity(int n) {
  if (n < 1) throw DimensionError("identity: n must be positive");
  return SymplecticMatrix(Mat::Identity(2 * n, 2 * n), 0.0);
}

AlgebraElement::AlgebraElement(const Mat& y) {
  require_even_square(y, "AlgebraElement");
  y_ = 0.5 * (y + y.transpose());
}

Mat AlgebraElement::generator() const { return symplectic_form(n()) * y_; }

OrthoSymplectic OrthoSymplectic::from(const Mat& m, double tol) {
  SymplecticMatrix base = SymplecticMatrix::from(m, tol);
  const double orth = check_orthogonal(m);
  if (orth > tol * (1.0 + m.squaredNorm())) {
    throw StructureError("matrix is not orthogonal: ||R^T R - I||_F = " + std::to_string(orth),
                         orth);
  }
  return OrthoSymplectic(std::move(base), orth);
}

OrthoSymplectic OrthoSymplectic::identity(int n) {
  return OrthoSymplectic(SymplecticMatrix::identity(n), 0.0);
}

CMat OrthoSymplectic::unitary() const {
  const int k = n();
  const Mat& r = matrix();
  return r.topLeftCorner(k, k).cast<std::complex<double>>() -
         std::complex<double>(0.0, 1.0) * r.topRightCorner(k, k).cast<std::complex<double>>();
}

Mat SymplecticSVD::middle() const {
  const Eigen::Index n = d.size();
  Vec diag(2 * n);
  diag << d, d.cwiseInverse();
  return diag.asDiagonal();
}

Mat SymplecticSVD::reconstruct() const { return u.matrix() * middle() * v.matrix(); }

std::vector<ValueCluster> cluster_values(const Vec& d, double tol) {
  const int n = static_cast<int>(d.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(d(i) - d(j)) <= tol * std::max(1.0, d(i))) parent[find(j)] = find(i);
    }
  }
  std::vector<ValueCluster> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.size());
      out.push_back({});
    }
    out[slot[root]].members.push_back(i);
  }
  for (auto& c : out) {
    double sum = 0.0;
    for (int i : c.members) sum += d(i);
    c.value = sum / static_cast<double>(c.members.size());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ValueCluster& a, const ValueCluster& b) { return a.value > b.value; });
  return out;
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& s) {
  return SymplecticMatrix::from(symplectic_inverse(s.matrix()), 1e-6);
}

Mat symplectic_inverse(const Mat& m) {
  require_even_square(m, "symplectic_inverse");
  const Mat j = symplectic_form(static_cast<int>(m.rows() / 2));
  return j.transpose() * m.transpose() * j;
}

SymplecticSVD symplectic_svd(const SymplecticMatrix& s, const Tolerances& tol) {
  CoreResult core = structured_svd_core(s.matrix(), tol, true);
  SymplecticSVD out{OrthoSymplectic::from(core.u, tol.sympl), core.d,
                    OrthoSymplectic::from(core.v, tol.sympl)};
  const double err = (out.reconstruct() - s.matrix()).norm();
  if (err > tol.recon * s.matrix().norm()) {
    throw PairingError("structured SVD failed to reconstruct input (relative error " +
                       std::to_string(err / s.matrix().norm()) + ")");
  }
  return out;
}

Mat project_to_group(const Mat& m, const Tolerances& tol) {
  require_even_square(m, "project_to_group");
  CoreResult core = structured_svd_core(m, tol, false);
  const Eigen::Index n = core.d.size();
  Vec diag(2 * n);
  diag << core.d, core.d.cwiseInverse();
  return core.u * diag.asDiagonal() * core.v;
}

OrthoSymplectic osp_from_unitary(const Mat& x, const Mat& y, double tol) {
  if (x.rows() != x.cols() || y.rows() != x.rows() || y.cols() != x.cols() || x.rows() == 0) {
    throw DimensionError("osp_from_unitary: X and Y must be square and of equal size");
  }
  const CMat u = x.cast<std::complex<double>>() -
                 std::complex<double>(0.0, 1.0) * y.cast<std::complex<double>>();
  const double res = (u.adjoint() * u - CMat::Identity(x.rows(), x.cols())).norm();
  if (res > tol * (1.0 + static_cast<double>(x.rows()))) {
    throw StructureError("X - iY is not unitary: residual " + std::to_string(res), res);
  }
  return OrthoSymplectic::from(osp_block(x, y), tol);
}

StabilizerDescriptor stabilizer_of(const Vec& d, double cluster_tol) {
  StabilizerDescriptor out;
  std::vector<ValueCluster> clusters = cluster_values(d, cluster_tol);
  std::vector<int> sizes;
  for (const auto& c : clusters) {
    if (std::abs(c.value - 1.0) <= cluster_tol) {
      out.has_unit_block = true;
      out.n0 += static_cast<int>(c.members.size());
    } else {
      sizes.push_back(static_cast<int>(c.members.size()));
    }
  }
  if (out.has_unit_block) {
    out.factors.push_back({StabilizerFactor::Kind::OSp, out.n0});
    out.dimension += out.n0 * out.n0;
  }
  // Clusters were sorted descending; list O factors in ascending value.
  for (auto it = sizes.rbegin(); it != sizes.rend(); ++it) {
    out.factors.push_back({StabilizerFactor::Kind::O, *it});
    out.dimension += *it * (*it - 1) / 2;
  }
  return out;
}

SymplecticMatrix exp_algebra(const AlgebraElement& a, double t) {
  return SymplecticMatrix::from(expm(t * a.generator()), 1e-6);
}

SymplecticMatrix random_symplectic(int n, std::uint64_t seed, double spread) {
  if (n < 1) throw ValidationError("random_symplectic: n must be positive");
  if (!(spread >= 0.0)) throw ValidationError("random_symplectic: spread must be non-negative");
  if (spread == 0.0) return SymplecticMatrix::identity(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, spread);
  Mat y(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = i; j < 2 * n; ++j) y(i, j) = y(j, i) = gauss(rng);
  }
  return exp_algebra(AlgebraElement(y));
}

OrthoSymplectic random_orthosymplectic(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_orthosymplectic: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = {gauss(rng), gauss(rng)};
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  q = unitarize(q);
  return osp_from_unitary(q.real(), -q.imag());
}

Eigen::VectorXcd to_complex(const Vec& v) {
  const Eigen::Index n = v.size() / 2;
  Eigen::VectorXcd c(n);
  for (Eigen::Index k = 0; k < n; ++k) c(k) = {v(k), v(n + k)};
  return c;
}

}  // namespace symland
