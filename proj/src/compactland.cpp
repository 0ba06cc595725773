#include "symland/compactland.hpp"

#include <cmath>

#include <fmt/format.h>

namespace symland {
namespace {

// osp tangent element J X with X = [[A, C^T], [C, A]], A symmetric, C skew.
Mat osp_tangent(const Vec& x, int n) {
  Mat a(n, n), c = Mat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = x(k++);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      c(i, j) = x(k++);
      c(j, i) = -c(i, j);
    }
  }
  Mat xs(2 * n, 2 * n);
  xs << a, c.transpose(), c, a;
  return symplectic_form(n) * xs;
}

}  // namespace

Mat compact_d(int n, int m) {
  if (n < 1 || m < 0 || m > n) throw ValidationError("compact_d: need 0 <= m <= N");
  Vec diag = Vec::Ones(2 * n);
  for (int k = 0; k < m; ++k) diag(k) = diag(n + k) = -1.0;
  return diag.asDiagonal();
}

double compact_stationarity(const Mat& s, const Mat& w) {
  return (w.transpose() * s - s.transpose() * w).norm();
}

std::vector<CompactCritical> compact_enumerate(const SymplecticMatrix& w, double tol) {
  const Mat& wm = w.matrix();
  const double orth = check_orthogonal(wm);
  if (orth > tol * (1.0 + wm.squaredNorm())) {
    throw PreconditionError(
        fmt::format("target is not orthogonal symplectic (||W^T W - I||_F = {:.3e})", orth));
  }
  const int n = w.n();
  std::vector<CompactCritical> out;
  for (int m = 0; m <= n; ++m) {
    CompactCritical c;
    c.m = m;
    c.representative = wm * compact_d(n, m);
    c.value = objective_value(c.representative, wm);
    c.inertia = inertia_of(compact_hqf_numeric(c.representative, wm));
    c.dimension = 2 * m * (n - m);
    out.push_back(std::move(c));
  }
  return out;
}

Vec compact_hqf(int m, int n) {
  const Mat dm = compact_d(n, m);
  Vec coeff(n * n);
  int k = 0;
  for (int j = 0; j < n; ++j) coeff(k++) = 2.0 * dm(j, j);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      coeff(k++) = 2.0 * (dm(i, i) + dm(j, j));  // a_ij
      coeff(k++) = 2.0 * (dm(i, i) + dm(j, j));  // c_ij
    }
  }
  return coeff;
}

Inertia compact_inertia_formula(int m, int n) {
  Inertia out;
  const Vec c = compact_hqf(m, n);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c(k) > 0) {
      ++out.pos;
    } else if (c(k) < 0) {
      ++out.neg;
    } else {
      ++out.zero;
    }
  }
  return out;
}

Mat compact_hqf_numeric(const Mat& s, const Mat& w) {
  const int n = static_cast<int>(s.rows() / 2);
  const Mat m = s.transpose() * s;
  const Mat k = m - w.transpose() * s;
  return polarize(
      [&](const Vec& x) {
        const Mat a = osp_tangent(x, n);
        return (a * k * a).trace() + (a.transpose() * m * a).trace();
      },
      n * n);
}

CompactComparison compact_vs_full(int m, int n) {
  CompactComparison out;
  out.compact = compact_inertia_formula(m, n);
  out.full = unit_cluster_inertia(n, m);
  out.difference.pos = out.full.pos - out.compact.pos;
  out.difference.neg = out.full.neg - out.compact.neg;
  out.difference.zero = out.full.zero - out.compact.zero;
  out.difference_ok = out.difference.pos == n * n + n && out.difference.neg == 0 &&
                      out.difference.zero == 0;
  return out;
}

}  // namespace symland
