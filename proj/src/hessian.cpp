#include "symland/hessian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace symland {

Mat x_to_symmetric(const Vec& x, int n) {
  if (x.size() != hqf_dim(n)) throw DimensionError("variable vector has the wrong length");
  Mat a(n, n), b(n, n), c(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = x(k++);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b(i, j) = b(j, i) = x(k++);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = x(k++);
  Mat out(2 * n, 2 * n);
  out << a, c.transpose(), c, b;
  return out;
}

Vec symmetric_to_x(const Mat& xs, int n) {
  Vec x(hqf_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x(k++) = xs(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x(k++) = xs(n + i, n + j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(k++) = xs(n + i, j);
  return x;
}

double hqf_value(const Mat& x_sym, const Mat& p, const Mat& e) {
  const Mat j = symplectic_form(static_cast<int>(p.rows() / 2));
  const Mat a = j * x_sym;
  const Mat m = p.transpose() * p;
  const Mat k = m - e.transpose() * p;
  return (a * k * a).trace() + (a * m * a.transpose()).trace();
}

namespace {

struct BlockData {
  Mat theta, omega, phi;
};

// H(A, B, C) with Sigma = Theta^2 - Omega Phi.
double block_value(const Mat& xs, const BlockData& bd) {
  const Eigen::Index n = bd.theta.rows();
  const Mat a = xs.topLeftCorner(n, n);
  const Mat c = xs.bottomLeftCorner(n, n);
  const Mat b = xs.bottomRightCorner(n, n);
  const Mat th2 = bd.theta * bd.theta;
  const Mat thi2 = th2.inverse();
  const Mat sigma = th2 - bd.omega * bd.phi;
  return (a * th2 * a - 2.0 * a * sigma * b + b * thi2 * b).trace() +
         (c * th2 * c.transpose() + 2.0 * c * sigma * c + c.transpose() * thi2 * c).trace();
}

}  // namespace

HessianForm assemble_hqf(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  const CharacteristicMatrix ch = build_characteristic(idx, spectrum);
  const int n = spectrum.n();
  const Mat e = canonical_e(spectrum);
  HessianForm out;
  out.n = n;
  out.dim = hqf_dim(n);
  out.frame = ch.block_frame;

  out.q = polarize([&](const Vec& x) { return hqf_value(x_to_symmetric(x, n), ch.p, e); }, out.dim);

  const Mat& t = ch.block_frame;
  const Mat pb = t * ch.p * t.transpose();
  const Mat eb = t * e * t.transpose();
  out.q_block =
      polarize([&](const Vec& x) { return hqf_value(x_to_symmetric(x, n), pb, eb); }, out.dim);

  const Mat db = t * ch.d.asDiagonal() * t.transpose();
  const Mat lb = t * ch.l * t.transpose();
  BlockData bd;
  bd.theta = db.topLeftCorner(n, n);
  bd.phi = lb.topLeftCorner(n, n);
  bd.omega = bd.theta * eb.topLeftCorner(n, n);
  out.q_block_formula =
      polarize([&](const Vec& x) { return block_value(x_to_symmetric(x, n), bd); }, out.dim);
  out.path_agreement = (out.q_block - out.q_block_formula).cwiseAbs().maxCoeff();

  const Mat th2 = bd.theta * bd.theta;
  const Mat sigma_general =
      0.5 * (th2 + th2.inverse() - bd.omega * bd.phi - bd.phi * bd.omega.inverse());
  out.sigma_residual = (sigma_general - (th2 - bd.omega * bd.phi)).norm();
  return out;
}

HessianForm assemble_hqf(const CriticalIndexSet& idx, const Objective& obj) {
  return assemble_hqf(idx, obj.spectrum());
}

Mat second_variation(const Mat& s, const Mat& w) {
  if (s.rows() != w.rows() || s.cols() != w.cols() || s.rows() % 2 != 0) {
    throw DimensionError("second_variation: shape mismatch");
  }
  const int n = static_cast<int>(s.rows() / 2);
  const Mat j = symplectic_form(n);
  const Mat m = s.transpose() * s;
  const Mat k = m - w.transpose() * s;
  return polarize(
      [&](const Vec& x) {
        const Mat a = j * x_to_symmetric(x, n);
        return (a * k * a).trace() + (a.transpose() * m * a).trace();
      },
      hqf_dim(n));
}

Inertia inertia_of(const Mat& q, ZeroPolicy policy, double tau) {
  if (q.rows() != q.cols()) throw DimensionError("inertia_of: Q must be square");
  if (!q.allFinite()) throw ValidationError("inertia_of: Q has non-finite entries");
  const double qmax = q.cwiseAbs().maxCoeff();
  if (q.size() == 0 || qmax == 0.0) throw DegenerateFormError("quadratic form is identically zero");

  Mat work = 0.5 * (q + q.transpose());
  if (policy == ZeroPolicy::Equilibrated) {
    Vec s(q.rows());
    for (Eigen::Index k = 0; k < q.rows(); ++k) {
      const double dk = std::abs(work(k, k));
      s(k) = 1.0 / std::sqrt(dk > 1e-14 * qmax ? dk : qmax);
    }
    work = s.asDiagonal() * work * s.asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(work, Eigen::EigenvaluesOnly);
  const Vec& ev = eig.eigenvalues();
  Inertia out;
  out.threshold = tau * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > out.threshold) {
      ++out.pos;
    } else if (ev(k) < -out.threshold) {
      ++out.neg;
    } else {
      ++out.zero;
    }
  }
  return out;
}

namespace {

std::optional<Inertia> analytic_counts(const CriticalIndexSet& idx,
                                       const SingularSpectrum& spectrum, bool descending) {
  validate_index_set(idx, spectrum);
  if (idx.has_type_iii() || spectrum.n0 != 0) return std::nullopt;
  const std::size_t s = spectrum.clusters.size();
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a + 1; b < s; ++b) {
      if (precedes(spectrum.clusters[a].omega, spectrum.clusters[b].omega)) return std::nullopt;
    }
  }
  std::vector<int> mp = idx.mp, mpp = idx.mpp;
  if (descending) {
    std::reverse(mp.begin(), mp.end());
    std::reverse(mpp.begin(), mpp.end());
  }
  const int n = spectrum.n();
  int np = 0, npp = 0, d0 = 0, cross_pos = 0, cross_neg = 0;
  for (std::size_t a = 0; a < s; ++a) {
    np += mp[a];
    npp += mpp[a];
    d0 += mp[a] * mpp[a];
    for (std::size_t b = a + 1; b < s; ++b) {
      cross_pos += mp[a] * mpp[b];
      cross_neg += mpp[a] * mp[b];
    }
  }
  Inertia out;
  out.pos = n * n + n + np * np + d0 + 2 * cross_pos;
  out.neg = npp * npp + 2 * cross_neg;
  out.zero = d0;
  return out;
}

}  // namespace

std::optional<Inertia> analytic_inertia(const CriticalIndexSet& idx,
                                        const SingularSpectrum& spectrum) {
  return analytic_counts(idx, spectrum, true);
}

std::optional<Inertia> analytic_inertia_ascending(const CriticalIndexSet& idx,
                                                  const SingularSpectrum& spectrum) {
  return analytic_counts(idx, spectrum, false);
}

Inertia unit_cluster_inertia(int n, int m) {
  if (n < 1 || m < 0 || m > n) throw ValidationError("unit_cluster_inertia: need 0 <= m <= N");
  Inertia out;
  out.pos = n * n + n + (n - m) * (n - m);
  out.neg = m * m;
  out.zero = 2 * m * (n - m);
  return out;
}

Inertia unit_cluster_inertia(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  if (!spectrum.clusters.empty()) {
    throw PreconditionError("unit_cluster_inertia: spectrum has singular values other than 1");
  }
  validate_index_set(idx, spectrum);
  return unit_cluster_inertia(spectrum.n0, spectrum.n0 - idx.m0);
}

SaddleWitness saddle_witness(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  if (!idx.has_type_iii()) throw PreconditionError("saddle_witness: no type III block");
  const CharacteristicMatrix ch = build_characteristic(idx, spectrum);
  const HessianForm form = assemble_hqf(idx, spectrum);
  const int n = spectrum.n();

  int i = -1;
  for (int k = 0; k < n; ++k) {
    if (ch.roles[k] == SlotRole::PairTop) {
      i = k;
      break;
    }
  }
  const int j = ch.partner[i];
  const double d = ch.pair_d[i];

  auto family = [&](double lambda) {
    Mat xs = Mat::Zero(2 * n, 2 * n);
    xs(i, i) = xs(j, j) = 1.0;
    xs(n + i, n + i) = xs(n + j, n + j) = lambda;
    return symmetric_to_x(xs, n);
  };
  auto h = [&](const Vec& x) { return x.dot(form.q_block * x); };

  SaddleWitness out;
  out.lambda_plus = 0.0;
  out.plus = family(0.0);
  out.h_plus = h(out.plus);

  const double d4 = std::pow(d, 4);
  if (d4 > 1.0 + 1e-9) {
    const double lambda = 0.5 * (1.0 + d4);
    Vec x = family(lambda);
    if (h(x) < 0.0) {
      out.minus = x;
      out.h_minus = h(x);
      out.lambda_minus = lambda;
      out.method_minus = "proof-family";
      return out;
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(form.q_block);
  out.minus = eig.eigenvectors().col(0);
  out.h_minus = h(out.minus);
  out.method_minus = out.h_minus < 0.0 ? "eigenvector" : "none";
  return out;
}

const char* to_string(CriticalKind kind) {
  return kind == CriticalKind::Minimum ? "minimum" : "saddle";
}

Classification classify(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  Classification out;
  out.idx = idx;
  out.inertia = inertia_of(assemble_hqf(idx, spectrum).q);
  out.dimension = submanifold_dimension(idx, spectrum);
  out.kind = (out.inertia.neg == 0 && out.inertia.zero == out.dimension.best())
                 ? CriticalKind::Minimum
                 : CriticalKind::Saddle;
  return out;
}

Classification classify(const CriticalIndexSet& idx, const Objective& obj) {
  return classify(idx, obj.spectrum());
}

ClassificationSummary classify_all(const Objective& obj) {
  ClassificationSummary out;
  for (const auto& idx : enumerate_critical(obj.spectrum())) {
    out.entries.push_back(classify(idx, obj));
    if (out.entries.back().kind == CriticalKind::Minimum) {
      ++out.minima;
      const Mat s = build_representative(idx, obj).matrix();
      out.minimum_is_target =
          (s - obj.w().matrix()).norm() <= 1e-8 * std::max(1.0, obj.w().matrix().norm());
    }
  }
  if (out.minima != 1) out.minimum_is_target = false;
  return out;
}

}  // namespace symland
