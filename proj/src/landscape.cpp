#include "symland/landscape.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

namespace symland {
namespace {

constexpr double kBoundarySlack = 1e-12;

int rank_of(const Mat& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  const double cut = rel * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > cut ? 1 : 0;
  return r;
}

Mat null_basis(const Mat& m, double rel) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = rel * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > cut ? 1 : 0;
  return svd.matrixV().rightCols(m.cols() - r);
}

// Basis of osp(2N): [[X, Y], [-Y, X]], X skew, Y symmetric.
std::vector<Mat> osp_basis(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Mat k = Mat::Zero(2 * n, 2 * n);
      k(i, j) = k(n + i, n + j) = 1.0;
      k(j, i) = k(n + j, n + i) = -1.0;
      out.push_back(std::move(k));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Mat k = Mat::Zero(2 * n, 2 * n);
      k(i, n + j) = k(j, n + i) = 1.0;
      k(n + i, j) = k(n + j, i) = -1.0;
      out.push_back(std::move(k));
    }
  }
  return out;
}

Eigen::Map<const Vec> flat(const Mat& m) { return {m.data(), m.size()}; }

}  // namespace

// ---------------------------------------------------------------------------
// Spectrum

int SingularSpectrum::n() const {
  int total = n0;
  for (const auto& c : clusters) total += c.multiplicity;
  return total;
}

void SingularSpectrum::validate() const {
  if (n0 < 0) throw ValidationError("spectrum: n0 must be non-negative");
  double prev = 1.0;
  for (const auto& c : clusters) {
    if (c.multiplicity < 1) throw ValidationError("spectrum: cluster multiplicity must be >= 1");
    if (!(c.omega > prev)) {
      throw ValidationError("spectrum: cluster values must exceed 1 and increase strictly");
    }
    prev = c.omega;
  }
  if (n() < 1) throw ValidationError("spectrum: empty");
}

SingularSpectrum SingularSpectrum::from_values(const Vec& d, double cluster_tol) {
  SingularSpectrum out;
  for (const auto& c : cluster_values(d, cluster_tol)) {
    const int size = static_cast<int>(c.members.size());
    if (std::abs(c.value - 1.0) <= cluster_tol) {
      out.n0 += size;
    } else {
      out.clusters.push_back({c.value, size});
    }
  }
  std::reverse(out.clusters.begin(), out.clusters.end());
  out.validate();
  return out;
}

bool precedes(double omega_a, double omega_b) {
  return omega_a <= omega_b * (1.0 + kBoundarySlack) &&
         std::cbrt(omega_b) <= omega_a * (1.0 + kBoundarySlack);
}

double pair_angle(double omega_a, double omega_b) {
  if (omega_a == omega_b) return std::acos(0.0);
  const double r = std::sqrt(omega_a * omega_b);
  double c = (omega_b / omega_a - omega_a / omega_b) / (r - 1.0 / r);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

std::vector<PairUsage> admissible_pairs(const SingularSpectrum& spectrum) {
  std::vector<PairUsage> out;
  const int s = static_cast<int>(spectrum.clusters.size());
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      if (a == b && spectrum.clusters[a].multiplicity < 2) continue;
      const double wa = spectrum.clusters[a].omega;
      const double wb = spectrum.clusters[b].omega;
      if (precedes(wa, wb)) out.push_back({a, b, 0, pair_angle(wa, wb)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Index sets

bool CriticalIndexSet::has_type_iii() const {
  return std::any_of(mppp.begin(), mppp.end(), [](const PairUsage& p) { return p.count > 0; });
}

namespace {
auto ordering_key(const CriticalIndexSet& s) {
  std::vector<std::tuple<int, int, int>> pairs;
  for (const auto& p : s.mppp) pairs.emplace_back(p.alpha, p.beta, p.count);
  return std::make_tuple(s.m0, s.mp, s.mpp, pairs);
}
}  // namespace

bool CriticalIndexSet::operator==(const CriticalIndexSet& o) const {
  return ordering_key(*this) == ordering_key(o);
}

bool CriticalIndexSet::operator<(const CriticalIndexSet& o) const {
  return ordering_key(*this) < ordering_key(o);
}

std::string CriticalIndexSet::label() const {
  std::ostringstream os;
  auto list = [&](const std::vector<int>& v) {
    os << '(';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    os << ')';
  };
  os << "m0=" << m0 << " m'=";
  list(mp);
  os << " m''=";
  list(mpp);
  os << " m'''=[";
  bool first = true;
  for (const auto& p : mppp) {
    if (p.count == 0) continue;
    os << (first ? "" : ",") << '(' << p.alpha << ',' << p.beta << "):" << p.count;
    first = false;
  }
  os << ']';
  return os.str();
}

CriticalIndexSet minimum_index_set(const SingularSpectrum& spectrum) {
  CriticalIndexSet idx;
  idx.m0 = spectrum.n0;
  for (const auto& c : spectrum.clusters) {
    idx.mp.push_back(c.multiplicity);
    idx.mpp.push_back(0);
  }
  idx.mppp = admissible_pairs(spectrum);
  return idx;
}

void validate_index_set(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  const std::size_t s = spectrum.clusters.size();
  if (idx.mp.size() != s || idx.mpp.size() != s) {
    throw ValidationError("index set has the wrong number of clusters");
  }
  if (idx.m0 < 0 || idx.m0 > spectrum.n0) {
    throw ValidationError(fmt::format("m0 = {} outside [0, {}]", idx.m0, spectrum.n0));
  }
  std::vector<int> used(s, 0);
  for (std::size_t a = 0; a < s; ++a) {
    if (idx.mp[a] < 0 || idx.mpp[a] < 0) throw ValidationError("negative block count");
    used[a] = idx.mp[a] + idx.mpp[a];
  }
  for (const auto& p : idx.mppp) {
    if (p.count < 0) throw ValidationError("negative pair count");
    if (p.count == 0) continue;
    if (p.alpha < 0 || p.beta < 0 || static_cast<std::size_t>(p.beta) >= s || p.alpha > p.beta) {
      throw ValidationError("pair indices out of range");
    }
    if (!precedes(spectrum.clusters[p.alpha].omega, spectrum.clusters[p.beta].omega)) {
      throw ValidationError(fmt::format("pair ({}, {}) is not admissible", p.alpha, p.beta));
    }
    used[p.alpha] += p.count;
    used[p.beta] += p.count;
  }
  for (std::size_t a = 0; a < s; ++a) {
    if (used[a] != spectrum.clusters[a].multiplicity) {
      throw ValidationError(fmt::format("cluster {} uses {} of {} values", a, used[a],
                                        spectrum.clusters[a].multiplicity));
    }
  }
}

std::vector<CriticalIndexSet> enumerate_critical(const SingularSpectrum& spectrum) {
  spectrum.validate();
  const std::vector<PairUsage> pairs = admissible_pairs(spectrum);
  const std::size_t s = spectrum.clusters.size();
  std::vector<CriticalIndexSet> out;

  std::vector<int> remaining(s);
  for (std::size_t a = 0; a < s; ++a) remaining[a] = spectrum.clusters[a].multiplicity;
  std::vector<PairUsage> chosen = pairs;

  // Split the leftover of each cluster into m' + m''.
  std::function<void(std::size_t, CriticalIndexSet&)> split = [&](std::size_t a,
                                                                  CriticalIndexSet& idx) {
    if (a == s) {
      for (int m0 = 0; m0 <= spectrum.n0; ++m0) {
        idx.m0 = m0;
        out.push_back(idx);
      }
      return;
    }
    for (int mp = 0; mp <= remaining[a]; ++mp) {
      idx.mp[a] = mp;
      idx.mpp[a] = remaining[a] - mp;
      split(a + 1, idx);
    }
  };

  std::function<void(std::size_t)> assign_pairs = [&](std::size_t k) {
    if (k == pairs.size()) {
      CriticalIndexSet idx;
      idx.mp.assign(s, 0);
      idx.mpp.assign(s, 0);
      idx.mppp = chosen;
      split(0, idx);
      return;
    }
    const int a = pairs[k].alpha;
    const int b = pairs[k].beta;
    const int cap = a == b ? remaining[a] / 2 : std::min(remaining[a], remaining[b]);
    for (int c = 0; c <= cap; ++c) {
      chosen[k].count = c;
      remaining[a] -= c;
      remaining[b] -= c;
      assign_pairs(k + 1);
      remaining[a] += c;
      remaining[b] += c;
    }
    chosen[k].count = 0;
  };
  assign_pairs(0);

  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic matrices

PositionLayout canonical_layout(const SingularSpectrum& spectrum) {
  PositionLayout layout;
  layout.cluster.resize(spectrum.clusters.size());
  int pos = 0;
  for (std::size_t k = spectrum.clusters.size(); k-- > 0;) {
    for (int r = 0; r < spectrum.clusters[k].multiplicity; ++r) layout.cluster[k].push_back(pos++);
  }
  for (int r = 0; r < spectrum.n0; ++r) layout.unit.push_back(pos++);
  return layout;
}

Mat canonical_e(const SingularSpectrum& spectrum) {
  const int n = spectrum.n();
  const PositionLayout layout = canonical_layout(spectrum);
  Vec e = Vec::Ones(n);
  for (std::size_t k = 0; k < spectrum.clusters.size(); ++k) {
    for (int pos : layout.cluster[k]) e(pos) = spectrum.clusters[k].omega;
  }
  Vec diag(2 * n);
  diag << e, e.cwiseInverse();
  return diag.asDiagonal();
}

CharacteristicMatrix build_characteristic(const CriticalIndexSet& idx,
                                          const SingularSpectrum& spectrum) {
  validate_index_set(idx, spectrum);
  const int n = spectrum.n();
  const PositionLayout layout = canonical_layout(spectrum);

  CharacteristicMatrix out;
  out.source = idx;
  out.d = Vec::Ones(2 * n);
  out.l = Mat::Zero(2 * n, 2 * n);
  out.roles.assign(n, SlotRole::TypeI);
  out.partner.assign(n, -1);
  out.pair_d.assign(n, 0.0);
  out.block_frame = Mat::Identity(2 * n, 2 * n);

  std::vector<std::size_t> cursor(spectrum.clusters.size(), 0);
  auto take = [&](int a) { return layout.cluster[a].at(cursor[a]++); };

  for (std::size_t a = 0; a < spectrum.clusters.size(); ++a) {
    const double w = spectrum.clusters[a].omega;
    for (int r = 0; r < idx.mp[a]; ++r) {
      const int i = take(static_cast<int>(a));
      out.roles[i] = SlotRole::TypeI;
      out.d(i) = w;
      out.d(n + i) = 1.0 / w;
      out.l(i, i) = out.l(n + i, n + i) = 1.0;
    }
    for (int r = 0; r < idx.mpp[a]; ++r) {
      const int i = take(static_cast<int>(a));
      out.roles[i] = SlotRole::TypeII;
      out.d(i) = std::pow(w, -1.0 / 3.0);
      out.d(n + i) = std::cbrt(w);
      out.l(i, i) = out.l(n + i, n + i) = -1.0;
    }
  }
  for (const auto& p : idx.mppp) {
    const double wa = spectrum.clusters[p.alpha].omega;
    const double wb = spectrum.clusters[p.beta].omega;
    const double dd = std::sqrt(wb / wa);
    const double x = pair_angle(wa, wb);
    const double c = std::cos(x);
    const double s = std::sin(x);
    for (int r = 0; r < p.count; ++r) {
      const int i = take(p.alpha);
      const int j = take(p.beta);
      out.roles[i] = SlotRole::PairTop;
      out.roles[j] = SlotRole::PairBottom;
      out.partner[i] = j;
      out.partner[j] = i;
      out.pair_d[i] = out.pair_d[j] = dd;
      // Top of alpha couples with the bottom of beta; partner block on the
      // remaining two coordinates.
      out.d(i) = out.d(n + j) = dd;
      out.d(n + i) = out.d(j) = 1.0 / dd;
      out.l(i, i) = c;
      out.l(i, n + j) = out.l(n + j, i) = s;
      out.l(n + j, n + j) = -c;
      out.l(n + i, n + i) = c;
      out.l(n + i, j) = out.l(j, n + i) = -s;
      out.l(j, j) = -c;
      // Quarter turn on mode j moves both blocks into top-top/bottom-bottom.
      out.block_frame(j, j) = out.block_frame(n + j, n + j) = 0.0;
      out.block_frame(n + j, j) = -1.0;
      out.block_frame(j, n + j) = 1.0;
    }
  }
  for (int r = 0; r < spectrum.n0; ++r) {
    const int i = layout.unit[r];
    const double sign = r < idx.m0 ? 1.0 : -1.0;
    out.roles[i] = r < idx.m0 ? SlotRole::UnitPlus : SlotRole::UnitMinus;
    out.l(i, i) = out.l(n + i, n + i) = sign;
  }
  out.p = out.d.asDiagonal() * out.l;
  return out;
}

// ---------------------------------------------------------------------------
// Objective

Objective::Objective(SymplecticMatrix w, SymplecticSVD svd, SingularSpectrum spectrum,
                     Tolerances tol)
    : w_(std::move(w)),
      svd_(std::move(svd)),
      spectrum_(std::move(spectrum)),
      e_d_(canonical_e(spectrum_)),
      tol_(tol) {}

Objective Objective::from(const SymplecticMatrix& w, const Tolerances& tol) {
  SymplecticSVD svd = symplectic_svd(w, tol);
  SingularSpectrum spectrum = SingularSpectrum::from_values(svd.d, tol.cluster);
  return Objective(w, std::move(svd), std::move(spectrum), tol);
}

double objective_value(const Mat& s, const Mat& w) {
  if (s.rows() != w.rows() || s.cols() != w.cols()) {
    throw DimensionError("objective_value: S and W differ in shape");
  }
  return (s - w).squaredNorm();
}

double objective_value(const SymplecticMatrix& s, const SymplecticMatrix& w) {
  return objective_value(s.matrix(), w.matrix());
}

AlgebraElement gradient(const Mat& s, const Mat& w) {
  if (s.rows() != w.rows() || s.cols() != w.cols()) {
    throw DimensionError("gradient: S and W differ in shape");
  }
  const Mat j = symplectic_form(static_cast<int>(s.rows() / 2));
  return AlgebraElement((s.transpose() * s - w.transpose() * s) * j);
}

AlgebraElement gradient(const SymplecticMatrix& s, const SymplecticMatrix& w) {
  return gradient(s.matrix(), w.matrix());
}

double critical_residual(const Mat& s, const Mat& w) {
  if (s.rows() != w.rows() || s.cols() != w.cols()) {
    throw DimensionError("critical_residual: S and W differ in shape");
  }
  const Mat a = s.transpose() * s;
  const Mat b = s.transpose() * w;
  return ((a - symplectic_inverse(a)) - (b - symplectic_inverse(b))).norm();
}

double critical_residual(const SymplecticMatrix& s, const SymplecticMatrix& w) {
  return critical_residual(s.matrix(), w.matrix());
}

SymplecticMatrix build_representative(const CriticalIndexSet& idx, const Objective& obj,
                                      const std::optional<OrthoSymplectic>& r) {
  const CharacteristicMatrix ch = build_characteristic(idx, obj.spectrum());
  Mat middle = ch.p;
  if (r) {
    const Mat& rm = r->matrix();
    if (rm.rows() != middle.rows()) throw DimensionError("stabilizer element has the wrong size");
    const Mat& e = obj.e_d();
    const double res = (rm.transpose() * e * rm - e).norm();
    if (res > obj.tol().sympl * std::max(1.0, e.norm())) {
      throw ValidationError(
          fmt::format("R does not stabilize E_d: ||R^T E R - E||_F = {:.3e}", res));
    }
    middle = rm.transpose() * ch.p * rm;
  }
  return SymplecticMatrix::from(obj.u0() * middle * obj.v0(), 1e-6);
}

CriticalValue critical_value(const CriticalIndexSet& idx, const SingularSpectrum& spectrum) {
  const CharacteristicMatrix ch = build_characteristic(idx, spectrum);
  CriticalValue out;
  out.constructive = (ch.p - canonical_e(spectrum)).squaredNorm();
  double rest = 0.0;
  for (std::size_t a = 0; a < spectrum.clusters.size(); ++a) {
    const double w = spectrum.clusters[a].omega;
    rest += idx.mpp[a] * (w * w + 1.0 / (w * w) + 3.0 * std::cbrt(w * w) +
                          3.0 / std::cbrt(w * w));
  }
  for (const auto& p : idx.mppp) {
    const double wa = spectrum.clusters[p.alpha].omega;
    const double wb = spectrum.clusters[p.beta].omega;
    rest += p.count * (std::pow(wa + 1.0 / wb, 2) + std::pow(1.0 / wa + wb, 2));
  }
  const double k = spectrum.n0 - idx.m0;
  out.closed_form = 8.0 * k + rest;
  out.closed_form_as_printed = 8.0 * k * k + rest;
  return out;
}

DimensionInfo submanifold_dimension(const CriticalIndexSet& idx,
                                    const SingularSpectrum& spectrum) {
  const CharacteristicMatrix ch = build_characteristic(idx, spectrum);
  DimensionInfo out;
  if (!idx.has_type_iii()) {
    int dim = 2 * idx.m0 * (spectrum.n0 - idx.m0);
    for (std::size_t a = 0; a < idx.mp.size(); ++a) dim += idx.mp[a] * idx.mpp[a];
    out.formula = dim;
  }

  const int n = spectrum.n();
  const Mat e = canonical_e(spectrum);
  const std::vector<Mat> basis = osp_basis(n);
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Mat comm(4 * n * n, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Mat& kk = basis[static_cast<std::size_t>(k)];
    comm.col(k) = flat(Mat(kk * e - e * kk));
  }
  const Mat stab = null_basis(comm, 1e-9);
  Mat image(4 * n * n, stab.cols());
  for (Eigen::Index c = 0; c < stab.cols(); ++c) {
    Mat kk = Mat::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < cols; ++k) kk += stab(k, c) * basis[static_cast<std::size_t>(k)];
    image.col(c) = flat(Mat(ch.p * kk - kk * ch.p));
  }
  out.tangent_rank = rank_of(image, 1e-9);
  return out;
}

CountRecord count_formula(const SingularSpectrum& spectrum) {
  CountRecord out;
  out.enumerated = static_cast<int>(enumerate_critical(spectrum).size());
  const int n = spectrum.n();
  if (spectrum.n0 == 0 && spectrum.clusters.size() == 1) {
    out.printed_even_odd = n % 2 == 0 ? (n + 2.0) * (n + 2.0) / 2.0 : (n + 1.0) * (n + 3.0) / 2.0;
  }
  auto term = [n](int m) {
    return std::ldexp(1.0, n - 3 * m) * std::tgamma(n + 1.0) /
           (std::tgamma(m + 1.0) * std::tgamma(n - 2.0 * m + 1.0));
  };
  for (int m = 0; 2 * m <= n; ++m) {
    const double t = term(m);
    out.upper_bound += t;
    if (m >= 1) out.upper_bound_as_printed += t;
  }
  return out;
}

}  // namespace symland
