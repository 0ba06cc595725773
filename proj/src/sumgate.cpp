#include "symland/sumgate.hpp"

#include <cmath>

#include <fmt/format.h>

namespace symland::sum {

double golden() { return 0.5 * (std::sqrt(5.0) + 1.0); }
double xi() { return std::sqrt((5.0 - std::sqrt(5.0)) / 10.0); }
double eta() { return std::sqrt((5.0 + std::sqrt(5.0)) / 10.0); }

Mat gate() {
  Mat m(4, 4);
  m << 1, 0, 0, 0,
       1, 1, 0, 0,
       0, 0, 1, -1,
       0, 0, 0, 1;
  return m;
}

Mat reference_u() {
  const double x = xi(), e = eta();
  Mat u(4, 4);
  u << -x, -e, 0, 0,
       -e, x, 0, 0,
       0, 0, -x, -e,
       0, 0, -e, x;
  return u;
}

namespace {
Mat reference_e(double w) { return Vec((Vec(4) << w, 1 / w, 1 / w, w).finished()).asDiagonal(); }
}  // namespace

Mat derived_v() { return reference_e(golden()).inverse() * reference_u().transpose() * gate(); }

Mat frame_turn() {
  Mat t = Mat::Identity(4, 4);
  t(1, 1) = t(3, 3) = 0.0;
  t(3, 1) = -1.0;
  t(1, 3) = 1.0;
  return t;
}

Mat reference_p(int k) {
  const double w = golden();
  switch (k) {
    case 1:
      return reference_e(w);
    case 2:
      return Vec((Vec(4) << -std::pow(w, -1.0 / 3), -std::cbrt(w), -std::cbrt(w),
                  -std::pow(w, -1.0 / 3))
                     .finished())
          .asDiagonal();
    case 3:
      return Vec((Vec(4) << w, -std::cbrt(w), 1 / w, -std::pow(w, -1.0 / 3)).finished())
          .asDiagonal();
    case 4: {
      Mat p = Mat::Zero(4, 4);
      p(0, 1) = p(1, 0) = p(2, 3) = p(3, 2) = 1.0;
      return p;
    }
    default:
      throw ValidationError("reference_p: k must be 1..4");
  }
}

Mat reference_s2() {
  Mat s(4, 4);
  s << -0.906, 0.614, 0, 0,
       -0.292, -0.906, 0, 0,
       0, 0, -0.906, 0.292,
       0, 0, -0.614, -0.906;
  return s;
}

Mat reference_s3_at_zero() {
  // cos(theta) = 1, sin(theta) = 0 in the parametrized orbit.
  Mat s(4, 4);
  s << 0.152 + 0.047, 0.990 + 0.307, 0, 0,
       1.141 + 0.354, 0.152 + 0.047, 0, 0,
       0, 0, 0.047 - 0.152, -0.354 + 1.141,
       0, 0, -0.307 + 0.990, 0.047 - 0.152;
  return s;
}

Mat reference_s4() { return Vec((Vec(4) << 1, -1, 1, -1).finished()).asDiagonal(); }

Mat reference_q() {
  const double w = golden(), v = 1.0 / w;
  Mat q(10, 10);
  q << 1, 0, 0, -1, w, 0, 0, 0, 0, 0,
       0, 2, 0, v, -2, w, 0, 0, 0, 0,
       0, 0, 1, 0, v, -1, 0, 0, 0, 0,
       -1, v, 0, 1, 0, 0, 0, 0, 0, 0,
       w, -2, v, 0, 2, 0, 0, 0, 0, 0,
       0, w, -1, 0, 0, 1, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 4, -v, -w, 0,
       0, 0, 0, 0, 0, 0, -v, 2, 2, -v,
       0, 0, 0, 0, 0, 0, -w, 2, 2, -w,
       0, 0, 0, 0, 0, 0, 0, -v, -w, 4;
  return q;
}

const std::vector<TableRow>& table() {
  static const std::vector<TableRow> rows = {
      {2, 0, 0, 0.0, 0, 10, 0, CriticalKind::Minimum, 0},
      {0, 2, 0, 18.623, 0, 6, 4, CriticalKind::Saddle, 0},
      {1, 1, 0, 9.311, 1, 8, 1, CriticalKind::Saddle, 1},
      {0, 0, 1, 10.0, 0, 7, 3, CriticalKind::Saddle, 0},
  };
  return rows;
}

bool VerifyResult::passed() const {
  for (const auto& g : groups) {
    if (!g.passed()) return false;
  }
  return true;
}

namespace {

void expect_close(CheckGroup& g, const std::string& what, const Mat& got, const Mat& want,
                  double tol) {
  ++g.checks;
  const double err = (got - want).cwiseAbs().maxCoeff();
  if (!(err <= tol)) g.failures.push_back(fmt::format("{}: max entry error {:.3e} > {:.1e}", what, err, tol));
}

void expect_close(CheckGroup& g, const std::string& what, double got, double want, double tol) {
  ++g.checks;
  if (!(std::abs(got - want) <= tol)) {
    g.failures.push_back(fmt::format("{}: got {:.6f}, expected {:.6f} (tol {:.1e})", what, got, want, tol));
  }
}

void expect_true(CheckGroup& g, const std::string& what, bool ok) {
  ++g.checks;
  if (!ok) g.failures.push_back(what);
}

const CriticalIndexSet* find_row(const std::vector<CriticalIndexSet>& sets, const TableRow& row) {
  for (const auto& s : sets) {
    const int mppp = s.mppp.empty() ? 0 : s.mppp.front().count;
    if (s.mp.size() == 1 && s.mp[0] == row.mp && s.mpp[0] == row.mpp && mppp == row.mppp) return &s;
  }
  return nullptr;
}

}  // namespace

VerifyResult verify(const VerifyOptions& opts) {
  VerifyResult res;
  const Mat w = gate();
  const Objective obj = Objective::from(SymplecticMatrix::from(w));
  SingularSpectrum spectrum = obj.spectrum();
  for (auto& c : spectrum.clusters) c.omega += opts.omega_perturbation;
  const double omega = golden();
  const Mat t = frame_turn();
  const Mat e = canonical_e(spectrum);

  CheckGroup svd;
  svd.name = "svd";
  expect_true(svd, "spectrum is one cluster of multiplicity 2 with n0 = 0",
              spectrum.n0 == 0 && spectrum.clusters.size() == 1 &&
                  spectrum.clusters[0].multiplicity == 2);
  if (!svd.passed()) {
    res.groups.push_back(svd);
    return res;
  }
  expect_close(svd, "singular value omega", spectrum.clusters[0].omega, omega, opts.exact_tol);
  expect_close(svd, "xi^2 + eta^2", xi() * xi() + eta() * eta(), 1.0, opts.exact_tol);
  const Mat u = reference_u();
  const Mat v = derived_v();
  expect_true(svd, "reference U is orthogonal symplectic",
              check_symplectic(u) < 1e-12 && check_orthogonal(u) < 1e-12);
  expect_true(svd, "derived V is orthogonal symplectic",
              check_symplectic(v) < 1e-12 && check_orthogonal(v) < 1e-12);
  expect_close(svd, "U E V reconstructs the gate", u * reference_e(omega) * v, w, opts.exact_tol);
  const Mat z = obj.u0().transpose() * u * t;
  expect_close(svd, "computed and reference U differ by a stabilizer element",
               Mat(z.transpose() * e * z), e, 1e-9);
  expect_true(svd, "stabilizer is O(2) of dimension 1", [&] {
    const auto st = stabilizer_of(obj.svd().d);
    return !st.has_unit_block && st.factors.size() == 1 && st.factors[0].size == 2 &&
           st.dimension == 1;
  }());
  res.groups.push_back(svd);

  const std::vector<CriticalIndexSet> sets = enumerate_critical(spectrum);
  CheckGroup chars;
  chars.name = "characteristic";
  expect_true(chars, fmt::format("4 critical submanifolds (found {})", sets.size()), sets.size() == 4);
  std::vector<const CriticalIndexSet*> rows;
  for (const auto& row : table()) rows.push_back(find_row(sets, row));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k]) {
      chars.failures.push_back(fmt::format("row {} index set not enumerated", k + 1));
      continue;
    }
    const CharacteristicMatrix ch = build_characteristic(*rows[k], spectrum);
    expect_close(chars, fmt::format("P{}", k + 1), Mat(t * ch.p * t.transpose()),
                 reference_p(static_cast<int>(k) + 1), opts.exact_tol);
  }
  res.groups.push_back(chars);
  for (const auto* r : rows) {
    if (!r) return res;
  }

  auto representative = [&](const CriticalIndexSet& idx, const Mat& r) {
    const Mat p = build_characteristic(idx, spectrum).p;
    return Mat(obj.u0() * r.transpose() * p * r * obj.v0());
  };
  CheckGroup reps;
  reps.name = "representatives";
  const Mat id = Mat::Identity(4, 4);
  expect_close(reps, "S*_1 = SUM", representative(*rows[0], id), w, opts.fixture_tol);
  expect_close(reps, "S*_2", representative(*rows[1], id), reference_s2(), opts.fixture_tol);
  expect_close(reps, "S*_3(0)", representative(*rows[2], z.transpose()), reference_s3_at_zero(),
               opts.fixture_tol);
  expect_close(reps, "S*_4", representative(*rows[3], z.transpose()), reference_s4(),
               opts.fixture_tol);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    expect_true(reps, fmt::format("S*_{} is critical", k + 1),
                critical_residual(representative(*rows[k], id), w) <= 1e-8);
  }
  res.groups.push_back(reps);

  CheckGroup values;
  values.name = "values";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const CriticalValue cv = critical_value(*rows[k], spectrum);
    expect_close(values, fmt::format("row {} value", k + 1), cv.constructive, table()[k].value,
                 opts.fixture_tol);
    expect_close(values, fmt::format("row {} closed form", k + 1), cv.closed_form, cv.constructive,
                 1e-9);
  }
  res.groups.push_back(values);

  CheckGroup inert;
  inert.name = "inertia";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = table()[k];
    const Classification c = classify(*rows[k], spectrum);
    expect_true(inert,
                fmt::format("row {} inertia (D0,D+,D-) = ({},{},{}), expected ({},{},{})", k + 1,
                            c.inertia.zero, c.inertia.pos, c.inertia.neg, row.d0, row.dpos, row.dneg),
                c.inertia.zero == row.d0 && c.inertia.pos == row.dpos && c.inertia.neg == row.dneg);
    expect_true(inert, fmt::format("row {} kind {}", k + 1, to_string(c.kind)), c.kind == row.kind);
    expect_true(inert, fmt::format("row {} dimension {}", k + 1, c.dimension.best()),
                c.dimension.best() == row.dimension);
  }
  res.groups.push_back(inert);

  CheckGroup hq;
  hq.name = "hessian-q";
  const HessianForm form = assemble_hqf(*rows[3], spectrum);
  expect_close(hq, "Q for S*_4", form.q_block, reference_q(), opts.exact_tol);
  expect_close(hq, "trace form vs block formula", form.path_agreement, 0.0, 1e-10);
  const Inertia qi = inertia_of(form.q_block);
  expect_true(hq, fmt::format("Q inertia ({} pos, {} neg, {} zero)", qi.pos, qi.neg, qi.zero),
              qi.pos == 7 && qi.neg == 3 && qi.zero == 0);
  res.groups.push_back(hq);
  return res;
}

}  // namespace symland::sum
