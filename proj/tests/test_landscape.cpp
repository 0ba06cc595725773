#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "symland/landscape.hpp"
#include "symland/sumgate.hpp"

using namespace symland;

namespace {

int pair_total(const CriticalIndexSet& idx) {
  int k = 0;
  for (const auto& p : idx.mppp) k += p.count;
  return k;
}

const CriticalIndexSet& sum_set(const std::vector<CriticalIndexSet>& sets, int mp, int mpp, int mppp) {
  for (const auto& s : sets) {
    if (s.mp[0] == mp && s.mpp[0] == mpp && pair_total(s) == mppp) return s;
  }
  throw std::runtime_error("index set not found");
}

Objective sum_objective() { return Objective::from(SymplecticMatrix::from(sum::gate())); }

// W = U diag(d, 1/d) V with random orthosymplectic U, V.
SymplecticMatrix target_with(const Vec& d, std::uint64_t seed) {
  const int n = static_cast<int>(d.size());
  Vec e(2 * n);
  e << d, d.cwiseInverse();
  const Mat u = random_orthosymplectic(n, seed).matrix();
  const Mat v = random_orthosymplectic(n, seed + 1).matrix();
  return SymplecticMatrix::from(u * e.asDiagonal() * v);
}

// Random element of Stab(E) built from the cluster layout: real orthogonal
// blocks on each omega > 1 cluster, a unitary block on the unit cluster.
OrthoSymplectic random_stabilizer(const SingularSpectrum& sp, std::mt19937_64& rng) {
  const int n = sp.n();
  const PositionLayout lay = canonical_layout(sp);
  Mat x = Mat::Zero(n, n), y = Mat::Zero(n, n);
  std::normal_distribution<double> g(0.0, 1.0);
  auto place = [&](const std::vector<int>& pos, bool complex) {
    const int k = static_cast<int>(pos.size());
    if (k == 0) return;
    CMat z(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) z(i, j) = {g(rng), complex ? g(rng) : 0.0};
    Eigen::HouseholderQR<CMat> qr(z);
    const CMat q = qr.householderQ() * CMat::Identity(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        x(pos[i], pos[j]) = q(i, j).real();
        y(pos[i], pos[j]) = -q(i, j).imag();
      }
  };
  for (const auto& c : lay.cluster) place(c, false);
  place(lay.unit, true);
  return osp_from_unitary(x, y);
}

std::vector<SymplecticMatrix> sample_targets() {
  std::vector<SymplecticMatrix> out;
  out.push_back(SymplecticMatrix::from(sum::gate()));
  out.push_back(SymplecticMatrix::identity(2));
  out.push_back(target_with((Vec(2) << 3.0, 2.0).finished(), 1));
  out.push_back(target_with((Vec(2) << 6.0, 1.3).finished(), 3));
  out.push_back(target_with((Vec(3) << 4.0, 2.5, 1.0).finished(), 5));
  out.push_back(target_with((Vec(3) << 2.0, 2.0, 2.0).finished(), 7));
  out.push_back(target_with((Vec(3) << 9.0, 2.5, 1.6).finished(), 9));
  out.push_back(target_with((Vec(3) << 1.0, 1.0, 1.0).finished(), 11));
  for (std::uint64_t seed = 0; seed < 4; ++seed) out.push_back(random_symplectic(3, 50 + seed, 0.6));
  return out;
}

}  // namespace

TEST(ObjectiveValue, Examples) {
  const Mat w = sum::gate();
  EXPECT_EQ(objective_value(w, w), 0.0);
  const Mat r = random_orthosymplectic(2, 4).matrix();
  EXPECT_NEAR(objective_value(Mat(-r), r), 16.0, 1e-12);
  // Only two entries of I - SUM are nonzero.
  EXPECT_NEAR(objective_value(Mat::Identity(4, 4), w), 2.0, 1e-15);
  EXPECT_THROW(objective_value(Mat::Identity(4, 4), Mat::Identity(2, 2)), DimensionError);
}

TEST(Gradient, VanishesAtTarget) {
  const Mat w = random_symplectic(2, 8, 0.9).matrix();
  EXPECT_LT(gradient(w, w).y().norm(), 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const Mat s = random_symplectic(n, 1000 + trial, 0.5).matrix();
      const Mat w = random_symplectic(n, 2000 + trial, 0.5).matrix();
      Mat y(2 * n, 2 * n);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) y(i, j) = y(j, i) = g(rng);
      const Mat jy = symplectic_form(n) * y;
      const double h = 1e-5;
      const double fd =
          (objective_value(Mat(s * expm(h * jy)), w) - objective_value(Mat(s * expm(-h * jy)), w)) /
          (2 * h);
      const double an = 2.0 * (y * gradient(s, w).y()).trace();
      EXPECT_NEAR(fd, an, 1e-5 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST(CriticalResidual, Examples) {
  const Mat w = sum::gate();
  EXPECT_EQ(critical_residual(w, w), 0.0);
  EXPECT_NEAR(critical_residual(Mat::Identity(4, 4), w), 2.8284271247461903, 1e-14);
  Mat y(4, 4);
  y << 0.3, -0.2, 0.1, 0.05,
       -0.2, 0.5, 0.0, -0.1,
       0.1, 0.0, -0.4, 0.25,
       0.05, -0.1, 0.25, 0.2;
  const Mat s = exp_algebra(AlgebraElement(y)).matrix();
  // Reference values from an independent dense evaluation.
  EXPECT_NEAR(critical_residual(s, w), 3.4753097592328386, 1e-12);
  EXPECT_NEAR(objective_value(s, w), 2.6601969333270805, 1e-12);
  EXPECT_NEAR(gradient(s, w).y().norm(), 1.7376548796164197, 1e-12);
}

TEST(CriticalResidual, AgreesWithGradientOnRandomPoints) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Mat s = random_symplectic(2, seed, 0.7).matrix();
    const Mat w = random_symplectic(2, seed + 500, 0.7).matrix();
    EXPECT_GT(critical_residual(s, w), 1e-3);
    EXPECT_GT(gradient(s, w).y().norm(), 1e-3);
  }
}

TEST(Spectrum, FromValues) {
  const auto sp = SingularSpectrum::from_values((Vec(4) << 5.0, 2.0, 2.0 + 1e-10, 1.0).finished());
  EXPECT_EQ(sp.n0, 1);
  ASSERT_EQ(sp.clusters.size(), 2u);
  EXPECT_NEAR(sp.clusters[0].omega, 2.0, 1e-9);
  EXPECT_EQ(sp.clusters[0].multiplicity, 2);
  EXPECT_EQ(sp.clusters[1].multiplicity, 1);
  EXPECT_EQ(sp.n(), 4);

  SingularSpectrum bad;
  bad.clusters = {{2.0, 1}, {1.5, 1}};
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Admissibility, Relation) {
  EXPECT_TRUE(precedes(2.0, 3.0));
  EXPECT_TRUE(precedes(2.0, 8.0));  // boundary, 8^(1/3) = 2
  EXPECT_FALSE(precedes(2.0, 9.0));
  EXPECT_FALSE(precedes(3.0, 2.0));
  EXPECT_TRUE(precedes(2.0, 2.0));
}

TEST(Admissibility, AngleEndpoints) {
  EXPECT_NEAR(pair_angle(sum::golden(), sum::golden()), M_PI / 2, 1e-15);
  for (double wb : {1.5, 8.0, 30.0}) {
    const double wa = std::cbrt(wb);
    const double r = std::sqrt(wa * wb);
    EXPECT_NEAR((wb / wa - wa / wb) / (r - 1.0 / r), 1.0, 1e-12);
    EXPECT_NEAR(pair_angle(wa, wb), 0.0, 1e-6);
  }
  // Strictly inside the interval the cosine is inside (-1, 1).
  EXPECT_GT(pair_angle(2.0, 3.0), 0.0);
  EXPECT_LT(pair_angle(2.0, 3.0), M_PI / 2);
}

TEST(Enumerate, SumGate) {
  const auto sets = enumerate_critical(sum_objective().spectrum());
  ASSERT_EQ(sets.size(), 4u);
  std::set<std::tuple<int, int, int>> got;
  for (const auto& s : sets) got.insert({s.mp[0], s.mpp[0], pair_total(s)});
  const std::set<std::tuple<int, int, int>> want = {{2, 0, 0}, {0, 2, 0}, {1, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(got, want);
}

TEST(Enumerate, UnitOnlyGivesNPlusOne) {
  for (int n = 1; n <= 4; ++n) {
    SingularSpectrum sp;
    sp.n0 = n;
    EXPECT_EQ(enumerate_critical(sp).size(), static_cast<std::size_t>(n + 1));
  }
}

TEST(Enumerate, NonDegenerateAdmissiblePair) {
  SingularSpectrum sp;
  sp.clusters = {{2.0, 1}, {3.0, 1}};
  // Two values, each type I or II, plus the one pairing.
  EXPECT_EQ(enumerate_critical(sp).size(), 5u);
  sp.clusters = {{2.0, 1}, {9.0, 1}};
  EXPECT_EQ(enumerate_critical(sp).size(), 4u);
}

TEST(Enumerate, FullyDegenerateCounts) {
  // Reference counts from a direct combinatorial oracle: sum over k pairs of (n - 2k + 1).
  const int want[] = {0, 2, 4, 6, 9};
  for (int n = 1; n <= 4; ++n) {
    SingularSpectrum sp;
    sp.clusters = {{2.0, n}};
    EXPECT_EQ(static_cast<int>(enumerate_critical(sp).size()), want[n]) << n;
  }
}

TEST(Enumerate, SortedUniqueAndValid) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    const auto sets = enumerate_critical(obj.spectrum());
    ASSERT_FALSE(sets.empty());
    for (std::size_t k = 0; k < sets.size(); ++k) {
      EXPECT_NO_THROW(validate_index_set(sets[k], obj.spectrum()));
      if (k > 0) EXPECT_TRUE(sets[k - 1] < sets[k]);
    }
    EXPECT_NE(std::find(sets.begin(), sets.end(), minimum_index_set(obj.spectrum())), sets.end());
  }
}

TEST(IndexSet, ValidationRejectsBadCounts) {
  const SingularSpectrum sp = sum_objective().spectrum();
  CriticalIndexSet idx = minimum_index_set(sp);
  idx.mp[0] = 1;
  EXPECT_THROW(validate_index_set(idx, sp), ValidationError);
  idx.mp[0] = -1;
  idx.mpp[0] = 3;
  EXPECT_THROW(validate_index_set(idx, sp), ValidationError);
  idx = minimum_index_set(sp);
  idx.m0 = 1;
  EXPECT_THROW(validate_index_set(idx, sp), ValidationError);
  EXPECT_THROW(build_characteristic(idx, sp), ValidationError);
}

TEST(Characteristic, SumBlocks) {
  const SingularSpectrum sp = sum_objective().spectrum();
  const auto sets = enumerate_critical(sp);
  const double w = sum::golden();
  const Mat t = sum::frame_turn();
  const auto p1 = build_characteristic(sum_set(sets, 2, 0, 0), sp).p;
  EXPECT_LT((p1 - canonical_e(sp)).norm(), 1e-14);
  EXPECT_LT((t * p1 * t.transpose() - (Vec(4) << w, 1 / w, 1 / w, w).finished().asDiagonal().toDenseMatrix()).norm(),
            1e-14);
  const auto p2 = build_characteristic(sum_set(sets, 0, 2, 0), sp).p;
  const double c = std::cbrt(w);
  EXPECT_LT((t * p2 * t.transpose() + (Vec(4) << 1 / c, c, c, 1 / c).finished().asDiagonal().toDenseMatrix()).norm(),
            1e-14);
  const auto p4 = build_characteristic(sum_set(sets, 0, 0, 1), sp).p;
  Mat perm = Mat::Zero(4, 4);
  perm(0, 1) = perm(1, 0) = perm(2, 3) = perm(3, 2) = 1.0;
  EXPECT_LT((t * p4 * t.transpose() - perm).norm(), 1e-14);
}

TEST(Characteristic, StructureProperties) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    for (const auto& idx : enumerate_critical(obj.spectrum())) {
      const auto ch = build_characteristic(idx, obj.spectrum());
      const Mat d = ch.d.asDiagonal();
      EXPECT_LT((d * ch.l - ch.l * d).norm(), 1e-12) << idx.label();
      EXPECT_LT((ch.l - ch.l.transpose()).norm(), 1e-12);
      EXPECT_LT((ch.l * ch.l - Mat::Identity(ch.l.rows(), ch.l.cols())).norm(), 1e-12);
      EXPECT_LT((ch.p - d * ch.l).norm(), 1e-12);
      EXPECT_LT(check_symplectic(ch.p), 1e-10);
      EXPECT_GT(ch.d.minCoeff(), 0.0);
    }
  }
}

TEST(Representative, EveryIndexSetIsCritical) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    for (const auto& idx : enumerate_critical(obj.spectrum())) {
      const Mat s = build_representative(idx, obj).matrix();
      const double scale = std::max(1.0, s.squaredNorm() * w.matrix().norm());
      EXPECT_LE(critical_residual(s, w.matrix()), 1e-8 * scale) << idx.label();
      EXPECT_LE(gradient(s, w.matrix()).y().norm(), 1e-8 * scale) << idx.label();
    }
  }
}

TEST(Representative, MinimumRebuildsTarget) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    const Mat s = build_representative(minimum_index_set(obj.spectrum()), obj).matrix();
    EXPECT_LT((s - w.matrix()).norm(), 1e-9 * std::max(1.0, w.matrix().norm()));
  }
}

TEST(Representative, SumFixtures) {
  const Objective obj = sum_objective();
  const auto sets = enumerate_critical(obj.spectrum());
  const Mat s2 = build_representative(sum_set(sets, 0, 2, 0), obj).matrix();
  EXPECT_LT((s2 - sum::reference_s2()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Representative, RejectsNonStabilizer) {
  const Objective obj = sum_objective();
  const auto r = random_orthosymplectic(2, 3);
  EXPECT_THROW(build_representative(minimum_index_set(obj.spectrum()), obj, r), ValidationError);
}

TEST(Representative, ValueIsStabilizerInvariant) {
  std::mt19937_64 rng(17);
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    for (const auto& idx : enumerate_critical(obj.spectrum())) {
      const double v0 = objective_value(build_representative(idx, obj), w);
      for (int k = 0; k < 50; ++k) {
        const auto r = random_stabilizer(obj.spectrum(), rng);
        const double v = objective_value(build_representative(idx, obj, r), w);
        EXPECT_NEAR(v, v0, 1e-9 * std::max(1.0, v0)) << idx.label();
      }
    }
  }
}

TEST(CriticalValues, SumTable) {
  const SingularSpectrum sp = sum_objective().spectrum();
  const auto sets = enumerate_critical(sp);
  EXPECT_NEAR(critical_value(sum_set(sets, 2, 0, 0), sp).constructive, 0.0, 1e-12);
  EXPECT_NEAR(critical_value(sum_set(sets, 0, 2, 0), sp).constructive, 18.623, 1e-3);
  EXPECT_NEAR(critical_value(sum_set(sets, 1, 1, 0), sp).constructive, 9.311, 1e-3);
  EXPECT_NEAR(critical_value(sum_set(sets, 0, 0, 1), sp).constructive, 10.0, 1e-12);
  for (const auto& idx : sets) {
    const auto cv = critical_value(idx, sp);
    EXPECT_NEAR(cv.closed_form, cv.constructive, 1e-9);
  }
}

TEST(CriticalValues, ConstructiveEqualsDistance) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    for (const auto& idx : enumerate_critical(obj.spectrum())) {
      const double direct = objective_value(build_representative(idx, obj), w);
      const auto cv = critical_value(idx, obj.spectrum());
      EXPECT_NEAR(cv.constructive, direct, 1e-9 * std::max(1.0, direct));
      EXPECT_NEAR(cv.closed_form, cv.constructive, 1e-9 * std::max(1.0, direct));
    }
  }
}

TEST(CriticalValues, UnitClusterExponent) {
  SingularSpectrum sp;
  sp.n0 = 2;
  for (const auto& idx : enumerate_critical(sp)) {
    const auto cv = critical_value(idx, sp);
    const int k = sp.n0 - idx.m0;
    EXPECT_NEAR(cv.constructive, 8.0 * k, 1e-12);
    EXPECT_NEAR(cv.closed_form_as_printed, 8.0 * k * k, 1e-12);
  }
}

TEST(Dimension, Examples) {
  const SingularSpectrum sp = sum_objective().spectrum();
  const auto sets = enumerate_critical(sp);
  EXPECT_EQ(submanifold_dimension(sum_set(sets, 2, 0, 0), sp).best(), 0);
  EXPECT_EQ(submanifold_dimension(sum_set(sets, 1, 1, 0), sp).best(), 1);
  const auto d4 = submanifold_dimension(sum_set(sets, 0, 0, 1), sp);
  EXPECT_FALSE(d4.formula.has_value());
  EXPECT_EQ(d4.tangent_rank, 0);

  SingularSpectrum unit;
  unit.n0 = 2;
  for (const auto& idx : enumerate_critical(unit)) {
    const auto d = submanifold_dimension(idx, unit);
    EXPECT_EQ(*d.formula, 2 * idx.m0 * (2 - idx.m0));
  }
}

TEST(Dimension, FormulaMatchesTangentRank) {
  for (const auto& w : sample_targets()) {
    const Objective obj = Objective::from(w);
    for (const auto& idx : enumerate_critical(obj.spectrum())) {
      const auto d = submanifold_dimension(idx, obj.spectrum());
      if (d.formula) EXPECT_EQ(*d.formula, d.tangent_rank) << idx.label();
    }
  }
}

TEST(CountFormula, Records) {
  const auto sum_rec = count_formula(sum_objective().spectrum());
  EXPECT_EQ(sum_rec.enumerated, 4);
  ASSERT_TRUE(sum_rec.printed_even_odd.has_value());
  EXPECT_EQ(*sum_rec.printed_even_odd, 8.0);
  EXPECT_NEAR(sum_rec.upper_bound, 5.0, 1e-12);
  EXPECT_NEAR(sum_rec.upper_bound_as_printed, 1.0, 1e-12);

  SingularSpectrum unit;
  unit.n0 = 3;
  const auto unit_rec = count_formula(unit);
  EXPECT_EQ(unit_rec.enumerated, 4);
  EXPECT_FALSE(unit_rec.printed_even_odd.has_value());

  SingularSpectrum deg;
  deg.clusters = {{2.0, 4}};
  const auto deg_rec = count_formula(deg);
  EXPECT_EQ(deg_rec.enumerated, 9);
  EXPECT_EQ(*deg_rec.printed_even_odd, 18.0);
  deg.clusters = {{2.0, 3}};
  EXPECT_EQ(count_formula(deg).enumerated, 6);
  EXPECT_EQ(*count_formula(deg).printed_even_odd, 12.0);
}
