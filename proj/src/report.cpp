#include "symland/report.hpp"

#include <cmath>

#include "json.hpp"

#include <fmt/format.h>

namespace symland {
namespace {

using nlohmann::json;

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows() / 2}, {"rows", std::move(rows)}};
}

json inertia_json(const Inertia& in) {
  return {{"pos", in.pos}, {"neg", in.neg}, {"zero", in.zero}};
}

json index_json(const CriticalIndexSet& idx) {
  json pairs = json::array();
  for (const auto& p : idx.mppp) {
    pairs.push_back({{"alpha", p.alpha}, {"beta", p.beta}, {"count", p.count}, {"angle", p.angle}});
  }
  return {{"m0", idx.m0}, {"mp", idx.mp}, {"mpp", idx.mpp}, {"mppp", pairs}, {"label", idx.label()}};
}

}  // namespace

AnalysisReport analyze(const SymplecticMatrix& w, const Tolerances& tol) {
  const Objective obj = Objective::from(w, tol);
  AnalysisReport rep;
  rep.target = w.matrix();
  rep.d = obj.svd().d;
  rep.spectrum = obj.spectrum();
  auto& diag = rep.diagnostics;

  for (const auto& idx : enumerate_critical(rep.spectrum)) {
    SubmanifoldReport sub;
    sub.idx = idx;
    sub.representative = build_representative(idx, obj).matrix();
    sub.value = critical_value(idx, rep.spectrum);
    const Classification cls = classify(idx, obj);
    sub.dimension = cls.dimension;
    sub.inertia = cls.inertia;
    sub.kind = cls.kind;
    const HessianForm form = assemble_hqf(idx, obj);
    sub.path_agreement = form.path_agreement;
    sub.sigma_residual = form.sigma_residual;
    sub.exact_inertia = inertia_of(second_variation(sub.representative, w.matrix()));
    sub.analytic = analytic_inertia(idx, rep.spectrum);
    sub.analytic_ascending = analytic_inertia_ascending(idx, rep.spectrum);
    sub.critical_residual = critical_residual(sub.representative, w.matrix());
    if (idx.has_type_iii()) sub.witness = saddle_witness(idx, rep.spectrum);

    diag.max_closed_form_gap =
        std::max(diag.max_closed_form_gap, std::abs(sub.value.closed_form - sub.value.constructive));
    if (sub.analytic && !sub.analytic->same_counts(sub.inertia)) diag.analytic_mismatch = true;
    if (sub.analytic_ascending && !sub.analytic_ascending->same_counts(sub.inertia)) {
      diag.ascending_mismatch = true;
    }
    if (!sub.exact_inertia.same_counts(sub.inertia)) diag.exact_inertia_mismatch = true;
    if (sub.kind == CriticalKind::Minimum) {
      ++rep.minima;
      rep.minimum_is_target = (sub.representative - w.matrix()).norm() <=
                              1e-8 * std::max(1.0, w.matrix().norm());
    }
    rep.submanifolds.push_back(std::move(sub));
  }
  if (rep.minima != 1) rep.minimum_is_target = false;

  diag.count = count_formula(rep.spectrum);
  if (diag.count.printed_even_odd && *diag.count.printed_even_odd != diag.count.enumerated) {
    diag.enum_discrepancy = true;
    diag.notes.push_back(fmt::format(
        "closed-form count for one fully degenerate cluster gives {} but enumeration finds {}",
        *diag.count.printed_even_odd, diag.count.enumerated));
  }
  diag.notes.push_back(fmt::format(
      "upper bound summed from m=0 is {}, from m=1 (as printed) is {}", diag.count.upper_bound,
      diag.count.upper_bound_as_printed));

  {
    SingularSpectrum unit;
    unit.n0 = 2;
    CriticalIndexSet idx = minimum_index_set(unit);
    idx.m0 = 0;
    const CriticalValue v = critical_value(idx, unit);
    diag.unit_probe_direct = v.constructive;
    diag.unit_probe_printed = v.closed_form_as_printed;
    diag.unit_exponent_discrepancy = std::abs(v.constructive - v.closed_form_as_printed) > 1e-9;
    if (diag.unit_exponent_discrepancy) {
      diag.notes.push_back(fmt::format(
          "unit-cluster term printed as 8(n0-m0)^2 gives {} at n0-m0=2; direct value is {} "
          "(linear 8(n0-m0))",
          v.closed_form_as_printed, v.constructive));
    }
  }
  if (diag.ascending_mismatch && !diag.analytic_mismatch) {
    diag.notes.push_back(
        "closed-form inertia matches only with cross terms ordered by decreasing omega");
  }
  if (diag.analytic_mismatch) diag.notes.push_back("closed-form inertia disagrees with numerics");
  if (diag.exact_inertia_mismatch) {
    diag.notes.push_back("trace-form inertia differs from exact second-variation inertia");
  }

  const double orth = check_orthogonal(w.matrix());
  if (orth <= tol.sympl * (1.0 + w.matrix().squaredNorm())) rep.compact = compact_enumerate(w, tol.sympl);
  return rep;
}

std::string report_to_json(const AnalysisReport& rep, const std::string& target_path) {
  json target = matrix_json(rep.target);
  if (!target_path.empty()) target["path"] = target_path;

  json clusters = json::array();
  for (const auto& c : rep.spectrum.clusters) {
    clusters.push_back({{"omega", c.omega}, {"multiplicity", c.multiplicity}});
  }
  json spectrum = {{"n0", rep.spectrum.n0},
                   {"clusters", clusters},
                   {"d", std::vector<double>(rep.d.data(), rep.d.data() + rep.d.size())}};

  json subs = json::array();
  for (const auto& s : rep.submanifolds) {
    json entry = {{"index_set", index_json(s.idx)},
                  {"value", s.value.constructive},
                  {"value_closed_form", s.value.closed_form},
                  {"value_closed_form_as_printed", s.value.closed_form_as_printed},
                  {"dimension", s.dimension.formula ? json(*s.dimension.formula) : json(nullptr)},
                  {"tangent_rank", s.dimension.tangent_rank},
                  {"inertia", inertia_json(s.inertia)},
                  {"exact_inertia", inertia_json(s.exact_inertia)},
                  {"analytic_inertia", s.analytic ? inertia_json(*s.analytic) : json(nullptr)},
                  {"kind", to_string(s.kind)},
                  {"critical_residual", s.critical_residual},
                  {"hqf_path_agreement", s.path_agreement},
                  {"sigma_residual", s.sigma_residual},
                  {"representative", matrix_json(s.representative)}};
    if (s.witness) {
      entry["saddle_witness"] = {{"h_plus", s.witness->h_plus},
                                 {"lambda_plus", s.witness->lambda_plus},
                                 {"h_minus", s.witness->h_minus},
                                 {"method_minus", s.witness->method_minus}};
    }
    subs.push_back(std::move(entry));
  }

  const auto& d = rep.diagnostics;
  json diag = {
      {"count",
       {{"enumerated", d.count.enumerated},
        {"printed_even_odd", d.count.printed_even_odd ? json(*d.count.printed_even_odd) : json("n/a")},
        {"upper_bound", d.count.upper_bound},
        {"upper_bound_as_printed", d.count.upper_bound_as_printed},
        {"discrepancy", d.enum_discrepancy}}},
      {"unit_cluster_exponent",
       {{"printed", "8(n0-m0)^2"},
        {"implemented", "8(n0-m0)"},
        {"probe_n0_minus_m0", 2},
        {"direct", d.unit_probe_direct},
        {"printed_value", d.unit_probe_printed},
        {"discrepancy", d.unit_exponent_discrepancy}}},
      {"max_closed_form_gap", d.max_closed_form_gap},
      {"analytic_inertia_mismatch", d.analytic_mismatch},
      {"ascending_reading_mismatch", d.ascending_mismatch},
      {"exact_inertia_mismatch", d.exact_inertia_mismatch},
      {"unique_minimum", rep.minima == 1 && rep.minimum_is_target},
      {"notes", d.notes}};

  json doc = {{"target", target}, {"spectrum", spectrum}, {"submanifolds", subs}, {"diagnostics", diag}};
  if (rep.compact) {
    json orbits = json::array();
    for (const auto& c : *rep.compact) {
      orbits.push_back({{"m", c.m},
                        {"value", c.value},
                        {"dimension", c.dimension},
                        {"inertia", inertia_json(c.inertia)},
                        {"representative", matrix_json(c.representative)}});
    }
    doc["compact"] = {{"constrained", true}, {"orbits", orbits}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace symland
