// symland: landscape analysis, optimization runs and SUM-gate verification.
//
// Exit codes: 0 success, 1 I/O, 2 invalid input, 3 non-convergence,
// 4 verification failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include "symland/flowopt.hpp"
#include "symland/matrix_io.hpp"
#include "symland/report.hpp"
#include "symland/sumgate.hpp"

namespace {

using namespace symland;
using nlohmann::json;

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kNoConvergence = 3, kVerifyFailed = 4 };

struct Options {
  std::string input;
  std::string output;
  std::string format;
  double tol = Tolerances{}.sympl;
  double cluster_tol = Tolerances{}.cluster;
  int starts = 20;
  std::uint64_t seed = 0;
  double step = 0.1;
  int max_iters = 50000;
  double grad_tol = 1e-8;
  double spread = 1.0;
  std::string trajectory_dir;
  std::string trial = "bb";
  std::string dump_q;
  int n = 2;
  std::optional<double> fixture_tol;
  double perturb_omega = 0.0;
};

Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.sympl = o.tol;
  t.cluster = o.cluster_tol;
  return t;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_atomic(path, text);
  }
}

SymplecticMatrix load_target(const Options& o) {
  const Mat m = o.format.empty() ? read_matrix(o.input) : read_matrix(o.input, parse_format(o.format));
  return SymplecticMatrix::from(m, o.tol);
}

int cmd_analyze(const Options& o) {
  const SymplecticMatrix w = load_target(o);
  const AnalysisReport rep = analyze(w, tolerances(o));
  emit(o.output, report_to_json(rep, o.input));
  if (!o.dump_q.empty()) {
    std::filesystem::create_directories(o.dump_q);
    int k = 0;
    for (const auto& sub : rep.submanifolds) {
      const HessianForm form = assemble_hqf(sub.idx, rep.spectrum);
      json rows = json::array();
      for (Eigen::Index i = 0; i < form.q.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < form.q.cols(); ++j) row.push_back(form.q(i, j));
        rows.push_back(row);
      }
      const json doc = {{"dim", form.dim}, {"index_set", sub.idx.label()}, {"rows", rows}};
      write_text_atomic((std::filesystem::path(o.dump_q) / fmt::format("q_{:03d}.json", k++)).string(),
                        doc.dump(2) + "\n");
    }
  }
  return kOk;
}

int cmd_optimize(const Options& o) {
  const SymplecticMatrix w = load_target(o);
  FlowConfig cfg;
  cfg.step = o.step;
  cfg.max_iters = o.max_iters;
  cfg.grad_tol = o.grad_tol;
  cfg.seed = o.seed;
  cfg.starts = o.starts;
  cfg.spread = o.spread;
  cfg.trial = o.trial == "fixed"    ? TrialStep::Fixed
              : o.trial == "expand" ? TrialStep::Expand
                                    : TrialStep::BarzilaiBorwein;
  cfg.step_cap = std::max(cfg.step_cap, cfg.step);
  cfg.record = !o.trajectory_dir.empty();
  cfg.validate();

  std::vector<double> values;
  const Objective obj = Objective::from(w, tolerances(o));
  for (const auto& idx : enumerate_critical(obj.spectrum())) {
    values.push_back(critical_value(idx, obj.spectrum()).constructive);
  }
  const MultistartSummary sum = multistart(w.matrix(), cfg, values);

  json hist = json::array();
  for (const auto& b : sum.histogram) hist.push_back({{"value", b.value}, {"count", b.count}});
  json runs = json::array();
  for (std::size_t k = 0; k < sum.runs.size(); ++k) {
    const auto& r = sum.runs[k];
    runs.push_back({{"start", k},
                    {"iterations", r.iterations},
                    {"value", r.final_value},
                    {"grad_norm", r.final_grad},
                    {"converged", r.converged},
                    {"converged_to", r.converged_to ? json(*r.converged_to) : json("none")},
                    {"monotone", r.monotone},
                    {"max_sympl_residual", r.max_sympl_residual}});
  }
  const json doc = {{"starts", sum.starts},
                    {"converged", sum.converged},
                    {"reached_minimum", sum.reached_minimum},
                    {"max_iterations", sum.max_iterations},
                    {"all_monotone", sum.all_monotone},
                    {"max_sympl_residual", sum.max_sympl_residual},
                    {"histogram", hist},
                    {"runs", runs}};
  emit(o.output, doc.dump(2) + "\n");

  if (!o.trajectory_dir.empty()) {
    std::filesystem::create_directories(o.trajectory_dir);
    for (std::size_t k = 0; k < sum.runs.size(); ++k) {
      std::string text;
      for (const auto& rec : sum.runs[k].iterates) {
        text += fmt::format("{} {:.17g} {:.17g}\n", rec.iter, rec.value, rec.grad_norm);
      }
      write_text_atomic(
          (std::filesystem::path(o.trajectory_dir) / fmt::format("start_{:03d}.txt", k)).string(),
          text);
    }
  }
  return sum.converged == sum.starts ? kOk : kNoConvergence;
}

int cmd_verify_sum(const Options& o) {
  sum::VerifyOptions vo;
  if (o.fixture_tol) vo.fixture_tol = *o.fixture_tol;
  vo.omega_perturbation = o.perturb_omega;
  const sum::VerifyResult res = sum::verify(vo);
  std::string text;
  for (const auto& g : res.groups) {
    text += fmt::format("{:<16} {} ({} checks)\n", g.name, g.passed() ? "PASS" : "FAIL", g.checks);
    for (const auto& f : g.failures) text += "    " + f + "\n";
  }
  text += fmt::format("overall: {} ({} check groups)\n", res.passed() ? "PASS" : "FAIL",
                      res.groups.size());
  emit(o.output, text);
  return res.passed() ? kOk : kVerifyFailed;
}

int cmd_random(const Options& o) {
  const SymplecticMatrix s = random_symplectic(o.n, o.seed, o.spread);
  const MatrixFormat fmt_out = o.format.empty() ? MatrixFormat::Json : parse_format(o.format);
  const std::string text = fmt_out == MatrixFormat::Csv ? matrix_to_csv(s.matrix()) : matrix_to_json(s.matrix());
  emit(o.output, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-point analysis of ||S - W||^2 on the real symplectic group"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", o.input, "matrix file (JSON or CSV)");
    if (needs_input) in->required();
    sub->add_option("--output", o.output, "output path (stdout when omitted)");
    sub->add_option("--format", o.format, "matrix format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", o.tol, "symplectic residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--cluster-tol", o.cluster_tol, "singular-value clustering tolerance")
        ->check(CLI::PositiveNumber);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "enumerate and classify critical submanifolds");
  add_io(analyze_cmd, true);
  analyze_cmd->add_option("--dump-q", o.dump_q, "directory for per-submanifold Q matrices");

  auto* optimize_cmd = app.add_subcommand("optimize", "multistart gradient descent");
  add_io(optimize_cmd, true);
  optimize_cmd->add_option("--starts", o.starts, "number of random starts")->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--seed", o.seed, "random seed");
  optimize_cmd->add_option("--step", o.step, "initial step size")->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--max-iters", o.max_iters, "iteration cap per start")
      ->check(CLI::NonNegativeNumber);
  optimize_cmd->add_option("--grad-tol", o.grad_tol, "gradient-norm stopping tolerance")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--spread", o.spread, "random start scale")->check(CLI::NonNegativeNumber);
  optimize_cmd->add_option("--trial", o.trial, "first Armijo trial step: fixed, expand or bb")
      ->check(CLI::IsMember({"fixed", "expand", "bb"}));
  optimize_cmd->add_option("--trajectory-dir", o.trajectory_dir, "directory for per-start logs");

  auto* verify_cmd = app.add_subcommand("verify-sum", "reproduce the SUM-gate reference data");
  verify_cmd->add_option("--output", o.output, "report path (stdout when omitted)");
  verify_cmd->add_option("--tol", o.fixture_tol, "tolerance for three-decimal fixtures and values")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--perturb-omega", o.perturb_omega)->group("");

  auto* random_cmd = app.add_subcommand("random", "write a random symplectic matrix exp(JY)");
  random_cmd->add_option("--n", o.n, "number of modes N")->check(CLI::PositiveNumber);
  random_cmd->add_option("--seed", o.seed, "random seed");
  random_cmd->add_option("--spread", o.spread, "entry scale of Y")->check(CLI::NonNegativeNumber);
  random_cmd->add_option("--output", o.output, "output path (stdout when omitted)");
  random_cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(o);
    if (*optimize_cmd) return cmd_optimize(o);
    if (*verify_cmd) return cmd_verify_sum(o);
    if (*random_cmd) return cmd_random(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const StructureError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kInvalid;
}
