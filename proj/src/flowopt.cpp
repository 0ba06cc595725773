#include "symland/flowopt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace symland {

void FlowConfig::validate() const {
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  if (max_iters < 0) throw ValidationError("max_iters must be non-negative");
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ValidationError("armijo constant must lie in (0, 1)");
  if (starts < 1) throw ValidationError("starts must be at least 1");
  if (!(spread >= 0.0)) throw ValidationError("spread must be non-negative");
  if (!(step_cap >= step)) throw ValidationError("step_cap must be at least step");
  if (recertify_every < 1) throw ValidationError("recertify_every must be positive");
}

std::optional<double> match_value(double v, const std::vector<double>& values, double tol) {
  std::optional<double> best;
  for (double c : values) {
    if (std::abs(c - v) <= tol && (!best || std::abs(c - v) < std::abs(*best - v))) best = c;
  }
  return best;
}

namespace {

double next_trial(const FlowConfig& cfg, double eta, const Mat& g_old, const Mat& g_new) {
  const double expand = std::min(cfg.step_cap, 2.0 * eta);
  switch (cfg.trial) {
    case TrialStep::Fixed:
      return cfg.step;
    case TrialStep::Expand:
      return expand;
    case TrialStep::BarzilaiBorwein: {
      // step taken in Y is -eta * g_old
      const Mat y = g_new - g_old;
      const double sy = -eta * (g_old.array() * y.array()).sum();
      const double yy = y.squaredNorm();
      if (!(sy > 0.0) || !(yy > 0.0)) return expand;
      return std::clamp(sy / yy, 1e-10, cfg.step_cap);
    }
  }
  return cfg.step;
}

}  // namespace

Trajectory descend(const Mat& w, const Mat& s0, const FlowConfig& cfg,
                   const std::vector<double>& critical_values) {
  cfg.validate();
  if (w.rows() != s0.rows() || w.cols() != s0.cols()) {
    throw DimensionError("descend: start and target differ in shape");
  }
  const int n = static_cast<int>(w.rows() / 2);
  const Mat j = symplectic_form(n);

  Trajectory tr;
  Mat s = s0;
  double value = objective_value(s, w);
  Mat g = gradient(s, w).y();
  double gn = g.norm();
  tr.max_sympl_residual = check_symplectic(s);
  if (cfg.record) tr.iterates.push_back({0, value, gn});

  double trial = cfg.step;
  int it = 0;
  while (gn > cfg.grad_tol && it < cfg.max_iters) {
    const Mat dir = -(j * g);
    const double slope = 2.0 * gn * gn;
    double eta = trial;
    bool accepted = false;
    Mat s_new;
    double v_new = 0.0;
    while (eta > 1e-300) {
      s_new = s * expm(eta * dir);
      v_new = objective_value(s_new, w);
      if (std::isfinite(v_new) && v_new <= value - cfg.armijo * eta * slope) {
        accepted = true;
        break;
      }
      eta *= cfg.beta;
    }
    if (!accepted) break;  // no representable decrease left
    ++it;
    if (v_new > value) tr.monotone = false;
    s = std::move(s_new);
    value = v_new;

    double res = check_symplectic(s);
    if (it % cfg.recertify_every == 0 && res > cfg.drift_tol) {
      s = project_to_group(s);
      res = check_symplectic(s);
      const double v_proj = objective_value(s, w);
      if (v_proj > value) tr.monotone = false;
      value = v_proj;
      ++tr.projections;
    }
    tr.max_sympl_residual = std::max(tr.max_sympl_residual, res);

    Mat g_new = gradient(s, w).y();
    trial = next_trial(cfg, eta, g, g_new);
    g = std::move(g_new);
    gn = g.norm();
    if (cfg.record) tr.iterates.push_back({it, value, gn});
  }

  tr.terminal = std::move(s);
  tr.iterations = it;
  tr.final_value = value;
  tr.final_grad = gn;
  tr.converged = gn <= cfg.grad_tol;
  if (tr.converged) tr.converged_to = match_value(value, critical_values);
  return tr;
}

int worker_count(int jobs) {
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("SYMLAND_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return std::max(1, std::min(workers, jobs));
}

MultistartSummary multistart(const Mat& w, const FlowConfig& cfg,
                             const std::vector<double>& critical_values) {
  cfg.validate();
  const int n = static_cast<int>(w.rows() / 2);
  MultistartSummary out;
  out.starts = cfg.starts;
  out.runs.resize(static_cast<std::size_t>(cfg.starts));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (int k = next++; k < cfg.starts; k = next++) {
      const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(k);
      const Mat s0 = random_symplectic(n, seed, cfg.spread).matrix();
      out.runs[static_cast<std::size_t>(k)] = descend(w, s0, cfg, critical_values);
    }
  };
  const int workers = worker_count(cfg.starts);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (const auto& tr : out.runs) {
    if (tr.converged) ++out.converged;
    if (tr.final_value <= 1e-6) ++out.reached_minimum;
    out.max_iterations = std::max(out.max_iterations, tr.iterations);
    out.all_monotone = out.all_monotone && tr.monotone;
    out.max_sympl_residual = std::max(out.max_sympl_residual, tr.max_sympl_residual);
    const double key = match_value(tr.final_value, critical_values).value_or(tr.final_value);
    auto bin = std::find_if(out.histogram.begin(), out.histogram.end(),
                            [&](const HistogramBin& b) { return std::abs(b.value - key) <= 1e-4; });
    if (bin == out.histogram.end()) {
      out.histogram.push_back({key, 1});
    } else {
      ++bin->count;
    }
  }
  std::sort(out.histogram.begin(), out.histogram.end(),
            [](const HistogramBin& a, const HistogramBin& b) { return a.value < b.value; });
  return out;
}

namespace {

// Orthonormal basis of symmetric 2N x 2N matrices.
std::vector<Mat> symmetric_basis(int dim) {
  std::vector<Mat> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int k = i; k < dim; ++k) {
      Mat b = Mat::Zero(dim, dim);
      if (i == k) {
        b(i, i) = 1.0;
      } else {
        b(i, k) = b(k, i) = r;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

Vec coords(const Mat& sym, const std::vector<Mat>& basis) {
  Vec v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = (basis[k].array() * sym.array()).sum();
  }
  return v;
}

}  // namespace

StationaryResult find_stationary(const Mat& w, const Mat& s0, int max_iters, double tol) {
  const int n = static_cast<int>(w.rows() / 2);
  const Mat j = symplectic_form(n);
  const std::vector<Mat> basis = symmetric_basis(2 * n);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  StationaryResult out;
  Mat s = s0;
  Mat g = gradient(s, w).y();
  double gn = g.norm();
  double mu = 1e-3;
  int it = 0;
  while (gn > tol && it < max_iters && mu < 1e14) {
    ++it;
    const Mat m = s.transpose() * s;
    const Mat wts = w.transpose() * s;
    Mat jac(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Mat a = j * basis[static_cast<std::size_t>(k)];
      const Mat dg = (a.transpose() * m + m * a - wts * a) * j;
      jac.col(k) = coords(0.5 * (dg + dg.transpose()), basis);
    }
    const Vec gv = coords(g, basis);
    const Mat normal = jac.transpose() * jac;
    const Vec rhs = -(jac.transpose() * gv);
    bool improved = false;
    while (mu < 1e14) {
      const Vec y = (normal + mu * Mat::Identity(dim, dim)).ldlt().solve(rhs);
      Mat ys = Mat::Zero(2 * n, 2 * n);
      for (Eigen::Index k = 0; k < dim; ++k) ys += y(k) * basis[static_cast<std::size_t>(k)];
      const Mat s_new = s * expm(j * ys);
      const Mat g_new = gradient(s_new, w).y();
      const double gn_new = g_new.norm();
      if (std::isfinite(gn_new) && gn_new < gn) {
        s = s_new;
        g = g_new;
        gn = gn_new;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 4.0;
    }
    if (!improved || s.norm() > 1e6) break;
  }
  out.s = s;
  out.grad_norm = gn;
  out.value = objective_value(s, w);
  out.iterations = it;
  out.converged = gn <= tol;
  return out;
}

}  // namespace symland
