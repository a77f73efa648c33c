// Copyright 2026 The emtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emtk/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "emtk/error.hpp"

namespace emtk {

namespace {

constexpr std::array<SolverConfig, kSolverCount> kSolvers = {{
    {0, Loss::logistic, Regularizer::l2, Formulation::primal, "L2-regularized logistic regression (primal)"},
    {1, Loss::hinge, Regularizer::l2, Formulation::dual, "L2-regularized hinge-loss SVM (dual)"},
    {2, Loss::hinge, Regularizer::l2, Formulation::primal, "L2-regularized hinge-loss SVM (primal)"},
    {3, Loss::squared_hinge, Regularizer::l2, Formulation::dual, "L2-regularized squared-hinge SVM (dual)"},
    {4, Loss::squared_hinge, Regularizer::l2, Formulation::primal, "L2-regularized squared-hinge SVM (primal)"},
    {5, Loss::logistic, Regularizer::l1, Formulation::primal, "L1-regularized logistic regression"},
    {6, Loss::squared_hinge, Regularizer::l1, Formulation::primal, "L1-regularized squared-hinge SVM"},
    {7, Loss::logistic, Regularizer::l2, Formulation::dual, "L2-regularized logistic regression (dual)"},
}};

double dot(const SparseRow& row, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t k = 0; k < row.index.size(); ++k) s += row.value[k] * w[row.index[k]];
  return s;
}

void axpy(const SparseRow& row, double a, std::span<double> w) {
  for (std::size_t k = 0; k < row.index.size(); ++k) w[row.index[k]] += a * row.value[k];
}

double squared_norm(const SparseRow& row) {
  double s = 0.0;
  for (double v : row.value) s += v * v;
  return s;
}

double squared_norm(std::span<const double> w) {
  return std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
}

// Loss as a function of the margin z = y * w.x, and its derivative.
double loss_value(Loss loss, double z) {
  switch (loss) {
    case Loss::logistic: return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    case Loss::hinge: return std::max(0.0, 1.0 - z);
    case Loss::squared_hinge: {
      double h = std::max(0.0, 1.0 - z);
      return h * h;
    }
  }
  return 0.0;
}

double loss_derivative(Loss loss, double z) {
  switch (loss) {
    case Loss::logistic: return z > 0 ? -std::exp(-z) / (1.0 + std::exp(-z)) : -1.0 / (1.0 + std::exp(z));
    case Loss::hinge: return z < 1.0 ? -1.0 : 0.0;
    case Loss::squared_hinge: return -2.0 * std::max(0.0, 1.0 - z);
  }
  return 0.0;
}

double total_loss(const Problem& p, Loss loss, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) s += loss_value(loss, p.labels[i] * dot(p.rows[i], w));
  return s;
}

// Gradient of sum of losses (without C).
std::vector<double> loss_gradient(const Problem& p, Loss loss, std::span<const double> w) {
  std::vector<double> g(p.dim, 0.0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const double y = p.labels[i];
    const double d = loss_derivative(loss, y * dot(p.rows[i], w));
    if (d != 0.0) axpy(p.rows[i], d * y, g);
  }
  return g;
}

bool small_change(double before, double after, double tol) {
  const double scale = std::max({std::abs(before), std::abs(after), std::numeric_limits<double>::min()});
  return std::abs(before - after) / scale < tol;
}

[[noreturn]] void not_converged(const SolverConfig& config, int iterations, double objective) {
  throw ConvergenceError(fmt::format("solver {} did not converge within {} iterations (objective {})",
                                     config.id, iterations, objective),
                         objective);
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void shuffle_order(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
}

// Gradient descent with Armijo backtracking on 0.5|w|^2 + C * loss.
SolverResult l2_primal_smooth(const Problem& p, const SolverConfig& config, double cost,
                              const SolverOptions& opt) {
  std::vector<double> w(p.dim, 0.0), trial(p.dim);
  double f = primal_objective(p, config.loss, Regularizer::l2, cost, w);
  double step = 1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> g = l2_primal_gradient(p, config.loss, cost, w);
    const double gg = squared_norm(g);
    if (gg == 0.0) return {w, f, it};
    step = std::min(step * 2.0, 1e6);
    double f_new = f;
    while (true) {
      for (std::size_t j = 0; j < p.dim; ++j) trial[j] = w[j] - step * g[j];
      f_new = primal_objective(p, config.loss, Regularizer::l2, cost, trial);
      if (f_new <= f - 0.5 * step * gg) break;
      step *= 0.5;
      if (step < 1e-30) return {w, f, it};
    }
    w.swap(trial);
    const bool done = small_change(f, f_new, opt.tolerance);
    f = f_new;
    if (done) return {w, f, it};
  }
  not_converged(config, opt.max_iterations, f);
}

// Full-batch subgradient method (step 1/t) keeping the best iterate.
SolverResult l2_primal_hinge(const Problem& p, const SolverConfig& config, double cost,
                             const SolverOptions& opt) {
  constexpr int kWindow = 100;
  std::vector<double> w(p.dim, 0.0);
  std::vector<double> best_w = w;
  double best = primal_objective(p, Loss::hinge, Regularizer::l2, cost, w);
  std::vector<double> history{best};
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> g = l2_primal_gradient(p, Loss::hinge, cost, w);
    const double step = 1.0 / it;
    for (std::size_t j = 0; j < p.dim; ++j) w[j] -= step * g[j];
    const double f = primal_objective(p, Loss::hinge, Regularizer::l2, cost, w);
    if (f < best) {
      best = f;
      best_w = w;
    }
    history.push_back(best);
    if (it >= kWindow && small_change(history[it - kWindow], best, opt.tolerance)) {
      return {best_w, best, it};
    }
  }
  not_converged(config, opt.max_iterations, best);
}

// Dual coordinate descent for the hinge and squared-hinge SVM.
SolverResult l2_dual_svm(const Problem& p, const SolverConfig& config, double cost,
                         const SolverOptions& opt) {
  const bool hinge = config.loss == Loss::hinge;
  const double upper = hinge ? cost : std::numeric_limits<double>::infinity();
  const double diag = hinge ? 0.0 : 0.5 / cost;
  const std::size_t n = p.rows.size();

  std::vector<double> alpha(n, 0.0), qd(n), w(p.dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) qd[i] = squared_norm(p.rows[i]) + diag;
  std::vector<std::size_t> order = identity_order(n);
  std::mt19937_64 rng(opt.seed);

  double dual_prev = 0.0;
  for (int epoch = 1; epoch <= opt.max_iterations; ++epoch) {
    shuffle_order(order, rng);
    for (std::size_t i : order) {
      if (qd[i] <= 0.0) continue;
      const double y = p.labels[i];
      const double grad = y * dot(p.rows[i], w) - 1.0 + diag * alpha[i];
      double projected = grad;
      if (alpha[i] == 0.0) projected = std::min(grad, 0.0);
      else if (alpha[i] == upper) projected = std::max(grad, 0.0);
      if (projected == 0.0) continue;
      const double updated = std::clamp(alpha[i] - grad / qd[i], 0.0, upper);
      axpy(p.rows[i], (updated - alpha[i]) * y, w);
      alpha[i] = updated;
    }
    double dual = 0.5 * squared_norm(w);
    for (double a : alpha) dual += 0.5 * diag * a * a - a;
    if (small_change(dual_prev, dual, opt.tolerance)) {
      return {w, primal_objective(p, config.loss, Regularizer::l2, cost, w), epoch};
    }
    dual_prev = dual;
  }
  not_converged(config, opt.max_iterations, primal_objective(p, config.loss, Regularizer::l2, cost, w));
}

// Dual coordinate descent for logistic regression; each coordinate solves
//   min_z 0.5 q (z - a)^2 + b (z - a) + z log z + (C - z) log(C - z)
// on (0, C) by safeguarded Newton iterations.
SolverResult l2_dual_logistic(const Problem& p, const SolverConfig& config, double cost,
                              const SolverOptions& opt) {
  const std::size_t n = p.rows.size();
  std::vector<double> alpha(n, std::min(0.001 * cost, 1e-8)), qd(n), w(p.dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    qd[i] = squared_norm(p.rows[i]);
    axpy(p.rows[i], alpha[i] * p.labels[i], w);
  }
  const auto entropy = [cost](double a) {
    return a * std::log(a / cost) + (cost - a) * std::log((cost - a) / cost);
  };
  const auto dual_objective = [&] {
    double d = 0.5 * squared_norm(w);
    for (double a : alpha) d += entropy(a);
    return d;
  };

  std::vector<std::size_t> order = identity_order(n);
  std::mt19937_64 rng(opt.seed);
  double dual_prev = dual_objective();
  for (int epoch = 1; epoch <= opt.max_iterations; ++epoch) {
    shuffle_order(order, rng);
    for (std::size_t i : order) {
      const double y = p.labels[i];
      const double b = y * dot(p.rows[i], w);
      const double a0 = alpha[i];
      double lo = 0.0, hi = cost, z = a0;
      for (int k = 0; k < 100; ++k) {
        const double d1 = qd[i] * (z - a0) + b + std::log(z / (cost - z));
        if (d1 > 0) hi = z; else lo = z;
        const double d2 = qd[i] + cost / (z * (cost - z));
        double next = z - d1 / d2;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool settled = std::abs(next - z) <= 1e-14 * cost;
        z = next;
        if (settled) break;
      }
      if (z <= 0.0 || z >= cost) continue;
      axpy(p.rows[i], (z - a0) * y, w);
      alpha[i] = z;
    }
    const double dual = dual_objective();
    if (small_change(dual_prev, dual, opt.tolerance)) {
      return {w, primal_objective(p, Loss::logistic, Regularizer::l2, cost, w), epoch};
    }
    dual_prev = dual;
  }
  not_converged(config, opt.max_iterations, primal_objective(p, Loss::logistic, Regularizer::l2, cost, w));
}

// Proximal gradient with backtracking for |w|_1 + C * loss.
SolverResult l1_proximal(const Problem& p, const SolverConfig& config, double cost,
                         const SolverOptions& opt) {
  std::vector<double> w(p.dim, 0.0), trial(p.dim);
  double smooth = cost * total_loss(p, config.loss, w);
  double f = smooth;
  double step = 1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> g = loss_gradient(p, config.loss, w);
    for (double& x : g) x *= cost;
    step = std::min(step * 2.0, 1e6);
    double smooth_new = 0.0;
    while (true) {
      double linear = 0.0, quad = 0.0;
      for (std::size_t j = 0; j < p.dim; ++j) {
        const double u = w[j] - step * g[j];
        trial[j] = std::copysign(std::max(std::abs(u) - step, 0.0), u);
        const double d = trial[j] - w[j];
        linear += g[j] * d;
        quad += d * d;
      }
      smooth_new = cost * total_loss(p, config.loss, trial);
      if (smooth_new <= smooth + linear + quad / (2.0 * step) + 1e-12 * std::abs(smooth)) break;
      step *= 0.5;
      if (step < 1e-30) return {w, f, it};
    }
    w.swap(trial);
    smooth = smooth_new;
    double l1 = 0.0;
    for (double x : w) l1 += std::abs(x);
    const double f_new = l1 + smooth;
    const bool done = small_change(f, f_new, opt.tolerance);
    f = f_new;
    if (done) return {w, f, it};
  }
  not_converged(config, opt.max_iterations, f);
}

}  // namespace

const SolverConfig& solver_config(int id) {
  if (id < 0 || id >= kSolverCount) throw std::out_of_range(fmt::format("unknown solver id {}", id));
  return kSolvers[static_cast<std::size_t>(id)];
}

double primal_objective(const Problem& problem, Loss loss, Regularizer reg, double cost,
                        std::span<const double> w) {
  double r = 0.0;
  if (reg == Regularizer::l2) {
    r = 0.5 * squared_norm(w);
  } else {
    for (double x : w) r += std::abs(x);
  }
  return r + cost * total_loss(problem, loss, w);
}

std::vector<double> l2_primal_gradient(const Problem& problem, Loss loss, double cost,
                                       std::span<const double> w) {
  std::vector<double> g = loss_gradient(problem, loss, w);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = w[j] + cost * g[j];
  return g;
}

SolverResult solve(const Problem& problem, const SolverConfig& config, double cost,
                   const SolverOptions& options) {
  if (!(cost > 0.0)) throw std::invalid_argument("cost must be positive");
  if (problem.rows.empty()) throw DataError("no training examples");
  if (config.regularizer == Regularizer::l1) return l1_proximal(problem, config, cost, options);
  if (config.formulation == Formulation::dual) {
    return config.loss == Loss::logistic ? l2_dual_logistic(problem, config, cost, options)
                                         : l2_dual_svm(problem, config, cost, options);
  }
  return config.loss == Loss::hinge ? l2_primal_hinge(problem, config, cost, options)
                                    : l2_primal_smooth(problem, config, cost, options);
}

}  // namespace emtk
