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

// Binary linear solvers over an indexed sparse problem. Labels are +1/-1 and
// the last column of every row is a constant bias feature of value 1, which
// is regularized like any other weight.

#ifndef EMTK_SOLVER_HPP
#define EMTK_SOLVER_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace emtk {

enum class Loss : std::uint8_t { logistic, hinge, squared_hinge };
enum class Regularizer : std::uint8_t { l2, l1 };
enum class Formulation : std::uint8_t { primal, dual };

struct SolverConfig {
  int id;
  Loss loss;
  Regularizer regularizer;
  Formulation formulation;
  std::string_view description;
};

inline constexpr int kSolverCount = 8;

/// Fixed id table:
///   0 L2 logistic primal      4 L2 squared hinge primal
///   1 L2 hinge dual           5 L1 logistic
///   2 L2 hinge primal         6 L1 squared hinge
///   3 L2 squared hinge dual   7 L2 logistic dual
/// Throws std::out_of_range for other ids.
const SolverConfig& solver_config(int id);

struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
};

struct Problem {
  std::size_t dim = 0;  // including the bias column
  std::vector<SparseRow> rows;
  std::vector<double> labels;  // +1 / -1
};

struct SolverOptions {
  double tolerance = 1e-4;   // relative objective change
  int max_iterations = 5000;
  std::uint64_t seed = 42;   // coordinate order of the dual solvers
};

struct SolverResult {
  std::vector<double> weights;  // size problem.dim
  double objective = 0.0;       // final primal (or dual) objective
  int iterations = 0;
};

/// Throws ConvergenceError when the iteration cap is reached.
SolverResult solve(const Problem& problem, const SolverConfig& config, double cost,
                   const SolverOptions& options = {});

/// Primal objective: reg(w) + C * sum of losses. reg is 0.5|w|^2 or |w|_1.
double primal_objective(const Problem& problem, Loss loss, Regularizer reg, double cost,
                        std::span<const double> w);

/// Gradient of the L2 primal objective for the smooth losses (logistic,
/// squared hinge); a subgradient for the hinge loss.
std::vector<double> l2_primal_gradient(const Problem& problem, Loss loss, double cost,
                                       std::span<const double> w);

}  // namespace emtk

#endif  // EMTK_SOLVER_HPP
