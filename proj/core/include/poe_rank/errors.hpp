// Copyright 2026 The poe-rank Authors.
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

#ifndef POE_RANK_ERRORS_HPP_
#define POE_RANK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace poe_rank {

// Rejected input: bad indices, infeasible budgets, malformed files.
// The CLI maps this family to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Numerical failure: singular systems, Sherman-Morrison breakdown.
// The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// An iterative solver ran out of iterations. Carries the residual at the
// last iterate so callers can report how far convergence was.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace poe_rank

#endif  // POE_RANK_ERRORS_HPP_
