// Copyright 2026 The Littlewood Cone Authors
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

// The sufficient condition for a lattice point with 0 < |f| <= eps on the
// approximating line, a search over (n, N), and the B(3) infeasibility scan.

#ifndef LITTLEWOOD_CERTIFICATE_HPP_
#define LITTLEWOOD_CERTIFICATE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "littlewood/entrytime.hpp"

namespace littlewood {

// In the order the pipeline tests them; a cell records the first that fires.
enum class FailureReason {
  none,
  dirichlet_gap,        // P0 misses |U0|, |V0| <= 1/sqrt(N) <= sqrt(2 eps)
  transversality_fail,
  tau_too_large,        // tau_n > 2^(n-1), or not certified below it
  x0_too_small,         // lambda^(2n) > x0 - 2
  lcm_too_large,        // t_n > x0 - 1: gamma(t_n) leaves the segment
  verify_fail,          // candidate does not satisfy 0 < |f| <= eps
};
constexpr std::size_t kFailureReasonCount = 7;

const char* to_string(FailureReason r);

struct TheoremCheck {
  std::size_t n = 0;
  BigInt N;
  BigRational epsilon;
  LatticePoint P0;
  BigInt x0;
  bool transversal = false;
  std::optional<DyadicInterval> tau_n;
  BigInt t_n;
  BigInt lambda;
  bool tau_ok = false;     // tau_n <= 2^(n-1)
  bool lambda_ok = false;  // 2^(n-1) < lambda^(2n)
  bool x0_ok = false;      // lambda^(2n) <= x0 - 2
  bool chain_ok = false;
  bool t_n_below_x0 = false;  // the weaker t_n < x0
  std::optional<LatticePoint> candidate;
  std::optional<bool> candidate_in_cone;
  std::optional<bool> verified;
  FailureReason reason = FailureReason::none;
};

// Throws ParameterError unless N > 1/(2 eps). `lambda` defaults to
// (M+1)^2 for the pair's largest partial quotient M.
TheoremCheck theorem_check(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                           const BigRational& epsilon, std::size_t n, const BigInt& N,
                           std::optional<BigInt> lambda = std::nullopt);

// Same, reusing a Dirichlet point already computed for N.
TheoremCheck theorem_check(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                           const BigRational& epsilon, std::size_t n, const DirichletPoint& P0,
                           const BigInt& lambda);

// Certified 0 < |f(p)| <= eps.
bool verify_certificate(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                        const BigRational& epsilon, const LatticePoint& p);

enum class GridStrategy { geometric, full };

struct SearchOptions {
  std::size_t n_min = 1;
  std::size_t n_max = 1;
  GridStrategy grid = GridStrategy::geometric;
  BigInt N_cap = 1000000;
  std::optional<BigInt> lambda;
  unsigned threads = 1;
};

struct SearchReport {
  std::vector<TheoremCheck> cells;  // sorted by (n, N)
  std::optional<TheoremCheck> certificate;  // first verified cell
  std::array<std::size_t, kFailureReasonCount> reason_counts{};
  std::optional<LatticePoint> trivial_witness;  // (1, round alpha, round beta) when it works
  std::size_t certificates = 0;
};

// Largest N <= cap with sqrt(N)(N-1) <= sqrt(2 eps)/(2 max|e|), or nullopt if
// even N = 2 fails.
std::optional<BigInt> transversality_ceiling(const BigRational& epsilon, const QuadraticSurd& e_alpha,
                                             const QuadraticSurd& e_beta, const BigInt& cap);

// N grid for one n: from max(floor(1/(2 eps)) + 1, 2) to the transversality
// ceiling; doubling steps (plus the ceiling) or every integer.
std::vector<BigInt> search_grid(const BigRational& epsilon, const QuadraticSurd& e_alpha,
                                const QuadraticSurd& e_beta, GridStrategy grid, const BigInt& cap);

// Every (n, N) cell; when the ceiling lies below the first admissible N the
// cell (n, N_min) is recorded as transversality-fail. Deterministic for any
// thread count.
SearchReport certificate_search(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                                const BigRational& epsilon, const SearchOptions& options);

struct PsiEval {
  DyadicInterval u;
  DyadicInterval X;
  DyadicInterval a, b, c, d, e;
  DyadicInterval value;    // psi(u)
  DyadicInterval h_value;  // psi(u) - u/2
};

// psi(u) = a u^18 + b u^16 + c u^14 - d u^8 - e with
//   a = 2^(35/2) (X^4/4 + 2), b = 2^(35/2) X^(5/2), c = 4 sqrt2 X,
//   d = 2^14 C / x0, e = 2^15 (N - x0).
// An upper-bound surrogate for tau_n, not tau_n itself.
PsiEval psi_eval(const DyadicInterval& u, const BigRational& X, const BigInt& x0, const BigInt& N,
                 const BigRational& C, long bits = 128);

// 2^(7/4) X^(1/8) + 2^(57/8) X^(39/16) + 2^(27/4) X^(9/8)
DyadicInterval b3_rhs_bound(const BigRational& X, long bits = 128);

struct B3Pair {
  std::string id;
  QuadraticIrrational alpha;
  QuadraticIrrational beta;
};

struct B3Entry {
  std::string pair_id;
  BigRational epsilon;
  BadProfile profile;
  std::size_t n_lo = 0;  // ceil(-log2(2^(5/8) X^(3/16))), at least 1
  std::size_t n_hi = 0;  // largest n with 16^n <= N_cap - 1, since x0 <= N
  SearchReport search;
  DyadicInterval u_lo;   // 2^(-5/8) X^(-3/16)
  DyadicInterval u_hi;   // (x0 - 1)^(1/4), largest x0 over the N grid
  bool u_range_empty = false;
  std::size_t u_points = 0;
  std::size_t u_confirmed = 0;  // a u^4 + b u^2 + c > rhs certified
  bool inequality_confirmed = false;
  DyadicInterval rhs;
  std::optional<PsiEval> psi_at_u_lo;  // with C from the pair's profile
};

struct B3ScanReport {
  std::vector<B3Entry> entries;
  std::size_t certificates = 0;
};

// Throws ProfileViolation (index of the pair) if a partial quotient exceeds 3.
B3ScanReport b3_infeasibility_scan(const std::vector<B3Pair>& pairs,
                                   const std::vector<BigRational>& epsilons,
                                   std::size_t u_grid = 1000, unsigned threads = 1,
                                   GridStrategy grid = GridStrategy::geometric);

}  // namespace littlewood

#endif  // LITTLEWOOD_CERTIFICATE_HPP_
