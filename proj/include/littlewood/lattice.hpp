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

// The cubic form f(x, y, z) = x (alpha x - y)(beta x - z) on Z^3 and the
// searches built on it.

#ifndef LITTLEWOOD_LATTICE_HPP_
#define LITTLEWOOD_LATTICE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "littlewood/exactnum.hpp"

namespace littlewood {

struct LatticePoint {
  BigInt x, y, z;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

std::string to_string(const LatticePoint& p);

// (x, alpha x - y, beta x - z), exactly.
struct TransformedPoint {
  BigInt x;
  QuadraticSurd u;
  QuadraticSurd v;
};

TransformedPoint m_transform(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const LatticePoint& p);

// x*u*v as an exact expression.
Expr f_expr(const TransformedPoint& t);

enum class Comparison { below, equal, above };
const char* to_string(Comparison c);

struct FValue {
  Sign sign = Sign::zero;
  DyadicInterval magnitude;    // encloses |f|
  Comparison vs_epsilon = Comparison::below;  // |f| against epsilon
};

FValue f_eval(const QuadraticSurd& alpha, const QuadraticSurd& beta,
              const LatticePoint& p, const BigRational& epsilon);

struct DirichletPoint {
  LatticePoint point;
  BigInt N;
  QuadraticSurd U0;  // alpha x0 - y0
  QuadraticSurd V0;  // beta x0 - z0
};

// Smallest x0 in [1, N] with ||x0 alpha||, ||x0 beta|| <= 1/sqrt(N); y0, z0
// are the nearest integers. A double filter discards most x before the exact
// check. Throws InternalInconsistency if nothing qualifies.
DirichletPoint dirichlet_search(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                const BigInt& N);

// Exact check of the Dirichlet residual bounds on a found point.
bool dirichlet_bounds_hold(const DirichletPoint& dp);

// C / sqrt(2 eps) < x0, given N > 1/(2 eps) and C no larger than
// x0 * ||x0 alpha|| (any scan estimate over q <= N qualifies).
bool bad_lower_bound_holds(const DirichletPoint& dp, const BigRational& C,
                           const BigRational& epsilon);

struct MinRecord {
  long x = 0;
  DyadicInterval value;  // encloses x ||x alpha|| ||x beta||
};

// Running-minimum records of x ||x alpha|| ||x beta|| over 1 <= x <= X.
// Double prescan with explicit error bounds, exact certification of the
// survivors. Partitioned across `threads`; output is independent of it.
std::vector<MinRecord> brute_min_scan(const QuadraticSurd& alpha,
                                      const QuadraticSurd& beta, long X,
                                      unsigned threads = 1);

// Exact value of x ||x alpha|| ||x beta|| as an expression.
Expr min_scan_value(const QuadraticSurd& alpha, const QuadraticSurd& beta, long x);

struct CartanReport {
  std::vector<double> roots;  // 0, y0/alpha, z0/beta (sorted)
  double measure_monic = 0;   // |{x : |P(x)| <= eps}|
  double bound_monic = 0;     // 2 e eps^{1/3}
  double measure_f = 0;       // |{x : |alpha beta P(x)| <= eps}|
  double bound_f_scaled = 0;  // 2 e (eps/(alpha beta))^{1/3}
  bool extended_precision = false;

  bool monic_ok() const { return measure_monic <= bound_monic; }
  bool f_within_unscaled() const { return measure_f <= bound_monic; }
  bool f_within_scaled() const { return measure_f <= bound_f_scaled; }
};

// P(x) = x (x - y0/alpha)(x - z0/beta). Sublevel measures by monotone-piece
// inversion, 1e-9 absolute.
CartanReport cartan_measure(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                            const BigInt& y0, const BigInt& z0,
                            const BigRational& epsilon);

// Measure of {x : |(x - r0)(x - r1)(x - r2)| <= level}.
double monic_cubic_sublevel_measure(double r0, double r1, double r2, double level);

}  // namespace littlewood

#endif  // LITTLEWOOD_LATTICE_HPP_
