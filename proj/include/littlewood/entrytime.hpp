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

// Lines through a Dirichlet point with rational direction (1, c_2n(alpha),
// c_2n(beta)) and the time at which they enter the cone.

#ifndef LITTLEWOOD_ENTRYTIME_HPP_
#define LITTLEWOOD_ENTRYTIME_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "littlewood/cfrac.hpp"
#include "littlewood/cone.hpp"

namespace littlewood {

struct ApproxLine {
  std::size_t n = 0;  // convergent order; the line uses index 2n
  DirichletPoint P0;
  BigRational c2n_alpha;
  BigRational c2n_beta;
  ErrorTerm e2n_alpha;  // alpha - c2n_alpha
  ErrorTerm e2n_beta;

  QuadraticSurd alpha() const { return QuadraticSurd(c2n_alpha) + e2n_alpha.value; }
  QuadraticSurd beta() const { return QuadraticSurd(c2n_beta) + e2n_beta.value; }
  BigInt q2n_alpha() const { return c2n_alpha.get_den(); }
  BigInt q2n_beta() const { return c2n_beta.get_den(); }
};

ApproxLine approx_line(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                       const DirichletPoint& P0, std::size_t n);

struct RationalPoint {
  BigRational x, y, z;
};

RealPoint to_real(const RationalPoint& p);

// (x0 - t, y0 - t c_a, z0 - t c_b). Callers may pass t outside [0, x0 - 1].
RationalPoint line_gamma(const ApproxLine& line, const BigRational& t);

// sqrt(N) (N - 1) <= sqrt(2 eps) / (2 max|e|), squared. True when both e vanish.
bool transversality_check(const BigInt& N, const BigRational& epsilon,
                          const QuadraticSurd& e_alpha, const QuadraticSurd& e_beta);
bool transversality_check(const ApproxLine& line, const ConeParams& params);

// The cone inequality along the line, rearranged as A t^2 + 2 B t + C >= 0:
//   A = phi - e_a^2 - e_b^2
//   B = phi (N - x0) + e_a U0 + e_b V0
//   C = phi (N - x0)^2 - U0^2 - V0^2
struct MembershipQuadratic {
  RadicalSum A, B, C;
};

MembershipQuadratic membership_quadratic(const ApproxLine& line, const ConeParams& params);

struct Discriminant {
  RadicalSum direct;      // 4 B^2 - 4 A C
  RadicalSum rearranged;  // 4 times the expanded sum of squares form
  bool forms_agree = false;
  Sign sign = Sign::zero;
  DyadicInterval interval;
};

Discriminant discriminant(const ApproxLine& line, const ConeParams& params);

struct EntryTimeReport {
  MembershipQuadratic quadratic;
  RadicalSum D_n;
  Sign D_sign = Sign::zero;
  DyadicInterval D_interval;
  DyadicInterval denominator;  // A
  DyadicInterval t_minus;
  DyadicInterval t_plus;
  DyadicInterval tau_n;  // t_plus, or exactly 0 when P0 is already inside
  bool transversal = false;
  bool inside_at_start = false;
  bool tau_positive = false;     // 0 < tau certified
  bool tau_below_x0 = false;     // tau < x0 certified
  bool within_segment = false;   // tau <= x0 - 1 certified
};

// Throws NonTransversal when `require_transversal` and the check fails, and
// NonPositiveDenominator when A <= 0. Roots are refined until both have
// relative width <= 1e-12.
EntryTimeReport entry_time(const ApproxLine& line, const ConeParams& params,
                           bool require_transversal = true);

struct AngleReport {
  DyadicInterval cos_theta;
  DyadicInterval theta_n;
  bool cos_at_most_one = false;  // exact Cauchy-Schwarz check
};

AngleReport angle(const ApproxLine& line);

struct CubicRoot {
  Sign level = Sign::positive;  // root of g - eps (positive) or g + eps (negative)
  BigRational lo, hi;           // lo == hi for an exact rational root
};

struct CubicEntry {
  bool starts_inside = false;
  bool found = false;  // false: no entry into |f| <= eps on [0, x0 - 1]
  BigRational lo, hi;  // encloses the entry time when found
  std::vector<CubicRoot> roots;  // every root on [0, x0 - 1], increasing

  // tau_cubic <= tau_n + tolerance
  bool not_after(const DyadicInterval& tau_n, double tolerance = 1e-9) const;
};

// First t in [0, x0 - 1] with |f(gamma(t))| <= eps, where
// f(gamma(t)) = (x0 - t)(U0 - t e_a)(V0 - t e_b). Throws RootIsolationFailure
// when a root cannot be separated from a critical point.
CubicEntry cubic_entry_time(const ApproxLine& line, const BigRational& epsilon);

}  // namespace littlewood

#endif  // LITTLEWOOD_ENTRYTIME_HPP_
