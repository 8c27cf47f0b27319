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

// The cone C(N, eps): (alpha x - y)^2 + (beta x - z)^2 <= phi (N - x)^2 for
// 1 <= x <= N, phi = 2 eps / (N (N-1)^2), and the box around it.

#ifndef LITTLEWOOD_CONE_HPP_
#define LITTLEWOOD_CONE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "littlewood/lattice.hpp"

namespace littlewood {

BigRational phi(const BigInt& N, const BigRational& epsilon);

struct ConeParams {
  BigInt N;
  BigRational epsilon;
  BigRational phi;

  // Throws ParameterError unless N >= 2 and eps > 0.
  static ConeParams make(const BigInt& N, const BigRational& epsilon);
};

// y must lie in Q(alpha) and z in Q(beta) (rationals always do).
struct RealPoint {
  BigRational x;
  QuadraticSurd y;
  QuadraticSurd z;
};

RealPoint to_real(const LatticePoint& p);

struct ConeMembershipVerdict {
  bool inside = false;
  bool x_in_range = false;
  Sign margin_sign = Sign::zero;  // sign of lhs - rhs, exact
  DyadicInterval margin;
};

ConeMembershipVerdict cone_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                    const RealPoint& p, const ConeParams& params);
ConeMembershipVerdict cone_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                    const LatticePoint& p, const ConeParams& params);

// lhs - rhs of the cone inequality as an exact element of Q(sqrt da, sqrt db).
RadicalSum cone_margin(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                       const RealPoint& p, const ConeParams& params);

// Base circle at x = 1 touching the hyperbola yz = eps.
struct BaseTangency {
  QuadraticSurd radius;  // sqrt(2 eps)
  QuadraticSurd y;       // sqrt(eps)
  QuadraticSurd z;       // sqrt(eps)
  bool discriminant_zero = false;  // r^4 - 4 eps^2 == 0
  bool on_hyperbola = false;       // y z == eps
  bool on_circle = false;          // y^2 + z^2 == r^2
};

BaseTangency base_tangency(const BigRational& epsilon);

// sqrt(r) for rational r >= 0 as a canonical surd.
QuadraticSurd sqrt_rational(const BigRational& r);

struct InclusionViolation {
  std::size_t index = 0;
  RealPoint point;
  Sign f_sign = Sign::zero;
  DyadicInterval f_magnitude;
  Comparison vs_epsilon = Comparison::below;
};

struct InclusionReport {
  std::size_t samples = 0;
  std::size_t redraws = 0;       // draws rounded outside the cone
  std::size_t strictly_below = 0;  // 0 < |f| < eps
  std::vector<InclusionViolation> violations;
};

// Uniform x in [1, N], uniform in the cross-section disk, rounded to rational
// coordinates; each accepted point is certified inside the cone and then
// checked for 0 < |f| <= eps. Sample i uses its own seed derived from `seed`,
// so the report does not depend on `threads`.
InclusionReport cone_inclusion_sample(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                      const ConeParams& params, std::size_t sample_count,
                                      std::uint64_t seed, unsigned threads = 1);

// 1 <= x <= N, |alpha x - y| <= sqrt(2 eps / N), |beta x - z| <= sqrt(2 eps / N).
bool parallelepiped_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const RealPoint& p, const ConeParams& params);
bool parallelepiped_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const LatticePoint& p, const ConeParams& params);

// Every lattice point of C(N, eps), by x then y then z.
std::vector<LatticePoint> lattice_points_in_cone(const QuadraticSurd& alpha,
                                                 const QuadraticSurd& beta,
                                                 const ConeParams& params);

}  // namespace littlewood

#endif  // LITTLEWOOD_CONE_HPP_
