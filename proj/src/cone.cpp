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

#include "littlewood/cone.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace littlewood {

BigRational phi(const BigInt& N, const BigRational& epsilon) {
  if (N < 2) throw ParameterError("cone needs N >= 2");
  if (epsilon <= 0) throw ParameterError("cone needs eps > 0");
  const BigInt m = N - 1;
  BigRational out = 2 * epsilon / BigRational(N * m * m);
  out.canonicalize();
  return out;
}

ConeParams ConeParams::make(const BigInt& N, const BigRational& epsilon) {
  return ConeParams{N, epsilon, littlewood::phi(N, epsilon)};
}

RealPoint to_real(const LatticePoint& p) {
  return RealPoint{BigRational(p.x), QuadraticSurd(BigRational(p.y)),
                   QuadraticSurd(BigRational(p.z))};
}

namespace {

QuadraticSurd residual(const QuadraticSurd& a, const BigRational& x, const QuadraticSurd& y) {
  return a * QuadraticSurd(x) - y;
}

bool x_in_range(const BigRational& x, const ConeParams& params) {
  return x >= 1 && x <= BigRational(params.N);
}

}  // namespace

RadicalSum cone_margin(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                       const RealPoint& p, const ConeParams& params) {
  const QuadraticSurd u = residual(alpha, p.x, p.y);
  const QuadraticSurd v = residual(beta, p.x, p.z);
  const BigRational gap = BigRational(params.N) - p.x;
  return RadicalSum(u.square()) + RadicalSum(v.square()) -
         RadicalSum(BigRational(params.phi * gap * gap));
}

ConeMembershipVerdict cone_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                    const RealPoint& p, const ConeParams& params) {
  ConeMembershipVerdict out;
  const RadicalSum m = cone_margin(alpha, beta, p, params);
  out.margin_sign = certified_sign(m);
  out.margin = m.to_interval(128);
  out.x_in_range = x_in_range(p.x, params);
  out.inside = out.x_in_range && out.margin_sign != Sign::positive;
  return out;
}

ConeMembershipVerdict cone_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                    const LatticePoint& p, const ConeParams& params) {
  return cone_contains(alpha, beta, to_real(p), params);
}

QuadraticSurd sqrt_rational(const BigRational& r) {
  if (r < 0) throw ParameterError("square root of a negative rational");
  // sqrt(p/q) = sqrt(p q) / q
  return QuadraticSurd::make(0, 1, r.get_den(), r.get_num() * r.get_den());
}

BaseTangency base_tangency(const BigRational& epsilon) {
  if (epsilon <= 0) throw ParameterError("base_tangency needs eps > 0");
  BaseTangency t;
  t.radius = sqrt_rational(2 * epsilon);
  t.y = sqrt_rational(epsilon);
  t.z = t.y;
  const QuadraticSurd r2 = t.radius.square();
  t.discriminant_zero = r2.square() - QuadraticSurd(BigRational(4 * epsilon * epsilon)) ==
                        QuadraticSurd();
  t.on_hyperbola = t.y * t.z == QuadraticSurd(epsilon);
  t.on_circle = t.y.square() + t.z.square() == r2;
  return t;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SampleOutcome {
  std::size_t redraws = 0;
  bool strictly_below = false;
  std::optional<InclusionViolation> violation;
};

SampleOutcome draw_one(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                       const ConeParams& params, std::size_t index, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double n = params.N.get_d();
  const double root_phi = std::sqrt(params.phi.get_d());
  const double a = alpha.to_double(), b = beta.to_double();
  const BigRational eps = params.epsilon;
  SampleOutcome out;
  for (;;) {
    const double x = 1 + (n - 1) * unit(rng);
    const double radius = root_phi * (n - x) * std::sqrt(unit(rng));
    const double theta = 2 * M_PI * unit(rng);
    const double du = radius * std::cos(theta), dv = radius * std::sin(theta);
    if (du == 0 || dv == 0) {
      ++out.redraws;
      continue;
    }
    RealPoint p{rational_from_double(x), QuadraticSurd(rational_from_double(a * x - du)),
                QuadraticSurd(rational_from_double(b * x - dv))};
    if (!cone_contains(alpha, beta, p, params).inside) {
      ++out.redraws;
      continue;
    }
    const QuadraticSurd u = residual(alpha, p.x, p.y);
    const QuadraticSurd v = residual(beta, p.x, p.z);
    const Expr f = Expr(p.x) * Expr(u) * Expr(v);
    const Sign s = certified_sign(f);
    const Expr abs_f = s == Sign::negative ? -f : f;
    const Sign vs = s == Sign::zero ? Sign::negative : certified_sign(abs_f - Expr(eps));
    if (s == Sign::zero || vs == Sign::positive) {
      InclusionViolation bad;
      bad.index = index;
      bad.point = p;
      bad.f_sign = s;
      bad.f_magnitude = abs_f.evaluate(128);
      bad.vs_epsilon = vs == Sign::positive ? Comparison::above
                                            : (vs == Sign::zero ? Comparison::equal
                                                                : Comparison::below);
      out.violation = bad;
    } else {
      out.strictly_below = vs == Sign::negative;
    }
    return out;
  }
}

}  // namespace

InclusionReport cone_inclusion_sample(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                      const ConeParams& params, std::size_t sample_count,
                                      std::uint64_t seed, unsigned threads) {
  if (sample_count < 1) throw ParameterError("cone_inclusion_sample needs sample_count >= 1");
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(sample_count)));
  std::vector<SampleOutcome> outcomes(sample_count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < sample_count; i += threads) {
        outcomes[i] = draw_one(alpha, beta, params, i, seed);
      }
    });
  }
  for (auto& th : pool) th.join();

  InclusionReport report;
  report.samples = sample_count;
  for (auto& o : outcomes) {
    report.redraws += o.redraws;
    if (o.strictly_below) ++report.strictly_below;
    if (o.violation) report.violations.push_back(std::move(*o.violation));
  }
  return report;
}

bool parallelepiped_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const RealPoint& p, const ConeParams& params) {
  if (!x_in_range(p.x, params)) return false;
  BigRational bound = 2 * params.epsilon / BigRational(params.N);
  bound.canonicalize();
  return surd_compare(residual(alpha, p.x, p.y).square(), bound) != std::strong_ordering::greater &&
         surd_compare(residual(beta, p.x, p.z).square(), bound) != std::strong_ordering::greater;
}

bool parallelepiped_contains(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const LatticePoint& p, const ConeParams& params) {
  return parallelepiped_contains(alpha, beta, to_real(p), params);
}

std::vector<LatticePoint> lattice_points_in_cone(const QuadraticSurd& alpha,
                                                 const QuadraticSurd& beta,
                                                 const ConeParams& params) {
  if (params.N > BigInt(1L << 40)) throw ParameterError("lattice_points_in_cone: N beyond 2^40");
  const long n = params.N.get_si();
  const double a = alpha.to_double(), b = beta.to_double();
  const double root_phi = std::sqrt(params.phi.get_d());
  std::vector<LatticePoint> out;
  for (long x = 1; x <= n; ++x) {
    const double xd = static_cast<double>(x);
    // generous double window; membership itself is decided exactly
    const double r = root_phi * static_cast<double>(n - x) * (1 + 1e-9) + 1e-9 * xd;
    const double ya = a * xd, zb = b * xd;
    for (long y = static_cast<long>(std::floor(ya - r)); y <= static_cast<long>(std::ceil(ya + r)); ++y) {
      const double du = ya - static_cast<double>(y);
      if (std::fabs(du) > r) continue;
      for (long z = static_cast<long>(std::floor(zb - r)); z <= static_cast<long>(std::ceil(zb + r)); ++z) {
        const double dv = zb - static_cast<double>(z);
        if (du * du + dv * dv > r * r * (1 + 1e-9)) continue;
        LatticePoint p{x, y, z};
        if (cone_contains(alpha, beta, p, params).inside) out.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace littlewood
