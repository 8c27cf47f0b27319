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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "littlewood/entrytime.hpp"

using namespace littlewood;

namespace {

BigRational R(long p, long q = 1) { return make_rational(p, q); }

struct Pair {
  QuadraticIrrational alpha, beta;
};

std::vector<Pair> pairs() {
  const QuadraticSurd s2 = QuadraticSurd::sqrt_of(2), s3 = QuadraticSurd::sqrt_of(3);
  return {
      {QuadraticIrrational(s2 - 1), QuadraticIrrational(s3 - 1)},
      {QuadraticIrrational(QuadraticSurd::sqrt_of(5) - 2), QuadraticIrrational(QuadraticSurd::sqrt_of(7) - 2)},
      {QuadraticIrrational(QuadraticSurd::make(-1, 1, 2, 5)), QuadraticIrrational(s2 - 1)},
      {QuadraticIrrational(QuadraticSurd::sqrt_of(11) - 3), QuadraticIrrational(QuadraticSurd::sqrt_of(13) - 3)},
  };
}

struct Config {
  ApproxLine line;
  ConeParams params;
};

// Smallest n <= 14 making the line transversal, if any.
std::optional<ApproxLine> transversal_line(const Pair& p, const ConeParams& params) {
  const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), params.N);
  for (std::size_t n = 1; n <= 14; ++n) {
    ApproxLine line = approx_line(p.alpha, p.beta, dp, n);
    if (transversality_check(line, params)) return line;
  }
  return std::nullopt;
}

std::vector<Config> random_configs(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  const auto ps = pairs();
  std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
  std::uniform_int_distribution<long> n_dist(20, 3000), e_num(1, 40);
  std::vector<Config> out;
  while (out.size() < count) {
    const Pair& p = ps[pick(rng)];
    const ConeParams params = ConeParams::make(n_dist(rng), R(e_num(rng), 80));
    if (auto line = transversal_line(p, params)) out.push_back({*line, params});
  }
  return out;
}

bool inside_at(const Config& c, const BigRational& t) {
  const RationalPoint g = line_gamma(c.line, t);
  return cone_contains(c.line.alpha(), c.line.beta(), to_real(g), c.params).inside;
}

// The cone inequality alone, so the line can be followed past x = 1.
bool below_cone_surface(const Config& c, const BigRational& t) {
  const RationalPoint g = line_gamma(c.line, t);
  return certified_sign(cone_margin(c.line.alpha(), c.line.beta(), to_real(g), c.params)) !=
         Sign::positive;
}

// Oracle: bisection on the exact membership predicate. Within [0, x0 - 1]
// this is cone_contains; past the segment only the inequality is used.
BigRational oracle_entry(const Config& c) {
  if (inside_at(c, 0)) return BigRational(0);
  BigRational lo(0), hi(c.line.P0.point.x - 1);
  while (!below_cone_surface(c, hi)) {
    lo = hi;
    hi = 2 * hi + 1;
  }
  for (int i = 0; i < 100; ++i) {
    BigRational m = (lo + hi) / 2;
    m.canonicalize();
    (below_cone_surface(c, m) ? hi : lo) = m;
  }
  return hi;
}

double mid(const DyadicInterval& v) { return v.mid_double(); }

}  // namespace

TEST_CASE("line_gamma endpoints") {
  const Pair p = pairs()[0];
  const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), 100);
  const ApproxLine line = approx_line(p.alpha, p.beta, dp, 2);
  const RationalPoint g0 = line_gamma(line, 0);
  CHECK(g0.x == BigRational(dp.point.x));
  CHECK(g0.y == BigRational(dp.point.y));
  CHECK(g0.z == BigRational(dp.point.z));
  CHECK(line_gamma(line, BigRational(dp.point.x - 1)).x == 1);
  CHECK(line.e2n_alpha.sign() == Sign::positive);
  CHECK(line.e2n_beta.sign() == Sign::positive);
  CHECK(line.alpha() == p.alpha.value());
}

TEST_CASE("gamma at the lcm time is a lattice point") {
  const auto ps = pairs();
  for (std::size_t k = 0; k < 3; ++k) {
    const Pair& p = ps[k];
    const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), 1000);
    for (std::size_t n = 1; n <= 20; ++n) {
      const ApproxLine line = approx_line(p.alpha, p.beta, dp, n);
      const BigInt t = lcm_time(p.alpha, p.beta, n);
      const RationalPoint g = line_gamma(line, BigRational(t));
      REQUIRE(g.x.get_den() == 1);
      REQUIRE(g.y.get_den() == 1);
      REQUIRE(g.z.get_den() == 1);
    }
  }
}

TEST_CASE("transversality examples") {
  CHECK(transversality_check(2, R(1, 2), QuadraticSurd(R(1, 8)), QuadraticSurd(R(1, 8))));
  CHECK(transversality_check(2, R(1, 2), QuadraticSurd(), QuadraticSurd()));
  CHECK(transversality_check(1000000, R(1, 1000), QuadraticSurd(), QuadraticSurd()));
  // sqrt2 * 1 <= sqrt(2 eps)/(2 e) fails once 2 e > 1: e = 3/5
  CHECK_FALSE(transversality_check(2, R(1, 2), QuadraticSurd(R(3, 5)), QuadraticSurd()));
  // boundary: N (N-1)^2 4 e^2 == 2 eps with N = 2, eps = 1/2, e = 1/(2 sqrt2)
  const QuadraticSurd e = QuadraticSurd::make(0, 1, 4, 2);
  CHECK(transversality_check(2, R(1, 2), e, e));
  CHECK_FALSE(transversality_check(2, R(1, 2), e + QuadraticSurd(R(1, 1000000)), e));

  // for fixed N, eps the check passes for large n
  const Pair p = pairs()[0];
  const ConeParams params = ConeParams::make(500, R(1, 10));
  const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), params.N);
  bool passed = false;
  for (std::size_t n = 1; n <= 12 && !passed; ++n) {
    passed = transversality_check(approx_line(p.alpha, p.beta, dp, n), params);
  }
  CHECK(passed);
}

TEST_CASE("degenerate axis line") {
  // alpha = beta = 1/3 rational, P0 on the axis: e = U0 = V0 = 0.
  ApproxLine line;
  line.n = 0;
  line.P0 = DirichletPoint{LatticePoint{3, 1, 1}, 10, QuadraticSurd(), QuadraticSurd()};
  line.c2n_alpha = R(1, 3);
  line.c2n_beta = R(1, 3);
  line.e2n_alpha = ErrorTerm{0, QuadraticSurd()};
  line.e2n_beta = ErrorTerm{0, QuadraticSurd()};
  const ConeParams params = ConeParams::make(10, R(1, 4));
  const Discriminant d = discriminant(line, params);
  CHECK(d.direct.is_zero());
  CHECK(d.forms_agree);
  const EntryTimeReport r = entry_time(line, params);
  CHECK(r.transversal);
  CHECK(r.inside_at_start);
  CHECK(r.tau_n.is_point());
  CHECK(r.tau_n.contains(0));
  CHECK_FALSE(r.tau_positive);
}

TEST_CASE("discriminant: both forms agree and D > 0 when transversal") {
  for (const Config& c : random_configs(100, 11)) {
    const Discriminant d = discriminant(c.line, c.params);
    REQUIRE(d.forms_agree);
    REQUIRE(d.sign == Sign::positive);
    const DyadicInterval a = d.direct.to_interval(256), b = d.rearranged.to_interval(256);
    REQUIRE(std::fabs(mid(a) - mid(b)) <= 1e-12 * std::fabs(mid(a)));
  }
}

TEST_CASE("entry time matches the bisection oracle") {
  std::size_t compared = 0, at_start = 0, beyond = 0;
  for (const Config& c : random_configs(100, 12)) {
    const EntryTimeReport r = entry_time(c.line, c.params);
    REQUIRE(r.D_sign == Sign::positive);
    REQUIRE(r.denominator.certain_sign() == Sign::positive);
    REQUIRE(r.t_minus.upper() < r.t_plus.lower());
    REQUIRE(r.t_plus.relative_width_below(1e-12));
    const BigRational o = oracle_entry(c);
    const bool segment = inside_at(c, BigRational(c.line.P0.point.x - 1));
    REQUIRE(r.within_segment == segment);
    if (r.inside_at_start) {
      ++at_start;
      REQUIRE(o == 0);
      continue;
    }
    REQUIRE(r.tau_positive);
    if (!segment) ++beyond;
    ++compared;
    const double tau = mid(r.tau_n), want = o.get_d();
    REQUIRE(std::fabs(tau - want) <= 1e-9 * std::max(1.0, want));
    if (segment) REQUIRE(r.tau_below_x0);
  }
  MESSAGE("compared " << compared << ", inside at start " << at_start << ", beyond segment " << beyond);
  CHECK(compared + at_start == 100);
}

TEST_CASE("roots substituted back vanish") {
  for (const Config& c : random_configs(40, 13)) {
    const EntryTimeReport r = entry_time(c.line, c.params);
    const long bits = 256;
    const MembershipQuadratic& q = r.quadratic;
    for (const DyadicInterval& t : {r.t_minus, r.t_plus}) {
      const DyadicInterval v = q.A.to_interval(bits) * t.square() +
                               DyadicInterval::enclose(BigRational(2), bits) * q.B.to_interval(bits) * t +
                               q.C.to_interval(bits);
      REQUIRE(v.contains_zero());
    }
    // the cone margin at gamma(t_plus) encloses zero
    const DyadicInterval t = r.t_plus;
    const DyadicInterval u = c.line.P0.U0.to_interval(bits) - t * c.line.e2n_alpha.interval(bits);
    const DyadicInterval v = c.line.P0.V0.to_interval(bits) - t * c.line.e2n_beta.interval(bits);
    const DyadicInterval gap = DyadicInterval::enclose(BigRational(c.params.N - c.line.P0.point.x), bits) + t;
    const DyadicInterval margin = u.square() + v.square() -
                                  DyadicInterval::enclose(c.params.phi, bits) * gap.square();
    REQUIRE(margin.contains_zero());
  }
}

TEST_CASE("property: larger eps enters no later") {
  for (const Config& c : random_configs(60, 14)) {
    const EntryTimeReport small = entry_time(c.line, c.params);
    const ConeParams wider = ConeParams::make(c.params.N, c.params.epsilon * 2);
    const EntryTimeReport large = entry_time(c.line, wider);
    REQUIRE(large.tau_n.lower() <= small.tau_n.upper());
    if (small.within_segment) {
      // membership at the smaller cone's entry time holds in the wider cone
      const BigRational t = small.tau_n.upper();
      const RationalPoint g = line_gamma(c.line, t);
      REQUIRE(cone_contains(c.line.alpha(), c.line.beta(), to_real(g), wider).inside);
    }
  }
}

TEST_CASE("non-transversal lines are rejected") {
  const Pair p = pairs()[0];
  const ConeParams params = ConeParams::make(3000, R(1, 100));
  const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), params.N);
  const ApproxLine line = approx_line(p.alpha, p.beta, dp, 1);
  REQUIRE_FALSE(transversality_check(line, params));
  CHECK_THROWS_AS(entry_time(line, params), NonTransversal);
}

TEST_CASE("angle") {
  const Pair p = pairs()[0];
  const DirichletPoint dp = dirichlet_search(p.alpha.value(), p.beta.value(), 100);
  const AngleReport a1 = angle(approx_line(p.alpha, p.beta, dp, 1));
  const AngleReport a5 = angle(approx_line(p.alpha, p.beta, dp, 5));
  CHECK(a1.cos_at_most_one);
  CHECK(a5.cos_at_most_one);
  CHECK(a5.theta_n.upper() < a1.theta_n.lower());
  CHECK(a5.theta_n.certain_sign() == Sign::positive);
  // oracle: angle between the direction vectors in long double
  const long double a = p.alpha.value().to_double(), b = p.beta.value().to_double();
  const Convergent ca = p.alpha.convergent(2), cb = p.beta.convergent(2);
  const long double x = static_cast<long double>(ca.p.get_d()) / ca.q.get_d();
  const long double y = static_cast<long double>(cb.p.get_d()) / cb.q.get_d();
  const long double cosv = (1 + a * x + b * y) / (std::sqrt(1 + a * a + b * b) * std::sqrt(1 + x * x + y * y));
  CHECK(std::fabs(static_cast<double>(std::acos(cosv)) - mid(a1.theta_n)) < 1e-7);
  for (std::size_t n = 1; n <= 12; ++n) {
    REQUIRE(angle(approx_line(p.alpha, p.beta, dp, n)).cos_at_most_one);
  }
}

TEST_CASE("cubic entry time") {
  std::size_t compared = 0;
  for (const Config& c : random_configs(60, 15)) {
    const EntryTimeReport r = entry_time(c.line, c.params);
    const CubicEntry ce = cubic_entry_time(c.line, c.params.epsilon);
    if (r.within_segment) {
      REQUIRE(ce.found);
      REQUIRE(ce.not_after(r.tau_n));
      ++compared;
    }
    // oracle: first grid point with |g| < eps in long double
    const long double x0 = c.line.P0.point.x.get_d();
    const long double U0 = c.line.P0.U0.to_double(), V0 = c.line.P0.V0.to_double();
    const long double ea = c.line.e2n_alpha.value.to_double(), eb = c.line.e2n_beta.value.to_double();
    const long double eps = c.params.epsilon.get_d();
    const int steps = 4000;
    const long double T = x0 - 1;
    std::optional<int> first;
    for (int k = 0; k <= steps && !first; ++k) {
      const long double t = T * k / steps;
      const long double g = (x0 - t) * (U0 - t * ea) * (V0 - t * eb);
      if (std::fabs(g) < eps * (1 - 1e-9)) first = k;
    }
    if (first) {
      REQUIRE(ce.found);
      REQUIRE(ce.lo.get_d() <= static_cast<double>(T * *first / steps) + 1e-9);
    }
    for (std::size_t i = 1; i < ce.roots.size(); ++i) REQUIRE(ce.roots[i - 1].hi <= ce.roots[i].lo);
  }
  CHECK(compared >= 10);

  // eps at least |f(P0)|: entry at t = 0
  const Config c = random_configs(1, 16).front();
  const CubicEntry big = cubic_entry_time(c.line, R(1000000));
  CHECK(big.starts_inside);
  CHECK(big.lo == 0);
}
