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

#include "littlewood/certificate.hpp"

using namespace littlewood;

namespace {

BigRational R(long p, long q = 1) { return make_rational(p, q); }

const QuadraticIrrational kAlpha(QuadraticSurd::sqrt_of(2) - 1);
const QuadraticIrrational kBeta(QuadraticSurd::sqrt_of(3) - 1);
const QuadraticIrrational kGolden(QuadraticSurd::make(-1, 1, 2, 5));

long double f_ld(const QuadraticIrrational& a, const QuadraticIrrational& b, const LatticePoint& p) {
  const long double x = p.x.get_d(), y = p.y.get_d(), z = p.z.get_d();
  return x * (a.value().to_double() * x - y) * (b.value().to_double() * x - z);
}

}  // namespace

TEST_CASE("failure reason names") {
  CHECK(std::string(to_string(FailureReason::dirichlet_gap)) == "dirichlet-gap");
  CHECK(std::string(to_string(FailureReason::transversality_fail)) == "transversality-fail");
  CHECK(std::string(to_string(FailureReason::tau_too_large)) == "tau-too-large");
  CHECK(std::string(to_string(FailureReason::x0_too_small)) == "x0-too-small");
  CHECK(std::string(to_string(FailureReason::lcm_too_large)) == "lcm-too-large");
  CHECK(std::string(to_string(FailureReason::verify_fail)) == "verify-fail");
}

TEST_CASE("theorem_check preconditions and the eps = 1/100 record") {
  CHECK_THROWS_AS(theorem_check(kAlpha, kBeta, R(1, 100), 3, 50), ParameterError);
  const TheoremCheck c = theorem_check(kAlpha, kBeta, R(1, 100), 3, 51);
  CHECK(c.N == 51);
  CHECK(c.x0 == 7);
  CHECK(c.lambda == 9);
  CHECK(c.t_n == lcm_time(kAlpha, kBeta, 3));
  CHECK_FALSE(c.chain_ok);
  CHECK_FALSE(c.transversal);
  CHECK(c.reason == FailureReason::transversality_fail);
  CHECK_FALSE(c.tau_n);
  CHECK_FALSE(c.candidate);

  // a transversal line with a large entry time
  const TheoremCheck d = theorem_check(kAlpha, kBeta, R(1, 100), 4, 51);
  CHECK(d.transversal);
  REQUIRE(d.tau_n);
  CHECK(d.tau_n->lower() > 8);
  CHECK(d.reason == FailureReason::tau_too_large);
}

TEST_CASE("verify_certificate") {
  const QuadraticSurd a = kAlpha.value(), b = kBeta.value();
  CHECK_FALSE(verify_certificate(a, b, R(1), LatticePoint{0, 0, 0}));
  CHECK_FALSE(verify_certificate(a, b, R(1, 10), LatticePoint{5, 0, 0}));
  // the running minima of the scan are genuine small values
  for (const MinRecord& m : brute_min_scan(a, b, 5000)) {
    const QuadraticSurd x{BigRational(m.x)};
    const LatticePoint p{m.x, (x * a).nearest_integer(), (x * b).nearest_integer()};
    const BigRational eps = m.value.upper();
    CHECK(verify_certificate(a, b, eps, p));
    CHECK_FALSE(verify_certificate(a, b, m.value.lower() / 2, p));
  }
}

TEST_CASE("transversality ceiling against a linear scan") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const QuadraticSurd ea = error_term(kAlpha, 2 * n).value, eb = error_term(kBeta, 2 * n).value;
    for (const BigRational& eps : {R(1, 2), R(3), R(50)}) {
      const auto c = transversality_ceiling(eps, ea, eb, 3000);
      long last = 0;
      for (long N = 2; N <= 3000; ++N) {
        if (transversality_check(N, eps, ea, eb)) last = N;
      }
      if (last == 0) {
        CHECK_FALSE(c);
      } else {
        REQUIRE(c);
        CHECK(*c == last);
      }
    }
  }
}

TEST_CASE("search grid") {
  const QuadraticSurd ea = error_term(kAlpha, 12).value, eb = error_term(kBeta, 12).value;
  const auto ceiling = transversality_ceiling(R(1, 10), ea, eb, 1000000);
  REQUIRE(ceiling);
  const std::vector<BigInt> g = search_grid(R(1, 10), ea, eb, GridStrategy::geometric, 1000000);
  REQUIRE(g.size() >= 2);
  CHECK(g.front() == 6);
  CHECK(g.back() == *ceiling);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(g[i] == 2 * g[i - 1]);
  const std::vector<BigInt> full = search_grid(R(1, 10), ea, eb, GridStrategy::full, 200);
  CHECK(full.front() == 6);
  CHECK(full.back() == std::min(BigInt(200), *ceiling));
  CHECK(full.size() == full.back().get_ui() - 5);
}

TEST_CASE("search reports a reason for every cell and is deterministic") {
  SearchOptions opt;
  opt.n_max = 6;
  const SearchReport one = certificate_search(kAlpha, kBeta, R(1, 1000), opt);
  opt.threads = 3;
  const SearchReport three = certificate_search(kAlpha, kBeta, R(1, 1000), opt);
  REQUIRE(one.cells.size() == three.cells.size());
  std::size_t total = 0;
  for (std::size_t c : one.reason_counts) total += c;
  CHECK(total == one.cells.size());
  CHECK(one.certificates == 0);
  CHECK_FALSE(one.certificate);
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    CHECK(one.cells[i].n == three.cells[i].n);
    CHECK(one.cells[i].N == three.cells[i].N);
    CHECK(one.cells[i].reason == three.cells[i].reason);
    CHECK(one.cells[i].reason != FailureReason::none);
    if (i > 0) {
      const bool ordered = one.cells[i - 1].n < one.cells[i].n ||
                           (one.cells[i - 1].n == one.cells[i].n && one.cells[i - 1].N < one.cells[i].N);
      CHECK(ordered);
    }
  }
  // ||alpha|| ||beta|| ~ 0.112: the x = 1 point works for eps = 1/5 only
  CHECK_FALSE(one.trivial_witness);
  opt.n_max = 1;
  CHECK(certificate_search(kAlpha, kBeta, R(1, 5), opt).trivial_witness);
}

TEST_CASE("soundness: verified candidates survive independent checks") {
  // The chain can only close for very large eps; such candidates are still
  // genuine lattice points with 0 < |f| <= eps.
  SearchOptions opt;
  opt.n_max = 3;
  std::size_t seen = 0;
  for (long e : {1000000000L, 10000000000L}) {
    const BigRational eps(e);
    const SearchReport r = certificate_search(kAlpha, kBeta, eps, opt);
    for (const TheoremCheck& c : r.cells) {
      if (c.reason != FailureReason::none) continue;
      ++seen;
      REQUIRE(c.chain_ok);
      REQUIRE(c.transversal);
      REQUIRE(c.candidate);
      REQUIRE(*c.verified);
      REQUIRE(verify_certificate(kAlpha.value(), kBeta.value(), eps, *c.candidate));
      // t_n lies in [tau_n, x0 - 1]
      REQUIRE(c.tau_n->upper() <= BigRational(c.t_n));
      REQUIRE(c.t_n <= c.x0 - 1);
      const long double f = f_ld(kAlpha, kBeta, *c.candidate);
      REQUIRE(f != 0);
      REQUIRE(std::fabs(f) <= eps.get_d() * (1 + 1e-12));
      REQUIRE(c.candidate->x == c.x0 - c.t_n);
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("psi coefficients") {
  const BigRational X = R(1, 50);
  const DyadicInterval u = DyadicInterval::enclose(R(3, 2), 128);
  const PsiEval p = psi_eval(u, X, 7, 51, R(1, 4));
  const long double x = 0.02L, uu = 1.5L;
  const long double s = std::pow(2.0L, 17.5L);
  const long double a = s * (std::pow(x, 4) / 4 + 2), b = s * std::pow(x, 2.5L), c = 4 * std::sqrt(2.0L) * x;
  const long double d = std::pow(2.0L, 14) * 0.25L / 7, e = std::pow(2.0L, 15) * 44;
  CHECK(std::fabs(p.a.mid_double() - static_cast<double>(a)) <= 1e-12 * a);
  CHECK(std::fabs(p.b.mid_double() - static_cast<double>(b)) <= 1e-12 * b);
  CHECK(std::fabs(p.c.mid_double() - static_cast<double>(c)) <= 1e-12 * c);
  CHECK(std::fabs(p.d.mid_double() - static_cast<double>(d)) <= 1e-12 * d);
  CHECK(std::fabs(p.e.mid_double() - static_cast<double>(e)) <= 1e-12 * e);
  const long double v = a * std::pow(uu, 18) + b * std::pow(uu, 16) + c * std::pow(uu, 14) -
                        d * std::pow(uu, 8) - e;
  CHECK(std::fabs(p.value.mid_double() - static_cast<double>(v)) <= 1e-9 * std::fabs(v));
  CHECK(std::fabs(p.h_value.mid_double() - static_cast<double>(v - uu / 2)) <= 1e-9 * std::fabs(v));
  // degree 18 dominates for large u
  CHECK(psi_eval(DyadicInterval::enclose(R(10), 128), X, 7, 51, R(1, 4)).value.certain_sign() ==
        Sign::positive);
  CHECK_THROWS_AS(psi_eval(DyadicInterval::enclose(R(0), 128), X, 7, 51, R(1, 4)), ParameterError);

  const long double rhs = std::pow(2.0L, 1.75L) * std::pow(x, 0.125L) +
                          std::pow(2.0L, 57.0L / 8) * std::pow(x, 39.0L / 16) +
                          std::pow(2.0L, 6.75L) * std::pow(x, 9.0L / 8);
  CHECK(std::fabs(b3_rhs_bound(X).mid_double() - static_cast<double>(rhs)) <= 1e-12 * rhs);
}

TEST_CASE("B(3) scan: no certificates and the inequality holds on the grid") {
  const std::vector<B3Pair> pairs = {{"sqrt2-1,sqrt3-1", kAlpha, kBeta},
                                     {"golden-1,sqrt2-1", kGolden, kAlpha}};
  const B3ScanReport r = b3_infeasibility_scan(pairs, {R(1, 100), R(1, 10000), R(1, 1000000)});
  CHECK(r.certificates == 0);
  REQUIRE(r.entries.size() == 6);
  for (const B3Entry& e : r.entries) {
    CHECK(e.search.certificates == 0);
    CHECK(e.inequality_confirmed);
    CHECK(e.u_points == 1000);
    CHECK(e.n_hi == 4);
    CHECK(!e.search.cells.empty());
    for (const TheoremCheck& c : e.search.cells) {
      CHECK(c.lambda == 16);
      CHECK(c.reason != FailureReason::none);
    }
    // oracle for the lower end of the n range
    const double X = 2 * e.epsilon.get_d();
    const double lo = -0.625 - 0.1875 * std::log2(X);
    CHECK(e.n_lo == static_cast<std::size_t>(std::max(1.0, std::ceil(lo))));
    CHECK(std::fabs(e.u_lo.mid_double() - std::pow(2.0, -0.625) * std::pow(X, -0.1875)) < 1e-12);
  }
  CHECK(r.entries[0].n_lo == 1);
  CHECK(r.entries[1].n_lo == 2);
  CHECK(r.entries[2].n_lo == 3);

  // sqrt5 - 2 = [0; 4, 4, ...] is outside B(3)
  const std::vector<B3Pair> bad = {{"ok", kAlpha, kBeta},
                                   {"sqrt5-2", QuadraticIrrational(QuadraticSurd::sqrt_of(5) - 2), kAlpha}};
  try {
    b3_infeasibility_scan(bad, {R(1, 100)});
    FAIL("expected ProfileViolation");
  } catch (const ProfileViolation& v) {
    CHECK(v.index() == 1);
  }
}
