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

#include "littlewood/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace littlewood {

BigInt PeriodicCF::term(std::size_t n) const {
  if (n < preperiod.size()) return preperiod[n];
  return period[(n - preperiod.size()) % period.size()];
}

CFSpec CFSpec::from_surd(const QuadraticSurd& s) {
  CFSpec spec;
  spec.kind = Kind::quadratic_surd;
  spec.surd = s;
  if (s.is_rational()) {
    spec.kind = Kind::finite_rational;
    spec.rational = s.rational_part();
  }
  return spec;
}

CFSpec CFSpec::from_periodic(std::vector<BigInt> preperiod,
                             std::vector<BigInt> period) {
  if (period.empty()) throw ParameterError("periodic continued fraction needs a period");
  std::size_t j = 0;
  for (const auto* list : {&preperiod, &period}) {
    for (const BigInt& a : *list) {
      if (j == 0 && a < 0) throw ParameterError("a_0 must be >= 0");
      if (j > 0 && a < 1) {
        throw ParameterError("partial quotient a_" + std::to_string(j) +
                             " must be >= 1");
      }
      ++j;
    }
  }
  CFSpec spec;
  spec.kind = Kind::periodic;
  spec.periodic = PeriodicCF{std::move(preperiod), std::move(period)};
  spec.surd = periodic_value(spec.periodic);
  return spec;
}

CFSpec CFSpec::from_rational(const BigRational& r) {
  CFSpec spec;
  spec.kind = Kind::finite_rational;
  spec.rational = r;
  spec.surd = QuadraticSurd(r);
  return spec;
}

QuadraticSurd CFSpec::value() const {
  return kind == Kind::finite_rational ? QuadraticSurd(rational) : surd;
}

PeriodicCF periodic_expansion(const QuadraticSurd& irrational) {
  if (irrational.is_rational()) {
    throw ParameterError("periodic expansion needs an irrational surd");
  }
  const BigInt& b = irrational.b();
  // (P + sqrt D)/Q with Q | D - P^2.
  BigInt P = b > 0 ? irrational.a() : BigInt(-irrational.a());
  BigInt Q = b > 0 ? irrational.c() : BigInt(-irrational.c());
  BigInt D = b * b * irrational.d();
  if (BigInt((D - P * P) % Q) != 0) {
    const BigInt absQ = abs(Q);
    P *= absQ;
    D *= Q * Q;
    Q *= absQ;
  }
  BigInt s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());

  std::vector<BigInt> terms;
  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (;;) {
    auto [it, inserted] = seen.emplace(std::make_pair(P, Q), terms.size());
    if (!inserted) {
      const std::size_t start = it->second;
      PeriodicCF cf;
      cf.preperiod.assign(terms.begin(), terms.begin() + static_cast<long>(start));
      cf.period.assign(terms.begin() + static_cast<long>(start), terms.end());
      return cf;
    }
    BigInt num = Q > 0 ? BigInt(P + s) : BigInt(P + s + 1);
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    terms.push_back(a);
    P = a * Q - P;
    BigInt Qn = (D - P * P);
    mpz_divexact(Qn.get_mpz_t(), Qn.get_mpz_t(), Q.get_mpz_t());
    Q = std::move(Qn);
  }
}

namespace {

// h_{-1} = 1, h_{-2} = 0, k_{-1} = 0, k_{-2} = 1; returns last two (h, k).
struct TailPair {
  BigInt h1 = 1, h0 = 0, k1 = 0, k0 = 1;  // (h_last, h_prev), (k_last, k_prev)
};

TailPair fold(const std::vector<BigInt>& a) {
  TailPair t;
  for (const BigInt& x : a) {
    BigInt h = x * t.h1 + t.h0;
    BigInt k = x * t.k1 + t.k0;
    t.h0 = std::move(t.h1);
    t.h1 = std::move(h);
    t.k0 = std::move(t.k1);
    t.k1 = std::move(k);
  }
  return t;
}

}  // namespace

QuadraticSurd periodic_value(const PeriodicCF& cf) {
  if (cf.period.empty()) throw ParameterError("empty period");
  // omega = [per; omega] solves k1 w^2 + (k0 - h1) w - h0 = 0, w > 1.
  const TailPair t = fold(cf.period);
  const BigInt B = t.k0 - t.h1;
  const BigInt disc = B * B + 4 * t.k1 * t.h0;
  const QuadraticSurd omega = QuadraticSurd::make(-B, 1, 2 * t.k1, disc);
  if (cf.preperiod.empty()) return omega;
  const TailPair pre = fold(cf.preperiod);
  return (QuadraticSurd(BigRational(pre.h1)) * omega + QuadraticSurd(BigRational(pre.h0))) /
         (QuadraticSurd(BigRational(pre.k1)) * omega + QuadraticSurd(BigRational(pre.k0)));
}

CFExpansion cf_expand(const CFSpec& spec, std::size_t count) {
  CFExpansion out;
  if (count == 0) throw ParameterError("cf_expand needs count >= 1");
  if (spec.kind == CFSpec::Kind::finite_rational) {
    BigInt num = spec.rational.get_num();
    BigInt den = spec.rational.get_den();
    while (den != 0 && out.terms.size() < count) {
      BigInt a;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      out.terms.push_back(a);
      BigInt r = num - a * den;
      num = std::move(den);
      den = std::move(r);
    }
    out.truncated = out.terms.size() < count;
    return out;
  }
  const PeriodicCF cf = spec.kind == CFSpec::Kind::periodic
                            ? spec.periodic
                            : periodic_expansion(spec.surd);
  out.terms.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.terms.push_back(cf.term(n));
  return out;
}

std::vector<Convergent> convergents(const std::vector<BigInt>& a) {
  if (a.empty()) throw ParameterError("convergents of an empty expansion");
  std::vector<Convergent> out;
  out.reserve(a.size());
  BigInt p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (n > 0 && a[n] < 1) throw ParameterError("partial quotients must be >= 1");
    BigInt p = a[n] * p1 + p2;
    BigInt q = a[n] * q1 + q2;
    out.push_back(Convergent{n, p, q});
    p2 = std::move(p1);
    p1 = std::move(p);
    q2 = std::move(q1);
    q1 = std::move(q);
  }
  return out;
}

QuadraticIrrational::QuadraticIrrational(const QuadraticSurd& value)
    : value_(value), cf_(periodic_expansion(value)) {}

QuadraticIrrational QuadraticIrrational::from_spec(const CFSpec& spec) {
  if (!spec.is_irrational()) {
    throw ParameterError("expected a quadratic irrational, got a rational");
  }
  return QuadraticIrrational(spec.value());
}

std::vector<BigInt> QuadraticIrrational::partial_quotients(std::size_t count) const {
  std::vector<BigInt> a;
  a.reserve(count);
  for (std::size_t n = 0; n < count; ++n) a.push_back(cf_.term(n));
  return a;
}

Convergent QuadraticIrrational::convergent(std::size_t n) const {
  BigInt p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (std::size_t j = 0; j <= n; ++j) {
    const BigInt a = cf_.term(j);
    BigInt p = a * p1 + p2;
    BigInt q = a * q1 + q2;
    p2 = std::move(p1);
    p1 = std::move(p);
    q2 = std::move(q1);
    q1 = std::move(q);
  }
  return Convergent{n, p1, q1};
}

std::vector<Convergent> QuadraticIrrational::convergents(std::size_t n_max) const {
  return littlewood::convergents(partial_quotients(n_max + 1));
}

BigInt QuadraticIrrational::max_partial_quotient() const {
  BigInt m = 0;
  for (std::size_t j = 1; j < cf_.preperiod.size(); ++j) m = std::max(m, cf_.preperiod[j]);
  for (const BigInt& a : cf_.period) m = std::max(m, a);
  return m;
}

ErrorTerm error_term(const QuadraticIrrational& alpha, std::size_t n) {
  const Convergent c = alpha.convergent(n);
  return ErrorTerm{n, alpha.value() - QuadraticSurd(c.value())};
}

bool error_bounds_hold(const QuadraticIrrational& alpha, std::size_t n) {
  const auto cs = alpha.convergents(n + 1);
  const BigInt qq = cs[n].q * cs[n + 1].q;
  const QuadraticSurd e = error_term(alpha, n).value.abs();
  return surd_compare(e, BigRational(1, 1) / BigRational(2 * qq)) !=
             std::strong_ordering::less &&
         surd_compare(e, BigRational(1, 1) / BigRational(qq)) !=
             std::strong_ordering::greater;
}

GrowthReport growth_bounds_check(const QuadraticIrrational& alpha,
                                 const BigInt& M, std::size_t n_max) {
  for (std::size_t j = 1; j <= n_max; ++j) {
    if (alpha.partial_quotient(j) > M) {
      throw ProfileViolation("partial quotient a_" + std::to_string(j) + " = " +
                                 alpha.partial_quotient(j).get_str() +
                                 " exceeds M = " + M.get_str(),
                             j);
    }
  }
  GrowthReport report;
  const auto cs = alpha.convergents(n_max);
  const BigInt base = M + 1;
  BigInt upper = 1;  // (M+1)^n
  for (std::size_t n = 0; n <= n_max; ++n) {
    const BigInt& q = cs[n].q;
    // 2^{(n-2)/2} <= q  <=>  2^{n-2} <= q^2
    bool ok;
    if (n >= 2) {
      BigInt lower;
      mpz_ui_pow_ui(lower.get_mpz_t(), 2, n - 2);
      ok = lower <= q * q;
    } else {
      ok = BigRational(1, n == 0 ? 4 : 2) <= BigRational(q * q);
    }
    ok = ok && q <= upper;
    ++report.checked;
    if (!ok && !report.first_violation) report.first_violation = n;
    upper *= base;
  }
  return report;
}

LevyQuotient levy_quotient(const QuadraticIrrational& alpha, std::size_t n) {
  if (n < 1) throw ParameterError("levy_quotient needs n >= 1");
  const BigInt q = alpha.convergent(n).q;
  DyadicInterval v = DyadicInterval::enclose(q, 128).log() /
                     DyadicInterval::enclose(BigInt(static_cast<unsigned long>(n)), 128);
  const BigRational mid = (v.lower() + v.upper()) / 2;
  return LevyQuotient{n, std::move(v), mid};
}

DyadicInterval levy_reference_constant(long bits) {
  const DyadicInterval pi = DyadicInterval::pi(bits);
  return pi.square() / (DyadicInterval::enclose(BigInt(12), bits) *
                        DyadicInterval::enclose(BigInt(2), bits).log());
}

BadConstantEstimate bad_constant_estimate(const QuadraticIrrational& alpha,
                                          const BigInt& Q) {
  if (Q < 1) throw ParameterError("bad_constant_estimate needs Q >= 1");
  if (Q > BigInt(1L << 40)) throw ParameterError("bad_constant_estimate: Q beyond 2^40");
  // Double prefilter: a_d within err_a of alpha, so q ||q alpha|| lies within
  // q (q err_a + ulp(q a_d)) of its double evaluation. Only q whose lower
  // bound beats the best upper bound so far are compared exactly.
  const DyadicInterval iv = alpha.value().to_interval(128);
  const double a_d = iv.mid_double();
  const BigRational a_q(a_d);
  const double err_a =
      std::nextafter(BigRational(std::max<BigRational>(abs(iv.upper() - a_q), abs(a_q - iv.lower()))).get_d(), 1.0) +
      std::numeric_limits<double>::denorm_min();
  const double unit = std::numeric_limits<double>::epsilon();

  BadConstantEstimate best;
  bool have = false;
  double best_hi = std::numeric_limits<double>::infinity();
  const long q_max = Q.get_si();
  for (long q = 1; q <= q_max; ++q) {
    const double qd = static_cast<double>(q);
    const double t = qd * a_d;
    const double dist = std::fabs(t - std::nearbyint(t));
    const double err = qd * (qd * err_a + std::fabs(t) * unit) + qd * dist * unit;
    const double lo = qd * dist - err;
    if (have && lo >= best_hi) continue;
    best_hi = std::min(best_hi, qd * dist + err);
    const QuadraticSurd qa = QuadraticSurd(BigRational(q)) * alpha.value();
    const QuadraticSurd v =
        QuadraticSurd(BigRational(q)) *
        (qa - QuadraticSurd(BigRational(qa.nearest_integer()))).abs();
    if (!have || surd_compare(v, best.exact_min) == std::strong_ordering::less) {
      best.argmin = q;
      best.exact_min = v;
      have = true;
    }
  }
  best.lower_bound = best.exact_min.to_interval(128).lower();
  return best;
}

BigInt joint_lambda(const QuadraticIrrational& alpha,
                    const QuadraticIrrational& beta) {
  const BigInt M = std::max(alpha.max_partial_quotient(), beta.max_partial_quotient());
  return (M + 1) * (M + 1);
}

BadProfile bad_profile(const QuadraticIrrational& alpha,
                       const QuadraticIrrational& beta, const BigInt& Q) {
  BadProfile p;
  p.M = std::max(alpha.max_partial_quotient(), beta.max_partial_quotient());
  p.lambda = (p.M + 1) * (p.M + 1);
  p.C_estimate = std::max(bad_constant_estimate(alpha, Q).lower_bound,
                          bad_constant_estimate(beta, Q).lower_bound);
  return p;
}

BigInt lcm_time(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                std::size_t n) {
  const BigInt qa = alpha.convergent(2 * n).q;
  const BigInt qb = beta.convergent(2 * n).q;
  BigInt t;
  mpz_lcm(t.get_mpz_t(), qa.get_mpz_t(), qb.get_mpz_t());
  const BigInt lambda = joint_lambda(alpha, beta);
  BigInt hi;
  mpz_pow_ui(hi.get_mpz_t(), lambda.get_mpz_t(), 2 * n);
  // 2^{n-1} <= t, written as 2^n <= 2t to cover n == 0.
  BigInt lo;
  mpz_ui_pow_ui(lo.get_mpz_t(), 2, n);
  if (lo > 2 * t || t > hi) {
    throw InternalInconsistency("lcm time t_" + std::to_string(n) + " = " +
                                t.get_str() + " outside [2^(n-1), lambda^(2n)]");
  }
  return t;
}

LcmGrowth lcm_growth(const QuadraticIrrational& alpha,
                     const QuadraticIrrational& beta, std::size_t n_max) {
  if (n_max < 1) throw ParameterError("lcm_growth needs n_max >= 1");
  LcmGrowth g;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const BigInt t = lcm_time(alpha, beta, n);
    g.quotients.push_back(DyadicInterval::enclose(t, 64).log().mid_double() /
                          static_cast<double>(n));
  }
  const auto tail = g.quotients.begin() + static_cast<long>(n_max / 2);
  g.liminf_estimate = *std::min_element(tail, g.quotients.end());
  g.limsup_estimate = *std::max_element(tail, g.quotients.end());
  return g;
}

std::string to_string(const PeriodicCF& cf) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  auto sep = [&](std::size_t idx) {
    if (!first) os << (idx == 1 ? ";" : ",");
    first = false;
  };
  std::size_t idx = 0;
  for (const BigInt& a : cf.preperiod) {
    sep(idx++);
    os << a.get_str();
  }
  if (!first) os << (idx == 1 ? ";" : ",");
  os << '(';
  for (std::size_t j = 0; j < cf.period.size(); ++j) {
    if (j) os << ',';
    os << cf.period[j].get_str();
  }
  os << ")]";
  return os.str();
}

}  // namespace littlewood
