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

// Continued fractions of quadratic irrationals: expansion, convergents,
// error terms and the growth constants built from them.

#ifndef LITTLEWOOD_CFRAC_HPP_
#define LITTLEWOOD_CFRAC_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "littlewood/exactnum.hpp"

namespace littlewood {

// [pre_0, ..., pre_{m-1}, (per_0, ..., per_{k-1})]. The preperiod holds a_0
// unless the expansion is purely periodic.
struct PeriodicCF {
  std::vector<BigInt> preperiod;
  std::vector<BigInt> period;

  BigInt term(std::size_t n) const;
  friend bool operator==(const PeriodicCF&, const PeriodicCF&) = default;
};

struct CFSpec {
  enum class Kind { quadratic_surd, periodic, finite_rational };

  Kind kind = Kind::quadratic_surd;
  QuadraticSurd surd;
  PeriodicCF periodic;
  BigRational rational;

  static CFSpec from_surd(const QuadraticSurd& s);
  // Throws ParameterError on an empty period or a_j < 1 for j >= 1.
  static CFSpec from_periodic(std::vector<BigInt> preperiod,
                              std::vector<BigInt> period);
  static CFSpec from_rational(const BigRational& r);

  bool is_irrational() const { return kind != Kind::finite_rational; }
  // Exact value; rational specs embed as surds with b == 0.
  QuadraticSurd value() const;
};

struct Convergent {
  std::size_t n = 0;
  BigInt p;
  BigInt q;

  BigRational value() const { return make_rational(p, q); }
};

struct CFExpansion {
  std::vector<BigInt> terms;
  // Set when a rational ran out of quotients before the requested count.
  bool truncated = false;
};

// Integer-only (P + sqrt D)/Q recurrence with cycle detection.
PeriodicCF periodic_expansion(const QuadraticSurd& irrational);
// Inverse of periodic_expansion.
QuadraticSurd periodic_value(const PeriodicCF& cf);

// a_0 .. a_{count-1}.
CFExpansion cf_expand(const CFSpec& spec, std::size_t count);
std::vector<Convergent> convergents(const std::vector<BigInt>& a);

// A quadratic irrational with its expansion cached; the working type for
// alpha and beta everywhere downstream.
class QuadraticIrrational {
 public:
  explicit QuadraticIrrational(const QuadraticSurd& value);
  static QuadraticIrrational from_spec(const CFSpec& spec);

  const QuadraticSurd& value() const { return value_; }
  const PeriodicCF& expansion() const { return cf_; }

  BigInt partial_quotient(std::size_t n) const { return cf_.term(n); }
  std::vector<BigInt> partial_quotients(std::size_t count) const;
  Convergent convergent(std::size_t n) const;
  // Convergents 0..n_max.
  std::vector<Convergent> convergents(std::size_t n_max) const;
  // sup_{j >= 1} a_j, read off the period.
  BigInt max_partial_quotient() const;

 private:
  QuadraticSurd value_;
  PeriodicCF cf_;
};

struct ErrorTerm {
  std::size_t n = 0;
  QuadraticSurd value;  // alpha - p_n/q_n

  Sign sign() const { return value.sign(); }
  DyadicInterval interval(long bits = 128) const { return value.to_interval(bits); }
};

ErrorTerm error_term(const QuadraticIrrational& alpha, std::size_t n);
// 1/(2 q_n q_{n+1}) <= |e_n| <= 1/(q_n q_{n+1}), exactly.
bool error_bounds_hold(const QuadraticIrrational& alpha, std::size_t n);

struct GrowthReport {
  std::size_t checked = 0;
  std::optional<std::size_t> first_violation;
};

// 2^{(n-2)/2} <= q_n <= (M+1)^n for 0 <= n <= n_max. Throws ProfileViolation
// when some a_j (1 <= j <= n_max) exceeds M.
GrowthReport growth_bounds_check(const QuadraticIrrational& alpha,
                                 const BigInt& M, std::size_t n_max);

struct LevyQuotient {
  std::size_t n = 0;
  DyadicInterval value;  // encloses log(q_n)/n
  BigRational approximation;
};

LevyQuotient levy_quotient(const QuadraticIrrational& alpha, std::size_t n);
// pi^2 / (12 log 2).
DyadicInterval levy_reference_constant(long bits = 128);

// Scan estimate of inf_q q*||q alpha||; not the infimum itself.
struct BadConstantEstimate {
  BigInt argmin;
  QuadraticSurd exact_min;   // argmin * ||argmin * alpha||
  BigRational lower_bound;   // rational <= exact_min
};

BadConstantEstimate bad_constant_estimate(const QuadraticIrrational& alpha,
                                          const BigInt& Q);

struct BadProfile {
  BigInt M;
  BigInt lambda;  // (M+1)^2
  BigRational C_estimate;
};

// Joint profile; M from the periods, C from scans up to Q.
BadProfile bad_profile(const QuadraticIrrational& alpha,
                       const QuadraticIrrational& beta, const BigInt& Q);

BigInt joint_lambda(const QuadraticIrrational& alpha,
                    const QuadraticIrrational& beta);

// lcm(q_{2n}(alpha), q_{2n}(beta)); checks 2^{n-1} <= t_n <= lambda^{2n} and
// throws InternalInconsistency otherwise.
BigInt lcm_time(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                std::size_t n);

// log(t_n)/n for n = 1..n_max with liminf/limsup taken over the upper half.
struct LcmGrowth {
  std::vector<double> quotients;  // index n-1
  double liminf_estimate = 0;
  double limsup_estimate = 0;
};

LcmGrowth lcm_growth(const QuadraticIrrational& alpha,
                     const QuadraticIrrational& beta, std::size_t n_max);

std::string to_string(const PeriodicCF& cf);

}  // namespace littlewood

#endif  // LITTLEWOOD_CFRAC_HPP_
