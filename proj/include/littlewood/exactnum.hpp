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

// Exact numbers for the Littlewood machinery: GMP integers and rationals,
// quadratic surds (a + b*sqrt(d))/c, dyadic intervals with outward rounding
// and certified sign determination over +,-,* expressions.

#ifndef LITTLEWOOD_EXACTNUM_HPP_
#define LITTLEWOOD_EXACTNUM_HPP_

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "littlewood/errors.hpp"

namespace littlewood {

using BigInt = mpz_class;
using BigRational = mpq_class;

enum class Sign : int { negative = -1, zero = 0, positive = 1 };

inline Sign sign_of(const BigInt& v) { return static_cast<Sign>(sgn(v)); }
inline Sign sign_of(const BigRational& v) { return static_cast<Sign>(sgn(v)); }
inline Sign operator*(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}
inline Sign operator-(Sign a) { return static_cast<Sign>(-static_cast<int>(a)); }
const char* to_string(Sign s);

// Builds a canonical rational from numerator/denominator.
BigRational make_rational(const BigInt& num, const BigInt& den);

// Largest k with k*k | n, and n / k^2 (n >= 0). Trial division, then Pollard
// rho on the cofactor; throws ParameterError if a large composite resists.
std::pair<BigInt, BigInt> split_square_factor(const BigInt& n);

// Exact sign of A + B*sqrt(d), d >= 0 not a perfect square unless B == 0.
Sign sign_of_quadratic(const BigRational& A, const BigRational& B,
                       const BigInt& d);

class DyadicInterval;

// Unnormalized (a + b*sqrt(d))/c as typed by a user.
struct RawSurd {
  BigInt a;
  BigInt b;
  BigInt c;
  BigInt d;
};

// (a + b*sqrt(d))/c in canonical form: d squarefree (d == 0 iff b == 0),
// c > 0, gcd(a, b, c) == 1. Equality is field-wise.
class QuadraticSurd {
 public:
  QuadraticSurd() : a_(0), b_(0), c_(1), d_(0) {}
  QuadraticSurd(const BigRational& r);  // NOLINT: rationals embed
  QuadraticSurd(long v) : QuadraticSurd(BigRational(v)) {}  // NOLINT

  static QuadraticSurd make(BigInt a, BigInt b, BigInt c, BigInt d);
  static QuadraticSurd sqrt_of(const BigInt& d);
  // A + B*sqrt(d) from rational parts.
  static QuadraticSurd from_parts(const BigRational& A, const BigRational& B,
                                  const BigInt& d);

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  const BigInt& d() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  BigRational rational_part() const { return make_rational(a_, c_); }
  BigRational radical_coefficient() const { return make_rational(b_, c_); }
  // Only meaningful when is_rational().
  BigRational as_rational() const { return rational_part(); }

  Sign sign() const;
  BigInt floor() const;
  // Nearest integer; ties (only possible for rationals) go up.
  BigInt nearest_integer() const;
  QuadraticSurd abs() const { return sign() == Sign::negative ? -*this : *this; }
  // Galois conjugate (a - b*sqrt(d))/c.
  QuadraticSurd conjugate() const;
  QuadraticSurd inverse() const;
  QuadraticSurd square() const { return *this * *this; }

  DyadicInterval to_interval(long bits) const;
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;

  // Arithmetic inside one field Q(sqrt d). Mixing two distinct irrational
  // radicands throws std::domain_error.
  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y);
  QuadraticSurd operator-() const;

 private:
  BigInt a_, b_, c_, d_;
};

QuadraticSurd surd_normalize(const RawSurd& raw);
std::strong_ordering surd_compare(const QuadraticSurd& s, const BigRational& r);
std::strong_ordering surd_compare(const QuadraticSurd& s, const QuadraticSurd& t);
DyadicInterval surd_to_interval(const QuadraticSurd& s, long bits);

// Closed interval [lo, hi] with dyadic (MPFR) endpoints. Every operation
// rounds outward, so the exact result of the same operation on any members
// of the operands lies in the result.
class DyadicInterval {
 public:
  explicit DyadicInterval(long bits = 64);
  DyadicInterval(const DyadicInterval& other);
  DyadicInterval(DyadicInterval&& other) noexcept;
  DyadicInterval& operator=(const DyadicInterval& other);
  DyadicInterval& operator=(DyadicInterval&& other) noexcept;
  ~DyadicInterval();

  static DyadicInterval enclose(const BigRational& v, long bits);
  static DyadicInterval enclose(const BigInt& v, long bits);
  static DyadicInterval enclose(double v, long bits);
  static DyadicInterval pi(long bits);
  static DyadicInterval hull(const BigRational& lo, const BigRational& hi,
                             long bits);

  long precision() const { return static_cast<long>(mpfr_get_prec(lo_)); }
  bool contains_zero() const;
  bool contains(const BigRational& v) const;
  bool is_point() const;
  // Sign if the interval excludes zero.
  std::optional<Sign> certain_sign() const;

  BigRational lower() const;
  BigRational upper() const;
  BigRational width() const { return upper() - lower(); }
  double lower_double() const;  // rounded down
  double upper_double() const;  // rounded up
  double mid_double() const;
  // |hi - lo| <= rel * min |x| over the interval (false if it contains 0)
  bool relative_width_below(double rel) const;

  // Decimal rendering with `digits` significant digits, lower bound rounded
  // toward -inf and upper toward +inf.
  std::string lower_string(int digits = 15) const;
  std::string upper_string(int digits = 15) const;

  DyadicInterval operator-() const;
  friend DyadicInterval operator+(const DyadicInterval& x, const DyadicInterval& y);
  friend DyadicInterval operator-(const DyadicInterval& x, const DyadicInterval& y);
  friend DyadicInterval operator*(const DyadicInterval& x, const DyadicInterval& y);
  friend DyadicInterval operator/(const DyadicInterval& x, const DyadicInterval& y);

  DyadicInterval abs() const;
  DyadicInterval square() const;
  DyadicInterval sqrt() const;
  DyadicInterval log() const;
  DyadicInterval acos() const;
  DyadicInterval pow(unsigned long k) const;
  // Real power for positive intervals; x^(p/q).
  DyadicInterval pow(const BigRational& exponent) const;
  DyadicInterval max(const DyadicInterval& other) const;
  DyadicInterval hull_with(const DyadicInterval& other) const;

  const __mpfr_struct* lo_ptr() const { return lo_; }
  const __mpfr_struct* hi_ptr() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

// Element of the multiquadratic field Q(sqrt 2, sqrt 3, ...) stored as
// sum_k coeff_k * sqrt(k) over squarefree k (k == 1 is the rational part).
// Square roots of distinct squarefree integers are linearly independent over
// Q, so the value is zero iff every coefficient is zero.
class RadicalSum {
 public:
  RadicalSum() = default;
  RadicalSum(const BigRational& r);    // NOLINT
  RadicalSum(const BigInt& r) : RadicalSum(BigRational(r)) {}  // NOLINT
  RadicalSum(long r) : RadicalSum(BigRational(r)) {}           // NOLINT
  RadicalSum(const QuadraticSurd& s);  // NOLINT

  bool is_zero() const { return terms_.empty(); }
  std::size_t radicand_count() const;  // irrational radicands only
  const std::map<BigInt, BigRational>& terms() const { return terms_; }
  // Coefficient of sqrt(k) (zero if absent).
  BigRational coefficient(const BigInt& k) const;

  DyadicInterval to_interval(long bits) const;
  // Exact when at most two irrational radicands appear without their
  // product; otherwise nullopt.
  std::optional<Sign> exact_sign() const;

  RadicalSum operator-() const;
  friend RadicalSum operator+(const RadicalSum& x, const RadicalSum& y);
  friend RadicalSum operator-(const RadicalSum& x, const RadicalSum& y);
  friend RadicalSum operator*(const RadicalSum& x, const RadicalSum& y);
  friend bool operator==(const RadicalSum&, const RadicalSum&) = default;

 private:
  void add_term(const BigInt& k, const BigRational& c);
  std::map<BigInt, BigRational> terms_;
};

// Immutable arithmetic DAG over exact atoms. Shared subtrees are fine.
class Expr {
 public:
  Expr(const BigRational& r);    // NOLINT
  Expr(const BigInt& r);         // NOLINT
  Expr(long r);                  // NOLINT
  Expr(const QuadraticSurd& s);  // NOLINT
  Expr(const RadicalSum& s);     // NOLINT

  friend Expr operator+(const Expr& x, const Expr& y);
  friend Expr operator-(const Expr& x, const Expr& y);
  friend Expr operator*(const Expr& x, const Expr& y);
  Expr operator-() const;

  DyadicInterval evaluate(long bits) const;
  RadicalSum expand() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct CertifyOptions {
  long start_bits = 64;
  long cap_bits = 4096;
};

// Exact sign of expr. Interval evaluation with precision doubling; when the
// first interval straddles zero the expression is expanded exactly (zero
// test, plus an exact sign for single-field values). Throws UndecidedSign if
// the cap is reached.
Sign certified_sign(const Expr& expr, const CertifyOptions& options = {});
Sign certified_sign(const RadicalSum& value, const CertifyOptions& options = {});

// Interval for expr whose width is at most rel * |value|, doubling precision
// from start_bits. Throws UndecidedSign when the value cannot be separated
// from zero within the cap.
DyadicInterval certified_interval(const Expr& expr, double rel,
                                  const CertifyOptions& options = {});

// Exact decimal parsing helpers shared with the CLI: "3", "-1/1000",
// "0.001", "2.5e-3".
BigRational parse_rational(const std::string& text);
std::string to_string(const BigRational& r);
BigRational rational_from_double(double v);

}  // namespace littlewood

#endif  // LITTLEWOOD_EXACTNUM_HPP_
