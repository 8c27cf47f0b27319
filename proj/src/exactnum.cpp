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

#include "littlewood/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace littlewood {

const char* to_string(Sign s) {
  switch (s) {
    case Sign::negative:
      return "-";
    case Sign::zero:
      return "0";
    case Sign::positive:
      return "+";
  }
  return "?";
}

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

constexpr unsigned long kTrialBound = 1UL << 16;
constexpr unsigned long kRhoBudget = 1UL << 22;

// Brent's variant of Pollard rho; a nontrivial factor of composite n or 0.
BigInt rho_factor(const BigInt& n, unsigned long c) {
  BigInt y = 2, x, q = 1, g = 1, ys, t;
  auto step = [&](BigInt& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  unsigned long r = 1, spent = 0;
  const unsigned long batch = 128;
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) step(y);
    for (unsigned long k = 0; k < r && g == 1; k += batch) {
      ys = y;
      for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
        step(y);
        t = abs(x - y);
        q = q * t;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      spent += batch;
    }
    r *= 2;
    if (spent > kRhoBudget) return 0;
  }
  if (g == n) {
    // Batch overshot; walk the last block one step at a time.
    do {
      step(ys);
      t = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

void collect_prime_factors(const BigInt& n, std::vector<BigInt>& primes) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    primes.push_back(n);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    collect_prime_factors(root, primes);
    collect_prime_factors(root, primes);
    return;
  }
  for (unsigned long c = 1; c < 20; ++c) {
    const BigInt f = rho_factor(n, c);
    if (f != 0) {
      collect_prime_factors(f, primes);
      collect_prime_factors(BigInt(n / f), primes);
      return;
    }
  }
  throw ParameterError("cannot reduce radicand " + n.get_str() +
                       " to squarefree form (factorisation budget exhausted)");
}

}  // namespace

std::pair<BigInt, BigInt> split_square_factor(const BigInt& n) {
  if (n < 0) throw std::domain_error("split_square_factor of negative value");
  if (n == 0) return {BigInt(1), BigInt(0)};
  BigInt rest = n;
  BigInt root = 1;
  BigInt free_part = 1;
  auto strip = [&](const BigInt& p) {
    unsigned exponent = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      ++exponent;
    }
    for (unsigned i = 0; i < exponent / 2; ++i) root *= p;
    if (exponent % 2 == 1) free_part *= p;
  };
  strip(2);
  for (unsigned long p = 3; p < kTrialBound && BigInt(p) * p <= rest; p += 2) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) strip(BigInt(p));
  }
  if (BigInt(kTrialBound) * kTrialBound > rest) {
    free_part *= rest;
    return {root, free_part};
  }
  std::vector<BigInt> primes;
  collect_prime_factors(rest, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const BigInt& p : primes) strip(p);
  return {root, free_part};
}

Sign sign_of_quadratic(const BigRational& A, const BigRational& B,
                       const BigInt& d) {
  if (B == 0 || d == 0) return sign_of(A);
  if (d == 1) return sign_of(BigRational(A + B));
  const Sign sa = sign_of(A);
  const Sign sb = sign_of(B);
  if (sa == Sign::zero) return sb;
  if (sa == sb) return sa;
  const BigRational diff = A * A - B * B * BigRational(d);
  if (diff > 0) return sa;
  if (diff < 0) return sb;
  return Sign::zero;
}

// ---------------------------------------------------------------------------
// QuadraticSurd

namespace {

BigInt common_radicand(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (x.is_rational()) return y.d();
  if (y.is_rational()) return x.d();
  if (x.d() != y.d()) {
    throw std::domain_error("quadratic surds from different fields: sqrt(" +
                            x.d().get_str() + ") vs sqrt(" + y.d().get_str() +
                            ")");
  }
  return x.d();
}

}  // namespace

QuadraticSurd::QuadraticSurd(const BigRational& r)
    : a_(r.get_num()), b_(0), c_(r.get_den()), d_(0) {}

QuadraticSurd QuadraticSurd::make(BigInt a, BigInt b, BigInt c, BigInt d) {
  if (c == 0) throw MalformedSurd("surd with zero denominator");
  if (d < 0) throw MalformedSurd("surd with negative radicand");
  QuadraticSurd s;
  if (b == 0 || d == 0) {
    b = 0;
    d = 0;
  } else {
    auto [root, free_part] = split_square_factor(d);
    b *= root;
    d = free_part;
    if (d == 1) {
      a += b;
      b = 0;
      d = 0;
    }
  }
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 1) {
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  s.c_ = std::move(c);
  s.d_ = std::move(d);
  return s;
}

QuadraticSurd QuadraticSurd::sqrt_of(const BigInt& d) {
  return make(0, 1, 1, d);
}

QuadraticSurd QuadraticSurd::from_parts(const BigRational& A,
                                        const BigRational& B, const BigInt& d) {
  BigInt c;
  mpz_lcm(c.get_mpz_t(), A.get_den_mpz_t(), B.get_den_mpz_t());
  BigInt a = A.get_num() * (c / A.get_den());
  BigInt b = B.get_num() * (c / B.get_den());
  return make(std::move(a), std::move(b), std::move(c), d);
}

Sign QuadraticSurd::sign() const {
  return sign_of_quadratic(BigRational(a_), BigRational(b_), d_);
}

BigInt QuadraticSurd::floor() const {
  BigInt m;
  if (b_ != 0) {
    BigInt radicand = b_ * b_ * d_;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    // b*sqrt(d) lies strictly between consecutive integers.
    m = b_ > 0 ? root : BigInt(-root - 1);
  }
  BigInt numerator = a_ + m;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), numerator.get_mpz_t(), c_.get_mpz_t());
  return q;
}

BigInt QuadraticSurd::nearest_integer() const {
  BigInt f = floor();
  BigRational half_point = BigRational(f) + BigRational(1, 2);
  return surd_compare(*this, half_point) == std::strong_ordering::less
             ? f
             : BigInt(f + 1);
}

QuadraticSurd QuadraticSurd::conjugate() const { return make(a_, -b_, c_, d_); }

QuadraticSurd QuadraticSurd::inverse() const {
  const BigRational A = rational_part();
  const BigRational B = radical_coefficient();
  const BigRational norm = A * A - B * B * BigRational(d_);
  if (norm == 0) throw std::domain_error("inverse of zero surd");
  return from_parts(A / norm, -B / norm, d_);
}

QuadraticSurd QuadraticSurd::operator-() const { return make(-a_, -b_, c_, d_); }

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
  BigInt d = common_radicand(x, y);
  return QuadraticSurd::from_parts(x.rational_part() + y.rational_part(),
                                   x.radical_coefficient() + y.radical_coefficient(),
                                   d);
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
  return x + (-y);
}

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
  BigInt d = common_radicand(x, y);
  const BigRational A1 = x.rational_part(), B1 = x.radical_coefficient();
  const BigRational A2 = y.rational_part(), B2 = y.radical_coefficient();
  return QuadraticSurd::from_parts(A1 * A2 + B1 * B2 * BigRational(d),
                                   A1 * B2 + A2 * B1, d);
}

QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
  return x * y.inverse();
}

double QuadraticSurd::to_double() const {
  return to_interval(64).mid_double();
}

std::string QuadraticSurd::to_string() const {
  std::ostringstream out;
  if (is_rational()) {
    out << rational_part().get_str();
    return out.str();
  }
  out << "(" << a_.get_str() << (b_ < 0 ? " - " : " + ");
  BigInt mag = ::abs(b_);
  if (mag != 1) out << mag.get_str() << "*";
  out << "sqrt(" << d_.get_str() << "))";
  if (c_ != 1) out << "/" << c_.get_str();
  return out.str();
}

DyadicInterval QuadraticSurd::to_interval(long bits) const {
  return surd_to_interval(*this, bits);
}

QuadraticSurd surd_normalize(const RawSurd& raw) {
  return QuadraticSurd::make(raw.a, raw.b, raw.c, raw.d);
}

std::strong_ordering surd_compare(const QuadraticSurd& s, const BigRational& r) {
  const Sign sg = sign_of_quadratic(s.rational_part() - r,
                                    s.radical_coefficient(), s.d());
  return static_cast<int>(sg) <=> 0;
}

std::strong_ordering surd_compare(const QuadraticSurd& s, const QuadraticSurd& t) {
  return static_cast<int>((s - t).sign()) <=> 0;
}

DyadicInterval surd_to_interval(const QuadraticSurd& s, long bits) {
  if (bits < 1) throw ParameterError("surd_to_interval needs bits >= 1");
  if (s.is_rational()) return DyadicInterval::enclose(s.rational_part(), bits + 2);
  long work = bits + 16 +
              static_cast<long>(mpz_sizeinbase(s.b().get_mpz_t(), 2)) +
              static_cast<long>(mpz_sizeinbase(s.c().get_mpz_t(), 2));
  for (;;) {
    DyadicInterval root = DyadicInterval::enclose(s.d(), work).sqrt();
    DyadicInterval v = (DyadicInterval::enclose(s.a(), work) +
                        DyadicInterval::enclose(s.b(), work) * root) /
                       DyadicInterval::enclose(s.c(), work);
    // Required: width <= 2^-bits * max(1, |value|).
    BigRational scale = 1;
    if (!v.contains_zero()) {
      BigRational lo = abs(v.lower()), hi = abs(v.upper());
      scale = std::max(BigRational(1), std::min(lo, hi));
    }
    BigRational limit = scale;
    mpq_div_2exp(limit.get_mpq_t(), limit.get_mpq_t(), static_cast<unsigned long>(bits));
    if (v.width() <= limit) return v;
    work *= 2;
  }
}

// ---------------------------------------------------------------------------
// DyadicInterval

namespace {

long clamp_precision(long bits) {
  return std::max<long>(bits, MPFR_PREC_MIN);
}

BigRational mpfr_to_rational(const __mpfr_struct* x) {
  if (!mpfr_number_p(x)) throw std::domain_error("non-finite interval endpoint");
  if (mpfr_zero_p(x)) return BigRational(0);
  BigInt mantissa;
  mpfr_exp_t e = mpfr_get_z_2exp(mantissa.get_mpz_t(), x);
  BigRational r(mantissa);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return r;
}

std::string mpfr_to_decimal(const __mpfr_struct* x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), x, rnd);
  std::string s(raw);
  mpfr_free_str(raw);
  std::string out;
  std::size_t start = 0;
  if (s[0] == '-') {
    out += '-';
    start = 1;
  }
  out += s[start];
  if (s.size() > start + 1) {
    out += '.';
    out += s.substr(start + 1);
  }
  long e = static_cast<long>(exp10) - 1;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
  out += buf;
  return out;
}

// Scratch value with RAII cleanup.
struct Scratch {
  explicit Scratch(long bits) { mpfr_init2(v, clamp_precision(bits)); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  mpfr_t v;
};

}  // namespace

DyadicInterval::DyadicInterval(long bits) {
  mpfr_init2(lo_, clamp_precision(bits));
  mpfr_init2(hi_, clamp_precision(bits));
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

DyadicInterval::DyadicInterval(const DyadicInterval& other) {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

DyadicInterval::DyadicInterval(DyadicInterval&& other) noexcept {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

DyadicInterval& DyadicInterval::operator=(const DyadicInterval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

DyadicInterval& DyadicInterval::operator=(DyadicInterval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

DyadicInterval::~DyadicInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

DyadicInterval DyadicInterval::enclose(const BigRational& v, long bits) {
  DyadicInterval r(bits);
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::enclose(const BigInt& v, long bits) {
  DyadicInterval r(bits);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::enclose(double v, long bits) {
  DyadicInterval r(bits);
  mpfr_set_d(r.lo_, v, MPFR_RNDD);
  mpfr_set_d(r.hi_, v, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::pi(long bits) {
  DyadicInterval r(bits);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::hull(const BigRational& lo, const BigRational& hi,
                                    long bits) {
  if (lo > hi) throw std::domain_error("hull with lo > hi");
  DyadicInterval r(bits);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

bool DyadicInterval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool DyadicInterval::contains(const BigRational& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool DyadicInterval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

std::optional<Sign> DyadicInterval::certain_sign() const {
  if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) return Sign::zero;
  if (mpfr_sgn(lo_) > 0) return Sign::positive;
  if (mpfr_sgn(hi_) < 0) return Sign::negative;
  return std::nullopt;
}

BigRational DyadicInterval::lower() const { return mpfr_to_rational(lo_); }
BigRational DyadicInterval::upper() const { return mpfr_to_rational(hi_); }
double DyadicInterval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double DyadicInterval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double DyadicInterval::mid_double() const {
  Scratch m(precision() + 1);
  mpfr_add(m.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m.v, m.v, 1, MPFR_RNDN);
  return mpfr_get_d(m.v, MPFR_RNDN);
}

bool DyadicInterval::relative_width_below(double rel) const {
  if (contains_zero()) return is_point();
  Scratch w(precision() + 2), m(precision() + 2), a(precision() + 2);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  mpfr_abs(m.v, lo_, MPFR_RNDD);
  mpfr_abs(a.v, hi_, MPFR_RNDD);
  mpfr_min(m.v, m.v, a.v, MPFR_RNDD);
  mpfr_mul_d(m.v, m.v, rel, MPFR_RNDD);
  return mpfr_lessequal_p(w.v, m.v) != 0;
}

std::string DyadicInterval::lower_string(int digits) const {
  return mpfr_to_decimal(lo_, digits, MPFR_RNDD);
}

std::string DyadicInterval::upper_string(int digits) const {
  return mpfr_to_decimal(hi_, digits, MPFR_RNDU);
}

DyadicInterval DyadicInterval::operator-() const {
  DyadicInterval r(precision());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

DyadicInterval operator+(const DyadicInterval& x, const DyadicInterval& y) {
  DyadicInterval r(std::max(x.precision(), y.precision()));
  mpfr_add(r.lo_, x.lo_, y.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, x.hi_, y.hi_, MPFR_RNDU);
  return r;
}

DyadicInterval operator-(const DyadicInterval& x, const DyadicInterval& y) {
  DyadicInterval r(std::max(x.precision(), y.precision()));
  mpfr_sub(r.lo_, x.lo_, y.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, x.hi_, y.lo_, MPFR_RNDU);
  return r;
}

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Min over the four corner combinations rounded down, max rounded up.
void corner_extremes(BinaryOp op, const __mpfr_struct* xl, const __mpfr_struct* xh,
                     const __mpfr_struct* yl, const __mpfr_struct* yh,
                     mpfr_ptr lo, mpfr_ptr hi) {
  const long bits = static_cast<long>(mpfr_get_prec(lo));
  Scratch t(bits);
  const __mpfr_struct* xs[2] = {xl, xh};
  const __mpfr_struct* ys[2] = {yl, yh};
  bool first = true;
  for (auto* xv : xs) {
    for (auto* yv : ys) {
      op(t.v, xv, yv, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, lo)) mpfr_set(lo, t.v, MPFR_RNDD);
      op(t.v, xv, yv, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, hi)) mpfr_set(hi, t.v, MPFR_RNDU);
      first = false;
    }
  }
}

}  // namespace

DyadicInterval operator*(const DyadicInterval& x, const DyadicInterval& y) {
  DyadicInterval r(std::max(x.precision(), y.precision()));
  corner_extremes(mpfr_mul, x.lo_, x.hi_, y.lo_, y.hi_, r.lo_, r.hi_);
  return r;
}

DyadicInterval operator/(const DyadicInterval& x, const DyadicInterval& y) {
  if (y.contains_zero()) throw std::domain_error("interval division by zero");
  DyadicInterval r(std::max(x.precision(), y.precision()));
  corner_extremes(mpfr_div, x.lo_, x.hi_, y.lo_, y.hi_, r.lo_, r.hi_);
  return r;
}

DyadicInterval DyadicInterval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  DyadicInterval r(precision());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::square() const {
  DyadicInterval a = abs();
  DyadicInterval r(precision());
  mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::sqrt() const {
  if (mpfr_sgn(hi_) < 0) throw std::domain_error("sqrt of negative interval");
  DyadicInterval r(precision());
  if (mpfr_sgn(lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw std::domain_error("log of non-positive interval");
  DyadicInterval r(precision());
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::acos() const {
  const long bits = precision();
  Scratch lo(bits), hi(bits);
  mpfr_set(lo.v, lo_, MPFR_RNDD);
  mpfr_set(hi.v, hi_, MPFR_RNDU);
  if (mpfr_cmp_si(lo.v, -1) < 0) mpfr_set_si(lo.v, -1, MPFR_RNDD);
  if (mpfr_cmp_si(hi.v, 1) > 0) mpfr_set_si(hi.v, 1, MPFR_RNDU);
  if (mpfr_greater_p(lo.v, hi.v)) throw std::domain_error("acos outside [-1, 1]");
  DyadicInterval r(bits);
  mpfr_acos(r.lo_, hi.v, MPFR_RNDD);
  mpfr_acos(r.hi_, lo.v, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::pow(unsigned long k) const {
  DyadicInterval r(precision());
  if (k == 0) {
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  const DyadicInterval base = (k % 2 == 0) ? abs() : *this;
  mpfr_pow_ui(r.lo_, base.lo_, k, MPFR_RNDD);
  mpfr_pow_ui(r.hi_, base.hi_, k, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::pow(const BigRational& exponent) const {
  if (mpfr_sgn(lo_) <= 0) throw std::domain_error("real power of non-positive interval");
  if (!exponent.get_den().fits_ulong_p() || !exponent.get_num().fits_slong_p()) {
    throw std::domain_error("exponent too large");
  }
  const unsigned long q = exponent.get_den().get_ui();
  const long p = exponent.get_num().get_si();
  const unsigned long magnitude = static_cast<unsigned long>(p < 0 ? -p : p);
  DyadicInterval root(precision());
  mpfr_rootn_ui(root.lo_, lo_, q, MPFR_RNDD);
  mpfr_rootn_ui(root.hi_, hi_, q, MPFR_RNDU);
  DyadicInterval positive = root.pow(magnitude);
  if (p >= 0) return positive;
  return enclose(BigInt(1), precision()) / positive;
}

DyadicInterval DyadicInterval::max(const DyadicInterval& other) const {
  DyadicInterval r(std::max(precision(), other.precision()));
  mpfr_max(r.lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, hi_, other.hi_, MPFR_RNDU);
  return r;
}

DyadicInterval DyadicInterval::hull_with(const DyadicInterval& other) const {
  DyadicInterval r(std::max(precision(), other.precision()));
  mpfr_min(r.lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, hi_, other.hi_, MPFR_RNDU);
  return r;
}

// ---------------------------------------------------------------------------
// RadicalSum

RadicalSum::RadicalSum(const BigRational& r) {
  if (r != 0) terms_.emplace(BigInt(1), r);
}

RadicalSum::RadicalSum(const QuadraticSurd& s) {
  add_term(BigInt(1), s.rational_part());
  if (!s.is_rational()) add_term(s.d(), s.radical_coefficient());
}

void RadicalSum::add_term(const BigInt& k, const BigRational& c) {
  if (c == 0) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

std::size_t RadicalSum::radicand_count() const {
  return terms_.size() - (terms_.count(BigInt(1)) ? 1 : 0);
}

BigRational RadicalSum::coefficient(const BigInt& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? BigRational(0) : it->second;
}

DyadicInterval RadicalSum::to_interval(long bits) const {
  DyadicInterval total(bits);
  for (const auto& [k, c] : terms_) {
    DyadicInterval coeff = DyadicInterval::enclose(c, bits);
    if (k == 1) {
      total = total + coeff;
    } else {
      total = total + coeff * DyadicInterval::enclose(k, bits).sqrt();
    }
  }
  return total;
}

std::optional<Sign> RadicalSum::exact_sign() const {
  if (terms_.empty()) return Sign::zero;
  const std::size_t radicals = radicand_count();
  const BigRational r = coefficient(BigInt(1));
  if (radicals == 0) return sign_of(r);
  std::vector<std::pair<BigInt, BigRational>> irr;
  for (const auto& [k, c] : terms_) {
    if (k != 1) irr.emplace_back(k, c);
  }
  if (radicals == 1) return sign_of_quadratic(r, irr[0].second, irr[0].first);
  if (radicals == 2) {
    // r + s*sqrt(d1) + t*sqrt(d2): compare u = r + s*sqrt(d1) with
    // -t*sqrt(d2) after one squaring.
    const auto& [d1, s] = irr[0];
    const auto& [d2, t] = irr[1];
    const Sign su = sign_of_quadratic(r, s, d1);
    const Sign sv = sign_of(t);
    if (su == Sign::zero) return sv;
    if (su == sv) return su;
    const BigRational rational = r * r + s * s * BigRational(d1) - t * t * BigRational(d2);
    const BigRational radical = 2 * r * s;
    const Sign sd = sign_of_quadratic(rational, radical, d1);
    if (sd == Sign::positive) return su;
    if (sd == Sign::negative) return sv;
    return Sign::zero;
  }
  return std::nullopt;
}

RadicalSum RadicalSum::operator-() const {
  RadicalSum r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

RadicalSum operator+(const RadicalSum& x, const RadicalSum& y) {
  RadicalSum r = x;
  for (const auto& [k, c] : y.terms_) r.add_term(k, c);
  return r;
}

RadicalSum operator-(const RadicalSum& x, const RadicalSum& y) { return x + (-y); }

RadicalSum operator*(const RadicalSum& x, const RadicalSum& y) {
  RadicalSum r;
  for (const auto& [k1, c1] : x.terms_) {
    for (const auto& [k2, c2] : y.terms_) {
      // sqrt(k1)*sqrt(k2) = g*sqrt(k1*k2/g^2) with g = gcd(k1, k2).
      BigInt g;
      mpz_gcd(g.get_mpz_t(), k1.get_mpz_t(), k2.get_mpz_t());
      BigInt k = (k1 / g) * (k2 / g);
      r.add_term(k, c1 * c2 * BigRational(g));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
  enum class Kind { leaf, add, sub, mul, neg };
  Kind kind;
  RadicalSum leaf;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

std::shared_ptr<const Expr::Node> leaf_node(RadicalSum v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::leaf;
  n->leaf = std::move(v);
  return n;
}

DyadicInterval evaluate_node(const Expr::Node& n, long bits) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::leaf:
      return n.leaf.to_interval(bits);
    case Kind::add:
      return evaluate_node(*n.lhs, bits) + evaluate_node(*n.rhs, bits);
    case Kind::sub:
      return evaluate_node(*n.lhs, bits) - evaluate_node(*n.rhs, bits);
    case Kind::mul:
      return evaluate_node(*n.lhs, bits) * evaluate_node(*n.rhs, bits);
    case Kind::neg:
      return -evaluate_node(*n.lhs, bits);
  }
  throw std::logic_error("bad expression node");
}

RadicalSum expand_node(const Expr::Node& n) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::leaf:
      return n.leaf;
    case Kind::add:
      return expand_node(*n.lhs) + expand_node(*n.rhs);
    case Kind::sub:
      return expand_node(*n.lhs) - expand_node(*n.rhs);
    case Kind::mul:
      return expand_node(*n.lhs) * expand_node(*n.rhs);
    case Kind::neg:
      return -expand_node(*n.lhs);
  }
  throw std::logic_error("bad expression node");
}

}  // namespace

Expr::Expr(const BigRational& r) : node_(leaf_node(RadicalSum(r))) {}
Expr::Expr(const BigInt& r) : node_(leaf_node(RadicalSum(r))) {}
Expr::Expr(long r) : node_(leaf_node(RadicalSum(r))) {}
Expr::Expr(const QuadraticSurd& s) : node_(leaf_node(RadicalSum(s))) {}
Expr::Expr(const RadicalSum& s) : node_(leaf_node(s)) {}

namespace {
std::shared_ptr<const Expr::Node> binary(Expr::Node::Kind kind,
                                         std::shared_ptr<const Expr::Node> l,
                                         std::shared_ptr<const Expr::Node> r) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}
}  // namespace

Expr operator+(const Expr& x, const Expr& y) {
  return Expr(binary(Expr::Node::Kind::add, x.node_, y.node_));
}
Expr operator-(const Expr& x, const Expr& y) {
  return Expr(binary(Expr::Node::Kind::sub, x.node_, y.node_));
}
Expr operator*(const Expr& x, const Expr& y) {
  return Expr(binary(Expr::Node::Kind::mul, x.node_, y.node_));
}
Expr Expr::operator-() const {
  return Expr(binary(Node::Kind::neg, node_, nullptr));
}

DyadicInterval Expr::evaluate(long bits) const { return evaluate_node(*node_, bits); }
RadicalSum Expr::expand() const { return expand_node(*node_); }

Sign certified_sign(const Expr& expr, const CertifyOptions& options) {
  for (long bits = options.start_bits; bits <= options.cap_bits; bits *= 2) {
    if (auto s = expr.evaluate(bits).certain_sign()) return *s;
    if (bits == options.start_bits) {
      RadicalSum exact = expr.expand();
      if (exact.is_zero()) return Sign::zero;
      if (auto s = exact.exact_sign()) return *s;
    }
  }
  throw UndecidedSign("sign undecided at " + std::to_string(options.cap_bits) +
                      " bits");
}

Sign certified_sign(const RadicalSum& value, const CertifyOptions& options) {
  if (auto s = value.exact_sign()) return *s;
  for (long bits = options.start_bits; bits <= options.cap_bits; bits *= 2) {
    if (auto s = value.to_interval(bits).certain_sign()) return *s;
  }
  throw UndecidedSign("sign undecided at " + std::to_string(options.cap_bits) +
                      " bits");
}

DyadicInterval certified_interval(const Expr& expr, double rel,
                                  const CertifyOptions& options) {
  std::optional<DyadicInterval> last;
  for (long bits = options.start_bits; bits <= options.cap_bits; bits *= 2) {
    DyadicInterval v = expr.evaluate(bits);
    if (v.relative_width_below(rel)) return v;
    if (bits == options.start_bits && v.contains_zero() && expr.expand().is_zero()) {
      return DyadicInterval(bits);
    }
    last = std::move(v);
  }
  if (last && !last->contains_zero()) return *last;
  throw UndecidedSign("interval not separated from zero at " +
                      std::to_string(options.cap_bits) + " bits");
}

// ---------------------------------------------------------------------------
// Parsing

BigRational parse_rational(const std::string& text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = n;
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (i == end) throw ParseError("empty rational", i);
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  auto read_digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < end && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
    return i > start;
  };
  std::string int_part, frac_part;
  bool have_int = read_digits(int_part);
  BigRational value;
  if (i < end && text[i] == '/') {
    if (!have_int) throw ParseError("missing numerator", i);
    ++i;
    std::string den;
    std::size_t den_pos = i;
    if (!read_digits(den)) throw ParseError("missing denominator", den_pos);
    if (i != end) throw ParseError("unexpected character", i);
    BigInt d(den, 10);
    if (d == 0) throw ParseError("zero denominator", den_pos);
    value = make_rational(BigInt(int_part, 10), d);
  } else {
    bool have_frac = false;
    if (i < end && text[i] == '.') {
      ++i;
      have_frac = read_digits(frac_part);
    }
    if (!have_int && !have_frac) throw ParseError("expected digits", i);
    long exponent = 0;
    if (i < end && (text[i] == 'e' || text[i] == 'E')) {
      ++i;
      bool neg_exp = false;
      if (i < end && (text[i] == '+' || text[i] == '-')) {
        neg_exp = text[i] == '-';
        ++i;
      }
      std::string exp_digits;
      std::size_t exp_pos = i;
      if (!read_digits(exp_digits)) throw ParseError("missing exponent", exp_pos);
      if (exp_digits.size() > 6) throw ParseError("exponent too large", exp_pos);
      exponent = std::stol(exp_digits);
      if (neg_exp) exponent = -exponent;
    }
    if (i != end) throw ParseError("unexpected character", i);
    BigInt digits((int_part.empty() ? std::string("0") : int_part) + frac_part, 10);
    exponent -= static_cast<long>(frac_part.size());
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    value = exponent >= 0 ? BigRational(digits * scale) : make_rational(digits, scale);
  }
  return negative ? BigRational(-value) : value;
}

std::string to_string(const BigRational& r) { return r.get_str(); }

BigRational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite double");
  BigRational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

}  // namespace littlewood
