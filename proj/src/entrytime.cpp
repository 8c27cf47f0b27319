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

#include "littlewood/entrytime.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace littlewood {

namespace {

constexpr long kStartBits = 128;
constexpr long kCapBits = 8192;
constexpr double kRootRel = 1e-12;

RadicalSum sq(const RadicalSum& v) { return v * v; }

// Roots of A t^2 + 2 B t + C, A != 0, given delta = B^2 - A C >= 0 with known
// signs. Returned ascending. Uses the cancellation-free pairing
// r1 = -(B + sgn(B) sqrt(delta)) / A, r2 = C / (A r1).
std::vector<DyadicInterval> quadratic_roots(RadicalSum A, RadicalSum B, RadicalSum C,
                                            const RadicalSum& delta, Sign delta_sign,
                                            long bits) {
  if (certified_sign(A) == Sign::negative) {
    A = -A;
    B = -B;
    C = -C;
  }
  const DyadicInterval a = A.to_interval(bits);
  const DyadicInterval b = B.to_interval(bits);
  const DyadicInterval c = C.to_interval(bits);
  if (delta_sign == Sign::zero) return {-b / a};
  const DyadicInterval s = delta.to_interval(bits).sqrt();
  switch (certified_sign(B)) {
    case Sign::positive: {
      const DyadicInterval w = b + s;
      return {-w / a, -c / w};
    }
    case Sign::negative: {
      const DyadicInterval w = s - b;
      return {c / w, w / a};
    }
    case Sign::zero:
      break;
  }
  return {-s / a, s / a};
}

BigRational bits_tolerance() {
  // 2^-44, a little under 1e-13
  BigInt d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, 44);
  return make_rational(1, d);
}

BigRational abs_rational(const BigRational& r) { return r < 0 ? BigRational(-r) : r; }

}  // namespace

ApproxLine approx_line(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                       const DirichletPoint& P0, std::size_t n) {
  ApproxLine line;
  line.n = n;
  line.P0 = P0;
  line.c2n_alpha = alpha.convergent(2 * n).value();
  line.c2n_beta = beta.convergent(2 * n).value();
  line.e2n_alpha = error_term(alpha, 2 * n);
  line.e2n_beta = error_term(beta, 2 * n);
  return line;
}

RealPoint to_real(const RationalPoint& p) {
  return RealPoint{p.x, QuadraticSurd(p.y), QuadraticSurd(p.z)};
}

RationalPoint line_gamma(const ApproxLine& line, const BigRational& t) {
  RationalPoint p{BigRational(line.P0.point.x) - t,
                  BigRational(line.P0.point.y) - t * line.c2n_alpha,
                  BigRational(line.P0.point.z) - t * line.c2n_beta};
  p.x.canonicalize();
  p.y.canonicalize();
  p.z.canonicalize();
  return p;
}

bool transversality_check(const BigInt& N, const BigRational& epsilon,
                          const QuadraticSurd& e_alpha, const QuadraticSurd& e_beta) {
  if (N < 2) throw ParameterError("transversality_check needs N >= 2");
  // N (N-1)^2 * 4 e^2 <= 2 eps for e = max(|e_a|, |e_b|)
  const BigRational k = BigRational(4 * N * (N - 1) * (N - 1));
  const auto ok = [&](const QuadraticSurd& e) {
    return surd_compare(QuadraticSurd(k) * e.square(), BigRational(2 * epsilon)) !=
           std::strong_ordering::greater;
  };
  return ok(e_alpha) && ok(e_beta);
}

bool transversality_check(const ApproxLine& line, const ConeParams& params) {
  return transversality_check(params.N, params.epsilon, line.e2n_alpha.value,
                              line.e2n_beta.value);
}

MembershipQuadratic membership_quadratic(const ApproxLine& line, const ConeParams& params) {
  const RadicalSum ea(line.e2n_alpha.value), eb(line.e2n_beta.value);
  const RadicalSum U0(line.P0.U0), V0(line.P0.V0);
  const BigRational gap = BigRational(params.N - line.P0.point.x);
  const RadicalSum phi(params.phi);
  MembershipQuadratic q;
  q.A = phi - sq(ea) - sq(eb);
  q.B = RadicalSum(BigRational(params.phi * gap)) + ea * U0 + eb * V0;
  q.C = RadicalSum(BigRational(params.phi * gap * gap)) - sq(U0) - sq(V0);
  return q;
}

Discriminant discriminant(const ApproxLine& line, const ConeParams& params) {
  const MembershipQuadratic q = membership_quadratic(line, params);
  const RadicalSum ea(line.e2n_alpha.value), eb(line.e2n_beta.value);
  const RadicalSum U0(line.P0.U0), V0(line.P0.V0);
  const BigRational gap = BigRational(params.N - line.P0.point.x);
  const RadicalSum phi(params.phi);
  const RadicalSum four(BigRational(4));

  Discriminant d;
  d.direct = four * (sq(q.B) - q.A * q.C);
  const RadicalSum quarter =
      RadicalSum(BigRational(2 * params.phi * gap)) * (ea * U0 + eb * V0) +
      RadicalSum(BigRational(2)) * ea * eb * U0 * V0 +
      RadicalSum(BigRational(params.phi * gap * gap)) * (sq(ea) + sq(eb)) +
      (phi - sq(ea)) * sq(V0) + (phi - sq(eb)) * sq(U0);
  d.rearranged = four * quarter;
  d.forms_agree = (d.direct - d.rearranged).is_zero();
  d.sign = certified_sign(d.direct);
  d.interval = d.direct.to_interval(kStartBits);
  return d;
}

EntryTimeReport entry_time(const ApproxLine& line, const ConeParams& params,
                           bool require_transversal) {
  EntryTimeReport r;
  r.transversal = transversality_check(line, params);
  if (require_transversal && !r.transversal) {
    throw NonTransversal("line of order " + std::to_string(line.n) +
                         " is not transversal to C(" + params.N.get_str() + ", " +
                         to_string(params.epsilon) + ")");
  }
  r.quadratic = membership_quadratic(line, params);
  const MembershipQuadratic& q = r.quadratic;
  if (certified_sign(q.A) != Sign::positive) {
    throw NonPositiveDenominator("phi - e_a^2 - e_b^2 <= 0");
  }
  const RadicalSum quarter = sq(q.B) - q.A * q.C;
  r.D_n = RadicalSum(BigRational(4)) * quarter;
  r.D_sign = certified_sign(quarter);
  r.D_interval = r.D_n.to_interval(kStartBits);
  r.denominator = q.A.to_interval(kStartBits);
  r.inside_at_start = certified_sign(q.C) != Sign::negative;

  if (r.D_sign != Sign::negative) {
    for (long bits = kStartBits;; bits *= 2) {
      std::vector<DyadicInterval> roots = quadratic_roots(q.A, q.B, q.C, quarter, r.D_sign, bits);
      r.t_minus = roots.front();
      r.t_plus = roots.back();
      if (bits >= kCapBits ||
          (r.t_minus.relative_width_below(kRootRel) && r.t_plus.relative_width_below(kRootRel))) {
        break;
      }
    }
  }
  if (r.inside_at_start) {
    r.tau_n = DyadicInterval::enclose(BigRational(0), kStartBits);
  } else {
    r.tau_n = r.t_plus;
  }
  r.tau_positive = r.tau_n.certain_sign() == Sign::positive;
  const BigRational x0(line.P0.point.x);
  r.tau_below_x0 = r.tau_n.upper() < x0;
  r.within_segment = r.tau_n.upper() <= x0 - 1;
  return r;
}

AngleReport angle(const ApproxLine& line) {
  const RadicalSum a(line.alpha()), b(line.beta());
  const RadicalSum ca(line.c2n_alpha), cb(line.c2n_beta);
  const RadicalSum one(BigRational(1));
  const RadicalSum num = one + a * ca + b * cb;
  const RadicalSum n1 = one + sq(a) + sq(b);
  const RadicalSum n2 = one + sq(ca) + sq(cb);
  AngleReport out;
  out.cos_at_most_one = certified_sign(n1 * n2 - sq(num)) != Sign::negative;
  for (long bits = kStartBits;; bits *= 2) {
    out.cos_theta = num.to_interval(bits) / (n1.to_interval(bits).sqrt() * n2.to_interval(bits).sqrt());
    out.theta_n = out.cos_theta.acos();
    if (bits >= kCapBits || out.theta_n.relative_width_below(kRootRel)) break;
  }
  return out;
}

bool CubicEntry::not_after(const DyadicInterval& tau_n, double tolerance) const {
  if (!found) return false;
  const BigRational hi = tau_n.upper();
  const BigRational scale = std::max(BigRational(1), abs_rational(hi));
  return lo <= hi + rational_from_double(tolerance) * scale;
}

namespace {

// h(t) = g(t) - level * eps with g(t) = (x0 - t)(U0 - t e_a)(V0 - t e_b).
class CubicLevels {
 public:
  CubicLevels(const ApproxLine& line, const BigRational& epsilon)
      : x0_(line.P0.point.x),
        U0_(line.P0.U0),
        V0_(line.P0.V0),
        ea_(line.e2n_alpha.value),
        eb_(line.e2n_beta.value),
        eps_(epsilon) {}

  Sign sign_at(const BigRational& t, Sign level) {
    const auto key = std::make_pair(t, static_cast<int>(level));
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const QuadraticSurd tt(t);
    const RadicalSum g = RadicalSum(BigRational(x0_ - t)) * RadicalSum(U0_ - tt * ea_) *
                         RadicalSum(V0_ - tt * eb_);
    const RadicalSum h = g - RadicalSum(level == Sign::positive ? eps_ : BigRational(-eps_));
    const Sign s = certified_sign(h);
    cache_.emplace(key, s);
    return s;
  }

  // g over [lo, hi] by interval arithmetic.
  DyadicInterval g_over(const BigRational& lo, const BigRational& hi, long bits) const {
    const DyadicInterval t = DyadicInterval::hull(lo, hi, bits);
    return (DyadicInterval::enclose(x0_, bits) - t) *
           (surd_to_interval(U0_, bits) - t * surd_to_interval(ea_, bits)) *
           (surd_to_interval(V0_, bits) - t * surd_to_interval(eb_, bits));
  }

  // Coefficients of g'(t) = a2 t^2 + a1 t + a0.
  void derivative(RadicalSum& a2, RadicalSum& a1, RadicalSum& a0) const {
    const RadicalSum U0(U0_), V0(V0_), ea(ea_), eb(eb_), x0{BigRational(x0_)};
    const RadicalSum p0 = U0 * V0;
    const RadicalSum p1 = -(ea * V0 + eb * U0);
    const RadicalSum p2 = ea * eb;
    a2 = RadicalSum(BigRational(-3)) * p2;
    a1 = RadicalSum(BigRational(2)) * (x0 * p2 - p1);
    a0 = x0 * p1 - p0;
  }

  const BigRational& epsilon() const { return eps_; }

 private:
  BigInt x0_;
  QuadraticSurd U0_, V0_, ea_, eb_;
  BigRational eps_;
  std::map<std::pair<BigRational, int>, Sign> cache_;
};

// Critical points of g as enclosures, ascending.
std::vector<DyadicInterval> critical_points(const CubicLevels& h, long bits) {
  RadicalSum a2, a1, a0;
  h.derivative(a2, a1, a0);
  if (a2.is_zero()) {
    if (a1.is_zero()) return {};
    return {-a0.to_interval(bits) / a1.to_interval(bits)};
  }
  // a2 t^2 + 2 (a1 / 2) t + a0
  const RadicalSum half = RadicalSum(make_rational(1, 2)) * a1;
  const RadicalSum delta = half * half - a2 * a0;
  const Sign ds = certified_sign(delta);
  if (ds == Sign::negative) return {};
  return quadratic_roots(a2, half, a0, delta, ds, bits);
}

struct Segment {
  BigRational lo, hi;
  bool monotone = true;
};

void bisect(CubicLevels& h, Sign level, BigRational a, BigRational b, Sign sa,
            std::vector<CubicRoot>& roots) {
  const BigRational tol = bits_tolerance();
  for (;;) {
    const BigRational scale = std::max(BigRational(1), abs_rational(b));
    if (b - a <= tol * scale) break;
    BigRational m = (a + b) / 2;
    m.canonicalize();
    const Sign sm = h.sign_at(m, level);
    if (sm == Sign::zero) {
      roots.push_back({level, m, m});
      return;
    }
    if (sm == sa) {
      a = m;
    } else {
      b = m;
    }
  }
  roots.push_back({level, a, b});
}

// One isolation pass; nullopt asks for more precision.
std::optional<std::vector<CubicRoot>> isolate(CubicLevels& h, const BigRational& T, long bits) {
  std::vector<Segment> segments;
  BigRational cur(0);
  std::optional<BigRational> prev_hi;
  for (const DyadicInterval& c : critical_points(h, bits)) {
    BigRational lo = c.lower(), hi = c.upper();
    if (prev_hi && lo <= *prev_hi) return std::nullopt;  // windows overlap
    prev_hi = hi;
    if (hi < 0 || lo > T) continue;
    lo = std::max(lo, BigRational(0));
    hi = std::min(hi, T);
    if (cur < lo) segments.push_back({cur, lo, true});
    segments.push_back({std::max(cur, lo), hi, false});
    cur = std::max(cur, hi);
  }
  if (cur < T || segments.empty()) segments.push_back({cur, T, true});

  std::vector<CubicRoot> roots;
  const auto add_point = [&roots](Sign level, const BigRational& t) {
    for (const CubicRoot& r : roots) {
      if (r.level == level && r.lo == t && r.hi == t) return;
    }
    roots.push_back({level, t, t});
  };
  for (const Segment& s : segments) {
    for (Sign level : {Sign::positive, Sign::negative}) {
      const Sign sa = h.sign_at(s.lo, level);
      const Sign sb = h.sign_at(s.hi, level);
      if (sa == Sign::zero) add_point(level, s.lo);
      if (sb == Sign::zero) add_point(level, s.hi);
      if (s.monotone) {
        if (sa != Sign::zero && sb != Sign::zero && sa != sb) {
          bisect(h, level, s.lo, s.hi, sa, roots);
        }
        continue;
      }
      // critical window: h must keep one sign inside it
      if (s.lo == s.hi) continue;
      const DyadicInterval g = h.g_over(s.lo, s.hi, bits);
      const DyadicInterval e = DyadicInterval::enclose(h.epsilon(), bits);
      const DyadicInterval v = level == Sign::positive ? g - e : g + e;
      if (v.contains_zero()) return std::nullopt;
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const CubicRoot& x, const CubicRoot& y) { return x.lo < y.lo; });
  return roots;
}

}  // namespace

CubicEntry cubic_entry_time(const ApproxLine& line, const BigRational& epsilon) {
  if (epsilon <= 0) throw ParameterError("cubic_entry_time needs eps > 0");
  CubicLevels h(line, epsilon);
  const BigRational T = BigRational(line.P0.point.x - 1);
  if (T < 0) throw ParameterError("cubic_entry_time needs x0 >= 1");

  CubicEntry out;
  std::optional<std::vector<CubicRoot>> roots;
  for (long bits = kStartBits; bits <= kCapBits && !roots; bits *= 2) {
    roots = isolate(h, T, bits);
  }
  if (!roots) {
    throw RootIsolationFailure("cubic level set touches a critical point within " +
                               std::to_string(kCapBits) + " bits");
  }
  out.roots = std::move(*roots);
  out.starts_inside = h.sign_at(BigRational(0), Sign::positive) != Sign::positive &&
                      h.sign_at(BigRational(0), Sign::negative) != Sign::negative;
  if (out.starts_inside) {
    out.found = true;
    out.lo = out.hi = 0;
  } else if (!out.roots.empty()) {
    out.found = true;
    out.lo = out.roots.front().lo;
    out.hi = out.roots.front().hi;
  }
  return out;
}

}  // namespace littlewood
