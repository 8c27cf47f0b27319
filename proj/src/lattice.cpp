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

#include "littlewood/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace littlewood {

std::string to_string(const LatticePoint& p) {
  return "(" + p.x.get_str() + ", " + p.y.get_str() + ", " + p.z.get_str() + ")";
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::below: return "below";
    case Comparison::equal: return "equal";
    case Comparison::above: return "above";
  }
  return "?";
}

TransformedPoint m_transform(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                             const LatticePoint& p) {
  const QuadraticSurd x(BigRational(p.x));
  return TransformedPoint{p.x, alpha * x - QuadraticSurd(BigRational(p.y)),
                          beta * x - QuadraticSurd(BigRational(p.z))};
}

Expr f_expr(const TransformedPoint& t) { return Expr(t.x) * Expr(t.u) * Expr(t.v); }

FValue f_eval(const QuadraticSurd& alpha, const QuadraticSurd& beta,
              const LatticePoint& p, const BigRational& epsilon) {
  if (epsilon <= 0) throw ParameterError("epsilon must be positive");
  const Expr f = f_expr(m_transform(alpha, beta, p));
  FValue out;
  out.sign = certified_sign(f);
  const Expr abs_f = out.sign == Sign::negative ? -f : f;
  out.magnitude = abs_f.evaluate(128);
  if (out.sign == Sign::zero) {
    out.magnitude = DyadicInterval::enclose(BigRational(0), 128);
    out.vs_epsilon = Comparison::below;
    return out;
  }
  switch (certified_sign(abs_f - Expr(epsilon))) {
    case Sign::negative: out.vs_epsilon = Comparison::below; break;
    case Sign::zero: out.vs_epsilon = Comparison::equal; break;
    case Sign::positive: out.vs_epsilon = Comparison::above; break;
  }
  return out;
}

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;  // 2^-53

// Nearest double to s and a rigorous bound on the difference.
struct DoubleApprox {
  double value;
  double error;
};

DoubleApprox approximate(const QuadraticSurd& s) {
  const DyadicInterval iv = s.to_interval(128);
  const double mid = iv.mid_double();
  const BigRational m = rational_from_double(mid);
  const BigRational e = std::max(abs(iv.upper() - m), abs(m - iv.lower()));
  // next double up is a valid bound
  return {mid, std::nextafter(e.get_d(), 1.0) + std::numeric_limits<double>::denorm_min()};
}

// ||x a|| from a double approximation, with an error bound on the result.
struct Residual {
  double dist;
  double error;
};

inline Residual residual(double x, const DoubleApprox& a) {
  const double t = x * a.value;
  const double r = std::fabs(t - std::nearbyint(t));
  // |t - x a| <= x err_a + half-ulp(t); ||.|| is 1-Lipschitz; t - round(t) is exact.
  return {r, x * a.error + std::fabs(t) * kUnit};
}

QuadraticSurd residual_exact(const QuadraticSurd& alpha, const BigInt& x, BigInt* nearest) {
  const QuadraticSurd xa = QuadraticSurd(BigRational(x)) * alpha;
  *nearest = xa.nearest_integer();
  return xa - QuadraticSurd(BigRational(*nearest));
}

}  // namespace

DirichletPoint dirichlet_search(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                                const BigInt& N) {
  if (N < 2) throw ParameterError("dirichlet_search needs N >= 2");
  if (N > BigInt(1L << 40)) throw ParameterError("dirichlet_search: N beyond 2^40");
  const long n_max = N.get_si();
  const DoubleApprox a = approximate(alpha), b = approximate(beta);
  const BigRational inv_n(1, N);
  const double threshold = 1.0 / std::sqrt(static_cast<double>(n_max));
  const double slack = threshold * 4 * kUnit;
  for (long x = 1; x <= n_max; ++x) {
    const double xd = static_cast<double>(x);
    const Residual ra = residual(xd, a);
    if (ra.dist - ra.error > threshold + slack) continue;
    const Residual rb = residual(xd, b);
    if (rb.dist - rb.error > threshold + slack) continue;
    DirichletPoint dp;
    dp.N = N;
    dp.point.x = x;
    dp.U0 = residual_exact(alpha, dp.point.x, &dp.point.y);
    if (surd_compare(dp.U0.square(), inv_n) == std::strong_ordering::greater) continue;
    dp.V0 = residual_exact(beta, dp.point.x, &dp.point.z);
    if (surd_compare(dp.V0.square(), inv_n) == std::strong_ordering::greater) continue;
    return dp;
  }
  throw InternalInconsistency("no simultaneous Dirichlet point with x0 <= " + N.get_str());
}

bool dirichlet_bounds_hold(const DirichletPoint& dp) {
  const BigRational inv_n(1, dp.N);
  const TransformedPoint t = m_transform(
      // alpha = (U0 + y0)/x0, recovered exactly
      (dp.U0 + QuadraticSurd(BigRational(dp.point.y))) / QuadraticSurd(BigRational(dp.point.x)),
      (dp.V0 + QuadraticSurd(BigRational(dp.point.z))) / QuadraticSurd(BigRational(dp.point.x)),
      dp.point);
  return dp.point.x >= 1 && dp.point.x <= dp.N && t.u == dp.U0 && t.v == dp.V0 &&
         surd_compare(dp.U0.square(), inv_n) != std::strong_ordering::greater &&
         surd_compare(dp.V0.square(), inv_n) != std::strong_ordering::greater;
}

bool bad_lower_bound_holds(const DirichletPoint& dp, const BigRational& C,
                           const BigRational& epsilon) {
  if (epsilon <= 0) throw ParameterError("epsilon must be positive");
  if (BigRational(dp.N) * 2 * epsilon <= 1) {
    throw ParameterError("bad lower bound needs N > 1/(2 eps)");
  }
  // C / sqrt(2 eps) < x0  <=>  C^2 < 2 eps x0^2 (for C >= 0)
  return C < 0 || C * C < 2 * epsilon * BigRational(dp.point.x * dp.point.x);
}

Expr min_scan_value(const QuadraticSurd& alpha, const QuadraticSurd& beta, long x) {
  BigInt y, z;
  const BigInt bx(x);
  const QuadraticSurd u = residual_exact(alpha, bx, &y).abs();
  const QuadraticSurd v = residual_exact(beta, bx, &z).abs();
  return Expr(bx) * Expr(u) * Expr(v);
}

namespace {

struct Candidate {
  long x;
  double lo;  // lower bound of the true value
  double hi;  // upper bound
};

// Keeps x unless some earlier x' in the chunk is certainly no larger.
std::vector<Candidate> scan_chunk(const DoubleApprox& a, const DoubleApprox& b,
                                  long first, long last) {
  std::vector<Candidate> out;
  double best_hi = std::numeric_limits<double>::infinity();
  for (long x = first; x <= last; ++x) {
    const double xd = static_cast<double>(x);
    const Residual ra = residual(xd, a);
    const Residual rb = residual(xd, b);
    const double g = xd * ra.dist * rb.dist;
    const double err = xd * (ra.error * (rb.dist + rb.error) + rb.error * ra.dist) +
                       g * 4 * kUnit + std::numeric_limits<double>::denorm_min();
    const double lo = g - err;
    if (lo < best_hi) {
      const double hi = g + err;
      out.push_back({x, lo, hi});
      best_hi = std::min(best_hi, hi);
    }
  }
  return out;
}

}  // namespace

std::vector<MinRecord> brute_min_scan(const QuadraticSurd& alpha,
                                      const QuadraticSurd& beta, long X,
                                      unsigned threads) {
  if (X < 1) throw ParameterError("brute_min_scan needs X >= 1");
  if (X > (1L << 40)) throw ParameterError("brute_min_scan: X beyond 2^40");
  const DoubleApprox a = approximate(alpha), b = approximate(beta);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<long>(X, 256))));

  std::vector<std::vector<Candidate>> parts(threads);
  {
    std::vector<std::thread> pool;
    const long span = (X + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const long first = 1 + static_cast<long>(t) * span;
      const long last = std::min(X, first + span - 1);
      if (first > last) continue;
      pool.emplace_back([&, t, first, last] { parts[t] = scan_chunk(a, b, first, last); });
    }
    for (auto& th : pool) th.join();
  }

  // Global prefix filter, then exact running minimum over the survivors.
  std::vector<MinRecord> records;
  std::optional<Expr> best;
  double best_hi = std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    for (const Candidate& c : part) {
      if (c.lo >= best_hi) continue;
      best_hi = std::min(best_hi, c.hi);
      const Expr value = min_scan_value(alpha, beta, c.x);
      if (best && certified_sign(value - *best) != Sign::negative) continue;
      records.push_back(MinRecord{c.x, value.evaluate(128)});
      best = value;
    }
  }
  return records;
}

namespace {

template <class T>
T cubic_at(const T& x, const T& r0, const T& r1, const T& r2) {
  return (x - r0) * (x - r1) * (x - r2);
}

// Point in [a, b] where the increasing function P crosses v, clipped to the
// ends.
template <class T>
T invert_increasing(const T& a, const T& b, const T& v, const T& r0, const T& r1,
                    const T& r2, int sign) {
  auto P = [&](const T& x) { return sign * cubic_at(x, r0, r1, r2); };
  if (P(a) >= v) return a;
  if (P(b) <= v) return b;
  T lo = a, hi = b;
  for (int i = 0; i < 400 && hi - lo > T(0); ++i) {
    const T mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (P(mid) <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

template <class T>
std::optional<T> sublevel_measure(T r0, T r1, T r2, T level) {
  using std::abs;
  using std::cbrt;
  using std::sqrt;
  const T s1 = r0 + r1 + r2;
  const T s2 = r0 * r1 + r0 * r2 + r1 * r2;
  T disc = s1 * s1 - 3 * s2;
  if (disc < 0) disc = 0;  // exact value is (1/2) sum (ri - rj)^2 >= 0
  const T c1 = (s1 - sqrt(disc)) / 3;
  const T c2 = (s1 + sqrt(disc)) / 3;
  const T reach = std::max({abs(r0), abs(r1), abs(r2)}) + cbrt(level) + 1;
  const T lo = -reach, hi = reach;
  const T e1 = std::clamp(c1, lo, hi), e2 = std::clamp(c2, lo, hi);
  T total = 0;
  // increasing, decreasing, increasing
  const T ends[4] = {lo, e1, e2, hi};
  for (int piece = 0; piece < 3; ++piece) {
    const T a = ends[piece], b = ends[piece + 1];
    if (!(a < b)) continue;
    const int sign = piece == 1 ? -1 : 1;
    const T left = invert_increasing(a, b, T(-level), r0, r1, r2, sign);
    const T right = invert_increasing(a, b, level, r0, r1, r2, sign);
    if (right < left) return std::nullopt;
    total += right - left;
  }
  if (!(total >= 0) || total > 2 * reach) return std::nullopt;
  return total;
}

using Extended = boost::multiprecision::cpp_bin_float_50;

Extended to_extended(const QuadraticSurd& s) {
  const DyadicInterval iv = s.to_interval(200);
  return Extended(iv.lower_string(45));
}

}  // namespace

double monic_cubic_sublevel_measure(double r0, double r1, double r2, double level) {
  if (!(level > 0)) throw ParameterError("sublevel measure needs a positive level");
  if (auto m = sublevel_measure<long double>(r0, r1, r2, level)) {
    return static_cast<double>(*m);
  }
  if (auto m = sublevel_measure<Extended>(r0, r1, r2, level)) return m->convert_to<double>();
  throw RootIsolationFailure("monotone-piece inversion failed at extended precision");
}

CartanReport cartan_measure(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                            const BigInt& y0, const BigInt& z0,
                            const BigRational& epsilon) {
  if (epsilon <= 0) throw ParameterError("epsilon must be positive");
  if (alpha.sign() == Sign::zero || beta.sign() == Sign::zero) {
    throw ParameterError("cartan_measure needs nonzero alpha, beta");
  }
  const QuadraticSurd r1 = QuadraticSurd(BigRational(y0)) / alpha;
  const QuadraticSurd r2 = QuadraticSurd(BigRational(z0)) / beta;
  const double ab = alpha.to_double() * beta.to_double();
  const double eps = epsilon.get_d();
  const double scaled = eps / std::fabs(ab);

  CartanReport rep;
  rep.roots = {0.0, r1.to_double(), r2.to_double()};
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.bound_monic = 2 * std::exp(1.0) * std::cbrt(eps);
  rep.bound_f_scaled = 2 * std::exp(1.0) * std::cbrt(scaled);

  auto run = [&](auto tag, double level) -> std::optional<double> {
    using T = decltype(tag);
    T a, b;
    if constexpr (std::is_same_v<T, Extended>) {
      a = to_extended(r1);
      b = to_extended(r2);
    } else {
      a = static_cast<T>(r1.to_double());
      b = static_cast<T>(r2.to_double());
    }
    auto m = sublevel_measure<T>(T(0), a, b, T(level));
    if (!m) return std::nullopt;
    return static_cast<double>(*m);
  };
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::optional<double> monic, f;
    if (attempt == 0) {
      monic = run(static_cast<long double>(0), eps);
      f = run(static_cast<long double>(0), scaled);
    } else {
      monic = run(Extended(0), eps);
      f = run(Extended(0), scaled);
      rep.extended_precision = true;
    }
    if (monic && f) {
      rep.measure_monic = *monic;
      rep.measure_f = *f;
      return rep;
    }
  }
  throw RootIsolationFailure("Cartan sublevel measure: inversion failed at extended precision");
}

}  // namespace littlewood
