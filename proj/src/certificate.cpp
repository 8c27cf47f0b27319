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

#include "littlewood/certificate.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

namespace littlewood {

const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "certificate";
    case FailureReason::dirichlet_gap: return "dirichlet-gap";
    case FailureReason::transversality_fail: return "transversality-fail";
    case FailureReason::tau_too_large: return "tau-too-large";
    case FailureReason::x0_too_small: return "x0-too-small";
    case FailureReason::lcm_too_large: return "lcm-too-large";
    case FailureReason::verify_fail: return "verify-fail";
  }
  return "?";
}

namespace {

BigInt power(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// 2 eps N > 1
bool dirichlet_condition(const BigRational& epsilon, const BigInt& N) {
  return 2 * epsilon * BigRational(N) > 1;
}

// Runs fn(i) for i in [0, count) over `threads` workers, strided.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

bool verify_certificate(const QuadraticSurd& alpha, const QuadraticSurd& beta,
                        const BigRational& epsilon, const LatticePoint& p) {
  const FValue f = f_eval(alpha, beta, p, epsilon);
  return f.sign != Sign::zero && f.vs_epsilon != Comparison::above;
}

TheoremCheck theorem_check(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                           const BigRational& epsilon, std::size_t n, const BigInt& N,
                           std::optional<BigInt> lambda) {
  if (epsilon <= 0) throw ParameterError("theorem_check needs eps > 0");
  if (!dirichlet_condition(epsilon, N)) {
    throw ParameterError("theorem_check needs N > 1/(2 eps); got N = " + N.get_str());
  }
  const DirichletPoint dp = dirichlet_search(alpha.value(), beta.value(), N);
  return theorem_check(alpha, beta, epsilon, n, dp,
                       lambda ? *lambda : joint_lambda(alpha, beta));
}

TheoremCheck theorem_check(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                           const BigRational& epsilon, std::size_t n, const DirichletPoint& P0,
                           const BigInt& lambda) {
  if (n < 1) throw ParameterError("theorem_check needs n >= 1");
  TheoremCheck c;
  c.n = n;
  c.N = P0.N;
  c.epsilon = epsilon;
  c.P0 = P0.point;
  c.x0 = P0.point.x;
  c.lambda = lambda;
  c.t_n = lcm_time(alpha, beta, n);
  c.t_n_below_x0 = c.t_n < c.x0;

  if (!dirichlet_bounds_hold(P0) || !dirichlet_condition(epsilon, P0.N)) {
    c.reason = FailureReason::dirichlet_gap;
    return c;
  }
  const ConeParams params = ConeParams::make(P0.N, epsilon);
  const ApproxLine line = approx_line(alpha, beta, P0, n);
  c.transversal = transversality_check(line, params);
  if (!c.transversal) {
    c.reason = FailureReason::transversality_fail;
    return c;
  }
  const EntryTimeReport entry = entry_time(line, params);
  c.tau_n = entry.tau_n;

  const BigInt half_pow = power(2, n - 1);
  const BigInt lambda_pow = power(lambda, 2 * n);
  c.tau_ok = entry.tau_n.upper() <= BigRational(half_pow);
  c.lambda_ok = half_pow < lambda_pow;
  c.x0_ok = lambda_pow <= c.x0 - 2;
  c.chain_ok = c.tau_ok && c.lambda_ok && c.x0_ok;
  if (!c.tau_ok) {
    c.reason = FailureReason::tau_too_large;
    return c;
  }
  if (!c.lambda_ok || !c.x0_ok) {
    c.reason = FailureReason::x0_too_small;
    return c;
  }
  if (c.t_n > c.x0 - 1) {
    c.reason = FailureReason::lcm_too_large;
    return c;
  }
  const RationalPoint g = line_gamma(line, BigRational(c.t_n));
  if (g.x.get_den() != 1 || g.y.get_den() != 1 || g.z.get_den() != 1) {
    throw InternalInconsistency("gamma(t_n) is not a lattice point");
  }
  c.candidate = LatticePoint{g.x.get_num(), g.y.get_num(), g.z.get_num()};
  c.candidate_in_cone = cone_contains(alpha.value(), beta.value(), *c.candidate, params).inside;
  c.verified = verify_certificate(alpha.value(), beta.value(), epsilon, *c.candidate);
  c.reason = *c.verified ? FailureReason::none : FailureReason::verify_fail;
  return c;
}

std::optional<BigInt> transversality_ceiling(const BigRational& epsilon, const QuadraticSurd& e_alpha,
                                             const QuadraticSurd& e_beta, const BigInt& cap) {
  const auto ok = [&](const BigInt& N) { return transversality_check(N, epsilon, e_alpha, e_beta); };
  if (cap < 2 || !ok(2)) return std::nullopt;
  if (ok(cap)) return cap;
  BigInt lo = 2, hi = cap;  // ok(lo), !ok(hi)
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

namespace {

BigInt first_admissible_N(const BigRational& epsilon) {
  // floor(1/(2 eps)) + 1
  const BigRational inv = 1 / (2 * epsilon);
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  return std::max(BigInt(f + 1), BigInt(2));
}

}  // namespace

std::vector<BigInt> search_grid(const BigRational& epsilon, const QuadraticSurd& e_alpha,
                                const QuadraticSurd& e_beta, GridStrategy grid, const BigInt& cap) {
  const BigInt lo = first_admissible_N(epsilon);
  const std::optional<BigInt> ceiling = transversality_ceiling(epsilon, e_alpha, e_beta, cap);
  std::vector<BigInt> out;
  if (!ceiling || *ceiling < lo) return out;
  if (grid == GridStrategy::full) {
    for (BigInt N = lo; N <= *ceiling; ++N) out.push_back(N);
    return out;
  }
  for (BigInt N = lo; N <= *ceiling; N *= 2) out.push_back(N);
  if (out.back() != *ceiling) out.push_back(*ceiling);
  return out;
}

SearchReport certificate_search(const QuadraticIrrational& alpha, const QuadraticIrrational& beta,
                                const BigRational& epsilon, const SearchOptions& options) {
  if (options.n_max < 1 || options.n_min < 1) throw ParameterError("certificate_search needs n >= 1");
  if (epsilon <= 0) throw ParameterError("certificate_search needs eps > 0");
  const BigInt lambda = options.lambda ? *options.lambda : joint_lambda(alpha, beta);

  // (n, N) cells; an empty grid contributes its first N so the failure shows.
  std::vector<std::pair<std::size_t, BigInt>> cells;
  for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
    std::vector<BigInt> grid = search_grid(epsilon, error_term(alpha, 2 * n).value,
                                           error_term(beta, 2 * n).value, options.grid, options.N_cap);
    if (grid.empty()) grid.push_back(first_admissible_N(epsilon));
    for (BigInt& N : grid) cells.emplace_back(n, std::move(N));
  }

  std::vector<BigInt> distinct;
  for (const auto& c : cells) distinct.push_back(c.second);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::optional<DirichletPoint>> points(distinct.size());
  parallel_for(distinct.size(), options.threads, [&](std::size_t i) {
    points[i] = dirichlet_search(alpha.value(), beta.value(), distinct[i]);
  });
  std::map<BigInt, const DirichletPoint*> by_N;
  for (std::size_t i = 0; i < distinct.size(); ++i) by_N[distinct[i]] = &*points[i];

  std::vector<std::optional<TheoremCheck>> results(cells.size());
  parallel_for(cells.size(), options.threads, [&](std::size_t i) {
    results[i] = theorem_check(alpha, beta, epsilon, cells[i].first, *by_N.at(cells[i].second), lambda);
  });

  SearchReport report;
  for (auto& r : results) {
    ++report.reason_counts[static_cast<std::size_t>(r->reason)];
    if (r->reason == FailureReason::none) {
      ++report.certificates;
      if (!report.certificate) report.certificate = *r;
    }
    report.cells.push_back(std::move(*r));
  }
  const LatticePoint trivial{1, alpha.value().nearest_integer(), beta.value().nearest_integer()};
  if (verify_certificate(alpha.value(), beta.value(), epsilon, trivial)) report.trivial_witness = trivial;
  return report;
}

PsiEval psi_eval(const DyadicInterval& u, const BigRational& X, const BigInt& x0, const BigInt& N,
                 const BigRational& C, long bits) {
  if (u.certain_sign() != Sign::positive) throw ParameterError("psi_eval needs u > 0");
  if (X <= 0) throw ParameterError("psi_eval needs X > 0");
  const auto k = [bits](long v) { return DyadicInterval::enclose(BigRational(v), bits); };
  const DyadicInterval two = k(2);
  const DyadicInterval two_35_2 = two.pow(make_rational(35, 2));
  PsiEval p;
  p.u = u;
  p.X = DyadicInterval::enclose(X, bits);
  p.a = two_35_2 * (p.X.pow(4) / k(4) + k(2));
  p.b = two_35_2 * p.X.pow(make_rational(5, 2));
  p.c = k(4) * two.sqrt() * p.X;
  p.d = two.pow(14) * DyadicInterval::enclose(BigRational(C / BigRational(x0)), bits);
  p.e = two.pow(15) * DyadicInterval::enclose(BigRational(N - x0), bits);
  p.value = p.a * u.pow(18) + p.b * u.pow(16) + p.c * u.pow(14) - p.d * u.pow(8) - p.e;
  p.h_value = p.value - u / k(2);
  return p;
}

DyadicInterval b3_rhs_bound(const BigRational& X, long bits) {
  const DyadicInterval two = DyadicInterval::enclose(BigRational(2), bits);
  const DyadicInterval x = DyadicInterval::enclose(X, bits);
  return two.pow(make_rational(7, 4)) * x.pow(make_rational(1, 8)) +
         two.pow(make_rational(57, 8)) * x.pow(make_rational(39, 16)) +
         two.pow(make_rational(27, 4)) * x.pow(make_rational(9, 8));
}

namespace {

constexpr long kScanBits = 128;

// ceil(-log2(2^(5/8) X^(3/16))), at least 1.
std::size_t admissible_n_lo(const BigRational& X) {
  const DyadicInterval x = DyadicInterval::enclose(X, kScanBits);
  const DyadicInterval log2 = DyadicInterval::enclose(BigRational(2), kScanBits).log();
  const DyadicInterval v = DyadicInterval::enclose(make_rational(-5, 8), kScanBits) -
                           DyadicInterval::enclose(make_rational(3, 16), kScanBits) * (x.log() / log2);
  const BigRational lo = v.lower();
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  return c < 1 ? 1 : c.get_ui();
}

std::size_t admissible_n_hi(const BigInt& cap) {
  std::size_t n = 0;
  while (power(16, n + 1) <= cap - 1) ++n;
  return n;
}

}  // namespace

B3ScanReport b3_infeasibility_scan(const std::vector<B3Pair>& pairs,
                                   const std::vector<BigRational>& epsilons,
                                   std::size_t u_grid, unsigned threads, GridStrategy grid) {
  if (u_grid < 2) throw ParameterError("b3 scan needs at least two u points");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const BigInt m = std::max(pairs[i].alpha.max_partial_quotient(), pairs[i].beta.max_partial_quotient());
    if (m > 3) {
      throw ProfileViolation("pair " + pairs[i].id + " has a partial quotient " + m.get_str() +
                                 " > 3",
                             i);
    }
  }
  B3ScanReport report;
  const BigInt cap = 1000000;
  for (const B3Pair& pair : pairs) {
    const BadProfile profile = bad_profile(pair.alpha, pair.beta, 10000);
    for (const BigRational& eps : epsilons) {
      B3Entry e;
      e.pair_id = pair.id;
      e.epsilon = eps;
      e.profile = profile;
      const BigRational X = 2 * eps;
      e.n_lo = admissible_n_lo(X);

      SearchOptions opt;
      opt.n_min = e.n_lo;
      opt.n_max = std::max(e.n_lo, admissible_n_hi(cap));
      opt.grid = grid;
      opt.N_cap = cap;
      opt.lambda = BigInt(16);
      opt.threads = threads;
          e.n_hi = opt.n_max;
      e.search = certificate_search(pair.alpha, pair.beta, eps, opt);
      report.certificates += e.search.certificates;

      BigInt x0 = 0, N_for_psi = 0;
      for (const TheoremCheck& c : e.search.cells) {
        if (c.x0 > x0) {
          x0 = c.x0;
          N_for_psi = c.N;
        }
      }
      if (x0 == 0) {
        N_for_psi = first_admissible_N(eps);
        x0 = dirichlet_search(pair.alpha.value(), pair.beta.value(), N_for_psi).point.x;
      }

      const DyadicInterval two = DyadicInterval::enclose(BigRational(2), kScanBits);
      const DyadicInterval Xi = DyadicInterval::enclose(X, kScanBits);
      e.u_lo = two.pow(make_rational(-5, 8)) * Xi.pow(make_rational(-3, 16));
      e.u_hi = x0 > 1 ? DyadicInterval::enclose(BigRational(x0 - 1), kScanBits).pow(make_rational(1, 4))
                      : DyadicInterval::enclose(BigRational(0), kScanBits);
      e.rhs = b3_rhs_bound(X, kScanBits);
      e.psi_at_u_lo = psi_eval(e.u_lo, X, x0, N_for_psi, profile.C_estimate, kScanBits);
      e.u_range_empty = e.u_hi.upper() < e.u_lo.lower();
      if (!e.u_range_empty) {
        const PsiEval& coef = *e.psi_at_u_lo;
        const DyadicInterval step =
            (e.u_hi - e.u_lo) / DyadicInterval::enclose(BigRational(static_cast<long>(u_grid - 1)), kScanBits);
        for (std::size_t k = 0; k < u_grid; ++k) {
          const DyadicInterval u =
              e.u_lo + step * DyadicInterval::enclose(BigRational(static_cast<long>(k)), kScanBits);
          const DyadicInterval lhs = coef.a * u.pow(4) + coef.b * u.pow(2) + coef.c;
          ++e.u_points;
          if ((lhs - e.rhs).certain_sign() == Sign::positive) ++e.u_confirmed;
        }
      }
      e.inequality_confirmed = e.u_range_empty || e.u_confirmed == e.u_points;
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

}  // namespace littlewood
