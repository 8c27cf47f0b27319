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

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "littlewood/cone.hpp"
#include "littlewood/entrytime.hpp"
#include "littlewood/errors.hpp"
#include "littlewood/lattice.hpp"

namespace littlewood::cli {

namespace {

// Reads an optionally signed integer starting at `pos`; advances `pos`.
BigInt read_integer(const std::string& text, std::size_t& pos, bool allow_sign = true) {
  const std::size_t start = pos;
  std::string digits;
  if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    if (text[pos] == '-') digits += '-';
    ++pos;
  }
  const std::size_t first_digit = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
  }
  if (pos == first_digit) throw ParseError("expected an integer", start);
  return BigInt(digits, 10);  // base 10: leading zeros are not octal
}

void expect(const std::string& text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw ParseError(std::string("expected '") + c + "'", pos);
  }
  ++pos;
}

void expect_end(const std::string& text, std::size_t pos) {
  if (pos != text.size()) throw ParseError("trailing characters", pos);
}

std::optional<std::string> radicand_notice(const BigInt& d) {
  if (d <= 1) return std::nullopt;
  const auto [root, free_part] = split_square_factor(d);
  if (root == 1) return std::nullopt;
  std::string msg = "notice: sqrt(" + d.get_str() + ") = ";
  if (free_part == 1) return msg + root.get_str() + " is rational";
  return msg + root.get_str() + "*sqrt(" + free_part.get_str() + ")";
}

CFSpec parse_cf(const std::string& text, std::size_t pos) {
  expect(text, pos, '[');
  std::vector<BigInt> pre;
  std::vector<BigInt> period;
  const std::size_t a0_pos = pos;
  pre.push_back(read_integer(text, pos));
  bool periodic = false;
  if (pos < text.size() && text[pos] == ';') {
    ++pos;
    bool need_term = false;
    while (pos < text.size() && text[pos] != ']') {
      if (text[pos] == '(') {
        ++pos;
        for (;;) {
          const std::size_t at = pos;
          period.push_back(read_integer(text, pos, false));
          if (period.back() < 1) throw ParseError("partial quotients must be >= 1", at);
          if (pos < text.size() && text[pos] == ',') {
            ++pos;
            continue;
          }
          break;
        }
        expect(text, pos, ')');
        periodic = true;
        need_term = false;
        break;
      }
      const std::size_t at = pos;
      pre.push_back(read_integer(text, pos, false));
      if (pre.back() < 1) throw ParseError("partial quotients must be >= 1", at);
      need_term = false;
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        need_term = true;
      }
    }
    if (need_term && !periodic) throw ParseError("expected a partial quotient", pos);
  }
  expect(text, pos, ']');
  expect_end(text, pos);
  if (periodic) {
    if (pre.front() < 0) throw ParseError("a0 must be >= 0 for a periodic expansion", a0_pos);
    return CFSpec::from_periodic(pre, period);
  }
  // Finite expansion: fold back into p/q.
  const std::vector<Convergent> cs = convergents(pre);
  return CFSpec::from_rational(cs.back().value());
}

CFSpec to_unit_interval(const CFSpec& spec) {
  if (spec.kind == CFSpec::Kind::finite_rational) {
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), spec.rational.get_num_mpz_t(), spec.rational.get_den_mpz_t());
    return CFSpec::from_rational(spec.rational - f);
  }
  const QuadraticSurd v = spec.value();
  return CFSpec::from_surd(v - QuadraticSurd(BigRational(v.floor())));
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

BigInt parse_integer_option(const std::string& text, const std::string& name) {
  std::size_t pos = 0;
  try {
    BigInt v = read_integer(text, pos);
    expect_end(text, pos);
    return v;
  } catch (const ParseError& e) {
    throw ParseError("--" + name + ": expected an integer", e.position());
  }
}

BigRational parse_rational_option(const std::string& text, const std::string& name) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ParseError("--" + name + ": expected an exact rational such as 1/1000 or 0.001",
                     e.position());
  }
}

// Writes CSV and summary to their destinations.
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  std::ostream& notes() { return cfg_.quiet ? null_ : (cfg_.out_path.empty() ? err_ : out_); }
  std::ostringstream& summary() { return summary_; }

  void notice(const std::string& text) {
    if (!cfg_.quiet) err_ << text << "\n";
  }

  void finish(const CsvTable& table) {
    if (cfg_.out_path.empty()) {
      table.write(out_);
    } else {
      std::ofstream f(cfg_.out_path, std::ios::binary);
      if (!f) throw ParameterError("cannot open output file " + cfg_.out_path);
      table.write(f);
    }
    if (!cfg_.report_path.empty()) {
      std::ofstream r(cfg_.report_path, std::ios::binary);
      if (!r) throw ParameterError("cannot open report file " + cfg_.report_path);
      r << summary_.str();
    }
    notes() << summary_.str();
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::ostringstream null_;
  std::ostringstream summary_;
};

struct Context {
  const RunConfig& cfg;
  const CLI::App& sub;
  Sink& sink;
  CsvTable* table = nullptr;

  CFSpec spec(const std::string& text, bool frac) {
    try {
      ParsedNumber p = parse_number_spec(text, frac);
      if (p.notice) sink.notice(*p.notice);
      return p.spec;
    } catch (const ParseError& e) {
      throw ParameterError("number spec '" + text + "': " + e.what());
    }
  }
  QuadraticSurd surd(const std::string& text, bool frac) { return spec(text, frac).value(); }
  QuadraticIrrational irrational(const std::string& text, bool frac) {
    return QuadraticIrrational::from_spec(spec(text, frac));
  }
  QuadraticSurd alpha_surd() { return surd(cfg.alpha_text, cfg.alpha_frac); }
  QuadraticSurd beta_surd() { return surd(cfg.beta_text, cfg.beta_frac); }
  QuadraticIrrational alpha() { return irrational(cfg.alpha_text, cfg.alpha_frac); }
  QuadraticIrrational beta() { return irrational(cfg.beta_text, cfg.beta_frac); }
  BigRational epsilon() {
    BigRational e = parse_rational_option(cfg.epsilon_text, "epsilon");
    if (e <= 0) throw ParameterError("--epsilon must be positive");
    return e;
  }
  BigInt N() {
    BigInt n = parse_integer_option(cfg.N_text, "N");
    if (n < 1) throw ParameterError("--N must be >= 1");
    return n;
  }
};

// Records the complete option set of the subcommand plus the resolved numbers.
void record_config(CsvTable& table, const CLI::App& sub) {
  table.add_meta("tool", "littlewood");
  table.add_meta("subcommand", sub.get_name());
  std::istringstream lines(sub.config_to_str(true, false));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    table.add_meta(line.substr(0, eq), line.substr(eq + 1));
  }
}

int cmd_liminf(Context& ctx) {
  const QuadraticSurd a = ctx.alpha_surd(), b = ctx.beta_surd();
  if (ctx.cfg.max_x < 1) throw ParameterError("--max-x must be >= 1");
  const std::vector<MinRecord> recs = brute_min_scan(a, b, ctx.cfg.max_x, ctx.cfg.threads);
  CsvTable& t = *ctx.table;
  t.add_meta("alpha_value", a.to_string());
  t.add_meta("beta_value", b.to_string());
  for (const MinRecord& r : recs) t.add_row({std::to_string(r.x), lo_str(r.value), hi_str(r.value)});
  auto& s = ctx.sink.summary();
  s << "records: " << recs.size() << "\n";
  if (!recs.empty()) {
    const MinRecord& last = recs.back();
    s << "final record: x = " << last.x << ", x||x alpha|| ||x beta|| in [" << lo_str(last.value)
      << ", " << hi_str(last.value) << "]\n";
  }
  return kSuccess;
}

LatticePoint parse_point(const std::string& text) {
  std::size_t pos = 0;
  LatticePoint p;
  p.x = read_integer(text, pos);
  expect(text, pos, ',');
  p.y = read_integer(text, pos);
  expect(text, pos, ',');
  p.z = read_integer(text, pos);
  expect_end(text, pos);
  return p;
}

int cmd_cone_check(Context& ctx) {
  const QuadraticSurd a = ctx.alpha_surd(), b = ctx.beta_surd();
  const BigRational eps = ctx.epsilon();
  const ConeParams params = ConeParams::make(ctx.N(), eps);
  CsvTable& t = *ctx.table;
  t.add_meta("alpha_value", a.to_string());
  t.add_meta("beta_value", b.to_string());
  t.add_meta("phi", to_string(params.phi));
  auto& s = ctx.sink.summary();

  if (!ctx.cfg.point.empty()) {
    const LatticePoint p = parse_point(ctx.cfg.point);
    const ConeMembershipVerdict v = cone_contains(a, b, p, params);
    const FValue f = f_eval(a, b, p, eps);
    const bool box = parallelepiped_contains(a, b, p, params);
    t.add_row({p.x.get_str(), p.y.get_str(), p.z.get_str(), yes_no(v.inside), yes_no(v.x_in_range),
               lo_str(v.margin), hi_str(v.margin), yes_no(box), to_string(f.sign),
               lo_str(f.magnitude), hi_str(f.magnitude), to_string(f.vs_epsilon)});
    s << "point " << to_string(p) << ": " << (v.inside ? "inside" : "outside") << " the cone, "
      << (box ? "inside" : "outside") << " the box, |f| " << to_string(f.vs_epsilon)
      << " epsilon\n";
    // Points of the cone must satisfy 0 < |f| <= eps.
    const bool contradiction =
        v.inside && (f.sign == Sign::zero || f.vs_epsilon == Comparison::above);
    return contradiction ? kCertificationFailure : kSuccess;
  }

  if (2 * eps * BigRational(params.N) <= 1) {
    throw ParameterError("cone-check sampling needs N > 1/(2 epsilon)");
  }
  const InclusionReport rep =
      cone_inclusion_sample(a, b, params, ctx.cfg.samples, ctx.cfg.seed, ctx.cfg.threads);
  const std::vector<LatticePoint> pts = lattice_points_in_cone(a, b, params);
  std::size_t bad_points = 0;
  for (const LatticePoint& p : pts) {
    const FValue f = f_eval(a, b, p, eps);
    if (f.sign == Sign::zero || f.vs_epsilon == Comparison::above) ++bad_points;
    t.add_row({p.x.get_str(), p.y.get_str(), p.z.get_str(), to_string(f.sign), lo_str(f.magnitude),
               hi_str(f.magnitude), to_string(f.vs_epsilon)});
  }
  s << "samples: " << rep.samples << " (redraws " << rep.redraws << ")\n"
    << "strictly below epsilon: " << rep.strictly_below << "\n"
    << "violations of 0 < |f| <= epsilon: " << rep.violations.size() << "\n"
    << "lattice points in the cone: " << pts.size() << "\n";
  return rep.violations.empty() && bad_points == 0 ? kSuccess : kCertificationFailure;
}

int cmd_entry_time(Context& ctx) {
  const QuadraticIrrational a = ctx.alpha(), b = ctx.beta();
  const BigRational eps = ctx.epsilon();
  const BigInt N = ctx.N();
  if (ctx.cfg.n_min > ctx.cfg.n_max) throw ParameterError("--n-min exceeds --n-max");
  const ConeParams params = ConeParams::make(N, eps);
  const DirichletPoint dp = dirichlet_search(a.value(), b.value(), N);
  CsvTable& t = *ctx.table;
  t.add_meta("alpha_value", a.value().to_string());
  t.add_meta("beta_value", b.value().to_string());
  t.add_meta("P0", to_string(dp.point));
  std::size_t transversal = 0, within = 0;
  for (std::size_t n = ctx.cfg.n_min; n <= ctx.cfg.n_max; ++n) {
    const ApproxLine line = approx_line(a, b, dp, n);
    const BigInt t_n = lcm_time(a, b, n);
    std::vector<std::string> row = {std::to_string(n), line.q2n_alpha().get_str(),
                                    line.q2n_beta().get_str(), t_n.get_str()};
    try {
      const EntryTimeReport r = entry_time(line, params, false);
      std::string verdict;
      if (!r.transversal) {
        verdict = "non-transversal";
      } else if (r.inside_at_start) {
        verdict = "inside-at-start";
      } else if (r.within_segment) {
        verdict = "within-segment";
      } else {
        verdict = "beyond-segment";
      }
      transversal += r.transversal;
      within += r.transversal && (r.within_segment || r.inside_at_start);
      row.insert(row.end(), {lo_str(r.tau_n), hi_str(r.tau_n), yes_no(r.transversal), verdict});
    } catch (const NonPositiveDenominator&) {
      row.insert(row.end(), {"", "", "no", "non-positive-denominator"});
    }
    t.add_row(std::move(row));
  }
  ctx.sink.summary() << "P0 = " << to_string(dp.point) << "\n"
                     << "orders: " << t.rows() << ", transversal: " << transversal
                     << ", entry within the segment: " << within << "\n";
  return kSuccess;
}

GridStrategy parse_grid(const std::string& g) {
  if (g == "geometric") return GridStrategy::geometric;
  if (g == "full") return GridStrategy::full;
  throw ParameterError("--grid must be full or geometric");
}

int cmd_certificate(Context& ctx) {
  const QuadraticIrrational a = ctx.alpha(), b = ctx.beta();
  const BigRational eps = ctx.epsilon();
  SearchOptions opt;
  opt.n_min = ctx.cfg.n_min;
  opt.n_max = ctx.cfg.n_max;
  if (opt.n_min > opt.n_max) throw ParameterError("--n-min exceeds --n-max");
  opt.grid = parse_grid(ctx.cfg.grid);
  opt.N_cap = parse_integer_option(ctx.cfg.N_cap_text, "N-cap");
  if (!ctx.cfg.lambda_text.empty()) opt.lambda = parse_integer_option(ctx.cfg.lambda_text, "lambda");
  opt.threads = ctx.cfg.threads;
  const SearchReport rep = certificate_search(a, b, eps, opt);

  CsvTable& t = *ctx.table;
  t.add_meta("alpha_value", a.value().to_string());
  t.add_meta("beta_value", b.value().to_string());
  std::size_t disagreements = 0;
  for (const TheoremCheck& c : rep.cells) {
    std::string candidate;
    if (c.candidate) candidate = to_string(*c.candidate);
    if (c.verified && *c.verified && !verify_certificate(a.value(), b.value(), eps, *c.candidate)) {
      ++disagreements;
    }
    t.add_row({std::to_string(c.n), c.N.get_str(), c.P0.x.get_str(), c.P0.y.get_str(),
               c.P0.z.get_str(), yes_no(c.transversal), c.tau_n ? lo_str(*c.tau_n) : "",
               c.tau_n ? hi_str(*c.tau_n) : "", c.t_n.get_str(), c.lambda.get_str(),
               to_string(c.reason), candidate});
  }
  auto& s = ctx.sink.summary();
  s << "cells: " << rep.cells.size() << "\n";
  for (std::size_t i = 1; i < kFailureReasonCount; ++i) {
    s << "  " << to_string(static_cast<FailureReason>(i)) << ": " << rep.reason_counts[i] << "\n";
  }
  s << "certificates: " << rep.certificates << "\n";
  if (rep.trivial_witness) s << "trivial witness: " << to_string(*rep.trivial_witness) << "\n";
  if (rep.certificate) {
    s << "result: certificate " << to_string(*rep.certificate->candidate) << " at n = "
      << rep.certificate->n << ", N = " << rep.certificate->N << "\n";
  } else {
    s << "result: no certificate, search exhausted\n";
  }
  if (disagreements > 0) {
    s << "error: " << disagreements << " verified cells fail independent verification\n";
    return kCertificationFailure;
  }
  return kSuccess;
}

std::vector<B3Pair> default_b3_pairs() {
  const QuadraticSurd s2 = QuadraticSurd::sqrt_of(2), s3 = QuadraticSurd::sqrt_of(3);
  const QuadraticIrrational a(s2 - 1), b(s3 - 1), g(QuadraticSurd::make(-1, 1, 2, 5));
  return {{"sqrt2-1,sqrt3-1", a, b}, {"golden-1,sqrt2-1", g, a}, {"golden-1,sqrt3-1", g, b}};
}

std::vector<B3Pair> read_b3_pairs(Context& ctx) {
  std::ifstream f(ctx.cfg.pairs_path);
  if (!f) throw ParameterError("cannot open pairs file " + ctx.cfg.pairs_path);
  std::vector<B3Pair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string id, as, bs, extra;
    if (!(in >> id)) continue;
    if (!(in >> as >> bs) || (in >> extra)) {
      throw ParameterError("pairs file line " + std::to_string(lineno) +
                           ": expected '<id> <alpha-spec> <beta-spec>'");
    }
    try {
      pairs.push_back({id, ctx.irrational(as, ctx.cfg.alpha_frac), ctx.irrational(bs, ctx.cfg.beta_frac)});
    } catch (const ParameterError& e) {
      throw ParameterError("pairs file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (pairs.empty()) throw ParameterError("pairs file has no pairs");
  return pairs;
}

int cmd_b3_scan(Context& ctx) {
  const std::vector<B3Pair> pairs = ctx.cfg.pairs_path.empty() ? default_b3_pairs() : read_b3_pairs(ctx);
  std::vector<BigRational> eps;
  for (const std::string& e : ctx.cfg.epsilon_list) {
    eps.push_back(parse_rational_option(e, "epsilons"));
    if (eps.back() <= 0) throw ParameterError("--epsilons must be positive");
  }
  if (ctx.cfg.u_grid < 2) throw ParameterError("--u-grid must be >= 2");
  const B3ScanReport rep =
      b3_infeasibility_scan(pairs, eps, ctx.cfg.u_grid, ctx.cfg.threads, parse_grid(ctx.cfg.grid));
  CsvTable& t = *ctx.table;
  t.add_meta("scan_lambda", "16");
  for (const B3Pair& p : pairs) {
    t.add_meta("pair." + p.id, p.alpha.value().to_string() + " ; " + p.beta.value().to_string());
  }
  std::size_t confirmed = 0;
  for (const B3Entry& e : rep.entries) {
    confirmed += e.inequality_confirmed;
    const DyadicInterval C = DyadicInterval::enclose(e.profile.C_estimate, 128);
    t.add_row({e.pair_id, to_string(e.epsilon), e.profile.M.get_str(), e.profile.lambda.get_str(),
               lo_str(C), std::to_string(e.n_lo), std::to_string(e.n_hi),
               std::to_string(e.search.cells.size()), std::to_string(e.search.certificates),
               lo_str(e.u_lo), hi_str(e.u_lo), lo_str(e.u_hi), hi_str(e.u_hi),
               yes_no(e.u_range_empty), std::to_string(e.u_points), std::to_string(e.u_confirmed),
               yes_no(e.inequality_confirmed)});
  }
  auto& s = ctx.sink.summary();
  s << "pairs: " << pairs.size() << ", epsilons: " << eps.size() << "\n"
    << "certificates: " << rep.certificates
    << (rep.certificates == 0 ? " (search exhausted)" : "") << "\n"
    << "u-grid inequality confirmed: " << confirmed << "/" << rep.entries.size() << " entries\n";
  return confirmed == rep.entries.size() ? kSuccess : kCertificationFailure;
}

int cmd_cartan(Context& ctx) {
  const QuadraticSurd a = ctx.alpha_surd(), b = ctx.beta_surd();
  const BigRational eps = ctx.epsilon();
  std::vector<std::pair<BigInt, BigInt>> configs;
  if (!ctx.cfg.y0_text.empty() || !ctx.cfg.z0_text.empty()) {
    if (ctx.cfg.y0_text.empty() || ctx.cfg.z0_text.empty()) {
      throw ParameterError("--y0 and --z0 go together");
    }
    configs.emplace_back(parse_integer_option(ctx.cfg.y0_text, "y0"),
                         parse_integer_option(ctx.cfg.z0_text, "z0"));
  } else {
    // Modulo rather than a distribution object keeps draws identical across
    // standard libraries.
    std::mt19937_64 rng(ctx.cfg.seed);
    for (std::size_t i = 0; i < ctx.cfg.count; ++i) {
      const long y = static_cast<long>(rng() % 101) - 50;
      const long z = static_cast<long>(rng() % 101) - 50;
      configs.emplace_back(y, z);
    }
  }
  CsvTable& t = *ctx.table;
  std::size_t ok = 0, scaled_ok = 0;
  for (const auto& [y0, z0] : configs) {
    const CartanReport r = cartan_measure(a, b, y0, z0, eps);
    ok += r.monic_ok();
    scaled_ok += r.f_within_scaled();
    t.add_row({y0.get_str(), z0.get_str(), fmt_double(r.roots.at(0)), fmt_double(r.roots.at(1)),
               fmt_double(r.roots.at(2)), fmt_double(r.measure_monic), fmt_double(r.bound_monic),
               yes_no(r.monic_ok()), fmt_double(r.measure_f), fmt_double(r.bound_f_scaled),
               yes_no(r.f_within_scaled()), yes_no(r.extended_precision)});
  }
  ctx.sink.summary() << "configurations: " << configs.size() << "\n"
                     << "monic measure within 2e eps^(1/3): " << ok << "\n"
                     << "f measure within 2e (eps/(alpha beta))^(1/3): " << scaled_ok << "\n";
  return ok == configs.size() ? kSuccess : kCertificationFailure;
}

int cmd_levy(Context& ctx) {
  const QuadraticIrrational a = ctx.alpha();
  const std::size_t n_max = ctx.sub.count("--n-max") > 0 ? ctx.cfg.n_max : 40;
  if (n_max < 1) throw ParameterError("--n-max must be >= 1");
  CsvTable& t = *ctx.table;
  t.add_meta("alpha_value", a.value().to_string());
  t.add_meta("expansion", to_string(a.expansion()));
  LevyQuotient last;
  for (std::size_t n = 1; n <= n_max; ++n) {
    last = levy_quotient(a, n);
    t.add_row({std::to_string(n), a.convergent(n).q.get_str(), lo_str(last.value), hi_str(last.value)});
  }
  const DyadicInterval ref = levy_reference_constant();
  ctx.sink.summary() << "log(q_n)/n at n = " << n_max << ": [" << lo_str(last.value) << ", "
                     << hi_str(last.value) << "]\n"
                     << "almost-everywhere constant pi^2/(12 log 2): [" << lo_str(ref) << ", "
                     << hi_str(ref) << "]\n";
  return kSuccess;
}

// `--frac` right after `--alpha X` or `--beta X` applies to that number
// alone; anywhere else it applies to both.
std::vector<std::string> attach_frac(const std::vector<std::string>& args) {
  std::vector<std::string> out = args;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] != "--frac") continue;
    for (const std::string which : {"alpha", "beta"}) {
      const std::string flag = "--" + which;
      const bool spaced = i >= 2 && out[i - 2] == flag;
      const bool joined = i >= 1 && out[i - 1].rfind(flag + "=", 0) == 0;
      if (spaced || joined) out[i] = "--" + which + "-frac";
    }
  }
  return out;
}

}  // namespace

ParsedNumber parse_number_spec(const std::string& text, bool frac) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ParseError("expected one of sqrt:, quad:, cf:, rat:", 0);
  }
  const std::string kind = text.substr(0, colon);
  std::size_t pos = colon + 1;
  ParsedNumber out;
  if (kind == "sqrt") {
    const std::size_t at = pos;
    const BigInt d = read_integer(text, pos, false);
    expect_end(text, pos);
    if (d < 0) throw ParseError("negative radicand", at);
    out.notice = radicand_notice(d);
    out.spec = CFSpec::from_surd(QuadraticSurd::sqrt_of(d));
  } else if (kind == "quad") {
    BigInt v[4];
    std::size_t at[4];
    for (int i = 0; i < 4; ++i) {
      if (i > 0) expect(text, pos, ',');
      at[i] = pos;
      v[i] = read_integer(text, pos);
    }
    expect_end(text, pos);
    if (v[2] == 0) throw ParseError("zero denominator", at[2]);
    if (v[3] < 0) throw ParseError("negative radicand", at[3]);
    if (v[1] != 0) out.notice = radicand_notice(v[3]);
    out.spec = CFSpec::from_surd(QuadraticSurd::make(v[0], v[1], v[2], v[3]));
  } else if (kind == "cf") {
    out.spec = parse_cf(text, pos);
  } else if (kind == "rat") {
    try {
      out.spec = CFSpec::from_rational(parse_rational(text.substr(pos)));
    } catch (const ParseError& e) {
      throw ParseError("malformed rational", pos + e.position());
    }
  } else {
    throw ParseError("unknown number kind '" + kind + "'", 0);
  }
  if (frac) out.spec = to_unit_interval(out.spec);
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string q = "\"";
  for (char c : text) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InternalInconsistency("CSV row width differs from header");
  rows_.push_back(std::move(row));
}

void CsvTable::add_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_field(fields[i]);
    }
    out << "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  for (const auto& [k, v] : meta_) {
    std::string flat = v;
    std::replace(flat.begin(), flat.end(), '\n', ' ');
    std::replace(flat.begin(), flat.end(), '\r', ' ');
    out << "# " << k << '=' << flat << "\r\n";
  }
}

std::string lo_str(const DyadicInterval& v) { return v.lower_string(15); }
std::string hi_str(const DyadicInterval& v) { return v.upper_string(15); }

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact lattice-point and cone computations for the cubic x(alpha x - y)(beta x - z)",
               "littlewood"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "littlewood 1.0.0");

  const std::string spec_help = "number spec: sqrt:d | quad:a,b,c,d | cf:[a0;pre(per)] | rat:p/q";
  auto add_numbers = [&](CLI::App* s, bool with_beta) {
    s->add_option("--alpha", cfg.alpha_text, spec_help)->required();
    if (with_beta) s->add_option("--beta", cfg.beta_text, spec_help)->required();
    s->add_flag("--alpha-frac", cfg.alpha_frac, "map alpha to alpha - floor(alpha)");
    if (with_beta) s->add_flag("--beta-frac", cfg.beta_frac, "map beta to beta - floor(beta)");
    s->add_flag_callback(
        "--frac",
        [&] {
          cfg.alpha_frac = true;
          cfg.beta_frac = true;
        },
        "after --alpha X or --beta X: that number only; elsewhere: all numbers");
  };
  auto add_output = [&](CLI::App* s) {
    s->add_option("--out", cfg.out_path, "CSV output path (default: stdout)");
    s->add_option("--report", cfg.report_path, "also write the plain-text summary here");
    s->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    s->add_flag("-q,--quiet", cfg.quiet, "suppress the summary and notices");
  };
  auto add_eps = [&](CLI::App* s) {
    s->add_option("--epsilon", cfg.epsilon_text, "exact rational, e.g. 1/1000 or 0.001")->required();
  };

  CLI::App* liminf = app.add_subcommand("liminf", "running minima of x ||x alpha|| ||x beta||");
  add_numbers(liminf, true);
  liminf->add_option("--max-x", cfg.max_x, "scan x = 1..max-x")->capture_default_str();
  add_output(liminf);

  CLI::App* cone = app.add_subcommand("cone-check", "cone membership of a point, or sampled inclusion");
  add_numbers(cone, true);
  add_eps(cone);
  cone->add_option("--N", cfg.N_text, "cone height")->required();
  cone->add_option("--point", cfg.point, "x,y,z to test instead of sampling");
  cone->add_option("--samples", cfg.samples, "interior samples")->capture_default_str();
  cone->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  add_output(cone);

  CLI::App* entry = app.add_subcommand("entry-time", "entry times of the approximating lines into the cone");
  add_numbers(entry, true);
  add_eps(entry);
  entry->add_option("--N", cfg.N_text, "cone height")->required();
  entry->add_option("--n-min", cfg.n_min, "first order")->capture_default_str();
  entry->add_option("--n-max", cfg.n_max, "last order")->capture_default_str();
  add_output(entry);

  CLI::App* cert = app.add_subcommand("certificate", "search (n, N) for a certified lattice point with 0 < |f| <= epsilon");
  add_numbers(cert, true);
  add_eps(cert);
  cert->add_option("--n-min", cfg.n_min, "first order")->capture_default_str();
  cert->add_option("--n-max", cfg.n_max, "last order")->capture_default_str();
  cert->add_option("--grid", cfg.grid, "N grid")->check(CLI::IsMember({"full", "geometric"}))->capture_default_str();
  cert->add_option("--N-cap", cfg.N_cap_text, "largest N")->capture_default_str();
  cert->add_option("--lambda", cfg.lambda_text, "override (M+1)^2");
  add_output(cert);

  CLI::App* b3 = app.add_subcommand("b3-scan", "exhaustive search and inequality check over pairs with partial quotients <= 3");
  b3->add_option("--pairs", cfg.pairs_path, "file of '<id> <alpha-spec> <beta-spec>' lines (default: three built-in pairs)");
  cfg.epsilon_list = {"1/100", "1/10000", "1/1000000"};
  b3->add_option("--epsilons", cfg.epsilon_list, "exact rationals")->delimiter(',')->capture_default_str();
  b3->add_option("--u-grid", cfg.u_grid, "grid points in u")->capture_default_str();
  b3->add_option("--grid", cfg.grid, "N grid")->check(CLI::IsMember({"full", "geometric"}))->capture_default_str();
  b3->add_flag("--alpha-frac", cfg.alpha_frac, "map every alpha to the unit interval");
  b3->add_flag("--beta-frac", cfg.beta_frac, "map every beta to the unit interval");
  b3->add_flag_callback("--frac", [&] { cfg.alpha_frac = cfg.beta_frac = true; }, "map all numbers to the unit interval");
  add_output(b3);

  CLI::App* cartan = app.add_subcommand("cartan", "sublevel measure of the cubic along x");
  add_numbers(cartan, true);
  add_eps(cartan);
  cartan->add_option("--y0", cfg.y0_text, "single configuration (with --z0)");
  cartan->add_option("--z0", cfg.z0_text, "single configuration (with --y0)");
  cartan->add_option("--count", cfg.count, "random configurations")->capture_default_str();
  cartan->add_option("--seed", cfg.seed, "seed for the configurations")->capture_default_str();
  add_output(cartan);

  CLI::App* levy = app.add_subcommand("levy", "log(q_n)/n along the expansion");
  add_numbers(levy, false);
  levy->add_option("--n-max", cfg.n_max, "last index (default 40)");
  add_output(levy);

  std::vector<std::string> args = attach_frac(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  Sink sink(cfg, out, err);
  Context ctx{cfg, *sub, sink};

  const std::map<std::string, std::pair<std::vector<std::string>, int (*)(Context&)>> commands = {
      {"liminf", {{"x", "value_lo", "value_hi"}, cmd_liminf}},
      {"cone-check",
       {cfg.point.empty()
            ? std::vector<std::string>{"x", "y", "z", "f_sign", "f_lo", "f_hi", "f_vs_epsilon"}
            : std::vector<std::string>{"x", "y", "z", "inside", "x_in_range", "margin_lo", "margin_hi",
                                       "in_box", "f_sign", "f_lo", "f_hi", "f_vs_epsilon"},
        cmd_cone_check}},
      {"entry-time",
       {{"n", "q2n_alpha", "q2n_beta", "t_n", "tau_lo", "tau_hi", "transversal", "verdict"},
        cmd_entry_time}},
      {"certificate",
       {{"n", "N", "x0", "y0", "z0", "transversal", "tau_lo", "tau_hi", "t_n", "lambda", "reason",
         "candidate"},
        cmd_certificate}},
      {"b3-scan",
       {{"pair", "epsilon", "M", "profile_lambda", "C", "n_lo", "n_hi", "cells", "certificates", "u_lo_lo",
         "u_lo_hi", "u_hi_lo", "u_hi_hi", "u_range_empty", "u_points", "u_confirmed",
         "inequality_confirmed"},
        cmd_b3_scan}},
      {"cartan",
       {{"y0", "z0", "root0", "root1", "root2", "measure_monic", "bound_monic", "monic_ok",
         "measure_f", "bound_f_scaled", "f_within_scaled", "extended_precision"},
        cmd_cartan}},
      {"levy", {{"n", "q_n", "levy_lo", "levy_hi"}, cmd_levy}},
  };
  const auto& [header, fn] = commands.at(cfg.subcommand);
  CsvTable table(header);
  record_config(table, *sub);
  ctx.table = &table;

  try {
    const int code = fn(ctx);
    sink.finish(table);
    return code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MalformedSurd& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ProfileViolation& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonTransversal& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // UndecidedSign, RootIsolationFailure, InternalInconsistency and friends.
    err << "certification failure: " << e.what() << "\n";
    return kCertificationFailure;
  }
}

}  // namespace littlewood::cli
