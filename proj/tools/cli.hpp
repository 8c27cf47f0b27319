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

// Command-line front end: number specs, CSV emission and subcommand dispatch.

#ifndef LITTLEWOOD_TOOLS_CLI_HPP_
#define LITTLEWOOD_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "littlewood/certificate.hpp"
#include "littlewood/cfrac.hpp"

namespace littlewood::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 2, kCertificationFailure = 3 };

struct ParsedNumber {
  CFSpec spec;
  std::optional<std::string> notice;  // set when a radicand was reduced
};

// sqrt:<d> | quad:a,b,c,d | cf:[a0;pre(per)] | rat:p/q, where quad means
// (a + b sqrt(d))/c. `frac` replaces the value by value - floor(value).
// Throws ParseError with the offending position.
ParsedNumber parse_number_spec(const std::string& text, bool frac = false);

// RFC 4180 field quoting; fields are quoted only when needed.
std::string csv_field(const std::string& text);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  void add_meta(const std::string& key, const std::string& value);
  std::size_t rows() const { return rows_.size(); }

  // Header, rows, then the metadata block as '# key=value' lines.
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// 15 significant digits, rounded outward.
std::string lo_str(const DyadicInterval& v);
std::string hi_str(const DyadicInterval& v);

struct RunConfig {
  std::string subcommand;
  std::string alpha_text, beta_text;
  bool alpha_frac = false, beta_frac = false;
  std::string epsilon_text;
  std::vector<std::string> epsilon_list;
  std::string N_text;
  std::size_t n_min = 1, n_max = 10;
  long max_x = 100000;
  std::size_t samples = 1000;
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::string point;
  std::string y0_text, z0_text;
  std::string grid = "geometric";
  std::string N_cap_text = "1000000";
  std::string lambda_text;
  std::string pairs_path;
  std::size_t u_grid = 1000;
  std::string out_path;
  std::string report_path;
  unsigned threads = 1;
  bool quiet = false;
};

// Full front end. `args` excludes the program name. CSV goes to --out when
// given, else to `out`; the plain-text summary goes to `out` (to `err` when
// the CSV already occupies `out`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace littlewood::cli

#endif  // LITTLEWOOD_TOOLS_CLI_HPP_
