// Copyright 2026 The kaneq Authors
//
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

#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kaneq/config.hpp"
#include "kaneq/experiments.hpp"
#include "kaneq/observables.hpp"

namespace kaneq {

inline constexpr const char* kSeriesHeader = "tau,sx,sy,sz,purity,entropy,bloch_norm,fidelity";
inline constexpr const char* kSweepHeader =
    "kappa,theta,initial_state,final_purity,final_entropy,min_fidelity,half_time,plateau_end,"
    "rate_estimate,classification";

class IoError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// 15 significant digits, C locale, no negative zero.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw DomainError("cannot render non-finite value");
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading: " + std::strerror(errno));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string optional_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace detail

inline std::string series_csv(const ObservableSeries& s) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    const BlochVector& v = s.states[k];
    for (double cell : {s.tau[k], v.x, v.y, v.z, s.purity[k], s.entropy[k], s.bloch_norm[k]}) {
      out += format_number(cell);
      out += ',';
    }
    out += format_number(s.fidelity[k]);
    out += '\n';
  }
  return out;
}

inline void write_csv(const ObservableSeries& s, const std::string& path) {
  detail::write_file(path, series_csv(s));
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& row : r.rows) {
    out += format_number(row.kappa) + ',' + format_number(row.theta) + ',' + row.initial_state +
           ',' + format_number(row.final_purity) + ',' + format_number(row.final_entropy) + ',' +
           format_number(row.min_fidelity) + ',' + detail::optional_cell(row.half_time) + ',' +
           detail::optional_cell(row.plateau_end) + ',' + detail::optional_cell(row.rate_estimate) +
           ',' + std::string(to_string(row.classification)) + '\n';
  }
  return out;
}

inline void write_sweep_csv(const SweepResult& r, const std::string& path) {
  detail::write_file(path, sweep_csv(r));
}

/// Sidecar `key = value` notes (same syntax as run configs).
inline void write_metadata(const std::vector<std::pair<std::string, std::string>>& meta,
                           const std::string& path) {
  std::string out;
  for (const auto& [k, v] : meta) out += k + " = " + v + '\n';
  detail::write_file(path, out);
}

/// Numeric table read back from a series CSV.
struct SeriesTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline SeriesTable parse_series_csv(const std::string& text) {
  SeriesTable t;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (line_no == 1) {
      for (auto c : cells) t.header.emplace_back(c);
      continue;
    }
    std::vector<double> row;
    for (auto c : cells) {
      const auto v = detail::parse_plain_double(c);
      if (!v) {
        throw DomainError("line " + std::to_string(line_no) + ": malformed number '" +
                          std::string(c) + "'");
      }
      row.push_back(*v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline SeriesTable read_series_csv(const std::string& path) {
  return parse_series_csv(detail::read_file(path));
}

struct CsvValidation {
  bool ok{true};
  std::size_t rows{0};
  std::vector<std::string> problems;
};

/// Checks a series CSV against the observable invariants: 1e-9 slack for
/// ranges and monotone |s|, 1e-12 for purity/|s| identities, 1e-10 for the
/// entropy identity (its slope diverges at |s| = 1).
inline CsvValidation validate_series_table(const SeriesTable& t) {
  constexpr double kSlack = 1e-9;
  constexpr double kIdentity = 1e-12;
  CsvValidation res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    if (res.problems.size() < 20) res.problems.push_back(std::move(msg));
  };

  std::string header;
  for (std::size_t i = 0; i < t.header.size(); ++i) header += (i ? "," : "") + t.header[i];
  if (header != kSeriesHeader) {
    fail("unexpected header '" + header + "'");
    return res;
  }
  res.rows = t.rows.size();

  double prev_tau = 0.0;
  double prev_norm = 0.0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    const std::string at = "row " + std::to_string(k + 2) + ": ";
    if (r.size() != 8) {
      fail(at + "expected 8 columns");
      continue;
    }
    const double tau = r[0], norm = std::sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
    if (k == 0 && tau != 0.0) fail(at + "grid does not start at 0");
    if (k > 0 && !(tau > prev_tau)) fail(at + "tau not strictly increasing");
    if (norm > 1.0 + kSlack) fail(at + "|s| > 1");
    if (std::abs(r[6] - norm) > kIdentity) fail(at + "bloch_norm inconsistent with sx,sy,sz");
    if (r[4] < 0.5 - kSlack || r[4] > 1.0 + kSlack) fail(at + "purity outside [0.5, 1]");
    if (std::abs(r[4] - 0.5 * (1.0 + norm * norm)) > kIdentity) fail(at + "purity inconsistent with |s|");
    if (r[5] < -kSlack || r[5] > std::numbers::ln2 + kSlack) fail(at + "entropy outside [0, ln 2]");
    if (norm <= 1.0) {
      const double lp = 0.5 * (1.0 + norm), lm = 0.5 * (1.0 - norm);
      const double expected = (lp > 0 ? -lp * std::log(lp) : 0.0) + (lm > 0 ? -lm * std::log(lm) : 0.0);
      if (std::abs(r[5] - expected) > 1e-10) fail(at + "entropy inconsistent with |s|");
    }
    if (r[7] < -kSlack || r[7] > 1.0 + kSlack) fail(at + "fidelity outside [0, 1]");
    if (k > 0 && norm > prev_norm + kSlack) fail(at + "|s| increased");
    prev_tau = tau;
    prev_norm = norm;
  }
  return res;
}

inline CsvValidation validate_series_csv(const std::string& path) {
  return validate_series_table(read_series_csv(path));
}

}  // namespace kaneq
