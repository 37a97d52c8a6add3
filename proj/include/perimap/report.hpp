#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "perimap/error.hpp"
#include "perimap/stats.hpp"

namespace perimap {

inline constexpr const char* kVersion = "1.0.0";

/// One RFC 4180 field: quoted only when it contains a comma, quote, CR or LF.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

/// Buffered CSV table with a fixed header; rows are CRLF-free ("\n") lines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size()) {
      throw Error(ErrorKind::InvalidArgument, "CSV row has " + std::to_string(fields.size()) +
                                                  " fields, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(std::move(fields));
  }

  std::size_t row_count() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  void write(std::ostream& os, bool with_header = true) const {
    if (with_header) write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
  }

  std::string str(bool with_header = true) const {
    std::string out;
    std::ostringstream os;
    write(os, with_header);
    return os.str();
  }

  void write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
    write(f);
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_field(fields[i]);
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Splits one CSV line (no embedded newlines) into fields, undoing RFC 4180 quoting.
inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

// --- fixed table layouts -------------------------------------------------------

inline std::vector<std::string> census_header(bool orbit) {
  std::vector<std::string> h = {"family",    "p",         "ell",       "n",        "c",
                                "q",         "fixed_full", "div2_full", "exact2_full", "fixed_sub",
                                "div2_sub",  "exact2_sub"};
  if (orbit) {
    h.emplace_back("cycle_histogram");
    h.emplace_back("tail_points");
  }
  return h;
}

inline std::vector<std::string> census_row(const MapSpec& m, unsigned n, const CensusResult& r) {
  const std::string ell = m.family == Family::RawExponent ? std::to_string(m.d_raw) : std::to_string(m.ell);
  return {to_string(m.family),         std::to_string(m.p),           ell,
          std::to_string(n),           m.c.str(),                     std::to_string(r.q),
          std::to_string(r.fixed_full), std::to_string(r.div2_full),  std::to_string(r.exact2_full),
          std::to_string(r.fixed_sub), std::to_string(r.div2_sub),    std::to_string(r.exact2_sub)};
}

/// {"1":3,"2":6} : exact period -> number of points.
inline std::string histogram_json(const OrbitCensus& o) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [m, k] : o.period_points) j[std::to_string(m)] = k;
  return j.dump();
}

inline CsvTable conformance_table(const std::vector<ConformanceCell>& cells) {
  CsvTable t({"family", "p", "ell", "n", "c", "convention", "branch", "source", "predicted", "observed", "verdict"});
  for (const auto& c : cells) {
    t.add_row({to_string(c.family), std::to_string(c.p), std::to_string(c.ell), std::to_string(c.n),
               std::to_string(c.c), to_string(c.convention), c.branch, c.predicted.source, c.predicted.render(),
               std::to_string(c.observed), to_string(c.verdict)});
  }
  return t;
}

inline CsvTable summary_table(const std::vector<SummaryRow>& rows) {
  CsvTable t({"branch", "convention", "cells", "agreements", "rate", "rate_decimal"});
  for (const auto& r : rows) {
    t.add_row({r.branch, to_string(r.convention), std::to_string(r.cells), std::to_string(r.agreements),
               r.rate().str(), r.rate().decimal()});
  }
  return t;
}

inline std::vector<std::string> avg_header() {
  return {"family", "ell", "n", "class", "convention", "cutoff", "sum", "pairs", "value", "decimal"};
}

inline std::vector<std::string> avg_row(const SweepSpec& s, unsigned n, const AvgEstimate& a) {
  return {to_string(s.family),        std::to_string(s.ell),     std::to_string(n),
          s.filter.name(),            to_string(s.convention),   std::to_string(a.cutoff),
          std::to_string(a.numerator), std::to_string(a.denominator), a.value.str(),
          a.value.decimal()};
}

inline std::vector<std::string> density_header() {
  return {"predicate", "family", "ell", "cutoff", "hits", "total", "decimal", "value"};
}

// --- run manifest ---------------------------------------------------------------

/// Reproducibility record written next to every output file.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::ordered_json args)
      : command_(std::move(command)), args_(std::move(args)), start_(std::chrono::steady_clock::now()) {}

  void add_file(const std::string& name, std::size_t rows) { files_.push_back({name, rows}); }
  void add_note(const std::string& key, const std::string& text) { notes_[key] = text; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = command_;
    j["args"] = args_;
    j["deterministic"] = true;
    j["seed"] = nullptr;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& [name, rows] : files_) j["files"].push_back({{"name", name}, {"rows", rows}});
    if (!notes_.empty()) j["notes"] = notes_;
    j["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
    f << to_json().dump(2) << '\n';
  }

 private:
  std::string command_;
  nlohmann::ordered_json args_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::size_t>> files_;
  nlohmann::ordered_json notes_ = nlohmann::ordered_json::object();
};

}  // namespace perimap
