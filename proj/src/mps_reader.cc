// Copyright 2026 The gridpdlp Authors.
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

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gridpdlp/mps_io.h"

namespace gridpdlp {
namespace {

// Values at or beyond this magnitude are read as infinite bounds.
constexpr double kMpsInfinity = 1e30;

enum class Section {
  kNone,
  kName,
  kObjSense,
  kRows,
  kColumns,
  kRhs,
  kRanges,
  kBounds,
  kEnd,
};

enum class RowType { kEqual, kLess, kGreater, kFree };

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() &&
           (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r') {
      ++end;
    }
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

// Fixed MPS fields start at columns 2, 5, 15, 25, 40, 50 (1-based).
std::vector<std::string_view> SplitFixed(std::string_view line) {
  static constexpr size_t kStart[] = {1, 4, 14, 24, 39, 49};
  static constexpr size_t kEnd[] = {3, 12, 22, 36, 47, 61};
  std::vector<std::string_view> fields;
  for (int f = 0; f < 6; ++f) {
    if (line.size() <= kStart[f]) break;
    const size_t len = std::min(line.size(), kEnd[f]) - kStart[f];
    fields.push_back(Trim(line.substr(kStart[f], len)));
  }
  while (!fields.empty() && fields.back().empty()) fields.pop_back();
  return fields;
}

std::optional<double> ParseNumber(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    return std::nullopt;
  }
  return value;
}

double ClipInfinite(double v) {
  if (v >= kMpsInfinity) return kInfinity;
  if (v <= -kMpsInfinity) return -kInfinity;
  return v;
}

bool IEquals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

class MpsParser {
 public:
  explicit MpsParser(bool fixed) : fixed_(fixed) {}

  LpProblem Parse(std::string_view text) {
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++line_number_;
      HandleLine(text.substr(pos, end - pos));
      if (section_ == Section::kEnd) break;
      pos = end + 1;
    }
    return Finish();
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const {
    throw MpsParseError(line_number_, message);
  }

  double Number(std::string_view token) const {
    const auto v = ParseNumber(token);
    if (!v) Fail("expected a number, got '" + std::string(token) + "'");
    return *v;
  }

  void HandleLine(std::string_view raw) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (Trim(raw).empty() || raw.front() == '*') return;
    if (raw.front() != ' ' && raw.front() != '\t') {
      HandleHeader(raw);
      return;
    }
    auto fields = fixed_ ? SplitFixed(raw) : SplitWhitespace(raw);
    // Field 1 only carries a code in ROWS and BOUNDS.
    if (fixed_ && !fields.empty() &&
        (section_ == Section::kColumns || section_ == Section::kRhs ||
         section_ == Section::kRanges)) {
      fields.erase(fields.begin());
    }
    if (fields.empty()) return;
    switch (section_) {
      case Section::kObjSense:
        SetSense(fields[0]);
        break;
      case Section::kRows:
        HandleRow(fields);
        break;
      case Section::kColumns:
        HandleColumn(fields);
        break;
      case Section::kRhs:
      case Section::kRanges:
        HandleRhsOrRange(fields);
        break;
      case Section::kBounds:
        HandleBound(fields);
        break;
      default:
        Fail("data line outside of a data section");
    }
  }

  void EnterSection(Section next) {
    if (next <= section_) Fail("section out of order");
    section_ = next;
  }

  void HandleHeader(std::string_view line) {
    const auto tokens = SplitWhitespace(line);
    const std::string_view key = tokens[0];
    if (IEquals(key, "NAME")) {
      EnterSection(Section::kName);
      if (tokens.size() > 1) name_ = std::string(Trim(line.substr(4)));
    } else if (IEquals(key, "OBJSENSE")) {
      EnterSection(Section::kObjSense);
      if (tokens.size() > 1) SetSense(tokens[1]);
    } else if (IEquals(key, "ROWS")) {
      EnterSection(Section::kRows);
    } else if (IEquals(key, "COLUMNS")) {
      EnterSection(Section::kColumns);
    } else if (IEquals(key, "RHS")) {
      EnterSection(Section::kRhs);
    } else if (IEquals(key, "RANGES")) {
      EnterSection(Section::kRanges);
    } else if (IEquals(key, "BOUNDS")) {
      EnterSection(Section::kBounds);
    } else if (IEquals(key, "ENDATA")) {
      section_ = Section::kEnd;
    } else {
      Fail("malformed or unsupported section header '" + std::string(key) +
           "'");
    }
  }

  void SetSense(std::string_view token) {
    if (IEquals(token, "MAX") || IEquals(token, "MAXIMIZE")) {
      maximize_ = true;
    } else if (IEquals(token, "MIN") || IEquals(token, "MINIMIZE")) {
      maximize_ = false;
    } else {
      Fail("unknown objective sense '" + std::string(token) + "'");
    }
  }

  void HandleRow(const std::vector<std::string_view>& f) {
    if (f.size() < 2) Fail("ROWS line needs a type and a name");
    const std::string name(f[1]);
    RowType type;
    if (IEquals(f[0], "E")) {
      type = RowType::kEqual;
    } else if (IEquals(f[0], "L")) {
      type = RowType::kLess;
    } else if (IEquals(f[0], "G")) {
      type = RowType::kGreater;
    } else if (IEquals(f[0], "N")) {
      if (objective_row_.empty()) {
        objective_row_ = name;
        return;
      }
      type = RowType::kFree;
    } else {
      Fail("unknown row type '" + std::string(f[0]) + "'");
    }
    if (name == objective_row_ || row_index_.contains(name)) {
      Fail("duplicate row '" + name + "'");
    }
    row_index_.emplace(name, static_cast<int64_t>(row_names_.size()));
    row_names_.push_back(name);
    row_types_.push_back(type);
  }

  void HandleColumn(const std::vector<std::string_view>& f) {
    if (f.size() >= 3 && IEquals(f[1], "'MARKER'")) return;  // INTORG / INTEND
    if (f.size() != 3 && f.size() != 5) {
      Fail("COLUMNS line needs 3 or 5 fields");
    }
    const std::string col(f[0]);
    auto [it, inserted] =
        col_index_.emplace(col, static_cast<int64_t>(col_names_.size()));
    if (inserted) {
      col_names_.push_back(col);
      objective_.push_back(0.0);
    }
    const int64_t j = it->second;
    for (size_t k = 1; k + 1 < f.size(); k += 2) {
      const double value = Number(f[k + 1]);
      if (!std::isfinite(value)) Fail("matrix entry is not finite");
      const std::string row(f[k]);
      if (row == objective_row_) {
        objective_[j] += value;
        continue;
      }
      const auto r = row_index_.find(row);
      if (r == row_index_.end()) Fail("unknown row '" + row + "' in COLUMNS");
      triplets_.push_back({r->second, j, value});
    }
  }

  void HandleRhsOrRange(const std::vector<std::string_view>& f) {
    // An optional set name comes first: odd field counts carry it.
    const size_t first = (f.size() % 2 == 1) ? 1 : 0;
    if (f.size() < 2 || f.size() > 5) Fail("malformed RHS/RANGES line");
    const bool is_rhs = section_ == Section::kRhs;
    for (size_t k = first; k + 1 < f.size(); k += 2) {
      const std::string row(f[k]);
      const double value = Number(f[k + 1]);
      if (row == objective_row_) {
        if (is_rhs) objective_constant_ = -value;
        continue;
      }
      const auto r = row_index_.find(row);
      if (r == row_index_.end()) {
        Fail("unknown row '" + row + (is_rhs ? "' in RHS" : "' in RANGES"));
      }
      if (is_rhs) {
        rhs_[r->second] = value;
      } else {
        range_[r->second] = value;
      }
    }
  }

  void HandleBound(const std::vector<std::string_view>& f) {
    if (f.size() < 2) Fail("malformed BOUNDS line");
    const std::string_view type = f[0];
    const bool needs_value = IEquals(type, "UP") || IEquals(type, "LO") ||
                             IEquals(type, "FX") || IEquals(type, "LI") ||
                             IEquals(type, "UI");
    const bool no_value = IEquals(type, "FR") || IEquals(type, "MI") ||
                          IEquals(type, "PL") || IEquals(type, "BV");
    if (!needs_value && !no_value) {
      Fail("unknown bound type '" + std::string(type) + "'");
    }
    std::string_view col_token;
    std::optional<std::string_view> value_token;
    if (fixed_) {
      if (f.size() < 3) Fail("malformed BOUNDS line");
      col_token = f[2];
      if (f.size() >= 4) value_token = f[3];
    } else if (f.size() == 4) {
      col_token = f[2];
      value_token = f[3];
    } else if (f.size() == 3) {
      // Either "type set col" or "type col value".
      if (needs_value ||
          (col_index_.contains(std::string(f[1])) && ParseNumber(f[2]))) {
        col_token = f[1];
        value_token = f[2];
      } else {
        col_token = f[2];
      }
    } else if (f.size() == 2) {
      col_token = f[1];
    } else {
      Fail("malformed BOUNDS line");
    }
    if (needs_value && !value_token) Fail("bound type needs a value");

    const auto c = col_index_.find(std::string(col_token));
    if (c == col_index_.end()) {
      Fail("unknown column '" + std::string(col_token) + "' in BOUNDS");
    }
    const int64_t j = c->second;
    EnsureBoundStorage();
    double& lo = var_lower_[j];
    double& up = var_upper_[j];
    const double v = value_token ? ClipInfinite(Number(*value_token)) : 0.0;
    if (IEquals(type, "UP") || IEquals(type, "UI")) {
      // Classic convention: a negative upper bound on a default-lower variable
      // makes the variable unbounded below.
      if (v < 0.0 && lo == 0.0) lo = -kInfinity;
      up = v;
    } else if (IEquals(type, "LO") || IEquals(type, "LI")) {
      lo = v;
    } else if (IEquals(type, "FX")) {
      lo = v;
      up = v;
    } else if (IEquals(type, "FR")) {
      lo = -kInfinity;
      up = kInfinity;
    } else if (IEquals(type, "MI")) {
      lo = -kInfinity;
    } else if (IEquals(type, "PL")) {
      up = kInfinity;
    } else {  // BV
      lo = 0.0;
      up = 1.0;
    }
  }

  void EnsureBoundStorage() {
    if (var_lower_.size() != col_names_.size()) {
      var_lower_.resize(col_names_.size(), 0.0);
      var_upper_.resize(col_names_.size(), kInfinity);
    }
  }

  LpProblem Finish() {
    EnsureBoundStorage();
    const auto m = static_cast<int64_t>(row_names_.size());
    const auto n = static_cast<int64_t>(col_names_.size());
    LpProblem p;
    p.name = name_;
    p.matrix = FromTriplets(m, n, std::move(triplets_));
    p.objective = std::move(objective_);
    p.objective_constant = objective_constant_;
    p.var_lower = std::move(var_lower_);
    p.var_upper = std::move(var_upper_);
    p.con_lower.resize(m);
    p.con_upper.resize(m);
    for (int64_t i = 0; i < m; ++i) {
      const auto rhs_it = rhs_.find(i);
      const double rhs = ClipInfinite(rhs_it == rhs_.end() ? 0.0 : rhs_it->second);
      double& lo = p.con_lower[i];
      double& up = p.con_upper[i];
      switch (row_types_[i]) {
        case RowType::kEqual: lo = rhs; up = rhs; break;
        case RowType::kLess: lo = -kInfinity; up = rhs; break;
        case RowType::kGreater: lo = rhs; up = kInfinity; break;
        case RowType::kFree: lo = -kInfinity; up = kInfinity; break;
      }
      const auto range_it = range_.find(i);
      if (range_it == range_.end() || row_types_[i] == RowType::kFree) continue;
      const double r = range_it->second;
      switch (row_types_[i]) {
        case RowType::kEqual:
          if (r >= 0.0) {
            up = rhs + r;
          } else {
            lo = rhs + r;
          }
          break;
        case RowType::kLess: lo = rhs - std::abs(r); break;
        case RowType::kGreater: up = rhs + std::abs(r); break;
        case RowType::kFree: break;
      }
    }
    if (maximize_) {
      for (double& c : p.objective) c = -c;
      p.objective_constant = -p.objective_constant;
      p.maximize = true;
    }
    p.row_names = std::move(row_names_);
    p.col_names = std::move(col_names_);
    for (int64_t j = 0; j < n; ++j) {
      if (p.var_lower[j] > p.var_upper[j]) {
        throw MpsParseError(line_number_, "column '" + p.col_names[j] +
                                              "' has lower bound above upper");
      }
    }
    try {
      p.Validate();
    } catch (const std::invalid_argument& e) {
      throw MpsParseError(line_number_, e.what());
    }
    return p;
  }

  const bool fixed_;
  int line_number_ = 0;
  Section section_ = Section::kNone;
  std::string name_;
  bool maximize_ = false;
  std::string objective_row_;
  std::unordered_map<std::string, int64_t> row_index_;
  std::vector<std::string> row_names_;
  std::vector<RowType> row_types_;
  std::unordered_map<std::string, int64_t> col_index_;
  std::vector<std::string> col_names_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  std::vector<Triplet> triplets_;
  std::unordered_map<int64_t, double> rhs_;
  std::unordered_map<int64_t, double> range_;
  std::vector<double> var_lower_;
  std::vector<double> var_upper_;
};

std::string ReadAll(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open '" + path + "'");
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  const bool gzipped = probe.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
  if (!gzipped) {
    probe.clear();
    probe.seekg(0);
    std::ostringstream buffer;
    buffer << probe.rdbuf();
    return buffer.str();
  }
  probe.close();
  gzFile gz = gzopen(path.c_str(), "rb");
  if (gz == nullptr) throw std::runtime_error("cannot open '" + path + "'");
  std::string out;
  char chunk[1 << 16];
  int got = 0;
  while ((got = gzread(gz, chunk, sizeof(chunk))) > 0) out.append(chunk, got);
  const bool failed = got < 0;
  gzclose(gz);
  if (failed) throw std::runtime_error("corrupt gzip stream in '" + path + "'");
  return out;
}

}  // namespace

LpProblem ParseMps(std::string_view text, MpsFormat format) {
  switch (format) {
    case MpsFormat::kFree:
      return MpsParser(false).Parse(text);
    case MpsFormat::kFixed:
      return MpsParser(true).Parse(text);
    case MpsFormat::kAuto:
      break;
  }
  try {
    return MpsParser(false).Parse(text);
  } catch (const MpsParseError& free_error) {
    try {
      return MpsParser(true).Parse(text);
    } catch (const MpsParseError&) {
      throw free_error;
    }
  }
}

LpProblem ReadMpsFile(const std::string& path, MpsFormat format) {
  return ParseMps(ReadAll(path), format);
}

}  // namespace gridpdlp
