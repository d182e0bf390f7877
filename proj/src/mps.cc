// Copyright 2026 The Evacuation Planner Authors.
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

#include "evac/mps.h"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace evac {
namespace {

constexpr char kObjectiveRow[] = "OBJ";
constexpr double kMpsInfinity = 1e30;

std::string Base36(int value) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  do {
    out.insert(out.begin(), kDigits[value % 36]);
    value /= 36;
  } while (value > 0);
  return out;
}

// Maps each name to a unique name of at most kMpsNameWidth characters.
std::vector<std::string> ShortenNames(const std::vector<std::string>& names,
                                      bool is_row,
                                      std::vector<MpsRename>* renamed) {
  std::unordered_set<std::string> used;
  if (is_row) used.insert(kObjectiveRow);
  std::vector<std::string> out(names.size());
  std::vector<bool> keep(names.size(), false);
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i].size() <= kMpsNameWidth && used.insert(names[i]).second) {
      keep[i] = true;
      out[i] = names[i];
    }
  }
  int ordinal = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    if (keep[i]) continue;
    std::string candidate;
    do {
      const std::string suffix = "~" + Base36(ordinal++);
      const size_t room = kMpsNameWidth - suffix.size();
      candidate = names[i].substr(0, room) + suffix;
    } while (!used.insert(candidate).second);
    out[i] = candidate;
    renamed->push_back({is_row, names[i], candidate});
  }
  return out;
}

std::string Number(double value) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  return absl::StrFormat("%.12g", value);
}

std::string Pad(absl::string_view s, size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

// Data line with the classic field starts at columns 2, 5, 15, 25.
std::string DataLine(absl::string_view code, absl::string_view name1,
                     absl::string_view name2, absl::string_view number) {
  std::string line = " " + Pad(code, 2) + " " + Pad(name1, 8);
  if (!name2.empty() || !number.empty()) line += "  " + Pad(name2, 8);
  if (!number.empty()) line += "  " + std::string(number);
  return std::string(absl::StripTrailingAsciiWhitespace(line));
}

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("MPS line ", line, ": ", message));
}

std::optional<double> ParseNumber(absl::string_view token) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  if (value >= kMpsInfinity) return std::numeric_limits<double>::infinity();
  if (value <= -kMpsInfinity) return -std::numeric_limits<double>::infinity();
  return value;
}

enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds,
                     kEnd };

std::optional<Section> SectionFromHeader(absl::string_view word) {
  if (word == "NAME") return Section::kName;
  if (word == "ROWS") return Section::kRows;
  if (word == "COLUMNS") return Section::kColumns;
  if (word == "RHS") return Section::kRhs;
  if (word == "RANGES") return Section::kRanges;
  if (word == "BOUNDS") return Section::kBounds;
  if (word == "ENDATA") return Section::kEnd;
  return std::nullopt;
}

}  // namespace

MpsDocument ExportMps(const MilpProblem& problem) {
  MpsDocument doc;
  std::vector<std::string> row_names, col_names;
  for (const Row& row : problem.rows) row_names.push_back(row.name);
  for (const Variable& v : problem.variables) col_names.push_back(v.name);
  const std::vector<std::string> rows = ShortenNames(row_names, true, &doc.renamed);
  const std::vector<std::string> cols =
      ShortenNames(col_names, false, &doc.renamed);

  // Column-wise entries in row order, duplicates merged, zeros dropped.
  std::vector<std::vector<std::pair<int, double>>> entries(
      problem.num_variables());
  for (int r = 0; r < problem.num_rows(); ++r) {
    std::map<int, double> merged;
    for (const Term& term : problem.rows[r].terms) merged[term.var] += term.coef;
    for (const auto& [var, coef] : merged) {
      if (coef != 0.0) entries[var].push_back({r, coef});
    }
  }

  std::string& out = doc.text;
  out += problem.name.empty() ? "NAME\n"
                              : absl::StrCat("NAME          ", problem.name, "\n");
  if (!problem.metadata.instance.empty()) {
    absl::StrAppend(&out, "* instance: ", problem.metadata.instance, "\n");
  }
  if (!problem.metadata.mode.empty()) {
    absl::StrAppend(&out, "* mode: ", problem.metadata.mode, "\n");
  }
  out += "ROWS\n";
  out += DataLine("N", kObjectiveRow, "", "") + "\n";
  for (int r = 0; r < problem.num_rows(); ++r) {
    const char* code = "L";
    if (problem.rows[r].sense == RowSense::kGreaterEqual) code = "G";
    if (problem.rows[r].sense == RowSense::kEqual) code = "E";
    out += DataLine(code, rows[r], "", "") + "\n";
  }

  out += "COLUMNS\n";
  bool in_integer_block = false;
  auto marker = [&out](const char* kind) {
    absl::StrAppend(&out, "    MARKER    'MARKER'                 '", kind,
                    "'\n");
  };
  for (int j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variables[j];
    if (v.is_integer() != in_integer_block) {
      marker(v.is_integer() ? "INTORG" : "INTEND");
      in_integer_block = v.is_integer();
    }
    const bool has_objective = v.objective != 0.0;
    if (has_objective || entries[j].empty()) {
      out += DataLine("", cols[j], kObjectiveRow, Number(v.objective)) + "\n";
    }
    for (const auto& [r, coef] : entries[j]) {
      out += DataLine("", cols[j], rows[r], Number(coef)) + "\n";
    }
  }
  if (in_integer_block) marker("INTEND");

  out += "RHS\n";
  for (int r = 0; r < problem.num_rows(); ++r) {
    if (problem.rows[r].rhs != 0.0) {
      out += DataLine("", "RHS", rows[r], Number(problem.rows[r].rhs)) + "\n";
    }
  }

  std::string bounds;
  for (int j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variables[j];
    const bool lo_inf = std::isinf(v.lower);
    const bool up_inf = std::isinf(v.upper);
    auto line = [&](const char* code, std::string number) {
      bounds += DataLine(code, "BND", cols[j], number) + "\n";
    };
    if (v.type == VarType::kBinary && v.lower == 0.0 && v.upper == 1.0) {
      line("BV", "");
      continue;
    }
    if (!lo_inf && !up_inf && v.lower == v.upper) {
      line("FX", Number(v.lower));
      continue;
    }
    if (lo_inf && up_inf) {
      line("FR", "");
      continue;
    }
    if (lo_inf) {
      line("MI", "");
    } else if (v.lower != 0.0) {
      line("LO", Number(v.lower));
    }
    if (!up_inf) {
      line("UP", Number(v.upper));
    } else if (v.is_integer()) {
      line("PL", "");
    }
  }
  if (!bounds.empty()) out += "BOUNDS\n" + bounds;
  out += "ENDATA\n";
  return doc;
}

absl::StatusOr<MilpProblem> ImportMps(std::string_view input) {
  const absl::string_view text(input.data(), input.size());
  MilpProblem problem;
  Section section = Section::kNone;
  std::string objective_name;
  std::unordered_set<std::string> free_rows;
  std::unordered_map<std::string, int> row_index;
  std::unordered_map<std::string, int> col_index;
  std::vector<std::vector<Term>> row_terms;
  std::set<std::pair<int, int>> seen_entries;
  bool integer_block = false;
  bool seen_rows = false;
  bool seen_columns = false;
  int line_number = 0;

  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (absl::StripAsciiWhitespace(raw).empty()) continue;
    if (raw.front() == '*') {
      absl::string_view body = absl::StripAsciiWhitespace(raw.substr(1));
      if (absl::ConsumePrefix(&body, "instance:")) {
        problem.metadata.instance = std::string(absl::StripAsciiWhitespace(body));
      } else if (absl::ConsumePrefix(&body, "mode:")) {
        problem.metadata.mode = std::string(absl::StripAsciiWhitespace(body));
      }
      continue;
    }
    if (section == Section::kEnd) {
      return LineError(line_number, "content after ENDATA");
    }
    std::vector<absl::string_view> tokens =
        absl::StrSplit(raw, absl::ByAnyChar(" \t"), absl::SkipEmpty());

    if (raw.front() != ' ' && raw.front() != '\t') {
      std::optional<Section> next = SectionFromHeader(tokens.front());
      if (!next.has_value()) {
        return LineError(line_number,
                         absl::StrCat("unknown section '", tokens.front(), "'"));
      }
      if (*next <= section) {
        return LineError(line_number, absl::StrCat("section ", tokens.front(),
                                                   " is out of order"));
      }
      if (*next > Section::kRows && !seen_rows) {
        return LineError(line_number, absl::StrCat("section ", tokens.front(),
                                                   " appears before ROWS"));
      }
      if (*next > Section::kColumns && !seen_columns) {
        return LineError(line_number, absl::StrCat("section ", tokens.front(),
                                                   " appears before COLUMNS"));
      }
      if (*next == Section::kRanges) {
        return LineError(line_number, "RANGES is not supported");
      }
      section = *next;
      if (section == Section::kName) {
        absl::string_view rest = raw.substr(4);
        problem.name = std::string(absl::StripAsciiWhitespace(rest));
      }
      if (section == Section::kRows) seen_rows = true;
      if (section == Section::kColumns) seen_columns = true;
      if (section == Section::kColumns && integer_block) integer_block = false;
      continue;
    }

    switch (section) {
      case Section::kRows: {
        if (tokens.size() != 2) return LineError(line_number, "expected type and row name");
        const std::string name(tokens[1]);
        if (row_index.contains(name) || free_rows.contains(name)) {
          return LineError(line_number, absl::StrCat("duplicate row ", name));
        }
        if (tokens[0] == "N") {
          if (objective_name.empty()) objective_name = name;
          free_rows.insert(name);
          break;
        }
        RowSense sense;
        if (tokens[0] == "L") {
          sense = RowSense::kLessEqual;
        } else if (tokens[0] == "G") {
          sense = RowSense::kGreaterEqual;
        } else if (tokens[0] == "E") {
          sense = RowSense::kEqual;
        } else {
          return LineError(line_number,
                           absl::StrCat("unknown row type '", tokens[0], "'"));
        }
        row_index[name] = problem.AddRow({name, sense, {}, 0.0});
        row_terms.emplace_back();
        break;
      }
      case Section::kColumns: {
        if (tokens.size() == 3 && tokens[1] == "'MARKER'") {
          if (tokens[2] == "'INTORG'") {
            integer_block = true;
          } else if (tokens[2] == "'INTEND'") {
            integer_block = false;
          } else {
            return LineError(line_number, "unknown marker");
          }
          break;
        }
        if (tokens.size() != 3 && tokens.size() != 5) {
          return LineError(line_number, "expected column, row, value");
        }
        const std::string col(tokens[0]);
        int j;
        auto it = col_index.find(col);
        if (it == col_index.end()) {
          Variable v;
          v.name = col;
          v.type = integer_block ? VarType::kInteger : VarType::kContinuous;
          j = problem.AddVariable(std::move(v));
          col_index[col] = j;
        } else {
          j = it->second;
          if (j != problem.num_variables() - 1) {
            return LineError(line_number,
                             absl::StrCat("entries of column ", col,
                                          " are not contiguous"));
          }
        }
        for (size_t k = 1; k + 1 < tokens.size(); k += 2) {
          const std::string row(tokens[k]);
          std::optional<double> value = ParseNumber(tokens[k + 1]);
          if (!value.has_value() || !std::isfinite(*value)) {
            return LineError(line_number, absl::StrCat("bad number '",
                                                       tokens[k + 1], "'"));
          }
          if (row == objective_name) {
            if (!seen_entries.insert({j, -1}).second) {
              return LineError(line_number,
                               absl::StrCat("duplicate entry for column ", col,
                                            " in row ", row));
            }
            problem.variables[j].objective = *value;
            continue;
          }
          if (free_rows.contains(row)) continue;
          auto r = row_index.find(row);
          if (r == row_index.end()) {
            return LineError(line_number,
                             absl::StrCat("unknown row '", row, "'"));
          }
          if (!seen_entries.insert({j, r->second}).second) {
            return LineError(line_number,
                             absl::StrCat("duplicate entry for column ", col,
                                          " in row ", row));
          }
          row_terms[r->second].push_back({j, *value});
        }
        break;
      }
      case Section::kRhs: {
        const size_t start = tokens.size() % 2 == 1 ? 1 : 0;
        if (tokens.size() < 2) return LineError(line_number, "short RHS line");
        for (size_t k = start; k + 1 < tokens.size(); k += 2) {
          const std::string row(tokens[k]);
          std::optional<double> value = ParseNumber(tokens[k + 1]);
          if (!value.has_value() || !std::isfinite(*value)) {
            return LineError(line_number, "bad number");
          }
          if (free_rows.contains(row)) {
            return LineError(line_number, "objective constants are not supported");
          }
          auto r = row_index.find(row);
          if (r == row_index.end()) {
            return LineError(line_number,
                             absl::StrCat("unknown row '", row, "'"));
          }
          problem.rows[r->second].rhs = *value;
        }
        break;
      }
      case Section::kBounds: {
        if (tokens.size() < 3 || tokens.size() > 4) {
          return LineError(line_number, "expected type, set, column [value]");
        }
        const absl::string_view code = tokens[0];
        auto c = col_index.find(std::string(tokens[2]));
        if (c == col_index.end()) {
          return LineError(line_number,
                           absl::StrCat("unknown column '", tokens[2], "'"));
        }
        Variable& v = problem.variables[c->second];
        std::optional<double> value;
        if (tokens.size() == 4) {
          value = ParseNumber(tokens[3]);
          if (!value.has_value()) return LineError(line_number, "bad number");
        }
        const bool needs_value = code == "UP" || code == "LO" || code == "FX" ||
                                 code == "LI" || code == "UI";
        if (needs_value && !value.has_value()) {
          return LineError(line_number, "bound value missing");
        }
        if (code == "UP" || code == "UI") {
          v.upper = *value;
          if (code == "UI") v.type = VarType::kInteger;
        } else if (code == "LO" || code == "LI") {
          v.lower = *value;
          if (code == "LI") v.type = VarType::kInteger;
        } else if (code == "FX") {
          v.lower = v.upper = *value;
        } else if (code == "FR") {
          v.lower = -std::numeric_limits<double>::infinity();
          v.upper = std::numeric_limits<double>::infinity();
        } else if (code == "MI") {
          v.lower = -std::numeric_limits<double>::infinity();
        } else if (code == "PL") {
          v.upper = std::numeric_limits<double>::infinity();
        } else if (code == "BV") {
          v.type = VarType::kBinary;
          v.lower = 0.0;
          v.upper = 1.0;
        } else {
          return LineError(line_number,
                           absl::StrCat("unknown bound type '", code, "'"));
        }
        break;
      }
      default:
        return LineError(line_number, "data line outside of a section");
    }
  }
  if (section != Section::kEnd) {
    return LineError(line_number, "missing ENDATA");
  }
  for (int r = 0; r < problem.num_rows(); ++r) {
    problem.rows[r].terms = std::move(row_terms[r]);
  }
  return problem;
}

}  // namespace evac
