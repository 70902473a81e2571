// Copyright 2026 The cuct Authors
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

#include "cuct/milp/mps.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cuct::milp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void pad_to(std::string& line, size_t column) {
  if (line.size() >= column) {
    line.push_back(' ');
  } else {
    line.append(column - line.size(), ' ');
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string export_mps(const Model& model) {
  if (!model.frozen()) throw std::logic_error("export_mps: model not frozen");

  std::string out;
  out += "NAME          " + model.name() + "\n";
  out += "ROWS\n";
  out += " N  COST\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.row(r);
    const char* tag = row.sense == Sense::kLe ? "L" : row.sense == Sense::kEq ? "E" : "G";
    out += std::string(" ") + tag + "  " + row.name + "\n";
  }

  // Column-major entries in row insertion order.
  std::vector<std::vector<std::pair<int, double>>> col_entries(model.num_vars());
  for (int r = 0; r < model.num_rows(); ++r) {
    for (const auto& t : model.row(r).terms) {
      col_entries[t.var.id].emplace_back(r, t.coeff);
    }
  }

  out += "COLUMNS\n";
  const double obj_sign = model.minimize() ? 1.0 : -1.0;
  bool in_integer_block = false;
  int marker_count = 0;
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(j);
    const bool wants_integer = v.kind == VarKind::kBinary;
    if (wants_integer != in_integer_block) {
      std::string marker = "    MARKER" + std::to_string(marker_count++);
      pad_to(marker, 14);
      marker += "'MARKER'";
      pad_to(marker, 39);
      marker += wants_integer ? "'INTORG'" : "'INTEND'";
      out += marker + "\n";
      in_integer_block = wants_integer;
    }
    auto emit = [&](const std::string& row_name, double value) {
      std::string line = "    " + v.name;
      pad_to(line, 14);
      line += row_name;
      pad_to(line, 24);
      line += fmt(value);
      out += line + "\n";
    };
    if (model.objective()[j] != 0.0) emit("COST", obj_sign * model.objective()[j]);
    for (const auto& [r, coeff] : col_entries[j]) emit(model.row(r).name, coeff);
  }
  if (in_integer_block) {
    std::string marker = "    MARKER" + std::to_string(marker_count++);
    pad_to(marker, 14);
    marker += "'MARKER'";
    pad_to(marker, 39);
    marker += "'INTEND'";
    out += marker + "\n";
  }

  out += "RHS\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.row(r);
    if (row.rhs == 0.0) continue;
    std::string line = "    RHS";
    pad_to(line, 14);
    line += row.name;
    pad_to(line, 24);
    line += fmt(row.rhs);
    out += line + "\n";
  }

  out += "BOUNDS\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(j);
    auto emit = [&](const char* tag, bool with_value, double value) {
      std::string line = std::string(" ") + tag + " BND";
      pad_to(line, 14);
      line += v.name;
      if (with_value) {
        pad_to(line, 24);
        line += fmt(value);
      }
      out += line + "\n";
    };
    if (v.kind == VarKind::kBinary && v.lo == 0.0 && v.hi == 1.0) {
      emit("BV", false, 0.0);
    } else if (v.lo == v.hi) {
      emit("FX", true, v.lo);
    } else {
      if (v.lo != 0.0) emit("LO", true, v.lo);
      if (v.hi != kInf) emit("UP", true, v.hi);
    }
  }
  out += "ENDATA\n";
  return out;
}

Model parse_mps(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  enum Section { kNone, kRows, kColumns, kRhs, kBounds, kDone } section = kNone;

  std::string model_name = "model";
  struct PRow {
    std::string name;
    Sense sense;
    double rhs = 0.0;
  };
  std::vector<PRow> rows;
  std::map<std::string, int> row_index;
  std::string objective_row;

  struct PCol {
    std::string name;
    bool integer = false;
    double lo = 0.0;
    double hi = kInf;
    bool lo_set = false, hi_set = false, bv = false, fx = false;
    double obj = 0.0;
    std::vector<std::pair<int, double>> entries;
  };
  std::vector<PCol> cols;
  std::map<std::string, int> col_index;
  bool integer_block = false;
  int line_no = 0;

  auto fail = [&](const std::string& why) {
    throw std::runtime_error("parse_mps: line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (line[0] != ' ') {  // section header
      const std::string& head = fields[0];
      if (head == "NAME") {
        if (fields.size() > 1) model_name = fields[1];
      } else if (head == "ROWS") {
        section = kRows;
      } else if (head == "COLUMNS") {
        section = kColumns;
      } else if (head == "RHS") {
        section = kRhs;
      } else if (head == "RANGES") {
        fail("RANGES section not supported");
      } else if (head == "BOUNDS") {
        section = kBounds;
      } else if (head == "ENDATA") {
        section = kDone;
        break;
      } else {
        fail("unknown section '" + head + "'");
      }
      continue;
    }

    switch (section) {
      case kRows: {
        if (fields.size() != 2) fail("ROWS entry needs 2 fields");
        if (fields[0] == "N") {
          if (!objective_row.empty()) fail("multiple N rows");
          objective_row = fields[1];
        } else {
          Sense s;
          if (fields[0] == "L") s = Sense::kLe;
          else if (fields[0] == "G") s = Sense::kGe;
          else if (fields[0] == "E") s = Sense::kEq;
          else { fail("bad row sense '" + fields[0] + "'"); return Model(); }
          row_index[fields[1]] = static_cast<int>(rows.size());
          rows.push_back(PRow{fields[1], s, 0.0});
        }
        break;
      }
      case kColumns: {
        if (fields.size() >= 3 && fields[1] == "'MARKER'") {
          integer_block = fields[2] == "'INTORG'";
          break;
        }
        if (fields.size() < 3 || fields.size() % 2 == 0) fail("bad COLUMNS entry");
        auto it = col_index.find(fields[0]);
        int j;
        if (it == col_index.end()) {
          j = static_cast<int>(cols.size());
          col_index[fields[0]] = j;
          cols.push_back(PCol{fields[0], integer_block, 0.0, kInf,
                              false, false, false, false, 0.0, {}});
        } else {
          j = it->second;
        }
        for (size_t k = 1; k + 1 < fields.size(); k += 2) {
          const double value = std::stod(fields[k + 1]);
          if (fields[k] == objective_row) {
            cols[j].obj += value;
          } else {
            auto rit = row_index.find(fields[k]);
            if (rit == row_index.end()) fail("unknown row '" + fields[k] + "'");
            cols[j].entries.emplace_back(rit->second, value);
          }
        }
        break;
      }
      case kRhs: {
        if (fields.size() < 3 || fields.size() % 2 == 0) fail("bad RHS entry");
        for (size_t k = 1; k + 1 < fields.size(); k += 2) {
          if (fields[k] == objective_row) continue;  // objective offset ignored
          auto rit = row_index.find(fields[k]);
          if (rit == row_index.end()) fail("unknown row '" + fields[k] + "'");
          rows[rit->second].rhs = std::stod(fields[k + 1]);
        }
        break;
      }
      case kBounds: {
        if (fields.size() < 3) fail("bad BOUNDS entry");
        auto cit = col_index.find(fields[2]);
        if (cit == col_index.end()) fail("unknown column '" + fields[2] + "'");
        PCol& c = cols[cit->second];
        const std::string& tag = fields[0];
        if (tag == "BV") {
          c.bv = true;
          c.integer = true;
        } else if (tag == "FX") {
          if (fields.size() < 4) fail("FX needs a value");
          c.lo = c.hi = std::stod(fields[3]);
          c.fx = true;
        } else if (tag == "LO") {
          if (fields.size() < 4) fail("LO needs a value");
          c.lo = std::stod(fields[3]);
          c.lo_set = true;
        } else if (tag == "UP") {
          if (fields.size() < 4) fail("UP needs a value");
          c.hi = std::stod(fields[3]);
          c.hi_set = true;
        } else if (tag == "MI") {
          c.lo = -kInf;
          c.lo_set = true;
        } else {
          fail("unsupported bound tag '" + tag + "'");
        }
        break;
      }
      default:
        fail("data line outside any section");
    }
  }
  if (section != kDone) throw std::runtime_error("parse_mps: missing ENDATA");
  if (objective_row.empty()) throw std::runtime_error("parse_mps: no N row");

  Model model(model_name);
  std::vector<VarHandle> handles(cols.size());
  std::vector<LinearTerm> objective;
  for (size_t j = 0; j < cols.size(); ++j) {
    PCol& c = cols[j];
    VarKind kind = VarKind::kContinuous;
    if (c.bv) {
      kind = VarKind::kBinary;
      c.lo = 0.0;
      c.hi = 1.0;
    } else if (c.integer && c.lo == 0.0 && !c.hi_set && !c.fx) {
      // Integer column without explicit bounds: treat as binary, matching
      // the writer's convention.
      kind = VarKind::kBinary;
      c.hi = 1.0;
    } else if (c.integer) {
      const bool binary_box = c.lo >= 0.0 && c.hi <= 1.0;  // includes FX 0 / FX 1
      if (binary_box) kind = VarKind::kBinary;
      else throw std::runtime_error("parse_mps: general integer column '" + c.name +
                                    "' not supported");
    }
    handles[j] = model.add_var(kind, c.lo, c.hi, c.name);
    if (c.obj != 0.0) objective.push_back({handles[j], c.obj});
  }
  std::vector<std::vector<LinearTerm>> row_terms(rows.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    for (const auto& [r, v] : cols[j].entries) {
      row_terms[r].push_back({handles[j], v});
    }
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    model.add_constraint(std::move(row_terms[r]), rows[r].sense, rows[r].rhs,
                         rows[r].name);
  }
  model.set_objective(true, std::move(objective));
  model.freeze();
  return model;
}

}  // namespace cuct::milp
