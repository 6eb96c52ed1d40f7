#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "zf/milp.hpp"

namespace zf::milp {

void MilpModel::check_name(const std::string& name) const {
  bool ok = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
  for (char ch : name) ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.');
  if (!ok) throw ModelError("invalid LP name '" + name + "'");
}

int MilpModel::add_variable(Variable v) {
  check_name(v.name);
  if (v.lo > v.hi) throw ModelError("variable " + v.name + ": lo > hi");
  if (!var_index_.emplace(v.name, num_variables()).second) throw ModelError("duplicate variable " + v.name);
  vars_.push_back(std::move(v));
  return num_variables() - 1;
}

int MilpModel::add_binary(const std::string& name, std::int64_t cost, int priority) {
  return add_variable({name, VarKind::binary, 0, 1, cost, priority});
}

int MilpModel::add_integer(const std::string& name, std::int64_t lo, std::int64_t hi, std::int64_t cost,
                           int priority) {
  return add_variable({name, VarKind::integer, lo, hi, cost, priority});
}

int MilpModel::add_constraint(Constraint c) {
  std::map<int, std::int64_t> merged;
  for (const Term& t : c.terms) {
    if (t.var < 0 || t.var >= num_variables())
      throw ModelError("constraint references undeclared variable " + std::to_string(t.var));
    merged[t.var] += t.coef;
  }
  c.terms.clear();
  for (auto [v, a] : merged)
    if (a != 0) c.terms.push_back({v, a});
  if (c.name.empty()) {
    for (int k = num_constraints();; ++k) {
      c.name = "c" + std::to_string(k);
      if (!row_names_.count(c.name)) break;
    }
  }
  check_name(c.name);
  if (!row_names_.insert(c.name).second) throw ModelError("duplicate constraint name " + c.name);
  rows_.push_back(std::move(c));
  return num_constraints() - 1;
}

int MilpModel::add_row(std::vector<Term> terms, Sense sense, std::int64_t rhs, const std::string& name) {
  return add_constraint({std::move(terms), sense, rhs, name});
}

void MilpModel::fix(int var, std::int64_t value) {
  Variable& v = vars_.at(static_cast<std::size_t>(var));
  if (value < v.lo || value > v.hi) throw ModelError("fix: value outside domain of " + v.name);
  v.lo = v.hi = value;
}

int MilpModel::find(const std::string& name) const {
  auto it = var_index_.find(name);
  return it == var_index_.end() ? -1 : it->second;
}

std::int64_t MilpModel::objective(const Assignment& a) const {
  std::int64_t z = 0;
  for (int j = 0; j < num_variables(); ++j) z += vars_[j].cost * a.at(static_cast<std::size_t>(j));
  return z;
}

std::int64_t MilpModel::activity(const Constraint& c, const Assignment& a) const {
  std::int64_t s = 0;
  for (const Term& t : c.terms) s += t.coef * a.at(static_cast<std::size_t>(t.var));
  return s;
}

bool MilpModel::row_satisfied(const Constraint& c, const Assignment& a) const {
  std::int64_t s = activity(c, a);
  switch (c.sense) {
    case Sense::le:
      return s <= c.rhs;
    case Sense::eq:
      return s == c.rhs;
    case Sense::ge:
      return s >= c.rhs;
  }
  return false;
}

int MilpModel::first_violation(const Assignment& a) const {
  if (static_cast<int>(a.size()) != num_variables()) return 0;
  for (int i = 0; i < num_constraints(); ++i)
    if (!row_satisfied(rows_[i], a)) return i;
  for (int j = 0; j < num_variables(); ++j)
    if (a[j] < vars_[j].lo || a[j] > vars_[j].hi) return num_constraints() + j;
  return -1;
}

// --- LP format ---------------------------------------------------------------

namespace {

constexpr std::size_t kLineWidth = 78;

// Appends "lead + terms" wrapping long lines; continuation lines are indented.
void write_terms(std::ostringstream& out, const std::string& lead, const std::vector<Term>& terms,
                 const std::vector<Variable>& vars, const std::string& tail) {
  std::string line = lead;
  bool first = true;
  auto emit = [&](const std::string& piece) {
    if (line.size() + piece.size() > kLineWidth && line.find_first_not_of(' ') != std::string::npos) {
      out << line << '\n';
      line = "   ";
    }
    line += piece;
  };
  for (const Term& t : terms) {
    std::string piece;
    std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (first)
      piece = t.coef < 0 ? "- " : "";
    else
      piece = t.coef < 0 ? " - " : " + ";
    if (mag != 1) piece += std::to_string(mag) + " ";
    piece += vars[t.var].name;
    emit(piece);
    first = false;
  }
  if (first) emit("0 " + vars.front().name);
  emit(tail);
  out << line << '\n';
}

}  // namespace

std::string format_lp(const MilpModel& model) {
  const auto& vars = model.variables();
  if (vars.empty()) throw ModelError("format_lp: model has no variables");
  std::ostringstream out;
  out << "Minimize\n";
  std::vector<Term> obj;
  for (int j = 0; j < model.num_variables(); ++j)
    if (vars[j].cost != 0) obj.push_back({j, vars[j].cost});
  write_terms(out, " obj: ", obj, vars, "");
  out << "Subject To\n";
  for (const Constraint& c : model.constraints()) {
    const char* op = c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ";
    write_terms(out, " " + c.name + ": ", c.terms, vars, op + std::to_string(c.rhs));
  }
  out << "Bounds\n";
  for (const Variable& v : vars) {
    if (v.kind == VarKind::binary && v.lo == 0 && v.hi == 1) continue;
    if (v.lo == v.hi)
      out << " " << v.name << " = " << v.lo << '\n';
    else
      out << " " << v.lo << " <= " << v.name << " <= " << v.hi << '\n';
  }
  auto plain_binary = [&](int j) { return vars[j].kind == VarKind::binary && vars[j].lo == 0 && vars[j].hi == 1; };
  auto section = [&](const char* title, bool binaries) {
    std::string line;
    bool any = false;
    for (int j = 0; j < model.num_variables(); ++j) {
      if (plain_binary(j) != binaries) continue;
      if (!any) out << title << '\n';
      any = true;
      const std::string& nm = vars[j].name;
      if (!line.empty() && line.size() + nm.size() + 1 > kLineWidth) {
        out << line << '\n';
        line.clear();
      }
      line += " " + nm;
    }
    if (any) out << line << '\n';
  };
  // Binaries with a fixed value are written as bounded generals.
  section("Generals", false);
  section("Binaries", true);
  out << "End\n";
  return out.str();
}

void export_lp(const MilpModel& model, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("export_lp: cannot open " + path.string());
  f << format_lp(model);
  if (!f.flush()) throw std::runtime_error("export_lp: write failed for " + path.string());
}

ParsedSolution parse_solution(const std::string& text, const MilpModel& model) {
  ParsedSolution sol;
  Assignment a(static_cast<std::size_t>(model.num_variables()));
  for (int j = 0; j < model.num_variables(); ++j) a[j] = std::clamp<std::int64_t>(0, model.variable(j).lo, model.variable(j).hi);
  bool any_value = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key[0] == '#') {
      std::string field = key.size() > 1 ? key.substr(1) : "";
      if (field.empty()) ls >> field;
      std::string value;
      ls >> value;
      try {
        if (field == "status") sol.status = value;
        else if (field == "objective" && !value.empty()) sol.objective = std::stod(value);
        else if (field == "bound" && !value.empty()) sol.bound = std::stod(value);
      } catch (const std::exception&) {
        throw BackendError("solution line " + std::to_string(lineno) + ": bad number '" + value + "'");
      }
      continue;
    }
    std::string value;
    if (!(ls >> value)) throw BackendError("solution line " + std::to_string(lineno) + ": missing value");
    int j = model.find(key);
    if (j < 0) throw BackendError("solution line " + std::to_string(lineno) + ": unknown variable '" + key + "'");
    double v;
    try {
      v = std::stod(value);
    } catch (const std::exception&) {
      throw BackendError("solution line " + std::to_string(lineno) + ": bad number '" + value + "'");
    }
    a[j] = std::llround(v);
    any_value = true;
  }
  if (any_value) sol.assignment = std::move(a);
  return sol;
}

}  // namespace zf::milp
