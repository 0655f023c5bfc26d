// Copyright 2026 The matchkit Authors.
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

#include "matchkit/satsm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <sstream>

namespace matchkit {

SatSmInstance SatSmInstance::parse(const std::string& text) {
  std::vector<std::pair<int, std::string>> rows;
  {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      rows.emplace_back(lineno, line);
    }
  }
  if (rows.empty()) throw ParseError("line 1: missing \"|X| n\" header");

  auto ints_of = [](const std::pair<int, std::string>& row) {
    std::istringstream in(row.second);
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(row.first) +
                         ": expected integer, got '" + tok + "'");
      }
    }
    return out;
  };

  auto header = ints_of(rows[0]);
  if (header.size() != 2 || header[0] < 0 || header[1] < 0) {
    throw ParseError("line " + std::to_string(rows[0].first) +
                     ": malformed header, expected \"|X| n\"");
  }
  SatSmInstance inst;
  inst.universe = header[0];
  int n = header[1];
  if (static_cast<int>(rows.size()) != 1 + n) {
    throw ParseError("expected " + std::to_string(n) +
                     " list lines after the header, got " +
                     std::to_string(rows.size() - 1));
  }
  for (int a = 0; a < n; ++a) {
    auto vals = ints_of(rows[1 + a]);
    for (int v : vals) {
      if (v < 1 || v > inst.universe) {
        throw ParseError("line " + std::to_string(rows[1 + a].first) +
                         ": element " + std::to_string(v) +
                         " outside universe [1, " +
                         std::to_string(inst.universe) + "]");
      }
    }
    inst.lists.push_back(std::move(vals));
  }
  return inst;
}

std::string SatSmInstance::serialize() const {
  std::ostringstream out;
  out << universe << ' ' << lists.size() << "\n";
  for (const auto& list : lists) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out << ' ';
      out << list[i];
    }
    out << "\n";
  }
  return out.str();
}

std::string SatSmValidation::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.condition << ": " << v.detail << "\n";
  }
  return out.str();
}

namespace {

struct Occurrence {
  int list;  // 0-based list index
  int pos;   // 0-based position
};

// Rule 1 reachability. States: (occurrence, last move was theta, a theta
// immediately followed by a sigma has happened).
void check_rule1(const SatSmInstance& inst,
                 const std::vector<std::vector<Occurrence>>& occ_of,
                 std::vector<Violation>* out) {
  struct Node {
    int list, pos;
    bool last_theta, traversed;
  };
  int n = static_cast<int>(inst.lists.size());
  auto state_id = [&](int list, int pos, bool lt, bool tr) {
    std::size_t base = 0;
    for (int a = 0; a < list; ++a) base += inst.lists[a].size();
    return ((base + pos) << 2) | (static_cast<int>(lt) << 1) |
           static_cast<int>(tr);
  };
  std::size_t total = 0;
  for (const auto& l : inst.lists) total += l.size();

  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < static_cast<int>(inst.lists[m].size()); ++i) {
      std::vector<char> seen(total << 2, 0);
      std::deque<Node> queue;
      queue.push_back({m, i, false, false});
      seen[state_id(m, i, false, false)] = 1;
      bool violated = false;
      while (!queue.empty() && !violated) {
        Node cur = queue.front();
        queue.pop_front();
        // sigma
        if (cur.pos + 1 < static_cast<int>(inst.lists[cur.list].size())) {
          bool tr = cur.traversed || cur.last_theta;
          Node nxt{cur.list, cur.pos + 1, false, tr};
          if (nxt.list == m && nxt.pos > i && tr) {
            out->push_back(
                {"rule1",
                 "forbidden sequence from list " + std::to_string(m + 1) +
                     " position " + std::to_string(i + 1) + " (value " +
                     std::to_string(inst.lists[m][i]) + ") to position " +
                     std::to_string(nxt.pos + 1) + " (value " +
                     std::to_string(inst.lists[m][nxt.pos]) + ")"});
            violated = true;
            break;
          }
          auto id = state_id(nxt.list, nxt.pos, nxt.last_theta, nxt.traversed);
          if (!seen[id]) {
            seen[id] = 1;
            queue.push_back(nxt);
          }
        }
        // theta; never straight after another theta -- values sit in exactly
        // two lists, so a second jump just returns to the same occurrence.
        if (cur.last_theta) continue;
        int value = inst.lists[cur.list][cur.pos];
        for (const auto& o : occ_of[value]) {
          if (o.list == cur.list) continue;
          Node nxt{o.list, o.pos, true, cur.traversed};
          if (nxt.list == m && nxt.pos > i && nxt.traversed) {
            out->push_back(
                {"rule1",
                 "forbidden sequence from list " + std::to_string(m + 1) +
                     " position " + std::to_string(i + 1) + " (value " +
                     std::to_string(inst.lists[m][i]) + ") to position " +
                     std::to_string(nxt.pos + 1) + " (value " +
                     std::to_string(value) + ")"});
            violated = true;
            break;
          }
          auto id = state_id(nxt.list, nxt.pos, nxt.last_theta, nxt.traversed);
          if (!seen[id]) {
            seen[id] = 1;
            queue.push_back(nxt);
          }
        }
      }
      if (violated) return;  // one witness is enough
    }
  }
}

}  // namespace

SatSmValidation validate_instance(const SatSmInstance& inst) {
  SatSmValidation report;
  auto& out = report.violations;
  int n = static_cast<int>(inst.lists.size());

  for (int a = 0; a < n; ++a) {
    if (inst.lists[a].size() < 2) {
      out.push_back({"list-length", "list " + std::to_string(a + 1) +
                                        " has length " +
                                        std::to_string(inst.lists[a].size()) +
                                        " (minimum 2)"});
    }
    std::set<int> seen;
    for (int v : inst.lists[a]) {
      if (v < 1 || v > inst.universe) {
        out.push_back({"occurrences", "list " + std::to_string(a + 1) +
                                          " contains " + std::to_string(v) +
                                          " outside the universe"});
        return report;
      }
      if (!seen.insert(v).second) {
        out.push_back({"repeat", "value " + std::to_string(v) +
                                     " repeats within list " +
                                     std::to_string(a + 1)});
      }
    }
  }

  std::vector<std::vector<Occurrence>> occ_of(inst.universe + 1);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < static_cast<int>(inst.lists[a].size()); ++i) {
      occ_of[inst.lists[a][i]].push_back({a, i});
    }
  }
  for (int e = 1; e <= inst.universe; ++e) {
    std::set<int> lists_with_e;
    for (const auto& o : occ_of[e]) lists_with_e.insert(o.list);
    if (occ_of[e].size() != 2 || lists_with_e.size() != 2) {
      out.push_back({"occurrences",
                     "value " + std::to_string(e) + " appears in " +
                         std::to_string(lists_with_e.size()) +
                         " distinct lists (" + std::to_string(occ_of[e].size()) +
                         " occurrences); exactly two different lists required"});
    }
  }

  // Acyclicity of the induced arc relation (consecutive list elements).
  {
    std::vector<std::vector<int>> arcs(inst.universe + 1);
    for (const auto& list : inst.lists) {
      for (std::size_t i = 0; i + 1 < list.size(); ++i) {
        arcs[list[i]].push_back(list[i + 1]);
      }
    }
    std::vector<char> color(inst.universe + 1, 0);
    std::vector<int> cycle_at;
    auto dfs = [&](auto&& self, int u) -> bool {
      color[u] = 1;
      for (int v : arcs[u]) {
        if (color[v] == 1) {
          cycle_at.push_back(v);
          return true;
        }
        if (color[v] == 0 && self(self, v)) return true;
      }
      color[u] = 2;
      return false;
    };
    for (int e = 1; e <= inst.universe && cycle_at.empty(); ++e) {
      if (color[e] == 0) dfs(dfs, e);
    }
    if (!cycle_at.empty()) {
      out.push_back({"acyclicity", "induced arcs contain a cycle through value " +
                                       std::to_string(cycle_at.front())});
    }
  }

  check_rule1(inst, occ_of, &out);
  return report;
}

int var_index(VarKind kind, int element, int universe) {
  switch (kind) {
    case VarKind::kY:
      return element;
    case VarKind::kS:
      return universe + element;
    case VarKind::kP:
      return 2 * universe + element;
  }
  return 0;
}

const char* group_name(ClauseGroup g) {
  switch (g) {
    case ClauseGroup::kA:
      return "A";
    case ClauseGroup::kB:
      return "B";
    case ClauseGroup::kC1:
      return "C1";
    case ClauseGroup::kC2:
      return "C2";
    case ClauseGroup::kD:
      return "D";
  }
  return "?";
}

Cnf build_cnf(const SatSmInstance& inst) {
  auto validation = validate_instance(inst);
  if (!validation.ok()) {
    throw ValidationError("invalid SAT-SM instance:\n" + validation.summary());
  }

  Cnf cnf;
  cnf.universe = inst.universe;
  cnf.var_count = 3 * inst.universe;
  for (const auto& l : inst.lists) cnf.list_sizes.push_back(static_cast<int>(l.size()));

  const int X = inst.universe;
  auto y = [&](int e) { return var_index(VarKind::kY, e, X); };
  auto s = [&](int e) { return var_index(VarKind::kS, e, X); };
  auto p = [&](int e) { return var_index(VarKind::kP, e, X); };

  std::set<std::vector<int>> dedup;
  auto emit = [&](ClauseGroup g, std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    ++cnf.stats.pre_dedup[g];
    std::vector<int> key = lits;
    key.push_back(static_cast<int>(g));  // dedup within each group
    if (!dedup.insert(key).second) return;
    ++cnf.stats.post_dedup[g];
    cnf.clauses.push_back({std::move(lits), g});
  };
  for (auto g : {ClauseGroup::kA, ClauseGroup::kB, ClauseGroup::kC1,
                 ClauseGroup::kC2, ClauseGroup::kD}) {
    cnf.stats.pre_dedup[g] = 0;
    cnf.stats.post_dedup[g] = 0;
  }

  // Group A: per list, the disjunction of y and p over its elements.
  for (const auto& l : inst.lists) {
    std::vector<int> lits;
    for (int e : l) {
      lits.push_back(y(e));
      lits.push_back(p(e));
    }
    emit(ClauseGroup::kA, std::move(lits));
  }
  // Group B: s_i or ~s_{i+1} for consecutive elements.
  for (const auto& l : inst.lists) {
    for (std::size_t i = 0; i + 1 < l.size(); ++i) {
      emit(ClauseGroup::kB, {s(l[i]), -s(l[i + 1])});
    }
  }
  // Group C1: (~y_i or s_i) for all i, (~y_i or ~s_{i+1}) for i < k.
  for (const auto& l : inst.lists) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      emit(ClauseGroup::kC1, {-y(l[i]), s(l[i])});
    }
    for (std::size_t i = 0; i + 1 < l.size(); ++i) {
      emit(ClauseGroup::kC1, {-y(l[i]), -s(l[i + 1])});
    }
  }

  // Occurrences of each value: exactly two, in different lists.
  struct Occ {
    int list, pos;
  };
  std::vector<std::array<Occ, 2>> occ(X + 1);
  {
    std::vector<int> count(X + 1, 0);
    for (int a = 0; a < static_cast<int>(inst.lists.size()); ++a) {
      for (int i = 0; i < static_cast<int>(inst.lists[a].size()); ++i) {
        occ[inst.lists[a][i]][count[inst.lists[a][i]]++] = {a, i};
      }
    }
  }

  // Group C2: three cases by whether the occurrences are last in their lists.
  for (int e = 1; e <= X; ++e) {
    const auto& [oa, ob] = occ[e];
    const auto& la = inst.lists[oa.list];
    const auto& lb = inst.lists[ob.list];
    bool a_last = oa.pos + 1 == static_cast<int>(la.size());
    bool b_last = ob.pos + 1 == static_cast<int>(lb.size());
    std::vector<int> lits = {-s(e), y(e)};
    if (!a_last) lits.push_back(s(la[oa.pos + 1]));
    if (!b_last) lits.push_back(s(lb[ob.pos + 1]));
    emit(ClauseGroup::kC2, std::move(lits));
  }

  // Group D: neighbor characterization plus ~p_e or ~s_e.
  for (int e = 1; e <= X; ++e) {
    const auto& [oa, ob] = occ[e];
    const auto& la = inst.lists[oa.list];
    const auto& lb = inst.lists[ob.list];
    bool a_first = oa.pos == 0;
    bool b_first = ob.pos == 0;
    if (a_first && b_first) {
      emit(ClauseGroup::kD, {s(e), p(e)});
    } else if (a_first != b_first) {
      int prev = a_first ? lb[ob.pos - 1] : la[oa.pos - 1];
      emit(ClauseGroup::kD, {-p(e), s(prev)});
      emit(ClauseGroup::kD, {s(e), -s(prev), p(e)});
    } else {
      int prev_a = la[oa.pos - 1];
      int prev_b = lb[ob.pos - 1];
      emit(ClauseGroup::kD, {-p(e), s(prev_a)});
      emit(ClauseGroup::kD, {-p(e), s(prev_b)});
      emit(ClauseGroup::kD, {s(e), -s(prev_a), -s(prev_b), p(e)});
    }
    emit(ClauseGroup::kD, {-p(e), -s(e)});
  }

  return cnf;
}

AuditReport audit_schaefer(const Cnf& cnf) {
  AuditReport report;
  report.pre_dedup = cnf.stats.pre_dedup;
  report.post_dedup = cnf.stats.post_dedup;
  report.a_min_length = INT32_MAX;

  int expected_a = static_cast<int>(cnf.list_sizes.size());
  int seen_a = 0;
  std::multiset<int> a_lengths, expected_lengths;
  for (int k : cnf.list_sizes) expected_lengths.insert(2 * k);

  for (const auto& c : cnf.clauses) {
    bool all_positive = std::all_of(c.literals.begin(), c.literals.end(),
                                    [](int l) { return l > 0; });
    if (all_positive && c.literals.size() >= 2) {
      report.has_positive_clause_geq2 = true;
    }
    if (c.group == ClauseGroup::kA) {
      ++seen_a;
      a_lengths.insert(static_cast<int>(c.literals.size()));
      report.a_min_length =
          std::min(report.a_min_length, static_cast<int>(c.literals.size()));
      if (!all_positive) {
        throw AuditError("group A clause contains a negative literal");
      }
      if (c.literals.size() < 4) {
        throw AuditError("group A clause shorter than 4 literals");
      }
    } else if (c.group == ClauseGroup::kC1) {
      if (c.literals.size() != 2) {
        throw AuditError("group C1 clause is not binary");
      }
    }
  }

  if (!cnf.list_sizes.empty()) {
    if (seen_a != expected_a || a_lengths != expected_lengths) {
      throw AuditError("group A does not carry one all-positive clause of "
                       "length 2k per list");
    }
    // Count C1 families by regenerating their shapes from the stats; the
    // family split is recomputed from the clause polarity pattern.
    int sum_k = 0;
    for (int k : cnf.list_sizes) sum_k += k;
    int n = static_cast<int>(cnf.list_sizes.size());
    for (const auto& c : cnf.clauses) {
      if (c.group != ClauseGroup::kC1) continue;
      bool all_neg = c.literals[0] < 0 && c.literals[1] < 0;
      (all_neg ? report.c1_all_negative_binary : report.c1_neg_pos_binary)++;
    }
    // Post-dedup the (~y_e or s_e) family collapses from sum_k to |X|
    // (every value occurs twice). Pre-dedup counts pin the exact totals.
    if (cnf.stats.pre_dedup.at(ClauseGroup::kC1) != 2 * sum_k - n) {
      throw AuditError("group C1 pre-dedup count mismatch");
    }
    if (report.c1_all_negative_binary == 0) {
      throw AuditError("group C1 carries no all-negative binary clause");
    }
  }
  if (!report.has_positive_clause_geq2) {
    throw AuditError("no all-positive clause of size >= 2 (affine witness)");
  }
  return report;
}

namespace {

// Iterative DPLL over counters. Deterministic: lowest unassigned variable,
// false branch first.
class Dpll {
 public:
  Dpll(const Cnf& cnf, const SolveLimits& limits)
      : cnf_(cnf), limits_(limits), value_(cnf.var_count + 1, -1) {}

  std::optional<Assignment> run() {
    std::vector<int> unit_backlog;
    for (const auto& c : cnf_.clauses) {
      if (c.literals.empty()) return std::nullopt;
      if (c.literals.size() == 1) unit_backlog.push_back(c.literals[0]);
    }
    for (int lit : unit_backlog) {
      int v = std::abs(lit);
      int want = lit > 0 ? 1 : 0;
      if (value_[v] == -1) {
        value_[v] = want;
        trail_.push_back(v);
      } else if (value_[v] != want) {
        return std::nullopt;
      }
    }
    if (!propagate()) return std::nullopt;
    if (!search(1)) return std::nullopt;
    Assignment asg(cnf_.var_count);
    for (int v = 1; v <= cnf_.var_count; ++v) asg.set(v, value_[v] == 1);
    if (!evaluate(cnf_, asg)) {
      throw Error("internal: solver produced a non-model");
    }
    return asg;
  }

 private:
  bool satisfied(int lit) const {
    int v = value_[std::abs(lit)];
    return v != -1 && (v == 1) == (lit > 0);
  }
  bool falsified(int lit) const {
    int v = value_[std::abs(lit)];
    return v != -1 && (v == 1) != (lit > 0);
  }

  // Scans all clauses to fixpoint. Fine at this scale.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : cnf_.clauses) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int lit : c.literals) {
          if (satisfied(lit)) {
            sat = true;
            break;
          }
          if (!falsified(lit)) {
            ++unassigned;
            last = lit;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;  // conflict
        if (unassigned == 1) {
          value_[std::abs(last)] = last > 0 ? 1 : 0;
          trail_.push_back(std::abs(last));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search(int from_var) {
    int var = 0;
    for (int v = from_var; v <= cnf_.var_count; ++v) {
      if (value_[v] == -1) {
        var = v;
        break;
      }
    }
    if (var == 0) return true;  // total assignment, propagate() found no conflict
    for (int phase = 0; phase < 2; ++phase) {
      std::size_t mark = trail_.size();
      value_[var] = phase;
      trail_.push_back(var);
      if (propagate() && search(var + 1)) return true;
      if (++conflicts_ > limits_.max_conflicts) {
        throw LimitError("solver conflict cap exceeded");
      }
      while (trail_.size() > mark) {
        value_[trail_.back()] = -1;
        trail_.pop_back();
      }
    }
    return false;
  }

  const Cnf& cnf_;
  SolveLimits limits_;
  std::vector<int> value_;
  std::vector<int> trail_;
  std::uint64_t conflicts_ = 0;
};

}  // namespace

std::optional<Assignment> solve(const Cnf& cnf, const SolveLimits& limits) {
  return Dpll(cnf, limits).run();
}

bool evaluate(const Cnf& cnf, const Assignment& asg) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int lit : c.literals) {
      int v = std::abs(lit);
      if (v > asg.var_count()) return false;
      if (asg.get(v) == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

DecodedSets decode(const SatSmInstance& inst, const Assignment& asg) {
  DecodedSets sets;
  for (int e = 1; e <= inst.universe; ++e) {
    if (asg.get(var_index(VarKind::kY, e, inst.universe))) sets.leaves.insert(e);
    if (asg.get(var_index(VarKind::kS, e, inst.universe))) sets.closed.insert(e);
    if (asg.get(var_index(VarKind::kP, e, inst.universe))) sets.neighbors.insert(e);
  }
  return sets;
}

Assignment encode_sets(int universe, const std::set<int>& closed,
                       const std::set<int>& leaves,
                       const std::set<int>& neighbors) {
  Assignment asg(3 * universe);
  for (int e : leaves) asg.set(var_index(VarKind::kY, e, universe), true);
  for (int e : closed) asg.set(var_index(VarKind::kS, e, universe), true);
  for (int e : neighbors) asg.set(var_index(VarKind::kP, e, universe), true);
  return asg;
}

Assignment encode(const SatSmInstance& inst, const DecodedSets& sets) {
  return encode_sets(inst.universe, sets.closed, sets.leaves, sets.neighbors);
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.var_count << ' ' << cnf.clauses.size() << "\n";
  const Clause* prev = nullptr;
  for (const auto& c : cnf.clauses) {
    if (!prev || prev->group != c.group) {
      out << "c group " << group_name(c.group) << "\n";
    }
    for (int lit : c.literals) out << lit << ' ';
    out << "0\n";
    prev = &c;
  }
  return out.str();
}

Assignment from_dimacs_model(const std::string& text, int var_count) {
  auto parsed = parse_solver_output(text, var_count);
  if (!parsed) throw ParseError("model text declares UNSAT");
  return *parsed;
}

std::optional<Assignment> parse_solver_output(const std::string& text,
                                              int var_count) {
  Assignment asg(var_count);
  bool any = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok == "p") continue;
    if (tok == "s") {
      if (!(ls >> tok)) continue;
    }
    auto upper = tok;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    if (upper.find("UNSAT") != std::string::npos) return std::nullopt;
    if (upper == "SAT" || upper == "SATISFIABLE") {
      any = true;
      tok.clear();
    } else if (tok == "v") {
      tok.clear();
    }
    // Remaining tokens on the line are literals.
    do {
      if (tok.empty()) continue;
      int lit;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("malformed model token '" + tok + "'");
      }
      if (lit == 0) continue;
      int v = std::abs(lit);
      if (v > var_count) {
        throw ParseError("model mentions variable " + std::to_string(v) +
                         " beyond the formula's " + std::to_string(var_count));
      }
      asg.set(v, lit > 0);
      any = true;
    } while (ls >> tok);
  }
  if (!any) throw ParseError("no model found in solver output");
  return asg;
}

}  // namespace matchkit
