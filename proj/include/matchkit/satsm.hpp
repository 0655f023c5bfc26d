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

#ifndef MATCHKIT_SATSM_HPP_
#define MATCHKIT_SATSM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matchkit/errors.hpp"

namespace matchkit {

// A SAT-SM instance: a universe X = [1, |X|] and n ordered lists over X.
// Valid instances satisfy: every list has length >= 2, every value appears
// in exactly two different lists, no value repeats within a list, the arcs
// between consecutive list elements form a DAG, and Rule 1 holds.
struct SatSmInstance {
  int universe = 0;                     // |X|; values are 1-based
  std::vector<std::vector<int>> lists;  // n lists, elements of [1, universe]

  // Format: line 1 "|X| n", then n list lines. '#' and blank lines ignored.
  static SatSmInstance parse(const std::string& text);
  std::string serialize() const;
};

struct Violation {
  std::string condition;  // "list-length" | "occurrences" | "repeat" |
                          // "acyclicity" | "rule1"
  std::string detail;
};

struct SatSmValidation {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks all validity conditions. Rule 1 is decided on the occurrence graph:
// sigma-moves step (list, i) -> (list, i+1), theta-moves jump between the
// occurrences of one value; a violation is a path from (m, i) to (m, j),
// j > i, containing a theta-move immediately followed by a sigma-move.
SatSmValidation validate_instance(const SatSmInstance& inst);

enum class VarKind { kY, kS, kP };

// DIMACS variable numbering: y_e -> e, s_e -> |X| + e, p_e -> 2|X| + e.
int var_index(VarKind kind, int element, int universe);

enum class ClauseGroup { kA, kB, kC1, kC2, kD };
const char* group_name(ClauseGroup g);

struct Clause {
  std::vector<int> literals;  // signed DIMACS literals
  ClauseGroup group;
};

struct CnfStats {
  std::map<ClauseGroup, int> pre_dedup;
  std::map<ClauseGroup, int> post_dedup;
};

struct Cnf {
  int var_count = 0;
  int universe = 0;               // 0 for hand-built formulas
  std::vector<int> list_sizes;    // k_{l_a}, kept for the structural audit
  std::vector<Clause> clauses;
  CnfStats stats;
};

// Emits the five clause groups exactly, deduplicated within each group.
// Throws ValidationError if the instance is invalid.
Cnf build_cnf(const SatSmInstance& inst);

struct AuditReport {
  std::map<ClauseGroup, int> pre_dedup;
  std::map<ClauseGroup, int> post_dedup;
  int a_min_length = 0;
  int c1_all_negative_binary = 0;  // pre-dedup count of (~y, ~s) clauses
  int c1_neg_pos_binary = 0;       // pre-dedup count of (~y, s) clauses
  bool has_positive_clause_geq2 = false;
};

// Structural facts behind the hardness argument: group A is all-positive
// with clause length 2k >= 4 per list; C1 carries 2*sum(k-1) clauses over
// consecutive positions including all-negative binaries; some all-positive
// clause of size >= 2 exists. Throws AuditError on any failure.
AuditReport audit_schaefer(const Cnf& cnf);

// Total truth assignment over variables 1..var_count.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int var_count) : values_(var_count + 1, false) {}

  int var_count() const { return static_cast<int>(values_.size()) - 1; }
  bool get(int var) const { return values_[var]; }
  void set(int var, bool value) { values_[var] = value; }
  bool operator==(const Assignment& other) const {
    return values_ == other.values_;
  }

 private:
  std::vector<bool> values_;
};

struct SolveLimits {
  std::uint64_t max_conflicts = UINT64_MAX;
};

// Complete search (unit propagation + branching on the lowest-numbered
// unassigned variable, false first). The returned model is re-verified with
// the clause evaluator. Throws LimitError past the conflict cap.
std::optional<Assignment> solve(const Cnf& cnf, const SolveLimits& limits = {});

// Independent clause-by-clause evaluation.
bool evaluate(const Cnf& cnf, const Assignment& asg);

struct DecodedSets {
  std::set<int> closed;     // {e : s_e}
  std::set<int> leaves;     // {e : y_e}
  std::set<int> neighbors;  // {e : p_e}

  bool operator==(const DecodedSets& other) const {
    return closed == other.closed && leaves == other.leaves &&
           neighbors == other.neighbors;
  }
};

DecodedSets decode(const SatSmInstance& inst, const Assignment& asg);
Assignment encode(const SatSmInstance& inst, const DecodedSets& sets);
Assignment encode_sets(int universe, const std::set<int>& closed,
                       const std::set<int>& leaves,
                       const std::set<int>& neighbors);

// Standard DIMACS with "c group <name>" comments before each block.
std::string to_dimacs(const Cnf& cnf);

// Parses solver model output: ignores 'c' lines and satisfiability markers,
// collects signed literals from 'v' lines or bare number lines. Unmentioned
// variables default to false.
Assignment from_dimacs_model(const std::string& text, int var_count);

// Like from_dimacs_model, but returns nullopt when the text declares the
// formula unsatisfiable.
std::optional<Assignment> parse_solver_output(const std::string& text,
                                              int var_count);

}  // namespace matchkit

#endif  // MATCHKIT_SATSM_HPP_
