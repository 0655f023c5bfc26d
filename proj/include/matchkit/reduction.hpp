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

#ifndef MATCHKIT_REDUCTION_HPP_
#define MATCHKIT_REDUCTION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "matchkit/rotation_poset.hpp"
#include "matchkit/satsm.hpp"
#include "matchkit/sm_core.hpp"

namespace matchkit {

// Family-F check results. pass() iff all four structural properties hold and
// the no-rematch consequence (no duplicate preference-list entries, no pair
// carried along two distinct paths) holds.
struct FamilyFReport {
  bool two_pairs_each = true;        // P1
  bool degree_at_most_two = true;    // P2
  bool all_edges_type1 = true;       // P3
  bool men_in_two_rotations = true;  // P4
  bool rematch_free = true;          // Lemma-1 consequence
  bool rematch_checked = false;      // skipped when P1-P4 already fail
  std::vector<std::string> failures;

  bool pass() const {
    return two_pairs_each && degree_at_most_two && all_edges_type1 &&
           men_in_two_rotations && rematch_checked && rematch_free;
  }
  std::string summary() const;
  std::string to_json() const;
};

// Builds the family-F rotation poset of a valid SAT-SM instance: one 2-pair
// rotation per value (id = value - 1), men from list membership, women
// completed by the two-step procedure (first elements pair (m_a, w_a);
// breadth-first completion hands each successor the other pair's woman).
// All arcs are type 1. Throws ValidationError on invalid instances.
RotationPoset reduce_to_poset(const SatSmInstance& inst);

// Preference lists realizing a woman-complete family-F poset: man i starts
// with woman i and appends produced partners in topological order; women
// rank later-produced suitors higher, man i last. `men_count` <= 0 infers
// the count from the rotations (needed for the empty poset).
Instance synthesize_preferences(const RotationPoset& poset, int men_count = -1);

FamilyFReport validate_family_f(const RotationPoset& poset);

// Satisfying assignment -> closed subset -> stable matching of the reduced
// instance. Throws ContractError if the decoded subset is not closed.
Matching map_solution_forward(const SatSmInstance& inst, const Assignment& asg,
                              const Instance& reduced);

// Closed subset -> assignment (s := S, y := L(S), p := N(S)).
Assignment map_solution_backward(const RotationPoset& poset,
                                 const ClosedSubset& s);

struct SatSmGenParams {
  int universe = 4;
  int lists = 4;
  std::uint64_t seed = 0;
  int max_attempts = 10000;
};

// Random valid instance: a random simple bipartite list graph with all
// degrees >= 2 (values are edges), values shuffled onto edges, lists sorted
// ascending so the arcs form a DAG; rejection on any residual Rule-1
// violation. Deterministic per seed. Throws GenerationError when the
// parameters are infeasible or the attempt budget runs out.
SatSmInstance generate_random_satsm(const SatSmGenParams& params);

// Deterministic sweep of valid instances for batch harnesses: list counts
// cycle over [4, max_lists], universes spread over the feasible range
// capped at max_universe. Shapes whose rejection budget runs out are
// skipped.
std::vector<SatSmInstance> generate_harness_instances(int count,
                                                      int max_universe,
                                                      int max_lists,
                                                      std::uint64_t seed);

// One instance through the whole pipeline: CNF + audit + solve on one side,
// reduce + synthesize + enumerate + brute-force supermatch on the other,
// plus both solution mappings.
struct EquivalenceOutcome {
  bool sat = false;
  bool supermatch_exists = false;
  bool agree = false;
  bool forward_ok = true;   // SAT models map to oracle-confirmed supermatches
  bool backward_ok = true;  // oracle supermatches map to satisfying assignments
  int stable_count = 0;
  int supermatch_count = 0;
  int models_checked = 0;
  std::string to_json() const;
  bool all_ok() const { return agree && forward_ok && backward_ok; }
};

EquivalenceOutcome check_equivalence(const SatSmInstance& inst,
                                     std::size_t cap = kDefaultEnumerationCap);

}  // namespace matchkit

#endif  // MATCHKIT_REDUCTION_HPP_
