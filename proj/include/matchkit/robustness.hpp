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

#ifndef MATCHKIT_ROBUSTNESS_HPP_
#define MATCHKIT_ROBUSTNESS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "matchkit/rotation_poset.hpp"
#include "matchkit/sm_core.hpp"

namespace matchkit {

struct FamilyFReport;  // reduction.hpp

// Break any `break_count` non-fixed pairs; repair by changing the partners
// of at most `budget` other men.
struct RobustnessQuery {
  int break_count = 1;  // a >= 1
  int budget = 0;       // b >= 0
};

// Evidence attached to a failed supermatch check: the irreparable broken set
// and the nearest stable matching avoiding it, if any.
struct RepairWitness {
  std::vector<Pair> broken;
  std::optional<Matching> repair;
  std::optional<int> cost;  // distance(m, repair) - a
  bool vacuous = false;

  // {"broken":[[m,w],...],"repair":[[m,w],...]|null,"cost":int|null,"vacuous":bool}
  std::string to_json() const;
  // repair avoids every broken pair and cost matches the distance arithmetic.
  bool self_consistent(const Matching& m, int break_count) const;
};

struct SupermatchCheck {
  bool holds = false;
  bool vacuous = false;  // fewer than `a` non-fixed pairs to break
  std::optional<RepairWitness> witness;
};

// True iff for every a-subset Psi of m's non-fixed pairs some stable
// matching avoids Psi within the budget. Psi subsets are scanned in
// lexicographic order and the scan stops at the first irreparable one, so
// the returned witness is the smallest failing set. `lattice` must be the
// complete list of stable matchings and contain `m`.
SupermatchCheck is_ab_supermatch(const Instance& inst,
                                 const std::vector<Matching>& lattice,
                                 const Matching& m, const RobustnessQuery& q);

// First stable matching (in enumeration order) that is an (a,b)-supermatch,
// or nullopt.
std::optional<Matching> exists_ab_supermatch(
    const Instance& inst, const RobustnessQuery& q,
    std::size_t cap = kDefaultEnumerationCap);

// Leaf/neighbor coverage test for family-F posets: true iff every non-fixed
// man is involved in L(S) ∪ N(S). Validates the poset against the family-F
// properties unless a pre-computed report is supplied; throws ContractError
// when validation fails.
bool is_11_supermatch_family_f(const RotationPoset& poset,
                               const ClosedSubset& s,
                               const std::vector<int>& nonfixed_men,
                               const FamilyFReport* prevalidated = nullptr);

}  // namespace matchkit

#endif  // MATCHKIT_ROBUSTNESS_HPP_
