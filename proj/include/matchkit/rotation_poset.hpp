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

#ifndef MATCHKIT_ROTATION_POSET_HPP_
#define MATCHKIT_ROTATION_POSET_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "matchkit/sm_core.hpp"

namespace matchkit {

// An ordered cycle of pairs of one stable matching. Eliminating it (each man
// takes the partner of the next man, cyclically) yields another stable
// matching. The cycle is normalized to start at its smallest man id.
struct Rotation {
  int id = -1;
  std::vector<Pair> cycle;

  // Woman the i-th man of the cycle receives when the rotation is eliminated.
  int produced_woman(std::size_t i) const {
    return cycle[(i + 1) % cycle.size()].second;
  }
  std::vector<int> men() const;
  bool involves_man(int man) const;
  bool involves_woman(int woman) const;
  void normalize();
};

struct PosetEdge {
  int from = -1;
  int to = -1;
  int type = 1;  // 1 or 2
};

// All rotations of an instance plus their precedence order. `edges()` is the
// transitive reduction with edge types; precedence queries use a cached
// transitive closure.
class RotationPoset {
 public:
  RotationPoset() = default;

  // Builds from any set of precedence edges (possibly redundant); computes
  // the closure and reduction. Throws ContractError if the relation is
  // cyclic. When both rules produce the same edge, type 1 wins.
  static RotationPoset from_rule_edges(std::vector<Rotation> rotations,
                                       const std::vector<PosetEdge>& rule_edges);

  int size() const { return static_cast<int>(rotations_.size()); }
  const Rotation& rotation(int id) const { return rotations_[id]; }
  const std::vector<Rotation>& rotations() const { return rotations_; }
  const std::vector<PosetEdge>& edges() const { return edges_; }

  // Strict precedence a ≺≺ b.
  bool precedes(int a, int b) const { return closure_[a][b] != 0; }
  // Closure predecessors/successors, ascending ids.
  const std::vector<int>& predecessors(int id) const { return preds_[id]; }
  const std::vector<int>& successors(int id) const { return succs_[id]; }
  // Reduction (covering) predecessors/successors, ascending ids.
  const std::vector<int>& immediate_predecessors(int id) const {
    return imm_preds_[id];
  }
  const std::vector<int>& immediate_successors(int id) const {
    return imm_succs_[id];
  }

  bool is_closed(const std::vector<int>& members) const;

  // {"rotations":[{"id":k,"cycle":[[m,w],...]},...],"edges":[[from,to,type],...]}
  std::string to_json() const;
  std::string to_dot() const;

 private:
  std::vector<Rotation> rotations_;
  std::vector<PosetEdge> edges_;  // transitive reduction, sorted (from, to)
  std::vector<std::vector<char>> closure_;
  std::vector<std::vector<int>> preds_, succs_;
  std::vector<std::vector<int>> imm_preds_, imm_succs_;
};

// A predecessor-closed rotation set, in bijection with the stable matchings.
struct ClosedSubset {
  std::vector<int> members;  // sorted ascending

  bool contains(int id) const;
  bool operator==(const ClosedSubset& other) const {
    return members == other.members;
  }
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Discovers all rotations and the full typed precedence relation. Rotation
// ids follow the elimination chain from the man-optimal matching (a
// topological order of the poset).
RotationPoset find_rotations(const Instance& inst);

// M/rho. Throws ExposureError unless every cycle pair is in `m` and the
// result is stable.
Matching eliminate(const Instance& inst, const Matching& m, const Rotation& rho);

// The unique closed subset whose elimination from M0 yields `m`.
// Throws ContractError if `m` is not stable.
ClosedSubset closed_subset_of(const Instance& inst, const RotationPoset& poset,
                              const Matching& m);

// Inverse of closed_subset_of: eliminates the members of `s` from `m0` in
// topological order. Throws ContractError if `s` is not closed.
Matching matching_of(const Instance& inst, const RotationPoset& poset,
                     const ClosedSubset& s, const Matching& m0);

// L(S): members with no successor inside S. N(S): non-members all of whose
// predecessors lie in S. Both ascending.
std::pair<std::vector<int>, std::vector<int>> leaf_and_neighbor(
    const RotationPoset& poset, const ClosedSubset& s);

// All closed subsets in lexicographic order of their sorted member lists.
// Throws LimitError if more than `cap` subsets exist.
std::vector<ClosedSubset> enumerate_closed_subsets(
    const RotationPoset& poset, std::size_t cap = kDefaultEnumerationCap);

// Every stable matching, paired with its closed subset, in the same
// lexicographic order.
std::vector<std::pair<ClosedSubset, Matching>> enumerate_stable_matchings(
    const Instance& inst, std::size_t cap = kDefaultEnumerationCap);

// Union of men involved in the given rotations, ascending.
std::vector<int> men_of(const RotationPoset& poset,
                        const std::vector<int>& rotation_ids);

// True iff the posets are identical up to rotation-id relabeling, where the
// relabeling is forced by cycle content (cycles are unique per instance).
bool posets_isomorphic(const RotationPoset& a, const RotationPoset& b);

}  // namespace matchkit

#endif  // MATCHKIT_ROTATION_POSET_HPP_
