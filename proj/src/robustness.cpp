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

#include "matchkit/robustness.hpp"

#include <algorithm>

#include "json.hpp"
#include "matchkit/reduction.hpp"

namespace matchkit {

std::string RepairWitness::to_json() const {
  nlohmann::ordered_json j;
  j["broken"] = nlohmann::ordered_json::array();
  for (const auto& p : broken) j["broken"].push_back({p.first, p.second});
  if (repair) {
    j["repair"] = nlohmann::ordered_json::array();
    for (const auto& p : repair->pairs()) j["repair"].push_back({p.first, p.second});
  } else {
    j["repair"] = nullptr;
  }
  if (cost) {
    j["cost"] = *cost;
  } else {
    j["cost"] = nullptr;
  }
  j["vacuous"] = vacuous;
  return j.dump();
}

bool RepairWitness::self_consistent(const Matching& m, int break_count) const {
  if (repair.has_value() != cost.has_value()) return false;
  if (!repair) return true;
  for (const auto& p : broken) {
    if (repair->contains(p.first, p.second)) return false;
  }
  return *cost == distance(m, *repair) - break_count;
}

namespace {

void validate_query(const RobustnessQuery& q) {
  if (q.break_count < 1) throw ContractError("break count a must be >= 1");
  if (q.budget < 0) throw ContractError("repair budget b must be >= 0");
}

}  // namespace

SupermatchCheck is_ab_supermatch(const Instance& inst,
                                 const std::vector<Matching>& lattice,
                                 const Matching& m, const RobustnessQuery& q) {
  validate_query(q);
  if (std::find(lattice.begin(), lattice.end(), m) == lattice.end()) {
    throw ContractError("matching is not in the given stable lattice");
  }

  std::vector<Pair> fixed = fixed_pairs(inst, lattice);
  std::vector<Pair> nonfixed;
  for (const auto& p : m.pairs()) {
    if (!std::binary_search(fixed.begin(), fixed.end(), p)) nonfixed.push_back(p);
  }

  SupermatchCheck result;
  int a = q.break_count;
  if (static_cast<int>(nonfixed.size()) < a) {
    result.holds = true;
    result.vacuous = true;
    return result;
  }

  // Distances from m, computed once.
  std::vector<int> dist(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) dist[i] = distance(m, lattice[i]);

  // a-subsets of the non-fixed pairs, lexicographic by index vector.
  std::vector<int> idx(a);
  for (int i = 0; i < a; ++i) idx[i] = i;
  int nf = static_cast<int>(nonfixed.size());
  while (true) {
    std::vector<Pair> psi;
    psi.reserve(a);
    for (int i : idx) psi.push_back(nonfixed[i]);

    int best = -1;
    for (std::size_t c = 0; c < lattice.size(); ++c) {
      bool avoids = true;
      for (const auto& p : psi) {
        if (lattice[c].contains(p.first, p.second)) {
          avoids = false;
          break;
        }
      }
      if (avoids && (best < 0 || dist[c] < dist[best])) best = static_cast<int>(c);
    }
    bool repaired = best >= 0 && dist[best] - a <= q.budget;
    if (!repaired) {
      RepairWitness w;
      w.broken = std::move(psi);
      if (best >= 0) {
        w.repair = lattice[best];
        w.cost = dist[best] - a;
      }
      result.holds = false;
      result.witness = std::move(w);
      return result;
    }

    // Next combination.
    int i = a - 1;
    while (i >= 0 && idx[i] == nf - a + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
  }
  result.holds = true;
  return result;
}

std::optional<Matching> exists_ab_supermatch(const Instance& inst,
                                             const RobustnessQuery& q,
                                             std::size_t cap) {
  validate_query(q);
  auto enumerated = enumerate_stable_matchings(inst, cap);
  std::vector<Matching> lattice;
  lattice.reserve(enumerated.size());
  for (const auto& [s, m] : enumerated) lattice.push_back(m);
  for (const auto& m : lattice) {
    if (is_ab_supermatch(inst, lattice, m, q).holds) return m;
  }
  return std::nullopt;
}

bool is_11_supermatch_family_f(const RotationPoset& poset,
                               const ClosedSubset& s,
                               const std::vector<int>& nonfixed_men,
                               const FamilyFReport* prevalidated) {
  if (prevalidated == nullptr) {
    FamilyFReport report = validate_family_f(poset);
    if (!report.pass()) {
      throw ContractError("poset is not in family F: " + report.summary());
    }
  } else if (!prevalidated->pass()) {
    throw ContractError("poset is not in family F: " + prevalidated->summary());
  }
  if (!poset.is_closed(s.members)) {
    throw ContractError("subset is not predecessor-closed");
  }
  auto [leaves, neighbors] = leaf_and_neighbor(poset, s);
  std::vector<int> cover = leaves;
  cover.insert(cover.end(), neighbors.begin(), neighbors.end());
  std::vector<int> covered_men = men_of(poset, cover);
  for (int man : nonfixed_men) {
    if (!std::binary_search(covered_men.begin(), covered_men.end(), man)) {
      return false;
    }
  }
  return true;
}

}  // namespace matchkit
