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

#include "matchkit/rotation_poset.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace matchkit {

std::vector<int> Rotation::men() const {
  std::vector<int> out;
  out.reserve(cycle.size());
  for (const auto& p : cycle) out.push_back(p.first);
  std::sort(out.begin(), out.end());
  return out;
}

bool Rotation::involves_man(int man) const {
  for (const auto& p : cycle) {
    if (p.first == man) return true;
  }
  return false;
}

bool Rotation::involves_woman(int woman) const {
  for (const auto& p : cycle) {
    if (p.second == woman) return true;
  }
  return false;
}

void Rotation::normalize() {
  if (cycle.empty()) return;
  std::size_t best = 0;
  for (std::size_t i = 1; i < cycle.size(); ++i) {
    if (cycle[i].first < cycle[best].first) best = i;
  }
  std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
}

RotationPoset RotationPoset::from_rule_edges(
    std::vector<Rotation> rotations, const std::vector<PosetEdge>& rule_edges) {
  RotationPoset poset;
  int n = static_cast<int>(rotations.size());
  poset.rotations_ = std::move(rotations);
  for (int i = 0; i < n; ++i) poset.rotations_[i].id = i;

  // Dedupe rule edges; type 1 wins over type 2 for the same (from, to).
  std::map<std::pair<int, int>, int> typed;
  for (const auto& e : rule_edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n || e.from == e.to) {
      throw ContractError("rule edge out of range");
    }
    auto key = std::make_pair(e.from, e.to);
    auto it = typed.find(key);
    if (it == typed.end()) {
      typed.emplace(key, e.type);
    } else {
      it->second = std::min(it->second, e.type);
    }
  }

  poset.closure_.assign(n, std::vector<char>(n, 0));
  for (const auto& [key, type] : typed) poset.closure_[key.first][key.second] = 1;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!poset.closure_[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (poset.closure_[k][j]) poset.closure_[i][j] = 1;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (poset.closure_[i][i]) {
      throw ContractError("precedence relation is cyclic at rotation " +
                          std::to_string(i));
    }
  }

  // Transitive reduction: covering pairs of the closure. Each covering pair
  // is necessarily a rule edge, which supplies its type.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (!poset.closure_[a][b]) continue;
      bool covered = false;
      for (int c = 0; c < n && !covered; ++c) {
        covered = poset.closure_[a][c] && poset.closure_[c][b];
      }
      if (!covered) {
        auto it = typed.find({a, b});
        if (it == typed.end()) {
          throw ContractError("internal: covering pair missing from rule edges");
        }
        poset.edges_.push_back({a, b, it->second});
      }
    }
  }
  std::sort(poset.edges_.begin(), poset.edges_.end(),
            [](const PosetEdge& x, const PosetEdge& y) {
              return std::tie(x.from, x.to) < std::tie(y.from, y.to);
            });

  poset.preds_.assign(n, {});
  poset.succs_.assign(n, {});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (poset.closure_[a][b]) {
        poset.preds_[b].push_back(a);
        poset.succs_[a].push_back(b);
      }
    }
  }
  poset.imm_preds_.assign(n, {});
  poset.imm_succs_.assign(n, {});
  for (const auto& e : poset.edges_) {
    poset.imm_preds_[e.to].push_back(e.from);
    poset.imm_succs_[e.from].push_back(e.to);
  }
  for (auto& v : poset.imm_preds_) std::sort(v.begin(), v.end());
  for (auto& v : poset.imm_succs_) std::sort(v.begin(), v.end());
  return poset;
}

bool RotationPoset::is_closed(const std::vector<int>& members) const {
  std::vector<char> in(size(), 0);
  for (int id : members) {
    if (id < 0 || id >= size()) return false;
    in[id] = 1;
  }
  for (int id : members) {
    for (int p : preds_[id]) {
      if (!in[p]) return false;
    }
  }
  return true;
}

std::string RotationPoset::to_json() const {
  nlohmann::ordered_json j;
  j["rotations"] = nlohmann::ordered_json::array();
  for (const auto& r : rotations_) {
    nlohmann::ordered_json jr;
    jr["id"] = r.id;
    jr["cycle"] = nlohmann::ordered_json::array();
    for (const auto& p : r.cycle) jr["cycle"].push_back({p.first, p.second});
    j["rotations"].push_back(std::move(jr));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges_) j["edges"].push_back({e.from, e.to, e.type});
  return j.dump();
}

std::string RotationPoset::to_dot() const {
  std::ostringstream out;
  out << "digraph rotation_poset {\n";
  for (const auto& r : rotations_) {
    out << "  r" << r.id << " [label=\"r" << r.id << ":";
    for (const auto& p : r.cycle) {
      out << " (" << p.first << "," << p.second << ")";
    }
    out << "\"];\n";
  }
  for (const auto& e : edges_) {
    out << "  r" << e.from << " -> r" << e.to << " [label=\"" << e.type
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

bool ClosedSubset::contains(int id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

namespace {

// s_M(x): first woman strictly below M(x) on x's list who is matched and
// prefers x to her partner. Returns -1 when no such woman exists.
int next_woman(const Instance& inst, const Matching& m, int man) {
  int wife = m.wife_of(man);
  if (wife < 0) return -1;
  const auto& list = inst.men_prefs()[man];
  for (std::size_t r = inst.man_rank(man, wife) + 1; r < list.size(); ++r) {
    int w = list[r];
    int h = m.husband_of(w);
    if (h >= 0 && inst.woman_prefers(w, man, h)) return w;
  }
  return -1;
}

std::optional<Rotation> find_exposed_rotation(const Instance& inst,
                                              const Matching& m) {
  int n = inst.size();
  std::vector<int> next_man(n, -1);
  for (int x = 0; x < n; ++x) {
    int w = next_woman(inst, m, x);
    if (w >= 0) next_man[x] = m.husband_of(w);
  }
  // Functional-graph cycle search, men in ascending order so that rotation
  // ids reproduce the usual numbering.
  std::vector<char> color(n, 0);  // 0 new, 1 on path, 2 dead
  for (int start = 0; start < n; ++start) {
    if (color[start]) continue;
    std::vector<int> path;
    int x = start;
    while (x >= 0 && color[x] == 0) {
      color[x] = 1;
      path.push_back(x);
      x = next_man[x];
    }
    if (x >= 0 && color[x] == 1) {
      auto it = std::find(path.begin(), path.end(), x);
      Rotation rho;
      for (; it != path.end(); ++it) rho.cycle.emplace_back(*it, m.wife_of(*it));
      rho.normalize();
      return rho;
    }
    for (int y : path) color[y] = 2;
  }
  return std::nullopt;
}

Matching eliminate_unchecked(const Matching& m, const Rotation& rho) {
  Matching out = m;
  for (std::size_t i = 0; i < rho.cycle.size(); ++i) out.unlink_man(rho.cycle[i].first);
  for (std::size_t i = 0; i < rho.cycle.size(); ++i) {
    out.link(rho.cycle[i].first, rho.produced_woman(i));
  }
  return out;
}

}  // namespace

RotationPoset find_rotations(const Instance& inst) {
  Matching m = deferred_acceptance(inst, ProposingSide::kMen);
  std::vector<Rotation> rotations;
  std::vector<PosetEdge> rule_edges;
  std::map<Pair, int> producer;  // pair -> rotation that produced it
  // Per woman: (rotation, old husband, new husband), in elimination order.
  std::map<int, std::vector<std::array<int, 3>>> movers;

  while (auto rho = find_exposed_rotation(inst, m)) {
    int id = static_cast<int>(rotations.size());
    rho->id = id;
    const auto& cyc = rho->cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      // Type 1: the rotation that moved this man to this woman precedes.
      auto it = producer.find(cyc[i]);
      if (it != producer.end()) rule_edges.push_back({it->second, id, 1});
      producer[{cyc[i].first, rho->produced_woman(i)}] = id;
      // Woman of the next cycle slot switches from her old man to this one.
      std::size_t j = (i + 1) % cyc.size();
      movers[cyc[j].second].push_back({id, cyc[j].first, cyc[i].first});
    }
    rotations.push_back(*rho);
    m = eliminate_unchecked(m, *rho);
  }

  // Type 2: if rho moves man x below woman w, the unique rotation moving w
  // above x precedes rho.
  for (const auto& rho : rotations) {
    for (std::size_t i = 0; i < rho.cycle.size(); ++i) {
      int x = rho.cycle[i].first;
      int old_rank = inst.man_rank(x, rho.cycle[i].second);
      int new_rank = inst.man_rank(x, rho.produced_woman(i));
      const auto& list = inst.men_prefs()[x];
      for (int r = old_rank; r < new_rank; ++r) {
        int w = list[r];
        auto it = movers.find(w);
        if (it == movers.end()) continue;
        int x_rank = inst.woman_rank(w, x);
        if (x_rank < 0) continue;
        for (const auto& mv : it->second) {
          int old_r = inst.woman_rank(w, mv[1]);
          int new_r = inst.woman_rank(w, mv[2]);
          if (old_r >= x_rank && new_r < x_rank && mv[0] != rho.id) {
            rule_edges.push_back({mv[0], rho.id, 2});
          }
        }
      }
    }
  }

  return RotationPoset::from_rule_edges(std::move(rotations), rule_edges);
}

Matching eliminate(const Instance& inst, const Matching& m, const Rotation& rho) {
  if (rho.cycle.size() < 2) {
    throw ExposureError("rotation cycle must have at least 2 pairs");
  }
  for (const auto& p : rho.cycle) {
    if (!m.contains(p.first, p.second)) {
      throw ExposureError("rotation not exposed: pair (" +
                          std::to_string(p.first) + ", " +
                          std::to_string(p.second) + ") not in matching");
    }
  }
  Matching out = eliminate_unchecked(m, rho);
  if (!is_stable(inst, out)) {
    throw ExposureError("rotation not exposed: elimination is unstable");
  }
  return out;
}

ClosedSubset closed_subset_of(const Instance& inst, const RotationPoset& poset,
                              const Matching& m) {
  if (!is_stable(inst, m)) {
    throw ContractError("closed_subset_of requires a stable matching");
  }
  // A rotation has been eliminated on the way to m iff its men sit strictly
  // below the rotation's eliminated partners.
  ClosedSubset s;
  for (const auto& rho : poset.rotations()) {
    int x = rho.cycle.front().first;
    int w = rho.cycle.front().second;
    int wife = m.wife_of(x);
    if (wife < 0) continue;
    if (inst.man_rank(x, wife) > inst.man_rank(x, w)) s.members.push_back(rho.id);
  }
  Matching m0 = deferred_acceptance(inst, ProposingSide::kMen);
  if (matching_of(inst, poset, s, m0) != m) {
    throw ContractError("matching does not correspond to a closed subset");
  }
  return s;
}

Matching matching_of(const Instance& inst, const RotationPoset& poset,
                     const ClosedSubset& s, const Matching& m0) {
  for (std::size_t i = 0; i + 1 < s.members.size(); ++i) {
    if (s.members[i] >= s.members[i + 1]) {
      throw ContractError("closed subset members must be sorted and unique");
    }
  }
  if (!poset.is_closed(s.members)) {
    throw ContractError("subset is not predecessor-closed");
  }
  Matching m = m0;
  std::vector<int> remaining = s.members;
  std::vector<char> done(poset.size(), 0);
  while (!remaining.empty()) {
    bool progressed = false;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      bool ready = true;
      for (int p : poset.predecessors(*it)) {
        if (s.contains(p) && !done[p]) {
          ready = false;
          break;
        }
      }
      if (ready) {
        m = eliminate(inst, m, poset.rotation(*it));
        done[*it] = 1;
        remaining.erase(it);
        progressed = true;
        break;
      }
    }
    if (!progressed) {
      throw ContractError("internal: no exposed rotation in closed subset");
    }
  }
  return m;
}

std::pair<std::vector<int>, std::vector<int>> leaf_and_neighbor(
    const RotationPoset& poset, const ClosedSubset& s) {
  std::vector<int> leaves, neighbors;
  for (int id : s.members) {
    bool has_succ_inside = false;
    for (int succ : poset.successors(id)) {
      if (s.contains(succ)) {
        has_succ_inside = true;
        break;
      }
    }
    if (!has_succ_inside) leaves.push_back(id);
  }
  for (int id = 0; id < poset.size(); ++id) {
    if (s.contains(id)) continue;
    bool all_preds_inside = true;
    for (int p : poset.predecessors(id)) {
      if (!s.contains(p)) {
        all_preds_inside = false;
        break;
      }
    }
    if (all_preds_inside) neighbors.push_back(id);
  }
  return {std::move(leaves), std::move(neighbors)};
}

namespace {

void enumerate_downsets(const RotationPoset& poset,
                        const std::vector<int>& topo, std::size_t pos,
                        std::vector<char>& in, std::vector<ClosedSubset>& out,
                        std::size_t cap) {
  if (pos == topo.size()) {
    ClosedSubset s;
    for (int id = 0; id < poset.size(); ++id) {
      if (in[id]) s.members.push_back(id);
    }
    if (out.size() >= cap) {
      throw LimitError("closed subset enumeration exceeded cap of " +
                       std::to_string(cap));
    }
    out.push_back(std::move(s));
    return;
  }
  int id = topo[pos];
  bool can_include = true;
  for (int p : poset.immediate_predecessors(id)) {
    if (!in[p]) {
      can_include = false;
      break;
    }
  }
  if (can_include) {
    in[id] = 1;
    enumerate_downsets(poset, topo, pos + 1, in, out, cap);
    in[id] = 0;
  }
  enumerate_downsets(poset, topo, pos + 1, in, out, cap);
}

std::vector<int> topological_order(const RotationPoset& poset) {
  int n = poset.size();
  std::vector<int> indeg(n, 0), order;
  for (int id = 0; id < n; ++id) {
    indeg[id] = static_cast<int>(poset.immediate_predecessors(id).size());
  }
  std::set<int> ready;
  for (int id = 0; id < n; ++id) {
    if (indeg[id] == 0) ready.insert(id);
  }
  while (!ready.empty()) {
    int id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (int s : poset.immediate_successors(id)) {
      if (--indeg[s] == 0) ready.insert(s);
    }
  }
  return order;
}

}  // namespace

std::vector<ClosedSubset> enumerate_closed_subsets(const RotationPoset& poset,
                                                   std::size_t cap) {
  std::vector<ClosedSubset> out;
  std::vector<char> in(poset.size(), 0);
  enumerate_downsets(poset, topological_order(poset), 0, in, out, cap);
  std::sort(out.begin(), out.end(),
            [](const ClosedSubset& a, const ClosedSubset& b) {
              return std::lexicographical_compare(
                  a.members.begin(), a.members.end(), b.members.begin(),
                  b.members.end());
            });
  return out;
}

std::vector<std::pair<ClosedSubset, Matching>> enumerate_stable_matchings(
    const Instance& inst, std::size_t cap) {
  RotationPoset poset = find_rotations(inst);
  Matching m0 = deferred_acceptance(inst, ProposingSide::kMen);
  std::vector<std::pair<ClosedSubset, Matching>> out;
  for (auto& s : enumerate_closed_subsets(poset, cap)) {
    Matching m = matching_of(inst, poset, s, m0);
    out.emplace_back(std::move(s), std::move(m));
  }
  return out;
}

std::vector<int> men_of(const RotationPoset& poset,
                        const std::vector<int>& rotation_ids) {
  std::set<int> men;
  for (int id : rotation_ids) {
    for (const auto& p : poset.rotation(id).cycle) men.insert(p.first);
  }
  return {men.begin(), men.end()};
}

bool posets_isomorphic(const RotationPoset& a, const RotationPoset& b) {
  if (a.size() != b.size()) return false;
  // Canonical key: the cycle rotated to start at its smallest man. Cycles
  // are unique per instance, so the key determines the relabeling.
  auto key = [](const Rotation& r) {
    Rotation c = r;
    c.normalize();
    return c.cycle;
  };
  std::map<std::vector<Pair>, int> b_ids;
  for (const auto& r : b.rotations()) {
    if (!b_ids.emplace(key(r), r.id).second) return false;
  }
  std::vector<int> map_ab(a.size(), -1);
  for (const auto& r : a.rotations()) {
    auto it = b_ids.find(key(r));
    if (it == b_ids.end()) return false;
    map_ab[r.id] = it->second;
  }
  auto edge_set = [](const RotationPoset& p, const std::vector<int>* relabel) {
    std::set<std::tuple<int, int, int>> out;
    for (const auto& e : p.edges()) {
      int f = relabel ? (*relabel)[e.from] : e.from;
      int t = relabel ? (*relabel)[e.to] : e.to;
      out.emplace(f, t, e.type);
    }
    return out;
  };
  return edge_set(a, &map_ab) == edge_set(b, nullptr);
}

}  // namespace matchkit
