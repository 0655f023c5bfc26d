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

#include "matchkit/reduction.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"
#include "matchkit/robustness.hpp"

namespace matchkit {

std::string FamilyFReport::summary() const {
  if (failures.empty()) return "all properties hold";
  std::string out;
  for (const auto& f : failures) {
    if (!out.empty()) out += "; ";
    out += f;
  }
  return out;
}

std::string FamilyFReport::to_json() const {
  nlohmann::ordered_json j;
  j["two_pairs_each"] = two_pairs_each;
  j["degree_at_most_two"] = degree_at_most_two;
  j["all_edges_type1"] = all_edges_type1;
  j["men_in_two_rotations"] = men_in_two_rotations;
  j["rematch_checked"] = rematch_checked;
  j["rematch_free"] = rematch_free;
  j["pass"] = pass();
  j["failures"] = failures;
  return j.dump();
}

RotationPoset reduce_to_poset(const SatSmInstance& inst) {
  auto validation = validate_instance(inst);
  if (!validation.ok()) {
    throw ValidationError("invalid SAT-SM instance:\n" + validation.summary());
  }

  int X = inst.universe;
  int n = static_cast<int>(inst.lists.size());
  // Rotation slots: men[r][0..1], women[r][0..1], slot order = fill order.
  std::vector<std::array<int, 2>> men(X, {-1, -1}), women(X, {-1, -1});
  auto man_slot = [&](int r, int man) {
    return men[r][0] == man ? 0 : 1;
  };
  for (int a = 0; a < n; ++a) {
    for (int value : inst.lists[a]) {
      int r = value - 1;
      if (men[r][0] < 0) {
        men[r][0] = a;
      } else {
        men[r][1] = a;
      }
    }
  }

  // Successor of rotation r along man a's list: the rotation of the next
  // value, or -1 at the end of the list.
  std::map<std::pair<int, int>, int> succ_of;  // (rotation, man) -> rotation
  for (int a = 0; a < n; ++a) {
    const auto& l = inst.lists[a];
    for (std::size_t i = 0; i < l.size(); ++i) {
      succ_of[{l[i] - 1, a}] =
          i + 1 < l.size() ? l[i + 1] - 1 : -1;
    }
  }

  auto insert_woman = [&](int r, int man, int woman) {
    int slot = man_slot(r, man);
    if (women[r][slot] >= 0 && women[r][slot] != woman) {
      throw ConstructionError("conflicting woman insertion in rotation " +
                              std::to_string(r));
    }
    women[r][slot] = woman;
  };

  // Step 1: the first rotation of each list gets the pair (m_a, w_a).
  for (int a = 0; a < n; ++a) {
    insert_woman(inst.lists[a][0] - 1, a, a);
  }

  // Step 2: breadth-first completion, smallest rotation id first. A complete
  // rotation ((m_i, w_b), (m_k, w_d)) hands w_d to the successor modifying
  // m_i and w_b to the successor modifying m_k.
  auto complete = [&](int r) { return women[r][0] >= 0 && women[r][1] >= 0; };
  std::set<int> frontier;
  for (int r = 0; r < X; ++r) {
    if (complete(r)) frontier.insert(r);
  }
  std::vector<char> processed(X, 0);
  while (!frontier.empty()) {
    int r = *frontier.begin();
    frontier.erase(frontier.begin());
    if (processed[r]) continue;
    processed[r] = 1;
    for (int slot = 0; slot < 2; ++slot) {
      int man = men[r][slot];
      int other_woman = women[r][1 - slot];
      int next = succ_of[{r, man}];
      if (next < 0) continue;
      insert_woman(next, man, other_woman);
      if (complete(next) && !processed[next]) frontier.insert(next);
    }
  }
  for (int r = 0; r < X; ++r) {
    if (!complete(r)) {
      throw ConstructionError("rotation " + std::to_string(r + 1) +
                              " left without a full woman assignment");
    }
  }

  std::vector<Rotation> rotations(X);
  for (int r = 0; r < X; ++r) {
    rotations[r].id = r;
    rotations[r].cycle = {{men[r][0], women[r][0]}, {men[r][1], women[r][1]}};
    rotations[r].normalize();
  }
  std::vector<PosetEdge> edges;
  for (const auto& l : inst.lists) {
    for (std::size_t i = 0; i + 1 < l.size(); ++i) {
      edges.push_back({l[i] - 1, l[i + 1] - 1, 1});
    }
  }
  return RotationPoset::from_rule_edges(std::move(rotations), edges);
}

Instance synthesize_preferences(const RotationPoset& poset, int men_count) {
  int n = men_count;
  if (n <= 0) {
    n = 0;
    for (const auto& r : poset.rotations()) {
      for (const auto& p : r.cycle) n = std::max({n, p.first + 1, p.second + 1});
    }
  }
  for (const auto& r : poset.rotations()) {
    for (const auto& p : r.cycle) {
      if (p.first < 0 || p.first >= n || p.second < 0 || p.second >= n) {
        throw ContractError("rotation mentions a person outside [0, n)");
      }
    }
  }

  std::vector<std::vector<int>> men_lists(n), women_insertions(n);
  for (int i = 0; i < n; ++i) {
    men_lists[i].push_back(i);        // woman i most preferred
    women_insertions[i].push_back(i); // man i least preferred
  }

  // Topological order, ascending id tie-break.
  std::vector<int> indeg(poset.size(), 0), order;
  for (int r = 0; r < poset.size(); ++r) {
    indeg[r] = static_cast<int>(poset.immediate_predecessors(r).size());
  }
  std::set<int> ready;
  for (int r = 0; r < poset.size(); ++r) {
    if (indeg[r] == 0) ready.insert(r);
  }
  while (!ready.empty()) {
    int r = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(r);
    for (int s : poset.immediate_successors(r)) {
      if (--indeg[s] == 0) ready.insert(s);
    }
  }

  for (int r : order) {
    const auto& rot = poset.rotation(r);
    for (std::size_t i = 0; i < rot.cycle.size(); ++i) {
      int man = rot.cycle[i].first;
      int woman = rot.produced_woman(i);
      if (std::find(men_lists[man].begin(), men_lists[man].end(), woman) !=
          men_lists[man].end()) {
        throw ConstructionError("duplicate insertion: woman " +
                                std::to_string(woman) + " enters man " +
                                std::to_string(man) + "'s list twice");
      }
      men_lists[man].push_back(woman);
      women_insertions[woman].push_back(man);
    }
  }

  std::vector<std::vector<int>> women_lists(n);
  for (int w = 0; w < n; ++w) {
    women_lists[w].assign(women_insertions[w].rbegin(),
                          women_insertions[w].rend());
  }
  return Instance(n, std::move(men_lists), std::move(women_lists));
}

namespace {

// All reduction-edge paths from `from` to `to`, as rotation-id sequences.
void collect_paths(const RotationPoset& poset, int from, int to,
                   std::vector<int>& path, std::vector<std::vector<int>>& out,
                   std::size_t cap) {
  path.push_back(from);
  if (from == to) {
    out.push_back(path);
  } else if (out.size() < cap) {
    for (int next : poset.immediate_successors(from)) {
      if (next == to || poset.precedes(next, to)) {
        collect_paths(poset, next, to, path, out, cap);
      }
    }
  }
  path.pop_back();
}

}  // namespace

FamilyFReport validate_family_f(const RotationPoset& poset) {
  FamilyFReport report;
  for (const auto& r : poset.rotations()) {
    if (r.cycle.size() != 2) {
      report.two_pairs_each = false;
      report.failures.push_back("rotation " + std::to_string(r.id) + " has " +
                                std::to_string(r.cycle.size()) +
                                " pairs (expected 2)");
    }
  }
  for (int r = 0; r < poset.size(); ++r) {
    if (poset.immediate_predecessors(r).size() > 2 ||
        poset.immediate_successors(r).size() > 2) {
      report.degree_at_most_two = false;
      report.failures.push_back(
          "rotation " + std::to_string(r) + " has " +
          std::to_string(poset.immediate_predecessors(r).size()) +
          " predecessors / " +
          std::to_string(poset.immediate_successors(r).size()) + " successors");
    }
  }
  for (const auto& e : poset.edges()) {
    if (e.type != 1) {
      report.all_edges_type1 = false;
      report.failures.push_back("edge " + std::to_string(e.from) + " -> " +
                                std::to_string(e.to) + " has type " +
                                std::to_string(e.type));
    }
  }
  std::map<int, int> rotation_count;
  for (const auto& r : poset.rotations()) {
    for (int man : r.men()) ++rotation_count[man];
  }
  for (const auto& [man, count] : rotation_count) {
    if (count < 2) {
      report.men_in_two_rotations = false;
      report.failures.push_back("man " + std::to_string(man) +
                                " is involved in only " +
                                std::to_string(count) + " rotation(s)");
    }
  }

  if (report.two_pairs_each && report.degree_at_most_two &&
      report.all_edges_type1 && report.men_in_two_rotations) {
    report.rematch_checked = true;
    try {
      synthesize_preferences(poset);
    } catch (const Error& e) {
      report.rematch_free = false;
      report.failures.push_back(std::string("preference synthesis: ") + e.what());
    }
    // Directly on the poset: no (man, woman) pair may ride two distinct
    // paths between the same endpoints.
    for (int from = 0; from < poset.size() && report.rematch_free; ++from) {
      for (int to = 0; to < poset.size() && report.rematch_free; ++to) {
        if (!poset.precedes(from, to)) continue;
        std::vector<std::vector<int>> paths;
        std::vector<int> scratch;
        collect_paths(poset, from, to, scratch, paths, 10000);
        for (const auto& pr : poset.rotation(from).cycle) {
          std::vector<const std::vector<int>*> man_paths, woman_paths;
          for (const auto& path : paths) {
            bool all_man = true, all_woman = true;
            for (int r : path) {
              all_man = all_man && poset.rotation(r).involves_man(pr.first);
              all_woman = all_woman && poset.rotation(r).involves_woman(pr.second);
            }
            if (all_man) man_paths.push_back(&path);
            if (all_woman) woman_paths.push_back(&path);
          }
          for (const auto* mp : man_paths) {
            for (const auto* wp : woman_paths) {
              if (*mp != *wp) {
                report.rematch_free = false;
                report.failures.push_back(
                    "pair (" + std::to_string(pr.first) + ", " +
                    std::to_string(pr.second) + ") carried along two paths " +
                    std::to_string(from) + " -> " + std::to_string(to));
              }
            }
          }
        }
      }
    }
  }
  return report;
}

Matching map_solution_forward(const SatSmInstance& inst, const Assignment& asg,
                              const Instance& reduced) {
  DecodedSets sets = decode(inst, asg);
  ClosedSubset s;
  for (int value : sets.closed) s.members.push_back(value - 1);
  RotationPoset poset = reduce_to_poset(inst);
  if (!poset.is_closed(s.members)) {
    throw ContractError("decoded S is not predecessor-closed");
  }
  Matching m0 = deferred_acceptance(reduced, ProposingSide::kMen);
  return matching_of(reduced, poset, s, m0);
}

Assignment map_solution_backward(const RotationPoset& poset,
                                 const ClosedSubset& s) {
  auto [leaves, neighbors] = leaf_and_neighbor(poset, s);
  std::set<int> S, L, N;
  for (int id : s.members) S.insert(id + 1);
  for (int id : leaves) L.insert(id + 1);
  for (int id : neighbors) N.insert(id + 1);
  return encode_sets(poset.size(), S, L, N);
}

namespace {

// Deterministic cross-platform helpers on top of mt19937_64.
int rand_below(std::mt19937_64& rng, int bound) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

template <typename T>
void shuffle_vec(std::mt19937_64& rng, std::vector<T>& v) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    std::swap(v[i], v[rand_below(rng, i + 1)]);
  }
}

}  // namespace

SatSmInstance generate_random_satsm(const SatSmGenParams& params) {
  int X = params.universe;
  int n = params.lists;
  // Each list needs length >= 2 and each value sits on exactly two lists, so
  // the "list graph" (lists as nodes, values as edges) is simple with min
  // degree 2 and |X| edges. Any triangle of lists admits a monotone
  // traversal for every value labeling and therefore breaks Rule 1, which
  // caps |X| at floor(n^2/4). We sample bipartite layerings, plus a single
  // n-cycle for the |X| = n case (the only shape when n is odd).
  auto infeasible = [&](const std::string& why) {
    throw GenerationError("no valid instance for universe=" +
                              std::to_string(X) + " lists=" +
                              std::to_string(n) + ": " + why,
                          true);
  };
  if (X < 4) infeasible("need at least 4 values");
  if (n < 4) infeasible("need at least 4 lists");
  if (X < n) infeasible("sum of list lengths 2|X| cannot reach 2 per list");
  if (X > n * n / 4) {
    infeasible("more values than a triangle-free list graph admits");
  }

  std::mt19937_64 rng(params.seed);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    if (X == n && (n % 2 == 1 || rand_below(rng, 2) == 0)) {
      // Cycle of all n lists; the labeling must not be cyclically monotone,
      // which the validator decides.
      std::vector<int> order(n), values(X);
      std::iota(order.begin(), order.end(), 0);
      std::iota(values.begin(), values.end(), 1);
      shuffle_vec(rng, order);
      shuffle_vec(rng, values);
      SatSmInstance inst;
      inst.universe = X;
      inst.lists.assign(n, {});
      for (int i = 0; i < n; ++i) {
        inst.lists[order[i]].push_back(values[i]);
        inst.lists[order[(i + 1) % n]].push_back(values[i]);
      }
      for (auto& l : inst.lists) std::sort(l.begin(), l.end());
      if (validate_instance(inst).ok()) return inst;
      continue;
    }
    int left = 2 + rand_below(rng, n - 3);  // [2, n-2]
    int right = n - left;
    if (left * right < X || 2 * std::max(left, right) > X) continue;

    // Degrees: start at 2, spread the remaining 2|X| - 2n stubs respecting
    // the simple-graph bound (degree <= size of the other side).
    std::vector<int> degree(n, 2);
    int spare = 2 * X - 2 * n;
    if (spare < 0) continue;
    bool ok = true;
    for (int i = 0; i < spare; ++i) {
      std::vector<int> room;
      for (int v = 0; v < n; ++v) {
        int limit = v < left ? right : left;
        if (degree[v] < limit) room.push_back(v);
      }
      if (room.empty()) {
        ok = false;
        break;
      }
      ++degree[room[rand_below(rng, static_cast<int>(room.size()))]];
    }
    if (!ok) continue;
    int left_stub_count = 0, right_stub_count = 0;
    for (int v = 0; v < n; ++v) {
      (v < left ? left_stub_count : right_stub_count) += degree[v];
    }
    if (left_stub_count != X || right_stub_count != X) continue;

    // Stub pairing; reject multi-edges.
    std::vector<int> lstubs, rstubs;
    for (int v = 0; v < left; ++v) lstubs.insert(lstubs.end(), degree[v], v);
    for (int v = left; v < n; ++v) rstubs.insert(rstubs.end(), degree[v], v);
    shuffle_vec(rng, rstubs);
    std::set<std::pair<int, int>> edge_set;
    std::vector<std::pair<int, int>> edges;
    ok = true;
    for (int i = 0; i < X; ++i) {
      auto e = std::make_pair(lstubs[i], rstubs[i]);
      if (!edge_set.insert(e).second) {
        ok = false;
        break;
      }
      edges.push_back(e);
    }
    if (!ok) continue;

    // Values 1..X land on edges in random order; lists sort ascending so the
    // induced arcs follow the value order (acyclic by construction).
    std::vector<int> values(X);
    std::iota(values.begin(), values.end(), 1);
    shuffle_vec(rng, values);
    SatSmInstance inst;
    inst.universe = X;
    inst.lists.assign(n, {});
    for (int i = 0; i < X; ++i) {
      inst.lists[edges[i].first].push_back(values[i]);
      inst.lists[edges[i].second].push_back(values[i]);
    }
    for (auto& l : inst.lists) std::sort(l.begin(), l.end());

    if (validate_instance(inst).ok()) return inst;
  }
  throw GenerationError("rejection budget of " +
                            std::to_string(params.max_attempts) +
                            " attempts exhausted for universe=" +
                            std::to_string(X) + " lists=" + std::to_string(n) +
                            "; try different parameters",
                        false);
}

std::vector<SatSmInstance> generate_harness_instances(int count,
                                                      int max_universe,
                                                      int max_lists,
                                                      std::uint64_t seed) {
  if (max_lists < 4 || max_universe < 4) {
    throw GenerationError("harness needs max_universe >= 4 and max_lists >= 4",
                          true);
  }
  std::vector<SatSmInstance> out;
  int span = max_lists - 3;
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    if (k > static_cast<std::uint64_t>(count) * 1000) {
      throw GenerationError("harness sweep failed to collect " +
                                std::to_string(count) + " instances",
                            false);
    }
    int lists = 4 + static_cast<int>(k % span);
    int cap = std::min(max_universe, lists * lists / 4);
    if (cap < lists) continue;
    int universe = lists + static_cast<int>((k / span) % (cap - lists + 1));
    try {
      out.push_back(generate_random_satsm(
          {universe, lists, seed + k, 10000}));
    } catch (const GenerationError&) {
      continue;
    }
  }
  return out;
}

std::string EquivalenceOutcome::to_json() const {
  nlohmann::ordered_json j;
  j["sat"] = sat;
  j["supermatch_exists"] = supermatch_exists;
  j["agree"] = agree;
  j["forward_ok"] = forward_ok;
  j["backward_ok"] = backward_ok;
  j["stable_count"] = stable_count;
  j["supermatch_count"] = supermatch_count;
  j["models_checked"] = models_checked;
  return j.dump();
}

EquivalenceOutcome check_equivalence(const SatSmInstance& inst,
                                     std::size_t cap) {
  EquivalenceOutcome out;
  Cnf cnf = build_cnf(inst);
  audit_schaefer(cnf);
  auto model = solve(cnf);
  out.sat = model.has_value();

  RotationPoset poset = reduce_to_poset(inst);
  Instance reduced = synthesize_preferences(poset);
  // Enumerate over the reduced poset itself so closed subsets share its
  // rotation ids (value - 1), which the solution mappings rely on.
  Matching m0 = deferred_acceptance(reduced, ProposingSide::kMen);
  auto subsets = enumerate_closed_subsets(poset, cap);
  std::vector<Matching> lattice;
  lattice.reserve(subsets.size());
  for (const auto& s : subsets) {
    lattice.push_back(matching_of(reduced, poset, s, m0));
  }
  out.stable_count = static_cast<int>(lattice.size());

  RobustnessQuery q{1, 1};
  std::vector<std::size_t> supermatch_idx;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (is_ab_supermatch(reduced, lattice, lattice[i], q).holds) {
      supermatch_idx.push_back(i);
    }
  }
  out.supermatch_count = static_cast<int>(supermatch_idx.size());
  out.supermatch_exists = !supermatch_idx.empty();
  out.agree = out.sat == out.supermatch_exists;

  // Forward: the solver's model (and, for small universes, every model)
  // must land on an oracle-confirmed supermatch.
  std::vector<Assignment> models;
  if (model) models.push_back(*model);
  if (inst.universe <= 6) {
    models.clear();
    int vars = cnf.var_count;
    for (std::uint64_t bits = 0; bits < (1ull << vars); ++bits) {
      Assignment a(vars);
      for (int v = 1; v <= vars; ++v) a.set(v, (bits >> (v - 1)) & 1);
      if (evaluate(cnf, a)) models.push_back(a);
    }
  }
  out.models_checked = static_cast<int>(models.size());
  for (const auto& asg : models) {
    Matching mapped = map_solution_forward(inst, asg, reduced);
    if (!is_ab_supermatch(reduced, lattice, mapped, q).holds) {
      out.forward_ok = false;
    }
  }

  // Backward: every supermatch's closed subset must satisfy the CNF.
  for (std::size_t i : supermatch_idx) {
    Assignment asg = map_solution_backward(poset, subsets[i]);
    if (!evaluate(cnf, asg)) out.backward_ok = false;
  }
  return out;
}

}  // namespace matchkit
