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

#include <algorithm>

#include "doctest.h"
#include "matchkit/reduction.hpp"
#include "matchkit/robustness.hpp"
#include "test_util.hpp"

using namespace matchkit;
using testutil::to_matching;
using testutil::to_wives;

namespace {

std::vector<Matching> table1_matchings() {
  std::vector<Matching> out;
  for (const auto& w : testutil::table1_lattice()) out.push_back(to_matching(w));
  return out;
}

}  // namespace

TEST_CASE("is_ab_supermatch: oracle-recomputed golden answers") {
  Instance inst = testutil::load_instance("table1.sm");
  auto lattice = table1_matchings();

  // Independent oracle first: scan all 11 matchings and all singleton breaks.
  auto stable = testutil::oracle_all_stable_complete(inst);
  REQUIRE(stable.size() == 11);
  CHECK(!testutil::oracle_is_ab_supermatch(stable, to_wives(lattice[2]), 1, 1));
  CHECK(testutil::oracle_is_ab_supermatch(stable, to_wives(lattice[6]), 1, 1));

  // Breaking (3,3) from M2 cannot be repaired: the nearest avoiding stable
  // matching sits at distance 4. Oracle scan over the 11 rows.
  {
    int best = -1;
    for (const auto& s : stable) {
      if (s[3] == 3) continue;
      int d = testutil::oracle_distance(s, to_wives(lattice[2]));
      if (best < 0 || d < best) best = d;
    }
    CHECK(best == 4);
  }

  auto failing = is_ab_supermatch(inst, lattice, lattice[2], {1, 1});
  CHECK(!failing.holds);
  CHECK(!failing.vacuous);
  REQUIRE(failing.witness.has_value());
  // The scan stops at the first irreparable break in pair order: (1,5),
  // whose nearest avoider is M1 at distance 3.
  CHECK(failing.witness->broken == std::vector<Pair>{{1, 5}});
  REQUIRE(failing.witness->repair.has_value());
  CHECK(to_wives(*failing.witness->repair) == testutil::table1_lattice()[1]);
  CHECK(failing.witness->cost == 2);
  CHECK(failing.witness->self_consistent(lattice[2], 1));
  CHECK(failing.witness->to_json() ==
        "{\"broken\":[[1,5]],\"repair\":[[0,2],[1,4],[2,6],[3,3],[4,1],[5,0],"
        "[6,5]],\"cost\":2,\"vacuous\":false}");

  CHECK(is_ab_supermatch(inst, lattice, lattice[6], {1, 1}).holds);

  // A budget of n covers any repair.
  for (const auto& m : lattice) {
    CHECK(is_ab_supermatch(inst, lattice, m, {1, 7}).holds);
  }
}

TEST_CASE("is_ab_supermatch: vacuous when too few non-fixed pairs") {
  Instance tiny = testutil::load_instance("tiny.sm");
  Matching m(1);
  m.link(0, 0);
  auto check = is_ab_supermatch(tiny, {m}, m, {1, 0});
  CHECK(check.holds);
  CHECK(check.vacuous);
  CHECK(!check.witness.has_value());
}

TEST_CASE("is_ab_supermatch: contract checks") {
  Instance inst = testutil::load_instance("table1.sm");
  auto lattice = table1_matchings();
  CHECK_THROWS_AS(is_ab_supermatch(inst, lattice, lattice[0], {0, 1}),
                  ContractError);
  CHECK_THROWS_AS(is_ab_supermatch(inst, lattice, lattice[0], {1, -1}),
                  ContractError);
  Matching unstable = to_matching({5, 4, 6, 3, 1, 2, 0});
  CHECK_THROWS_AS(is_ab_supermatch(inst, lattice, unstable, {1, 1}),
                  ContractError);
}

TEST_CASE("exists_ab_supermatch: golden searches") {
  Instance inst = testutil::load_instance("table1.sm");
  auto found = exists_ab_supermatch(inst, {1, 1});
  REQUIRE(found.has_value());
  CHECK(to_wives(*found) == testutil::table1_lattice()[6]);

  // Budget 0 cannot repair anything here: no supermatch at all.
  CHECK(!exists_ab_supermatch(inst, {1, 0}).has_value());

  Instance tiny = testutil::load_instance("tiny.sm");
  auto trivially = exists_ab_supermatch(tiny, {1, 0});
  REQUIRE(trivially.has_value());
  CHECK(to_wives(*trivially) == testutil::Wives{0});

  SatSmInstance diamond =
      SatSmInstance::parse(testutil::read_file("diamond.satsm"));
  Instance reduced = synthesize_preferences(reduce_to_poset(diamond));
  auto dm = exists_ab_supermatch(reduced, {1, 1});
  REQUIRE(dm.has_value());
  CHECK(to_wives(*dm) == testutil::Wives{1, 0, 2, 3});
}

TEST_CASE("monotonicity in the repair budget") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Instance inst = testutil::random_complete_instance(5, seed);
    auto enumerated = enumerate_stable_matchings(inst);
    std::vector<Matching> lattice;
    for (const auto& [s, m] : enumerated) lattice.push_back(m);
    for (const auto& m : lattice) {
      bool prev = false;
      for (int b = 0; b <= 5; ++b) {
        bool now = is_ab_supermatch(inst, lattice, m, {1, b}).holds;
        if (prev) CHECK(now);
        prev = now;
      }
    }
  }
}

TEST_CASE("witnesses are always self-consistent") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Instance inst = testutil::random_complete_instance(5, seed);
    auto enumerated = enumerate_stable_matchings(inst);
    std::vector<Matching> lattice;
    for (const auto& [s, m] : enumerated) lattice.push_back(m);
    for (const auto& m : lattice) {
      for (int a = 1; a <= 2; ++a) {
        auto res = is_ab_supermatch(inst, lattice, m, {a, 0});
        if (res.witness) CHECK(res.witness->self_consistent(m, a));
      }
    }
  }
}

TEST_CASE("is_11_supermatch_family_f: diamond poset") {
  SatSmInstance diamond =
      SatSmInstance::parse(testutil::read_file("diamond.satsm"));
  RotationPoset poset = reduce_to_poset(diamond);
  std::vector<int> all_men = {0, 1, 2, 3};

  CHECK(is_11_supermatch_family_f(poset, {{0}}, all_men));
  CHECK(!is_11_supermatch_family_f(poset, {{}}, all_men));
  CHECK(!is_11_supermatch_family_f(poset, {{0, 1, 2, 3}}, all_men));

  // L({}) = {}, N({}) = {0} covers exactly the root's two men.
  CHECK(is_11_supermatch_family_f(poset, {{}}, {0, 1}));

  Instance table1 = testutil::load_instance("table1.sm");
  RotationPoset bad = find_rotations(table1);
  CHECK_THROWS_AS(is_11_supermatch_family_f(bad, {{}}, {0}), ContractError);
}

TEST_CASE("family-F leaf/neighbor test agrees with the brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    SatSmInstance inst = generate_random_satsm({9, 6, 900 + seed, 10000});
    RotationPoset poset = reduce_to_poset(inst);
    FamilyFReport report = validate_family_f(poset);
    REQUIRE(report.pass());
    Instance reduced = synthesize_preferences(poset);
    Matching m0 = deferred_acceptance(reduced, ProposingSide::kMen);
    auto subsets = enumerate_closed_subsets(poset);
    std::vector<Matching> lattice;
    for (const auto& s : subsets) {
      lattice.push_back(matching_of(reduced, poset, s, m0));
    }
    std::vector<int> men(reduced.size());
    for (int i = 0; i < reduced.size(); ++i) men[i] = i;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      bool via_poset = is_11_supermatch_family_f(poset, subsets[i], men, &report);
      bool via_brute = is_ab_supermatch(reduced, lattice, lattice[i], {1, 1}).holds;
      CHECK(via_poset == via_brute);
    }
  }
}
