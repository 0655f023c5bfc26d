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

#include "doctest.h"
#include "matchkit/sm_core.hpp"
#include "test_util.hpp"

using namespace matchkit;
using testutil::to_matching;
using testutil::to_wives;

TEST_CASE("parse: table1 fixture") {
  Instance inst = testutil::load_instance("table1.sm");
  CHECK(inst.size() == 7);
  CHECK(inst.men_prefs()[0] == std::vector<int>{0, 6, 5, 2, 4, 1, 3});
  CHECK(inst.women_prefs()[6] == std::vector<int>{4, 6, 2, 1, 3, 0, 5});
}

TEST_CASE("parse: smallest instance") {
  Instance inst = Instance::parse("1\n0\n0");
  CHECK(inst.size() == 1);
  CHECK(inst.acceptable(0, 0));
}

TEST_CASE("parse: error cases name line and reason") {
  CHECK_THROWS_AS(Instance::parse(""), ParseError);
  CHECK_THROWS_AS(Instance::parse("x\n"), ParseError);
  CHECK_THROWS_AS(Instance::parse("1 2\n0\n0\n"), ParseError);
  // id out of range
  CHECK_THROWS_AS(Instance::parse("1\n1\n0\n"), ParseError);
  // duplicate within a list
  CHECK_THROWS_AS(Instance::parse("2\n0 0\n1\n0\n1\n"), ParseError);
  // wrong number of lines
  CHECK_THROWS_AS(Instance::parse("2\n0\n1\n0\n"), ParseError);
  // w1 lists m0 but m0 omits w1
  std::string nonmutual = "2\n0\n1\n0 1\n1\n";
  CHECK_THROWS_WITH_AS(Instance::parse(nonmutual),
                       doctest::Contains("non-mutual"), ParseError);
}

TEST_CASE("parse/serialize round-trip is identity") {
  for (const char* name : {"table1.sm", "tiny.sm"}) {
    Instance inst = testutil::load_instance(name);
    Instance again = Instance::parse(inst.serialize());
    CHECK(again == inst);
    CHECK(again.serialize() == inst.serialize());
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = testutil::random_incomplete_instance(5, seed);
    CHECK(Instance::parse(inst.serialize()) == inst);
  }
}

TEST_CASE("deferred acceptance: golden matchings") {
  Instance inst = testutil::load_instance("table1.sm");
  auto lattice = testutil::table1_lattice();
  CHECK(to_wives(deferred_acceptance(inst, ProposingSide::kMen)) ==
        lattice.front());
  CHECK(to_wives(deferred_acceptance(inst, ProposingSide::kWomen)) ==
        lattice.back());

  Instance tiny = testutil::load_instance("tiny.sm");
  CHECK(to_wives(deferred_acceptance(tiny, ProposingSide::kMen)) ==
        testutil::Wives{0});
  CHECK(to_wives(deferred_acceptance(tiny, ProposingSide::kWomen)) ==
        testutil::Wives{0});
}

TEST_CASE("deferred acceptance: output is stable, optimal for proposers") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Instance inst = (seed % 2) ? testutil::random_complete_instance(5, seed)
                               : testutil::random_incomplete_instance(5, seed);
    Matching m0 = deferred_acceptance(inst, ProposingSide::kMen);
    Matching mz = deferred_acceptance(inst, ProposingSide::kWomen);
    CHECK(testutil::oracle_stable(inst, to_wives(m0)));
    CHECK(testutil::oracle_stable(inst, to_wives(mz)));
    // Every man weakly prefers his M0 partner across all stable matchings,
    // dually for women in mz.
    for (const auto& s : testutil::oracle_all_stable(inst)) {
      for (int man = 0; man < inst.size(); ++man) {
        if (s[man] == m0.wife_of(man)) continue;
        CHECK(inst.man_prefers(man, m0.wife_of(man), s[man]));
      }
      for (int w = 0; w < inst.size(); ++w) {
        int h = mz.husband_of(w);
        int sh = -1;
        for (int man = 0; man < inst.size(); ++man) {
          if (s[man] == w) sh = man;
        }
        if (sh == h) continue;
        CHECK(inst.woman_prefers(w, h, sh));
      }
    }
  }
}

TEST_CASE("blocking_pairs: golden cases") {
  Instance inst = testutil::load_instance("table1.sm");
  auto lattice = testutil::table1_lattice();
  CHECK(blocking_pairs(inst, to_matching(lattice[2])).empty());

  // Not one of the 11 stable matchings, so it must have a blocking pair.
  Matching bad = to_matching({5, 4, 6, 3, 1, 2, 0});
  auto blocks = blocking_pairs(inst, bad);
  CHECK(!blocks.empty());
  for (auto [m, w] : blocks) {
    CHECK(inst.man_prefers(m, w, bad.wife_of(m)));
    CHECK(inst.woman_prefers(w, m, bad.husband_of(w)));
  }

  Instance tiny = testutil::load_instance("tiny.sm");
  CHECK(blocking_pairs(tiny, Matching(1)) == std::vector<Pair>{{0, 0}});
}

TEST_CASE("blocking_pairs: non-acceptable pair is a contract error") {
  Instance inst = Instance::parse("2\n0\n1\n0\n1\n");
  Matching crossed(2);
  crossed.link(0, 1);
  crossed.link(1, 0);
  CHECK_THROWS_AS(blocking_pairs(inst, crossed), ContractError);
}

TEST_CASE("blocking_pairs agrees with the definition scan") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = testutil::random_incomplete_instance(4, seed);
    // All injective matchings over acceptable pairs.
    std::vector<testutil::Wives> all;
    testutil::Wives wives(4, -1);
    std::vector<char> taken(4, 0);
    auto rec = [&](auto&& self, int man) -> void {
      if (man == 4) {
        all.push_back(wives);
        return;
      }
      self(self, man + 1);
      for (int w : inst.men_prefs()[man]) {
        if (taken[w]) continue;
        taken[w] = 1;
        wives[man] = w;
        self(self, man + 1);
        wives[man] = -1;
        taken[w] = 0;
      }
    };
    rec(rec, 0);
    for (const auto& m : all) {
      CHECK(blocking_pairs(inst, to_matching(m)).empty() ==
            testutil::oracle_stable(inst, m));
    }
  }
}

TEST_CASE("fixed_pairs") {
  Instance inst = testutil::load_instance("table1.sm");
  std::vector<Matching> lattice;
  for (const auto& w : testutil::table1_lattice()) lattice.push_back(to_matching(w));
  CHECK(fixed_pairs(inst, lattice).empty());

  CHECK(fixed_pairs(inst, {lattice[3]}) == lattice[3].pairs());

  Instance tiny = testutil::load_instance("tiny.sm");
  Matching m(1);
  m.link(0, 0);
  CHECK(fixed_pairs(tiny, {m}) == std::vector<Pair>{{0, 0}});

  CHECK_THROWS_AS(fixed_pairs(inst, {}), ContractError);
}

TEST_CASE("distance: golden values and metric laws") {
  auto lattice = testutil::table1_lattice();
  CHECK(distance(to_matching(lattice[0]), to_matching(lattice[1])) == 2);
  CHECK(distance(to_matching(lattice[2]), to_matching(lattice[2])) == 0);
  CHECK(distance(to_matching(lattice[2]), to_matching(lattice[4])) == 4);

  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      int dij = distance(to_matching(lattice[i]), to_matching(lattice[j]));
      CHECK(dij == distance(to_matching(lattice[j]), to_matching(lattice[i])));
      CHECK((dij == 0) == (i == j));
      for (std::size_t k = 0; k < lattice.size(); ++k) {
        CHECK(dij <= distance(to_matching(lattice[i]), to_matching(lattice[k])) +
                         distance(to_matching(lattice[k]), to_matching(lattice[j])));
      }
    }
  }
}
