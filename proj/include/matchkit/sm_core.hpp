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

#ifndef MATCHKIT_SM_CORE_HPP_
#define MATCHKIT_SM_CORE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "matchkit/errors.hpp"

namespace matchkit {

// A (man, woman) pair. Ids are 0-based on both sides.
using Pair = std::pair<int, int>;

// A Stable Marriage instance: n men and n women, each with a strictly
// ordered (possibly incomplete) preference list over the opposite side.
// Acceptability is mutual by construction: woman w appears in man m's list
// iff man m appears in woman w's list. Immutable after construction.
class Instance {
 public:
  Instance(int n, std::vector<std::vector<int>> men_prefs,
           std::vector<std::vector<int>> women_prefs);

  // Parses the text instance format:
  //   line 1: n
  //   lines 2..n+1: man i's list, most preferred first
  //   lines n+2..2n+1: woman j's list likewise
  // Lines starting with '#' and blank lines are ignored.
  static Instance parse(const std::string& text);

  // Canonical serialization: single spaces, one trailing newline per line,
  // no comments. parse(serialize()) == *this.
  std::string serialize() const;

  int size() const { return n_; }
  const std::vector<std::vector<int>>& men_prefs() const { return men_prefs_; }
  const std::vector<std::vector<int>>& women_prefs() const {
    return women_prefs_;
  }

  bool acceptable(int man, int woman) const {
    return man_rank_[man][woman] >= 0;
  }
  // Position of `woman` in `man`'s list; -1 if unacceptable.
  int man_rank(int man, int woman) const { return man_rank_[man][woman]; }
  int woman_rank(int woman, int man) const { return woman_rank_[woman][man]; }

  // True iff `man` strictly prefers w1 to w2. A woman id of -1 stands for
  // "unmatched": any acceptable partner beats it.
  bool man_prefers(int man, int w1, int w2) const;
  bool woman_prefers(int woman, int m1, int m2) const;

  bool operator==(const Instance& other) const {
    return n_ == other.n_ && men_prefs_ == other.men_prefs_ &&
           women_prefs_ == other.women_prefs_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> men_prefs_;
  std::vector<std::vector<int>> women_prefs_;
  std::vector<std::vector<int>> man_rank_;    // [man][woman] -> rank or -1
  std::vector<std::vector<int>> woman_rank_;  // [woman][man] -> rank or -1
};

// An injective partial assignment of men to women. Value type; equality is
// structural.
class Matching {
 public:
  explicit Matching(int n) : wife_(n, -1), husband_(n, -1) {}

  // Throws ContractError if a man or woman appears twice or an id is out of
  // range.
  static Matching from_pairs(int n, const std::vector<Pair>& pairs);

  int size() const { return static_cast<int>(wife_.size()); }
  int wife_of(int man) const { return wife_[man]; }
  int husband_of(int woman) const { return husband_[woman]; }
  bool contains(int man, int woman) const { return wife_[man] == woman; }

  void link(int man, int woman);
  void unlink_man(int man);

  // Pairs sorted by man id.
  std::vector<Pair> pairs() const;
  int pair_count() const;

  bool operator==(const Matching& other) const {
    return wife_ == other.wife_;
  }
  bool operator!=(const Matching& other) const { return !(*this == other); }

 private:
  std::vector<int> wife_;
  std::vector<int> husband_;
};

enum class ProposingSide { kMen, kWomen };

// Deferred acceptance. Men-proposing yields the man-optimal stable matching
// M0; women-proposing yields the woman-optimal one. Persons with exhausted
// lists stay unmatched (incomplete lists).
Matching deferred_acceptance(const Instance& inst, ProposingSide side);

// Every acceptable pair (m, w) not in `m` where both sides strictly prefer
// each other to their current situation (being unmatched loses to any
// acceptable partner). Sorted by (man, woman). Empty iff `m` is stable.
// Throws ContractError if `m` uses a non-acceptable pair.
std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m);

bool is_stable(const Instance& inst, const Matching& m);

// Intersection of all given matchings, as a sorted pair list. The input must
// be the complete set of stable matchings; throws ContractError when empty.
std::vector<Pair> fixed_pairs(const Instance& inst,
                              const std::vector<Matching>& all_matchings);

// Number of men whose partner (including "unmatched") differs.
int distance(const Matching& m1, const Matching& m2);

}  // namespace matchkit

#endif  // MATCHKIT_SM_CORE_HPP_
