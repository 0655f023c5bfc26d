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

#include "matchkit/sm_core.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace matchkit {
namespace {

std::vector<std::vector<int>> build_ranks(int n,
                                          const std::vector<std::vector<int>>& prefs) {
  std::vector<std::vector<int>> ranks(n, std::vector<int>(n, -1));
  for (int p = 0; p < n; ++p) {
    for (int r = 0; r < static_cast<int>(prefs[p].size()); ++r) {
      ranks[p][prefs[p][r]] = r;
    }
  }
  return ranks;
}

void check_lists(int n, const std::vector<std::vector<int>>& prefs,
                 const char* side) {
  if (static_cast<int>(prefs.size()) != n) {
    throw ContractError(std::string("expected ") + std::to_string(n) + " " +
                        side + " preference lists, got " +
                        std::to_string(prefs.size()));
  }
  for (int p = 0; p < n; ++p) {
    std::vector<char> seen(n, 0);
    for (int id : prefs[p]) {
      if (id < 0 || id >= n) {
        throw ContractError(std::string(side) + " " + std::to_string(p) +
                            ": id " + std::to_string(id) + " out of range");
      }
      if (seen[id]) {
        throw ContractError(std::string(side) + " " + std::to_string(p) +
                            ": duplicate entry " + std::to_string(id));
      }
      seen[id] = 1;
    }
  }
}

}  // namespace

Instance::Instance(int n, std::vector<std::vector<int>> men_prefs,
                   std::vector<std::vector<int>> women_prefs)
    : n_(n), men_prefs_(std::move(men_prefs)),
      women_prefs_(std::move(women_prefs)) {
  if (n_ < 0) throw ContractError("negative instance size");
  check_lists(n_, men_prefs_, "man");
  check_lists(n_, women_prefs_, "woman");
  man_rank_ = build_ranks(n_, men_prefs_);
  woman_rank_ = build_ranks(n_, women_prefs_);
  for (int m = 0; m < n_; ++m) {
    for (int w : men_prefs_[m]) {
      if (woman_rank_[w][m] < 0) {
        throw ContractError("non-mutual acceptability: man " +
                            std::to_string(m) + " lists woman " +
                            std::to_string(w) + " but not vice versa");
      }
    }
  }
  for (int w = 0; w < n_; ++w) {
    for (int m : women_prefs_[w]) {
      if (man_rank_[m][w] < 0) {
        throw ContractError("non-mutual acceptability: woman " +
                            std::to_string(w) + " lists man " +
                            std::to_string(m) + " but not vice versa");
      }
    }
  }
}

Instance Instance::parse(const std::string& text) {
  std::vector<std::pair<int, std::string>> rows;  // (line number, content)
  {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      rows.emplace_back(lineno, line);
    }
  }
  if (rows.empty()) throw ParseError("line 1: missing instance size");

  auto parse_ints = [](const std::pair<int, std::string>& row) {
    std::istringstream in(row.second);
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(row.first) +
                         ": expected integer, got '" + tok + "'");
      }
    }
    return out;
  };

  std::vector<int> header = parse_ints(rows[0]);
  if (header.size() != 1 || header[0] < 0) {
    throw ParseError("line " + std::to_string(rows[0].first) +
                     ": malformed header, expected a single nonnegative n");
  }
  int n = header[0];
  if (static_cast<int>(rows.size()) != 1 + 2 * n) {
    throw ParseError("expected " + std::to_string(2 * n) +
                     " preference lines after the header, got " +
                     std::to_string(rows.size() - 1));
  }

  auto read_side = [&](int offset, const char* side) {
    std::vector<std::vector<int>> prefs(n);
    for (int p = 0; p < n; ++p) {
      const auto& row = rows[offset + p];
      prefs[p] = parse_ints(row);
      std::vector<char> seen(n, 0);
      for (int id : prefs[p]) {
        if (id < 0 || id >= n) {
          throw ParseError("line " + std::to_string(row.first) + ": " + side +
                           " " + std::to_string(p) + " lists id " +
                           std::to_string(id) + " out of range [0, " +
                           std::to_string(n) + ")");
        }
        if (seen[id]) {
          throw ParseError("line " + std::to_string(row.first) + ": " + side +
                           " " + std::to_string(p) + " lists " +
                           std::to_string(id) + " twice");
        }
        seen[id] = 1;
      }
    }
    return prefs;
  };

  auto men = read_side(1, "man");
  auto women = read_side(1 + n, "woman");
  try {
    return Instance(n, std::move(men), std::move(women));
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
}

std::string Instance::serialize() const {
  std::ostringstream out;
  out << n_ << "\n";
  auto emit = [&](const std::vector<std::vector<int>>& prefs) {
    for (const auto& list : prefs) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out << ' ';
        out << list[i];
      }
      out << "\n";
    }
  };
  emit(men_prefs_);
  emit(women_prefs_);
  return out.str();
}

bool Instance::man_prefers(int man, int w1, int w2) const {
  if (w1 < 0) return false;
  int r1 = man_rank_[man][w1];
  if (r1 < 0) return false;
  if (w2 < 0) return true;
  int r2 = man_rank_[man][w2];
  return r2 < 0 ? true : r1 < r2;
}

bool Instance::woman_prefers(int woman, int m1, int m2) const {
  if (m1 < 0) return false;
  int r1 = woman_rank_[woman][m1];
  if (r1 < 0) return false;
  if (m2 < 0) return true;
  int r2 = woman_rank_[woman][m2];
  return r2 < 0 ? true : r1 < r2;
}

Matching Matching::from_pairs(int n, const std::vector<Pair>& pairs) {
  Matching m(n);
  for (const auto& [man, woman] : pairs) {
    if (man < 0 || man >= n || woman < 0 || woman >= n) {
      throw ContractError("pair (" + std::to_string(man) + ", " +
                          std::to_string(woman) + ") out of range");
    }
    if (m.wife_[man] >= 0 || m.husband_[woman] >= 0) {
      throw ContractError("person appears twice in matching near pair (" +
                          std::to_string(man) + ", " + std::to_string(woman) +
                          ")");
    }
    m.link(man, woman);
  }
  return m;
}

void Matching::link(int man, int woman) {
  wife_[man] = woman;
  husband_[woman] = man;
}

void Matching::unlink_man(int man) {
  int w = wife_[man];
  if (w >= 0) husband_[w] = -1;
  wife_[man] = -1;
}

std::vector<Pair> Matching::pairs() const {
  std::vector<Pair> out;
  for (int m = 0; m < size(); ++m) {
    if (wife_[m] >= 0) out.emplace_back(m, wife_[m]);
  }
  return out;
}

int Matching::pair_count() const {
  int c = 0;
  for (int w : wife_) c += (w >= 0);
  return c;
}

Matching deferred_acceptance(const Instance& inst, ProposingSide side) {
  int n = inst.size();
  const bool men = side == ProposingSide::kMen;
  const auto& prop_prefs = men ? inst.men_prefs() : inst.women_prefs();

  // held[r] = proposer currently held by receiver r, next[p] = position of
  // p's next proposal.
  std::vector<int> held(n, -1), next(n, 0);
  std::vector<int> free;
  for (int p = n - 1; p >= 0; --p) free.push_back(p);

  auto receiver_prefers = [&](int r, int p1, int p2) {
    return men ? inst.woman_prefers(r, p1, p2) : inst.man_prefers(r, p1, p2);
  };

  while (!free.empty()) {
    int p = free.back();
    free.pop_back();
    while (next[p] < static_cast<int>(prop_prefs[p].size())) {
      int r = prop_prefs[p][next[p]++];
      if (held[r] < 0) {
        held[r] = p;
        break;
      }
      if (receiver_prefers(r, p, held[r])) {
        free.push_back(held[r]);
        held[r] = p;
        break;
      }
    }
  }

  Matching result(n);
  for (int r = 0; r < n; ++r) {
    if (held[r] >= 0) {
      if (men) {
        result.link(held[r], r);
      } else {
        result.link(r, held[r]);
      }
    }
  }
  return result;
}

std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m) {
  int n = inst.size();
  if (m.size() != n) throw ContractError("matching size differs from instance");
  for (int man = 0; man < n; ++man) {
    int w = m.wife_of(man);
    if (w >= 0 && !inst.acceptable(man, w)) {
      throw ContractError("matching contains non-acceptable pair (" +
                          std::to_string(man) + ", " + std::to_string(w) + ")");
    }
  }
  std::vector<Pair> out;
  for (int man = 0; man < n; ++man) {
    for (int woman : inst.men_prefs()[man]) {
      if (m.contains(man, woman)) break;  // everything below is worse for man
      if (inst.woman_prefers(woman, man, m.husband_of(woman))) {
        out.emplace_back(man, woman);
      }
    }
  }
  return out;
}

bool is_stable(const Instance& inst, const Matching& m) {
  return blocking_pairs(inst, m).empty();
}

std::vector<Pair> fixed_pairs(const Instance& inst,
                              const std::vector<Matching>& all_matchings) {
  if (all_matchings.empty()) {
    throw ContractError("fixed_pairs needs at least one matching");
  }
  std::vector<Pair> out;
  for (int man = 0; man < inst.size(); ++man) {
    int w = all_matchings.front().wife_of(man);
    if (w < 0) continue;
    bool everywhere = true;
    for (const auto& m : all_matchings) {
      if (m.wife_of(man) != w) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) out.emplace_back(man, w);
  }
  return out;
}

int distance(const Matching& m1, const Matching& m2) {
  if (m1.size() != m2.size()) {
    throw ContractError("distance between matchings of different instances");
  }
  int d = 0;
  for (int man = 0; man < m1.size(); ++man) {
    d += (m1.wife_of(man) != m2.wife_of(man));
  }
  return d;
}

}  // namespace matchkit
