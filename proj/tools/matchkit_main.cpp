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

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "matchkit/reduction.hpp"
#include "matchkit/robustness.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace matchkit;

namespace {

// Exit codes: 0 success, 1 well-formed "no" (UNSAT / no supermatch /
// disagreement), 2 usage or input errors, 3 resource limits.
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kLimit = 3;

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

json pairs_json(const std::vector<Pair>& pairs) {
  json arr = json::array();
  for (const auto& [m, w] : pairs) arr.push_back({m, w});
  return arr;
}

std::string pairs_human(const std::vector<Pair>& pairs) {
  std::string out;
  for (const auto& [m, w] : pairs) {
    out += "(" + std::to_string(m) + "," + std::to_string(w) + ")";
  }
  return out;
}

// Matching file: "man woman" pairs, whitespace separated; '#' comments.
Matching parse_matching_file(const std::string& path, int n) {
  std::istringstream in(read_file_or_throw(path));
  std::vector<Pair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int m, w;
    while (ls >> m >> w) pairs.emplace_back(m, w);
  }
  try {
    return Matching::from_pairs(n, pairs);
  } catch (const ContractError& e) {
    throw ParseError(std::string("matching file: ") + e.what());
  }
}

int cmd_parse(const std::string& file, bool as_json) {
  Instance inst = Instance::parse(read_file_or_throw(file));
  if (as_json) {
    json j;
    j["n"] = inst.size();
    j["men"] = inst.men_prefs();
    j["women"] = inst.women_prefs();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << inst.serialize();
  }
  return kOk;
}

int cmd_solve(const std::string& file, const std::string& side, bool as_json) {
  Instance inst = Instance::parse(read_file_or_throw(file));
  ProposingSide ps =
      side == "women" ? ProposingSide::kWomen : ProposingSide::kMen;
  Matching m = deferred_acceptance(inst, ps);
  if (as_json) {
    json j;
    j["side"] = side;
    j["matching"] = pairs_json(m.pairs());
    std::cout << j.dump() << "\n";
  } else {
    std::cout << pairs_human(m.pairs()) << "\n";
  }
  return kOk;
}

int cmd_enumerate(const std::string& file, std::size_t cap, bool as_json) {
  Instance inst = Instance::parse(read_file_or_throw(file));
  auto enumerated = enumerate_stable_matchings(inst, cap);
  if (as_json) {
    json j;
    j["count"] = enumerated.size();
    j["matchings"] = json::array();
    for (const auto& [s, m] : enumerated) {
      json item;
      item["subset"] = s.members;
      item["pairs"] = pairs_json(m.pairs());
      j["matchings"].push_back(std::move(item));
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << enumerated.size() << " stable matchings\n";
    for (std::size_t i = 0; i < enumerated.size(); ++i) {
      std::cout << "M" << i << " S={";
      const auto& members = enumerated[i].first.members;
      for (std::size_t k = 0; k < members.size(); ++k) {
        std::cout << (k ? "," : "") << members[k];
      }
      std::cout << "} " << pairs_human(enumerated[i].second.pairs()) << "\n";
    }
  }
  return kOk;
}

int cmd_poset(const std::string& file, bool dot, bool as_json) {
  Instance inst = Instance::parse(read_file_or_throw(file));
  RotationPoset poset = find_rotations(inst);
  if (dot) {
    std::cout << poset.to_dot();
  } else if (as_json) {
    std::cout << poset.to_json() << "\n";
  } else {
    std::cout << poset.size() << " rotations\n";
    for (const auto& r : poset.rotations()) {
      std::cout << "r" << r.id << ": " << pairs_human(r.cycle) << "\n";
    }
    for (const auto& e : poset.edges()) {
      std::cout << "r" << e.from << " -> r" << e.to << " (type " << e.type
                << ")\n";
    }
  }
  return kOk;
}

int cmd_check_supermatch(const std::string& file, int a, int b,
                         const std::string& matching_file, std::size_t cap,
                         bool as_json) {
  Instance inst = Instance::parse(read_file_or_throw(file));
  RobustnessQuery q{a, b};
  if (!matching_file.empty()) {
    Matching m = parse_matching_file(matching_file, inst.size());
    auto enumerated = enumerate_stable_matchings(inst, cap);
    std::vector<Matching> lattice;
    for (const auto& [s, mm] : enumerated) lattice.push_back(mm);
    SupermatchCheck check = is_ab_supermatch(inst, lattice, m, q);
    if (as_json) {
      json j;
      j["holds"] = check.holds;
      j["vacuous"] = check.vacuous;
      j["witness"] =
          check.witness ? json::parse(check.witness->to_json()) : json(nullptr);
      std::cout << j.dump() << "\n";
    } else if (check.holds) {
      std::cout << "yes: (" << a << "," << b << ")-supermatch"
                << (check.vacuous ? " (vacuously: fewer than a non-fixed pairs)"
                                  : "")
                << "\n";
    } else {
      std::cout << "no: breaking " << pairs_human(check.witness->broken)
                << " cannot be repaired within budget " << b << "\n";
      if (check.witness->repair) {
        std::cout << "nearest avoiding matching "
                  << pairs_human(check.witness->repair->pairs()) << " costs "
                  << *check.witness->cost << "\n";
      } else {
        std::cout << "no stable matching avoids the broken pairs\n";
      }
    }
    return check.holds ? kOk : kNo;
  }
  auto found = exists_ab_supermatch(inst, q, cap);
  if (as_json) {
    json j;
    j["found"] = found.has_value();
    if (found) j["matching"] = pairs_json(found->pairs());
    std::cout << j.dump() << "\n";
  } else if (found) {
    std::cout << pairs_human(found->pairs()) << "\n";
  } else {
    std::cout << "no (" << a << "," << b << ")-supermatch exists\n";
  }
  return found ? kOk : kNo;
}

int cmd_satsm_validate(const std::string& file, bool as_json) {
  SatSmInstance inst = SatSmInstance::parse(read_file_or_throw(file));
  SatSmValidation report = validate_instance(inst);
  if (as_json) {
    json j;
    j["ok"] = report.ok();
    j["violations"] = json::array();
    for (const auto& v : report.violations) {
      j["violations"].push_back(
          {{"condition", v.condition}, {"detail", v.detail}});
    }
    std::cout << j.dump() << "\n";
  } else if (report.ok()) {
    std::cout << "ok\n";
  } else {
    std::cout << report.summary();
  }
  return report.ok() ? kOk : kUsage;
}

int cmd_satsm_cnf(const std::string& file, const std::string& dimacs_path,
                  bool as_json) {
  SatSmInstance inst = SatSmInstance::parse(read_file_or_throw(file));
  Cnf cnf = build_cnf(inst);
  AuditReport audit = audit_schaefer(cnf);
  if (!dimacs_path.empty()) {
    if (dimacs_path == "-") {
      std::cout << to_dimacs(cnf);
    } else {
      write_file(dimacs_path, to_dimacs(cnf));
    }
  }
  if (as_json) {
    json counts;
    for (auto g : {ClauseGroup::kA, ClauseGroup::kB, ClauseGroup::kC1,
                   ClauseGroup::kC2, ClauseGroup::kD}) {
      counts[group_name(g)] = {{"pre_dedup", cnf.stats.pre_dedup.at(g)},
                               {"post_dedup", cnf.stats.post_dedup.at(g)}};
    }
    json j;
    j["variables"] = cnf.var_count;
    j["clauses"] = cnf.clauses.size();
    j["groups"] = counts;
    j["audit"] = {{"a_min_length", audit.a_min_length},
                  {"c1_all_negative_binary", audit.c1_all_negative_binary},
                  {"positive_clause_geq2", audit.has_positive_clause_geq2}};
    std::cout << j.dump() << "\n";
  } else if (dimacs_path != "-") {
    std::cout << "p cnf " << cnf.var_count << " " << cnf.clauses.size() << "\n";
    for (auto g : {ClauseGroup::kA, ClauseGroup::kB, ClauseGroup::kC1,
                   ClauseGroup::kC2, ClauseGroup::kD}) {
      std::cout << "group " << group_name(g) << ": "
                << cnf.stats.post_dedup.at(g) << " clauses ("
                << cnf.stats.pre_dedup.at(g) << " before dedup)\n";
    }
  }
  return kOk;
}

int cmd_satsm_solve(const std::string& file, const std::string& external,
                    bool as_json) {
  SatSmInstance inst = SatSmInstance::parse(read_file_or_throw(file));
  Cnf cnf = build_cnf(inst);
  std::optional<Assignment> model;
  if (!external.empty()) {
    fs::path tmp = fs::temp_directory_path() /
                   ("matchkit-" + std::to_string(::getpid()) + ".cnf");
    write_file(tmp, to_dimacs(cnf));
    std::string cmd = external + " \"" + tmp.string() + "\"";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw Error("cannot run external solver '" + external + "'");
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) {
      output.append(buf, got);
    }
    ::pclose(pipe);
    fs::remove(tmp);
    model = parse_solver_output(output, cnf.var_count);
    if (model && !evaluate(cnf, *model)) {
      throw ParseError("external solver returned a non-model");
    }
  } else {
    model = solve(cnf);
  }
  if (!model) {
    if (as_json) {
      std::cout << R"({"sat":false})"
                << "\n";
    } else {
      std::cout << "UNSAT\n";
    }
    return kNo;
  }
  DecodedSets sets = decode(inst, *model);
  if (as_json) {
    json j;
    j["sat"] = true;
    j["closed"] = sets.closed;
    j["leaves"] = sets.leaves;
    j["neighbors"] = sets.neighbors;
    std::cout << j.dump() << "\n";
  } else {
    auto print_set = [](const char* name, const std::set<int>& s) {
      std::cout << name << " = {";
      bool first = true;
      for (int e : s) {
        std::cout << (first ? "" : ",") << e;
        first = false;
      }
      std::cout << "}\n";
    };
    std::cout << "SAT\n";
    print_set("S", sets.closed);
    print_set("L", sets.leaves);
    print_set("N", sets.neighbors);
  }
  return kOk;
}

int cmd_reduce(const std::string& file, const std::string& out_dir) {
  SatSmInstance inst = SatSmInstance::parse(read_file_or_throw(file));
  RotationPoset poset = reduce_to_poset(inst);
  Instance reduced = synthesize_preferences(poset);
  Cnf cnf = build_cnf(inst);
  FamilyFReport family = validate_family_f(poset);
  EquivalenceOutcome eq = check_equivalence(inst);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "satsm.txt", inst.serialize());
  write_file(fs::path(out_dir) / "instance.txt", reduced.serialize());
  write_file(fs::path(out_dir) / "poset.json", poset.to_json() + "\n");
  write_file(fs::path(out_dir) / "cnf.dimacs", to_dimacs(cnf));
  json report;
  report["family_f"] = json::parse(family.to_json());
  report["equivalence"] = json::parse(eq.to_json());
  write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
  std::cout << "wrote " << out_dir << "\n";
  return eq.all_ok() ? kOk : kNo;
}

int cmd_gen_satsm(int x, int n, std::uint64_t seed, const std::string& out) {
  SatSmInstance inst = generate_random_satsm({x, n, seed, 10000});
  if (out.empty()) {
    std::cout << inst.serialize();
  } else {
    write_file(out, inst.serialize());
  }
  return kOk;
}

int cmd_verify_equivalence(int count, int max_x, std::uint64_t seed, int jobs,
                           bool as_json) {
  auto instances = generate_harness_instances(count, max_x, 8, seed);
  std::vector<EquivalenceOutcome> outcomes(instances.size());
  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < instances.size();
         i = next.fetch_add(1)) {
      outcomes[i] = check_equivalence(instances[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int disagreements = 0;
  for (const auto& o : outcomes) disagreements += !o.all_ok();
  if (as_json) {
    json j;
    j["count"] = outcomes.size();
    j["disagreements"] = disagreements;
    j["instances"] = json::array();
    for (const auto& o : outcomes) {
      j["instances"].push_back(json::parse(o.to_json()));
    }
    std::cout << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      std::cout << "instance " << i << ": " << (o.sat ? "SAT" : "UNSAT")
                << " / supermatch " << (o.supermatch_exists ? "yes" : "no")
                << " / " << (o.all_ok() ? "agree" : "DISAGREE") << " ("
                << o.stable_count << " stable, " << o.supermatch_count
                << " supermatches)\n";
    }
    std::cout << outcomes.size() << " instances, " << disagreements
              << " disagreements\n";
  }
  return disagreements == 0 ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable matching robustness toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string file, side = "men", matching_file, dimacs_path, external, out_dir,
                    out_file;
  int a = 1, b = 1, gen_x = 4, gen_n = 4, count = 20, max_x = 12, jobs = 1;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultEnumerationCap;
  bool dot = false, pj = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse and echo an instance");
  parse_cmd->add_option("file", file)->required();

  auto* solve_cmd = app.add_subcommand("solve", "deferred acceptance");
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_option("--side", side, "men|women")
      ->check(CLI::IsMember({"men", "women"}));

  auto* enum_cmd = app.add_subcommand("enumerate", "all stable matchings");
  enum_cmd->add_option("file", file)->required();
  enum_cmd->add_option("--cap", cap, "enumeration cap");

  auto* poset_cmd = app.add_subcommand("poset", "rotation poset");
  poset_cmd->add_option("file", file)->required();
  poset_cmd->add_flag("--dot", dot, "DOT output");
  poset_cmd->add_flag("--poset-json", pj, "JSON poset dump");

  auto* check_cmd =
      app.add_subcommand("check-supermatch", "(a,b)-supermatch decision");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_option("--a", a, "pairs broken")->required();
  check_cmd->add_option("--b", b, "repair budget")->required();
  check_cmd->add_option("--matching", matching_file,
                        "check this matching instead of searching");
  check_cmd->add_option("--cap", cap, "enumeration cap");

  auto* sv_cmd =
      app.add_subcommand("satsm-validate", "list conditions + rule 1");
  sv_cmd->add_option("file", file)->required();

  auto* sc_cmd = app.add_subcommand("satsm-cnf", "clause groups + audit");
  sc_cmd->add_option("file", file)->required();
  sc_cmd->add_option("--dimacs", dimacs_path,
                     "write DIMACS here ('-' = stdout)");

  auto* ss_cmd = app.add_subcommand("satsm-solve", "decide satisfiability");
  ss_cmd->add_option("file", file)->required();
  ss_cmd->add_option("--external-solver", external,
                     "DIMACS solver binary; its model is re-verified");

  auto* red_cmd = app.add_subcommand("reduce", "emit the reduction bundle");
  red_cmd->add_option("file", file)->required();
  red_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* gen_cmd = app.add_subcommand("gen-satsm", "random valid instance");
  gen_cmd->add_option("--x", gen_x, "universe size")->required();
  gen_cmd->add_option("--n", gen_n, "list count")->required();
  gen_cmd->add_option("--seed", seed, "rng seed");
  gen_cmd->add_option("--out", out_file, "write here instead of stdout");

  auto* ver_cmd =
      app.add_subcommand("verify-equivalence", "batch equivalence harness");
  ver_cmd->add_option("--count", count, "instances to test");
  ver_cmd->add_option("--max-x", max_x, "universe cap");
  ver_cmd->add_option("--seed", seed, "rng seed");
  ver_cmd->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(file, as_json);
    if (solve_cmd->parsed()) return cmd_solve(file, side, as_json);
    if (enum_cmd->parsed()) return cmd_enumerate(file, cap, as_json);
    if (poset_cmd->parsed()) return cmd_poset(file, dot, pj || as_json);
    if (check_cmd->parsed()) {
      return cmd_check_supermatch(file, a, b, matching_file, cap, as_json);
    }
    if (sv_cmd->parsed()) return cmd_satsm_validate(file, as_json);
    if (sc_cmd->parsed()) return cmd_satsm_cnf(file, dimacs_path, as_json);
    if (ss_cmd->parsed()) return cmd_satsm_solve(file, external, as_json);
    if (red_cmd->parsed()) return cmd_reduce(file, out_dir);
    if (gen_cmd->parsed()) return cmd_gen_satsm(gen_x, gen_n, seed, out_file);
    if (ver_cmd->parsed()) {
      return cmd_verify_equivalence(count, max_x, seed, jobs, as_json);
    }
  } catch (const LimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.infeasible() ? kUsage : kLimit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
