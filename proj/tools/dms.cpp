// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dms/equivalence.hpp"
#include "dms/json_io.hpp"
#include "dms/spec_format.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dms::DmsError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw dms::DmsError("cannot write " + path);
  out << content;
}

struct CommonFlags {
  std::string domain;
  std::vector<std::string> pool;
  int fresh = 1;
  std::size_t depth = 6;
  std::size_t max_states = 2000;
  bool override_fragments = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_domain = true) {
  if (with_domain) {
    cmd->add_option("--domain", flags.domain,
                    "abstract domain: union|inter|pair|null-join|null-meet|null-pair");
  }
  cmd->add_option("--pool", flags.pool, "constant pool (overrides the spec's const line)")
      ->delimiter(',');
  cmd->add_option("--fresh", flags.fresh, "fresh-constant budget for extensions and witnesses");
  cmd->add_option("--depth", flags.depth, "exploration depth bound");
  cmd->add_option("--max-states", flags.max_states, "state count bound");
  cmd->add_flag("--override", flags.override_fragments,
                "run guards outside the domain's licensed fragment (unsound by design)");
}

dms::ExplorationConfig make_config(const CommonFlags& flags, const dms::SpecFile& spec) {
  dms::ExplorationConfig config;
  std::vector<std::string> names = flags.pool.empty() ? spec.pool_constants : flags.pool;
  config.pool = dms::ConstantPool::of_names(names, flags.fresh);
  config.max_depth = flags.depth;
  config.max_states = flags.max_states;
  config.allow_unlicensed = flags.override_fragments;
  return config;
}

std::optional<dms::DomainId> domain_of(const CommonFlags& flags) {
  if (flags.domain.empty()) return std::nullopt;
  auto d = dms::parse_domain(flags.domain);
  if (!d) throw dms::DmsError("unknown domain '" + flags.domain + "'");
  return d;
}

std::set<std::string> constant_names(const dms::SpecFile& spec, const CommonFlags& flags) {
  std::set<std::string> names(spec.pool_constants.begin(), spec.pool_constants.end());
  names.insert(flags.pool.begin(), flags.pool.end());
  return names;
}

int run_validate(const std::string& file) {
  dms::SpecFile spec = dms::parse_spec(read_file(file));
  auto diags = dms::validate(spec.system);
  if (diags.empty()) {
    std::cout << "ok: " << spec.system.actions.size() << " actions, "
              << spec.system.vocabulary.size() << " predicates, initial database with "
              << spec.system.initial.size() << " atoms\n";
    return 0;
  }
  for (const auto& d : diags) std::cerr << d.where << ": " << d.message << "\n";
  return 1;
}

int run_explore(const std::string& file, const CommonFlags& flags, const std::string& dot_out,
                const std::string& json_out) {
  dms::SpecFile spec = dms::parse_spec(read_file(file));
  dms::FreshSource nulls;
  dms::Lts lts = dms::explore(spec.system, domain_of(flags), make_config(flags, spec), nulls);
  std::cout << lts.states.size() << " states, " << lts.transitions.size() << " transitions"
            << (lts.truncated ? " (truncated)" : "") << "\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    std::cout << "  s" << i << (i == lts.initial ? "*" : " ") << " "
              << dms::to_string(lts.states[i]) << "\n";
  }
  if (!dot_out.empty()) write_file(dot_out, dms::to_dot(lts));
  if (!json_out.empty()) write_file(json_out, dms::to_json(lts).dump(2) + "\n");
  return 0;
}

int run_reach(const std::string& file, const std::string& target, const CommonFlags& flags) {
  dms::SpecFile spec = dms::parse_spec(read_file(file));
  std::string goal = target.empty() ? spec.target.value_or("") : target;
  if (goal.empty()) throw dms::DmsError("no target action (use --target or a target line)");
  dms::FreshSource nulls;
  dms::ReachResult res =
      dms::reachable(spec.system, goal, domain_of(flags), make_config(flags, spec), nulls);
  if (res.reached) {
    std::cout << "reached: " << goal << " enabled after " << res.trace.size() << " steps\n";
    for (const dms::Label& l : res.trace) std::cout << "  " << dms::to_string(l) << "\n";
    return 0;
  }
  std::cout << "not reached within bounds" << (res.truncated ? " (search truncated)" : "")
            << "\n";
  return 2;
}

int run_abstract(const std::string& file, const std::string& set_file, const CommonFlags& flags) {
  dms::SpecFile spec = dms::parse_spec(read_file(file));
  auto domain = domain_of(flags);
  if (!domain) throw dms::DmsError("--domain is required");
  auto dbs = dms::parse_database_set(read_file(set_file), constant_names(spec, flags));
  dms::AbstractState state = dms::alpha(*domain, dbs);
  std::cout << dms::to_string(state) << "\n";
  std::cout << dms::to_json(state).dump(2) << "\n";
  return 0;
}

int run_check_galois(const std::string& domain_name, std::size_t samples, std::uint64_t seed) {
  auto domain = dms::parse_domain(domain_name);
  if (!domain) throw dms::DmsError("unknown domain '" + domain_name + "'");
  dms::GaloisSpec gspec;
  gspec.samples = samples;
  gspec.seed = seed;
  dms::CheckReport report = dms::check_galois(*domain, gspec);
  std::cout << "galois check on " << domain_name << ": " << dms::to_string(report) << "\n";
  return report.holds ? 0 : 3;
}

int run_check_bisim(const std::string& file, const std::string& set_file,
                    const CommonFlags& flags, std::size_t depth) {
  dms::SpecFile spec = dms::parse_spec(read_file(file));
  auto domain = domain_of(flags);
  if (!domain) throw dms::DmsError("--domain is required");
  auto dbs = dms::parse_database_set(read_file(set_file), constant_names(spec, flags));
  dms::AbstractState state = dms::alpha(*domain, dbs);
  dms::CheckReport report =
      dms::check_forall_bisim(state, dbs, spec.system, make_config(flags, spec), depth);
  std::cout << "forall-bisimulation of alpha(C) and C: " << dms::to_string(report) << "\n";
  std::cout << dms::to_json(report).dump(2) << "\n";
  return report.holds ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"database-manipulating systems, abstract domains, and bisimulation checks"};
  app.require_subcommand(1);

  std::string file, set_file, target, dot_out, json_out, domain_name;
  std::size_t samples = 200, depth = 3;
  std::uint64_t seed = 0;
  CommonFlags flags;

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a .dms spec");
  validate->add_option("file", file)->required();

  CLI::App* explore = app.add_subcommand("explore", "bounded (abstract) state-space exploration");
  explore->add_option("file", file)->required();
  add_common(explore, flags);
  explore->add_option("--dot", dot_out, "write the LTS in DOT format");
  explore->add_option("--json", json_out, "write the LTS as JSON");

  CLI::App* reach = app.add_subcommand("reach", "bounded reachability of a target action");
  reach->add_option("file", file)->required();
  reach->add_option("--target", target, "target action (defaults to the spec's target line)");
  add_common(reach, flags);

  CLI::App* abstract_cmd = app.add_subcommand("abstract", "abstract a listed set of databases");
  abstract_cmd->add_option("file", file)->required();
  abstract_cmd->add_option("--set", set_file, "file with one database per line")->required();
  add_common(abstract_cmd, flags);

  CLI::App* galois = app.add_subcommand("check-galois", "randomized Galois-law verification");
  galois->add_option("--domain", domain_name)->required();
  galois->add_option("--samples", samples);
  galois->add_option("--seed", seed);

  CLI::App* bisim = app.add_subcommand("check-bisim",
                                       "bounded forall-bisimulation of alpha(C) against C");
  bisim->add_option("file", file)->required();
  bisim->add_option("--set", set_file)->required();
  bisim->add_option("--bisim-depth", depth, "game depth");
  add_common(bisim, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(file);
    if (app.got_subcommand(explore)) return run_explore(file, flags, dot_out, json_out);
    if (app.got_subcommand(reach)) return run_reach(file, target, flags);
    if (app.got_subcommand(abstract_cmd)) return run_abstract(file, set_file, flags);
    if (app.got_subcommand(galois)) return run_check_galois(domain_name, samples, seed);
    if (app.got_subcommand(bisim)) return run_check_bisim(file, set_file, flags, depth);
  } catch (const dms::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const dms::DmsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
