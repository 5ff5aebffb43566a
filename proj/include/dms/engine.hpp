// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dms/core.hpp"
#include "dms/domains.hpp"
#include "dms/guards.hpp"
#include "dms/matching.hpp"

namespace dms {

struct NotEnabled : DmsError {
  using DmsError::DmsError;
};

struct IncompleteExtension : DmsError {
  using DmsError::DmsError;
};

/// Guarded add/delete action. vars(del) must be free in the guard.
struct Action {
  std::string name;
  Guard guard;
  std::set<Atom> del;
  std::set<Atom> add;

  std::set<std::string> unbound_add_vars() const;  // vars(add) \ free_vars(guard)
};

struct DmsSystem {
  Instance initial;
  std::vector<Action> actions;
  std::set<PredicateSymbol> vocabulary;

  const Action* find_action(const std::string& name) const;
};

struct Diagnostic {
  std::string where;
  std::string message;
};

std::vector<Diagnostic> validate(const DmsSystem& system);

/// Transition label. Concrete transitions carry the full extension sigma*;
/// abstract transitions carry only the guard match sigma.
struct Label {
  std::string action;
  Substitution sigma;

  auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& l);

/// Abstract label <act,sigma1> is compatible with concrete label
/// <act,sigma2> when some instantiation of sigma1's nulls by constants makes
/// it a subset of sigma2.
bool label_compatible(const Label& abstract_label, const Label& concrete_label);

struct Transition {
  std::size_t from;
  Label label;
  std::size_t to;

  auto operator<=>(const Transition&) const = default;
};

using LtsState = std::variant<Instance, AbstractState>;

std::string to_string(const LtsState& s);

struct Lts {
  std::vector<LtsState> states;
  std::size_t initial = 0;
  std::vector<Transition> transitions;
  bool truncated = false;
  std::optional<DomainId> domain;

  std::vector<Transition> out_of(std::size_t state) const;
};

enum class Dedup { Exact, HomEquiv };

struct ExplorationConfig {
  ConstantPool pool;
  std::size_t max_depth = 8;
  std::size_t max_states = 2000;
  Dedup dedup = Dedup::HomEquiv;
  bool allow_unlicensed = false;
};

/// One concrete step: (d \ del sigma*) u add sigma*. sigma* must cover the
/// guard's free variables (as a match on d) and all add variables, with a
/// constant codomain.
Database concrete_step(const Database& d, const Action& act, const Substitution& sigma_star);

std::vector<std::pair<Label, Database>> concrete_successors(const Database& d,
                                                            const DmsSystem& system,
                                                            const ConstantPool& pool);

/// One abstract step: unbound add variables receive globally fresh labeled
/// nulls; pair domains apply the set operations componentwise. The result is
/// canonicalized.
AbstractState abstract_step(const AbstractState& state, const Action& act,
                            const Substitution& sigma, FreshSource& nulls,
                            const ConstantPool& pool, bool enforce_fragment = true);

/// Set-lifted forall-step: defined iff sigma is a guard match on every member;
/// applies one shared sigma* across the set.
std::optional<std::vector<Database>> lifted_forall_step(const std::vector<Database>& c,
                                                        const Action& act,
                                                        const Substitution& sigma,
                                                        const Substitution& sigma_star,
                                                        const ConstantPool& pool);

Lts explore(const DmsSystem& system, std::optional<DomainId> domain,
            const ExplorationConfig& config, FreshSource& nulls);

struct ReachResult {
  bool reached = false;
  std::vector<Label> trace;  // labels from the initial state to the enabling state
  bool truncated = false;
};

ReachResult reachable(const DmsSystem& system, const std::string& target_action,
                      std::optional<DomainId> domain, const ExplorationConfig& config,
                      FreshSource& nulls);

/// Replays a trace of labels concretely from the initial database, extending
/// each match with pool constants where the label leaves add variables open.
/// Returns the final database, or nullopt when some step is not enabled.
std::optional<Database> replay_trace(const DmsSystem& system, const std::vector<Label>& trace,
                                     const ConstantPool& pool);

std::string to_dot(const Lts& lts);

}  // namespace dms
