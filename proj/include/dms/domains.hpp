// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dms/core.hpp"
#include "dms/guards.hpp"
#include "dms/matching.hpp"

namespace dms {

/// Rows 1-6 of the abstract-domain table. Set-based domains order components
/// by subset/superset; the null domains order instances by homomorphism.
enum class DomainId { Union, Intersection, Pair, NullJoin, NullMeet, NullPair };

std::string to_string(DomainId d);
std::optional<DomainId> parse_domain(const std::string& name);  // "union", "null-meet", ...

struct DomainMismatch : DmsError {
  using DmsError::DmsError;
};

struct FragmentViolation : DmsError {
  FragmentViolation(DomainId d, Fragment f)
      : DmsError("guard fragment " + to_string(f) + " is not licensed on domain " + to_string(d)),
        domain(d),
        fragment(f) {}
  DomainId domain;
  Fragment fragment;
};

/// Domain-tagged abstraction: a meet/intersection component (lower), a
/// join/union component (upper), or both for the pair domains.
struct AbstractState {
  DomainId domain = DomainId::Union;
  std::optional<Instance> lower;  // absent for Union/NullJoin
  std::optional<Instance> upper;  // absent for Intersection/NullMeet

  static AbstractState single(DomainId d, Instance inst);
  static AbstractState pair(DomainId d, Instance lower, Instance upper);

  bool has_lower() const { return lower.has_value(); }
  bool has_upper() const { return upper.has_value(); }
  /// The only component of a single-instance domain.
  const Instance& component() const;

  auto operator<=>(const AbstractState&) const = default;
};

std::string to_string(const AbstractState& s);

/// Joint canonical form: nulls renumbered across both components so shared
/// nulls stay shared.
AbstractState canonical_state(const AbstractState& s);

bool uses_lower(DomainId d);
bool uses_upper(DomainId d);

/// The abstraction function of the chosen domain. Rejects empty input.
AbstractState alpha(DomainId domain, const std::vector<Database>& c);

/// Least upper bound in the hom-order: union with the right operand's nulls
/// renamed apart.
Instance lattice_join(const Instance& i, const Instance& j);

/// Greatest lower bound in the hom-order: per-predicate direct product with
/// pair-indexed nulls, core-minimized and canonicalized.
Instance lattice_meet(const Instance& i, const Instance& j);

bool gamma_contains(const AbstractState& state, const Database& d);

/// Exactly the databases over the pool with at most max_atoms atoms (over the
/// state's predicates) that gamma admits. Test-only bounded enumeration.
std::vector<Database> gamma_enumerate(const AbstractState& state, const ConstantPool& pool,
                                      std::size_t max_atoms);

bool state_leq(const AbstractState& a, const AbstractState& b);

/// Shape-based licensing per the domain/fragment table; `true` is licensed
/// everywhere, an unquantified pure-negative conjunction counts as pf-NCG
/// shaped for the pair domains.
bool licensed(DomainId d, const Guard& g);
void require_licensed(DomainId d, const Guard& g);  // throws FragmentViolation

/// Does sigma match g on the abstract state? Pair domains evaluate the
/// positive part on the lower and the negated part on the upper component.
bool abstract_match_holds(const AbstractState& state, const Guard& g, const Substitution& sigma,
                          const ConstantPool& pool);

/// All abstract matches of g, enumerated over the components' active domains,
/// nulls and the pool. Enforces licensing unless enforce_fragment is false.
std::set<Substitution> abstract_matches(const AbstractState& state, const Guard& g,
                                        const ConstantPool& pool, bool enforce_fragment = true);

}  // namespace dms
