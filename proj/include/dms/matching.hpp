// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dms/core.hpp"
#include "dms/guards.hpp"

namespace dms {

struct UnboundVariable : DmsError {
  using DmsError::DmsError;
};

struct HomSearchTimeout : DmsError {
  using DmsError::DmsError;
};

/// Finite map from variables to constants or labeled nulls. Matches on
/// databases bind constants only; matches on instances with nulls may bind
/// nulls as well.
using Substitution = std::map<std::string, Term>;

std::string to_string(const Substitution& s);

/// Finitization of the countable constant set used for match enumeration and
/// existential witnesses. fresh_budget many brand-new constants (never
/// occurring in any instance at hand) extend the witness set.
struct ConstantPool {
  std::vector<Term> constants;
  int fresh_budget = 0;

  static ConstantPool of_names(const std::vector<std::string>& names, int fresh = 0);
};

/// Constant-preserving atom map; the mapping contains every term of the
/// source, constants bound to themselves.
using Homomorphism = std::map<Term, Term>;

/// I, sigma |= g with existential witnesses drawn from the active domain,
/// the instance's nulls, the pool, and fresh_budget fresh constants.
bool satisfies(const Instance& inst, const Substitution& sigma, const Guard& g,
               const ConstantPool& pool);

/// All matches of g in inst: substitutions over free_vars(g) ranging over
/// active_domain(inst), pool constants and nulls_of(inst).
std::set<Substitution> matches(const Guard& g, const Instance& inst, const ConstantPool& pool);

struct HomOptions {
  std::uint64_t step_budget = 50'000'000;  // throw HomSearchTimeout beyond
};

std::optional<Homomorphism> find_homomorphism(const Instance& src, const Instance& dst,
                                              const Homomorphism& fixed = {},
                                              const HomOptions& opts = {});

/// Enumerates homomorphisms src -> dst extending `fixed` until the visitor
/// returns false. Returns true when the enumeration was cut short.
bool for_each_homomorphism(const Instance& src, const Instance& dst, const Homomorphism& fixed,
                           const std::function<bool(const Homomorphism&)>& visit,
                           const HomOptions& opts = {});

bool hom_leq(const Instance& i, const Instance& j, const HomOptions& opts = {});
bool hom_equiv(const Instance& i, const Instance& j, const HomOptions& opts = {});

/// Minimal retract of an instance: a subset of its atoms hom-equivalent to it
/// admitting no further shrinking retraction.
Instance core(const Instance& inst, const HomOptions& opts = {});

std::set<Atom> apply(const Substitution& sigma, const std::set<Atom>& atoms);
Atom apply(const Substitution& sigma, const Atom& atom);

/// sigma extended by a globally fresh null for each variable in vars.
Substitution extend_with_fresh_nulls(const Substitution& sigma, const std::set<std::string>& vars,
                                     FreshSource& nulls);

/// All extensions of sigma binding vars into the pool plus fresh_budget
/// brand-new constants (avoiding `avoid` and everything already in scope).
std::vector<Substitution> extensions_with_constants(const Substitution& sigma,
                                                    const std::set<std::string>& vars,
                                                    const ConstantPool& pool,
                                                    const std::set<Term>& avoid = {});

/// Deterministic fresh constant names (reserved '#' prefix, unparseable).
std::vector<Term> fresh_constants(std::size_t count, const std::set<Term>& avoid);

}  // namespace dms
