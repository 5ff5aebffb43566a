// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dms/core.hpp"

namespace dms {

struct NotNormalizable : DmsError {
  using DmsError::DmsError;
};

enum class GuardTag { True, Atom, Eq, Not, And, Exists };

struct GuardNode;
using Guard = std::shared_ptr<const GuardNode>;

/// Guard formula over atoms, equalities, negation, conjunction and
/// existential quantification. Universally quantified negative guards are
/// represented through the De Morgan encoding !exists y. !(...) built by
/// g_forall_not.
struct GuardNode {
  GuardTag tag = GuardTag::True;
  Atom atom;           // Atom
  Term lhs, rhs;       // Eq
  Guard child;         // Not, Exists
  Guard left, right;   // And
  std::string var;     // Exists
};

Guard g_true();
Guard g_atom(Atom a);
Guard g_eq(Term lhs, Term rhs);
Guard g_not(Guard g);
Guard g_and(Guard a, Guard b);
Guard g_and(const std::vector<Guard>& gs);  // empty list yields true
Guard g_exists(std::string var, Guard g);
Guard g_exists(const std::vector<std::string>& vars, Guard g);

/// forall vars. !a1 & ... & !am, encoded as !exists vars. !(!a1 & ... & !am).
Guard g_forall_not(const std::vector<std::string>& vars, const std::vector<Atom>& atoms);

std::set<std::string> free_vars(const Guard& g);
std::set<std::string> all_vars(const Guard& g);
std::string to_string(const Guard& g);

enum class Fragment { PfCG, CG, PfNCG, NCG, CNA, GeneralFOL };
std::string to_string(Fragment f);

enum class PrefixPolarity { Existential, Universal };

/// Normal form of a Table-1 guard: quantifier prefix, positive and negative
/// atom sets, equality-induced identifications, and an unsatisfiability flag
/// for guards whose equalities force two distinct constants together.
struct NormalGuard {
  std::vector<std::string> quantified;
  std::set<Atom> positive;
  std::set<Atom> negative;
  PrefixPolarity polarity = PrefixPolarity::Existential;
  bool unsat = false;
  std::set<std::string> free;                // of the original guard
  std::map<std::string, Term> identified;    // eliminated equalities, var -> representative
};

NormalGuard normalize(const Guard& g);                   // throws NotNormalizable
std::optional<NormalGuard> try_normalize(const Guard& g);

Fragment classify(const Guard& g);
bool is_safe(const NormalGuard& ng);

/// Rebuilds a guard from a normal form (used by the classification-stability
/// property and by pair-domain matching).
Guard rebuild(const NormalGuard& ng);

}  // namespace dms
