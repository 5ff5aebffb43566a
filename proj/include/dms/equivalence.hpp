// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dms/domains.hpp"
#include "dms/engine.hpp"

namespace dms {

enum class RelationKind { Simulation, Bisimulation, ForallSimulation, ForallBisimulation };

struct Relation {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  RelationKind kind = RelationKind::Simulation;
};

struct CheckReport {
  bool holds = true;
  std::string reason;                // empty when holds
  std::optional<Label> label;        // offending label, when applicable
  std::string pair;                  // rendering of the failing (state, set) pair
  std::size_t explored_depth = 0;
  std::size_t samples = 0;
};

std::string to_string(const CheckReport& r);

/// Coarsest bisimulation partition of the LTS states (partition refinement to
/// a fixpoint). Returns a block id per state.
std::vector<std::size_t> largest_bisimulation(const Lts& lts);

/// Simulation preorder membership via greatest-fixpoint refinement.
bool simulates(const Lts& lts, std::size_t p, std::size_t q);

/// Bounded forall-bisimulation game between an abstract state and a finite
/// set of databases. Per action, the constant-valued abstract match set must
/// coincide with the set of matches shared by every member; play then
/// recurses on successor pairs. Set-like domains (union, inter, pair,
/// null-join) step both sides with the same constant extension and check
/// alpha(C') = A' exactly; the null domains with fresh-null steps answer with
/// the aggregation of all extensions.
CheckReport check_forall_bisim(const AbstractState& state, const std::vector<Database>& c,
                               const DmsSystem& system, const ExplorationConfig& config,
                               std::size_t depth);

struct GaloisSpec {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  std::size_t max_pool = 4;
  std::size_t max_preds = 2;
  std::size_t max_arity = 2;
  std::size_t max_set = 5;    // |C|
  std::size_t max_atoms = 6;  // |D|
};

using AlphaFn = std::function<AbstractState(DomainId, const std::vector<Database>&)>;

/// Randomized verification of the Galois laws: monotonicity over sampled
/// C subset-of C' pairs, exact gamma-after-alpha containment for every member,
/// and bounded alpha-after-gamma optimality.
CheckReport check_galois(DomainId domain, const GaloisSpec& spec);

/// Test hook: same checks with a substituted abstraction function.
CheckReport check_galois_with(DomainId domain, const GaloisSpec& spec, const AlphaFn& alpha_fn);

}  // namespace dms
