// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dms {

struct DmsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArityMismatch : DmsError {
  ArityMismatch(const std::string& pred, std::size_t expected, std::size_t got)
      : DmsError("arity mismatch for " + pred + ": expected " + std::to_string(expected) +
                 ", got " + std::to_string(got)),
        expected(expected),
        got(got) {}
  std::size_t expected;
  std::size_t got;
};

struct EmptyInput : DmsError {
  using DmsError::DmsError;
};

enum class TermKind { Constant, Variable, Null };

/// Uninterpreted term: a named constant, a named variable, or an indexed
/// labeled null. The three name spaces are disjoint by construction.
struct Term {
  TermKind kind = TermKind::Constant;
  std::string name;          // Constant / Variable payload
  std::uint64_t index = 0;   // Null payload

  static Term constant(std::string n) { return Term{TermKind::Constant, std::move(n), 0}; }
  static Term variable(std::string n) { return Term{TermKind::Variable, std::move(n), 0}; }
  static Term null(std::uint64_t i) { return Term{TermKind::Null, {}, i}; }

  bool is_constant() const { return kind == TermKind::Constant; }
  bool is_variable() const { return kind == TermKind::Variable; }
  bool is_null() const { return kind == TermKind::Null; }

  auto operator<=>(const Term&) const = default;
};

std::string to_string(const Term& t);

struct PredicateSymbol {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const PredicateSymbol&) const = default;
};

struct Atom {
  std::string pred;
  std::vector<Term> terms;

  bool ground() const;       // variable-free
  bool constant_only() const;  // no variables, no nulls

  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& a);

/// A set of ground atoms. Databases are the null-free special case; instances
/// may carry labeled nulls. Guard bodies reuse Atom with variables but are
/// never stored in an Instance.
using Instance = std::set<Atom>;

std::string to_string(const Instance& inst);

/// Null-free instance, validated at construction.
class Database {
 public:
  Database() = default;
  explicit Database(Instance atoms);
  const Instance& atoms() const { return atoms_; }
  operator const Instance&() const { return atoms_; }

  auto operator<=>(const Database&) const = default;

 private:
  Instance atoms_;
};

Atom make_atom(const PredicateSymbol& pred, std::vector<Term> terms);

std::set<Term> active_domain(const Instance& inst);
std::set<Term> nulls_of(const Instance& inst);
bool is_database(const Instance& inst);

/// Renumbers nulls 0..k-1 in the order they appear when atoms are sorted by
/// the total order (predicate name, term tags, payloads). Output is isomorphic
/// to the input by a null-renaming bijection, and idempotent.
Instance canonicalize(const Instance& inst);

/// Nulls of `inst` shifted so they are disjoint from any null index < `base`.
Instance shift_nulls(const Instance& inst, std::uint64_t base);

std::uint64_t max_null_index(const Instance& inst);  // 0 if none; see has_nulls
bool has_nulls(const Instance& inst);

/// Session-scoped source of globally fresh null indices.
class FreshSource {
 public:
  explicit FreshSource(std::uint64_t start = 0) : next_(start) {}
  std::uint64_t fresh() { return next_.fetch_add(1); }
  void bump_past(std::uint64_t idx);

 private:
  std::atomic<std::uint64_t> next_;
};

}  // namespace dms
