// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/core.hpp"

#include <algorithm>
#include <map>

namespace dms {

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Constant:
    case TermKind::Variable:
      return t.name;
    case TermKind::Null:
      return "n" + std::to_string(t.index);
  }
  return {};
}

bool Atom::ground() const {
  return std::none_of(terms.begin(), terms.end(), [](const Term& t) { return t.is_variable(); });
}

bool Atom::constant_only() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.is_constant(); });
}

std::string to_string(const Atom& a) {
  std::string out = a.pred + "(";
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (i) out += ",";
    out += to_string(a.terms[i]);
  }
  out += ")";
  return out;
}

std::string to_string(const Instance& inst) {
  std::string out = "{";
  bool first = true;
  for (const Atom& a : inst) {
    if (!first) out += ", ";
    first = false;
    out += to_string(a);
  }
  out += "}";
  return out;
}

Database::Database(Instance atoms) : atoms_(std::move(atoms)) {
  if (!is_database(atoms_)) {
    throw DmsError("database must not contain labeled nulls or variables: " + to_string(atoms_));
  }
}

Atom make_atom(const PredicateSymbol& pred, std::vector<Term> terms) {
  if (terms.size() != pred.arity) {
    throw ArityMismatch(pred.name, pred.arity, terms.size());
  }
  return Atom{pred.name, std::move(terms)};
}

std::set<Term> active_domain(const Instance& inst) {
  std::set<Term> out;
  for (const Atom& a : inst) {
    for (const Term& t : a.terms) {
      if (t.is_constant()) out.insert(t);
    }
  }
  return out;
}

std::set<Term> nulls_of(const Instance& inst) {
  std::set<Term> out;
  for (const Atom& a : inst) {
    for (const Term& t : a.terms) {
      if (t.is_null()) out.insert(t);
    }
  }
  return out;
}

bool is_database(const Instance& inst) {
  for (const Atom& a : inst) {
    if (!a.constant_only()) return false;
  }
  return true;
}

namespace {

Instance renumber_pass(const Instance& inst) {
  std::map<std::uint64_t, std::uint64_t> renaming;
  for (const Atom& a : inst) {  // std::set iterates in the total order
    for (const Term& t : a.terms) {
      if (t.is_null() && !renaming.count(t.index)) {
        std::uint64_t next = renaming.size();
        renaming.emplace(t.index, next);
      }
    }
  }
  Instance out;
  for (const Atom& a : inst) {
    Atom b = a;
    for (Term& t : b.terms) {
      if (t.is_null()) t.index = renaming.at(t.index);
    }
    out.insert(std::move(b));
  }
  return out;
}

}  // namespace

Instance canonicalize(const Instance& inst) {
  // Renumbering can reorder atoms, which can change the first-seen order of
  // nulls; iterate to a fixpoint (stable after one or two passes in practice).
  Instance cur = renumber_pass(inst);
  for (int i = 0; i < 8; ++i) {
    Instance next = renumber_pass(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  return cur;
}

Instance shift_nulls(const Instance& inst, std::uint64_t base) {
  Instance out;
  for (const Atom& a : inst) {
    Atom b = a;
    for (Term& t : b.terms) {
      if (t.is_null()) t.index += base;
    }
    out.insert(std::move(b));
  }
  return out;
}

std::uint64_t max_null_index(const Instance& inst) {
  std::uint64_t mx = 0;
  for (const Atom& a : inst) {
    for (const Term& t : a.terms) {
      if (t.is_null()) mx = std::max(mx, t.index);
    }
  }
  return mx;
}

bool has_nulls(const Instance& inst) {
  for (const Atom& a : inst) {
    for (const Term& t : a.terms) {
      if (t.is_null()) return true;
    }
  }
  return false;
}

void FreshSource::bump_past(std::uint64_t idx) {
  std::uint64_t cur = next_.load();
  while (cur <= idx && !next_.compare_exchange_weak(cur, idx + 1)) {
  }
}

}  // namespace dms
