// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/guards.hpp"

#include <algorithm>

namespace dms {

namespace {
Guard node(GuardNode n) { return std::make_shared<const GuardNode>(std::move(n)); }
}  // namespace

Guard g_true() {
  static const Guard t = node(GuardNode{GuardTag::True});
  return t;
}

Guard g_atom(Atom a) {
  GuardNode n{GuardTag::Atom};
  n.atom = std::move(a);
  return node(std::move(n));
}

Guard g_eq(Term lhs, Term rhs) {
  if (lhs.is_null() || rhs.is_null()) {
    throw DmsError("equality guards range over constants and variables only");
  }
  GuardNode n{GuardTag::Eq};
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return node(std::move(n));
}

Guard g_not(Guard g) {
  GuardNode n{GuardTag::Not};
  n.child = std::move(g);
  return node(std::move(n));
}

Guard g_and(Guard a, Guard b) {
  GuardNode n{GuardTag::And};
  n.left = std::move(a);
  n.right = std::move(b);
  return node(std::move(n));
}

Guard g_and(const std::vector<Guard>& gs) {
  if (gs.empty()) return g_true();
  Guard acc = gs.front();
  for (std::size_t i = 1; i < gs.size(); ++i) acc = g_and(acc, gs[i]);
  return acc;
}

Guard g_exists(std::string var, Guard g) {
  GuardNode n{GuardTag::Exists};
  n.var = std::move(var);
  n.child = std::move(g);
  return node(std::move(n));
}

Guard g_exists(const std::vector<std::string>& vars, Guard g) {
  Guard acc = std::move(g);
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) acc = g_exists(*it, acc);
  return acc;
}

Guard g_forall_not(const std::vector<std::string>& vars, const std::vector<Atom>& atoms) {
  std::vector<Guard> lits;
  lits.reserve(atoms.size());
  for (const Atom& a : atoms) lits.push_back(g_not(g_atom(a)));
  Guard body = g_and(lits);
  if (vars.empty()) return body;
  return g_not(g_exists(vars, g_not(body)));
}

std::set<std::string> free_vars(const Guard& g) {
  std::set<std::string> out;
  switch (g->tag) {
    case GuardTag::True:
      break;
    case GuardTag::Atom:
      for (const Term& t : g->atom.terms) {
        if (t.is_variable()) out.insert(t.name);
      }
      break;
    case GuardTag::Eq:
      if (g->lhs.is_variable()) out.insert(g->lhs.name);
      if (g->rhs.is_variable()) out.insert(g->rhs.name);
      break;
    case GuardTag::Not:
      out = free_vars(g->child);
      break;
    case GuardTag::And: {
      out = free_vars(g->left);
      auto r = free_vars(g->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case GuardTag::Exists:
      out = free_vars(g->child);
      out.erase(g->var);
      break;
  }
  return out;
}

std::set<std::string> all_vars(const Guard& g) {
  std::set<std::string> out;
  switch (g->tag) {
    case GuardTag::True:
      break;
    case GuardTag::Atom:
      for (const Term& t : g->atom.terms) {
        if (t.is_variable()) out.insert(t.name);
      }
      break;
    case GuardTag::Eq:
      if (g->lhs.is_variable()) out.insert(g->lhs.name);
      if (g->rhs.is_variable()) out.insert(g->rhs.name);
      break;
    case GuardTag::Not:
      out = all_vars(g->child);
      break;
    case GuardTag::And: {
      out = all_vars(g->left);
      auto r = all_vars(g->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case GuardTag::Exists:
      out = all_vars(g->child);
      out.insert(g->var);
      break;
  }
  return out;
}

std::string to_string(const Guard& g) {
  switch (g->tag) {
    case GuardTag::True:
      return "true";
    case GuardTag::Atom:
      return to_string(g->atom);
    case GuardTag::Eq:
      return to_string(g->lhs) + " = " + to_string(g->rhs);
    case GuardTag::Not:
      return "!(" + to_string(g->child) + ")";
    case GuardTag::And:
      return to_string(g->left) + " & " + to_string(g->right);
    case GuardTag::Exists:
      return "exists " + g->var + ". (" + to_string(g->child) + ")";
  }
  return {};
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::PfCG: return "pf-CG";
    case Fragment::CG: return "CG";
    case Fragment::PfNCG: return "pf-NCG";
    case Fragment::NCG: return "NCG";
    case Fragment::CNA: return "CNA";
    case Fragment::GeneralFOL: return "general FOL";
  }
  return {};
}

namespace {

struct Literals {
  std::vector<Atom> positive;
  std::vector<Atom> negative;
  std::vector<std::pair<Term, Term>> equalities;
};

// Flattens a conjunction of literals; returns false on any non-literal shape.
bool collect_literals(const Guard& g, Literals& out) {
  switch (g->tag) {
    case GuardTag::True:
      return true;
    case GuardTag::Atom:
      out.positive.push_back(g->atom);
      return true;
    case GuardTag::Eq:
      out.equalities.emplace_back(g->lhs, g->rhs);
      return true;
    case GuardTag::Not:
      if (g->child->tag == GuardTag::Atom) {
        out.negative.push_back(g->child->atom);
        return true;
      }
      return false;
    case GuardTag::And:
      return collect_literals(g->left, out) && collect_literals(g->right, out);
    case GuardTag::Exists:
      return false;
  }
  return false;
}

// Recognizes the CNA encoding !exists y1..yk. !(!a1 & ... & !am).
bool match_cna(const Guard& g, std::vector<std::string>& vars, std::vector<Atom>& atoms) {
  if (g->tag != GuardTag::Not) return false;
  Guard cur = g->child;
  while (cur->tag == GuardTag::Exists) {
    vars.push_back(cur->var);
    cur = cur->child;
  }
  if (vars.empty() || cur->tag != GuardTag::Not) return false;
  Literals lits;
  if (!collect_literals(cur->child, lits)) return false;
  if (!lits.positive.empty() || !lits.equalities.empty()) return false;
  atoms = std::move(lits.negative);
  return !atoms.empty();
}

struct UnionFind {
  std::map<Term, Term> parent;

  Term find(const Term& t) {
    auto it = parent.find(t);
    if (it == parent.end()) return t;
    Term root = find(it->second);
    parent[t] = root;
    return root;
  }

  // Returns false when two distinct constants are merged.
  bool unite(const Term& a, const Term& b, const std::set<std::string>& free) {
    Term ra = find(a), rb = find(b);
    if (ra == rb) return true;
    if (ra.is_constant() && rb.is_constant()) return false;
    // Representative preference: constant, then free variable, then name order.
    auto rank = [&](const Term& t) {
      if (t.is_constant()) return 0;
      if (t.is_variable() && free.count(t.name)) return 1;
      return 2;
    };
    if (rank(rb) < rank(ra) || (rank(rb) == rank(ra) && rb < ra)) std::swap(ra, rb);
    parent[rb] = ra;
    return true;
  }
};

Atom substitute_identified(const Atom& a, UnionFind& uf) {
  Atom out = a;
  for (Term& t : out.terms) {
    if (t.is_variable()) t = uf.find(t);
  }
  return out;
}

}  // namespace

std::optional<NormalGuard> try_normalize(const Guard& g) {
  NormalGuard ng;
  ng.free = free_vars(g);

  std::vector<std::string> vars;
  std::vector<Atom> atoms;
  Literals lits;
  if (match_cna(g, vars, atoms)) {
    ng.polarity = PrefixPolarity::Universal;
    ng.quantified = std::move(vars);
    lits.negative = std::move(atoms);
  } else {
    Guard cur = g;
    while (cur->tag == GuardTag::Exists) {
      ng.quantified.push_back(cur->var);
      cur = cur->child;
    }
    if (!collect_literals(cur, lits)) return std::nullopt;
    if (ng.quantified.empty() && lits.positive.empty() && lits.equalities.empty() &&
        !lits.negative.empty()) {
      // Unquantified pure-negative conjunction: the degenerate CNA row.
      ng.polarity = PrefixPolarity::Universal;
    }
  }

  UnionFind uf;
  for (const auto& [l, r] : lits.equalities) {
    if (!uf.unite(l, r, ng.free)) {
      ng.unsat = true;
    }
  }
  std::set<std::string> eliminated;
  for (const auto& [t, _] : uf.parent) {
    Term rep = uf.find(t);
    if (t.is_variable() && rep != t) {
      ng.identified[t.name] = rep;
      eliminated.insert(t.name);
    }
  }
  for (const Atom& a : lits.positive) ng.positive.insert(substitute_identified(a, uf));
  for (const Atom& a : lits.negative) ng.negative.insert(substitute_identified(a, uf));
  std::erase_if(ng.quantified, [&](const std::string& v) { return eliminated.count(v) > 0; });
  return ng;
}

NormalGuard normalize(const Guard& g) {
  auto ng = try_normalize(g);
  if (!ng) throw NotNormalizable("guard is outside the Table-1 fragments: " + to_string(g));
  return *ng;
}

Fragment classify(const Guard& g) {
  auto ng = try_normalize(g);
  if (!ng) return Fragment::GeneralFOL;
  if (ng->polarity == PrefixPolarity::Universal) return Fragment::CNA;
  if (ng->negative.empty()) {
    return ng->quantified.empty() ? Fragment::PfCG : Fragment::CG;
  }
  return ng->quantified.empty() ? Fragment::PfNCG : Fragment::NCG;
}

bool is_safe(const NormalGuard& ng) {
  if (ng.polarity != PrefixPolarity::Existential) {
    throw DmsError("safety is defined for existential normal guards");
  }
  std::set<std::string> pos_vars;
  for (const Atom& a : ng.positive) {
    for (const Term& t : a.terms) {
      if (t.is_variable()) pos_vars.insert(t.name);
    }
  }
  for (const Atom& a : ng.negative) {
    for (const Term& t : a.terms) {
      if (t.is_variable() && !pos_vars.count(t.name)) return false;
    }
  }
  return true;
}

Guard rebuild(const NormalGuard& ng) {
  if (ng.polarity == PrefixPolarity::Universal) {
    return g_forall_not(ng.quantified, {ng.negative.begin(), ng.negative.end()});
  }
  std::vector<Guard> lits;
  for (const Atom& a : ng.positive) lits.push_back(g_atom(a));
  for (const Atom& a : ng.negative) lits.push_back(g_not(g_atom(a)));
  for (const auto& [v, rep] : ng.identified) lits.push_back(g_eq(Term::variable(v), rep));
  return g_exists(ng.quantified, g_and(lits));
}

}  // namespace dms
