// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/domains.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace dms {

std::string to_string(DomainId d) {
  switch (d) {
    case DomainId::Union: return "union";
    case DomainId::Intersection: return "inter";
    case DomainId::Pair: return "pair";
    case DomainId::NullJoin: return "null-join";
    case DomainId::NullMeet: return "null-meet";
    case DomainId::NullPair: return "null-pair";
  }
  return {};
}

std::optional<DomainId> parse_domain(const std::string& name) {
  for (DomainId d : {DomainId::Union, DomainId::Intersection, DomainId::Pair, DomainId::NullJoin,
                     DomainId::NullMeet, DomainId::NullPair}) {
    if (to_string(d) == name) return d;
  }
  return std::nullopt;
}

bool uses_lower(DomainId d) {
  return d == DomainId::Intersection || d == DomainId::NullMeet || d == DomainId::Pair ||
         d == DomainId::NullPair;
}

bool uses_upper(DomainId d) {
  return d == DomainId::Union || d == DomainId::NullJoin || d == DomainId::Pair ||
         d == DomainId::NullPair;
}

AbstractState AbstractState::single(DomainId d, Instance inst) {
  AbstractState s;
  s.domain = d;
  if (uses_lower(d) && uses_upper(d)) throw DmsError("pair domain needs two components");
  if (uses_lower(d)) s.lower = std::move(inst);
  else s.upper = std::move(inst);
  return s;
}

AbstractState AbstractState::pair(DomainId d, Instance lower, Instance upper) {
  if (!uses_lower(d) || !uses_upper(d)) throw DmsError("not a pair domain: " + to_string(d));
  AbstractState s;
  s.domain = d;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

const Instance& AbstractState::component() const {
  if (lower && upper) throw DmsError("component() on a pair state");
  if (lower) return *lower;
  if (upper) return *upper;
  throw DmsError("empty abstract state");
}

std::string to_string(const AbstractState& s) {
  std::string out = to_string(s.domain) + ":";
  if (s.lower && s.upper) {
    out += "(" + to_string(*s.lower) + ", " + to_string(*s.upper) + ")";
  } else {
    out += to_string(s.component());
  }
  return out;
}

AbstractState canonical_state(const AbstractState& s) {
  if (!(s.lower && s.upper)) {
    AbstractState out = s;
    if (out.lower) out.lower = canonicalize(*out.lower);
    if (out.upper) out.upper = canonicalize(*out.upper);
    return out;
  }
  // Tag atoms with a component marker, canonicalize jointly, then split, so
  // nulls shared between the components keep a common renumbering.
  Instance tagged;
  for (const Atom& a : *s.lower) {
    Atom b = a;
    b.pred = "0!" + b.pred;
    tagged.insert(std::move(b));
  }
  for (const Atom& a : *s.upper) {
    Atom b = a;
    b.pred = "1!" + b.pred;
    tagged.insert(std::move(b));
  }
  Instance canon = canonicalize(tagged);
  AbstractState out;
  out.domain = s.domain;
  out.lower = Instance{};
  out.upper = Instance{};
  for (const Atom& a : canon) {
    Atom b = a;
    bool low = b.pred[0] == '0';
    b.pred = b.pred.substr(2);
    (low ? *out.lower : *out.upper).insert(std::move(b));
  }
  return out;
}

Instance lattice_join(const Instance& i, const Instance& j) {
  Instance out = i;
  Instance shifted = has_nulls(i) ? shift_nulls(j, max_null_index(i) + 1) : j;
  out.insert(shifted.begin(), shifted.end());
  return out;
}

Instance lattice_meet(const Instance& i, const Instance& j) {
  std::map<std::pair<Term, Term>, Term> pair_null;
  auto pair_term = [&](const Term& u, const Term& v) {
    if (u == v && u.is_constant()) return u;
    auto it = pair_null.find({u, v});
    if (it != pair_null.end()) return it->second;
    Term n = Term::null(pair_null.size());
    pair_null.emplace(std::make_pair(u, v), n);
    return n;
  };
  Instance product;
  for (const Atom& a : i) {
    for (const Atom& b : j) {
      if (a.pred != b.pred || a.terms.size() != b.terms.size()) continue;
      Atom p;
      p.pred = a.pred;
      p.terms.reserve(a.terms.size());
      for (std::size_t k = 0; k < a.terms.size(); ++k) {
        p.terms.push_back(pair_term(a.terms[k], b.terms[k]));
      }
      product.insert(std::move(p));
    }
  }
  return canonicalize(core(product));
}

AbstractState alpha(DomainId domain, const std::vector<Database>& c) {
  if (c.empty()) throw EmptyInput("alpha of the empty set is rejected");

  auto set_union = [&]() {
    Instance u;
    for (const Database& d : c) u.insert(d.atoms().begin(), d.atoms().end());
    return u;
  };
  auto set_inter = [&]() {
    Instance m = c.front().atoms();
    for (std::size_t k = 1; k < c.size(); ++k) {
      Instance next;
      for (const Atom& a : m) {
        if (c[k].atoms().count(a)) next.insert(a);
      }
      m = std::move(next);
    }
    return m;
  };
  auto fold_join = [&]() {
    Instance u = c.front().atoms();
    for (std::size_t k = 1; k < c.size(); ++k) u = lattice_join(u, c[k].atoms());
    return canonicalize(u);
  };
  auto fold_meet = [&]() {
    Instance m = c.front().atoms();
    for (std::size_t k = 1; k < c.size(); ++k) m = lattice_meet(m, c[k].atoms());
    return canonicalize(core(m));
  };

  switch (domain) {
    case DomainId::Union:
      return AbstractState::single(domain, set_union());
    case DomainId::Intersection:
      return AbstractState::single(domain, set_inter());
    case DomainId::Pair:
      return AbstractState::pair(domain, set_inter(), set_union());
    case DomainId::NullJoin:
      return AbstractState::single(domain, fold_join());
    case DomainId::NullMeet:
      return AbstractState::single(domain, fold_meet());
    case DomainId::NullPair: {
      Instance lower = fold_meet();
      Instance upper = fold_join();
      // Keep the components' null spaces apart; only steps share nulls.
      if (has_nulls(lower)) upper = shift_nulls(upper, max_null_index(lower) + 1);
      return AbstractState::pair(domain, std::move(lower), std::move(upper));
    }
  }
  throw DmsError("unknown domain");
}

bool gamma_contains(const AbstractState& state, const Database& d) {
  const Instance& db = d.atoms();
  auto subset = [](const Instance& a, const Instance& b) {
    return std::all_of(a.begin(), a.end(), [&](const Atom& x) { return b.count(x) > 0; });
  };
  switch (state.domain) {
    case DomainId::Union:
      return subset(db, *state.upper);
    case DomainId::Intersection:
      return subset(*state.lower, db);
    case DomainId::Pair:
      return subset(*state.lower, db) && subset(db, *state.upper);
    case DomainId::NullJoin:
      return hom_leq(db, *state.upper);
    case DomainId::NullMeet:
      return hom_leq(*state.lower, db);
    case DomainId::NullPair:
      return hom_leq(*state.lower, db) && hom_leq(db, *state.upper);
  }
  return false;
}

std::vector<Database> gamma_enumerate(const AbstractState& state, const ConstantPool& pool,
                                      std::size_t max_atoms) {
  std::set<PredicateSymbol> preds;
  auto collect = [&](const Instance& inst) {
    for (const Atom& a : inst) preds.insert({a.pred, a.terms.size()});
  };
  if (state.lower) collect(*state.lower);
  if (state.upper) collect(*state.upper);

  std::vector<Atom> candidates;
  for (const PredicateSymbol& p : preds) {
    std::vector<Term> args(p.arity, Term{});
    std::function<void(std::size_t)> build = [&](std::size_t k) {
      if (k == p.arity) {
        candidates.push_back(Atom{p.name, args});
        return;
      }
      for (const Term& c : pool.constants) {
        args[k] = c;
        build(k + 1);
      }
    };
    build(0);
  }

  std::vector<Database> out;
  Instance cur;
  std::function<void(std::size_t)> subsets = [&](std::size_t k) {
    if (cur.size() <= max_atoms) {
      Database d(cur);
      if (gamma_contains(state, d)) out.push_back(d);
    }
    if (k == candidates.size() || cur.size() >= max_atoms) return;
    for (std::size_t i = k; i < candidates.size(); ++i) {
      cur.insert(candidates[i]);
      subsets(i + 1);
      cur.erase(candidates[i]);
    }
  };
  subsets(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool state_leq(const AbstractState& a, const AbstractState& b) {
  if (a.domain != b.domain) {
    throw DomainMismatch("state_leq across domains " + to_string(a.domain) + " and " +
                         to_string(b.domain));
  }
  auto subset = [](const Instance& x, const Instance& y) {
    return std::all_of(x.begin(), x.end(), [&](const Atom& t) { return y.count(t) > 0; });
  };
  switch (a.domain) {
    case DomainId::Union:
      return subset(*a.upper, *b.upper);
    case DomainId::Intersection:
      return subset(*b.lower, *a.lower);
    case DomainId::Pair:
      return subset(*b.lower, *a.lower) && subset(*a.upper, *b.upper);
    case DomainId::NullJoin:
      return hom_leq(*a.upper, *b.upper);
    case DomainId::NullMeet:
      return hom_leq(*b.lower, *a.lower);
    case DomainId::NullPair:
      return hom_leq(*b.lower, *a.lower) && hom_leq(*a.upper, *b.upper);
  }
  return false;
}

bool licensed(DomainId d, const Guard& g) {
  auto ng = try_normalize(g);
  if (!ng) return false;
  bool trivial = ng->positive.empty() && ng->negative.empty();
  bool cna_shaped = ng->positive.empty() &&
                    (ng->polarity == PrefixPolarity::Universal ||
                     (ng->negative.empty() && ng->quantified.empty()));
  switch (d) {
    case DomainId::Union:
    case DomainId::NullJoin:
      return cna_shaped;
    case DomainId::Intersection:
      return trivial ||
             (ng->negative.empty() && ng->quantified.empty() &&
              ng->polarity == PrefixPolarity::Existential);
    case DomainId::Pair:
      return ng->quantified.empty();
    case DomainId::NullMeet:
      return trivial || (ng->negative.empty() && ng->polarity == PrefixPolarity::Existential);
    case DomainId::NullPair:
      return !(ng->polarity == PrefixPolarity::Universal && !ng->quantified.empty());
  }
  return false;
}

void require_licensed(DomainId d, const Guard& g) {
  if (!licensed(d, g)) throw FragmentViolation(d, classify(g));
}

namespace {

bool identified_consistent(const NormalGuard& ng, const Substitution& sigma) {
  for (const auto& [v, rep] : ng.identified) {
    auto it = sigma.find(v);
    if (it == sigma.end()) continue;  // quantified side, no free constraint
    if (rep.is_constant()) {
      if (it->second != rep) return false;
    } else if (rep.is_variable()) {
      auto jt = sigma.find(rep.name);
      if (jt != sigma.end() && jt->second != it->second) return false;
    }
  }
  return true;
}

bool pair_match_holds(const AbstractState& state, const Guard& g, const Substitution& sigma,
                      const ConstantPool& pool) {
  NormalGuard ng = normalize(g);
  if (ng.unsat) return false;
  if (!identified_consistent(ng, sigma)) return false;

  std::vector<Guard> pos;
  for (const Atom& a : ng.positive) pos.push_back(g_atom(a));
  Guard gpos = g_exists(ng.quantified, g_and(pos));

  Guard gneg;
  if (ng.polarity == PrefixPolarity::Universal) {
    gneg = g_forall_not(ng.quantified, {ng.negative.begin(), ng.negative.end()});
  } else {
    std::vector<Guard> neg;
    for (const Atom& a : ng.negative) neg.push_back(g_not(g_atom(a)));
    gneg = g_exists(ng.quantified, g_and(neg));
  }

  Substitution spos, sneg;
  for (const std::string& v : free_vars(gpos)) {
    auto it = sigma.find(v);
    if (it == sigma.end()) throw UnboundVariable("free variable " + v + " is unbound");
    spos[v] = it->second;
  }
  for (const std::string& v : free_vars(gneg)) {
    auto it = sigma.find(v);
    if (it == sigma.end()) throw UnboundVariable("free variable " + v + " is unbound");
    sneg[v] = it->second;
  }
  return satisfies(*state.lower, spos, gpos, pool) && satisfies(*state.upper, sneg, gneg, pool);
}

}  // namespace

bool abstract_match_holds(const AbstractState& state, const Guard& g, const Substitution& sigma,
                          const ConstantPool& pool) {
  switch (state.domain) {
    case DomainId::Union:
    case DomainId::NullJoin:
      return satisfies(*state.upper, sigma, g, pool);
    case DomainId::Intersection:
    case DomainId::NullMeet:
      return satisfies(*state.lower, sigma, g, pool);
    case DomainId::Pair:
    case DomainId::NullPair:
      return pair_match_holds(state, g, sigma, pool);
  }
  return false;
}

std::set<Substitution> abstract_matches(const AbstractState& state, const Guard& g,
                                        const ConstantPool& pool, bool enforce_fragment) {
  if (enforce_fragment) require_licensed(state.domain, g);

  std::set<Term> range;
  auto widen = [&](const Instance& inst) {
    auto ad = active_domain(inst);
    range.insert(ad.begin(), ad.end());
    auto ns = nulls_of(inst);
    range.insert(ns.begin(), ns.end());
  };
  if (state.lower) widen(*state.lower);
  if (state.upper) widen(*state.upper);
  range.insert(pool.constants.begin(), pool.constants.end());

  std::vector<std::string> fv;
  for (const std::string& v : free_vars(g)) fv.push_back(v);
  std::vector<Term> universe(range.begin(), range.end());

  std::set<Substitution> out;
  Substitution sigma;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == fv.size()) {
      if (abstract_match_holds(state, g, sigma, pool)) out.insert(sigma);
      return;
    }
    for (const Term& t : universe) {
      sigma[fv[k]] = t;
      rec(k + 1);
    }
    sigma.erase(fv[k]);
  };
  rec(0);
  return out;
}

}  // namespace dms
