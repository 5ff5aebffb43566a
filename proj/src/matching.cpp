// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/matching.hpp"

#include <algorithm>

namespace dms {

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += v + "->" + to_string(t);
  }
  out += "}";
  return out;
}

ConstantPool ConstantPool::of_names(const std::vector<std::string>& names, int fresh) {
  ConstantPool pool;
  pool.constants.reserve(names.size());
  for (const auto& n : names) pool.constants.push_back(Term::constant(n));
  pool.fresh_budget = fresh;
  return pool;
}

std::vector<Term> fresh_constants(std::size_t count, const std::set<Term>& avoid) {
  std::vector<Term> out;
  std::uint64_t i = 0;
  while (out.size() < count) {
    Term c = Term::constant("#f" + std::to_string(i++));
    if (!avoid.count(c)) out.push_back(c);
  }
  return out;
}

namespace {

Term subst_term(const Substitution& sigma, const Term& t, bool require_bound) {
  if (!t.is_variable()) return t;
  auto it = sigma.find(t.name);
  if (it == sigma.end()) {
    if (require_bound) throw UnboundVariable("variable " + t.name + " is unbound");
    return t;
  }
  return it->second;
}

bool sat(const Instance& inst, Substitution& sigma, const Guard& g,
         const std::vector<Term>& witnesses) {
  switch (g->tag) {
    case GuardTag::True:
      return true;
    case GuardTag::Atom: {
      Atom ground = g->atom;
      for (Term& t : ground.terms) t = subst_term(sigma, t, true);
      return inst.count(ground) > 0;
    }
    case GuardTag::Eq:
      return subst_term(sigma, g->lhs, true) == subst_term(sigma, g->rhs, true);
    case GuardTag::Not:
      return !sat(inst, sigma, g->child, witnesses);
    case GuardTag::And:
      return sat(inst, sigma, g->left, witnesses) && sat(inst, sigma, g->right, witnesses);
    case GuardTag::Exists: {
      auto prev = sigma.find(g->var);
      std::optional<Term> saved;
      if (prev != sigma.end()) saved = prev->second;
      for (const Term& w : witnesses) {
        sigma[g->var] = w;
        if (sat(inst, sigma, g->child, witnesses)) {
          if (saved) sigma[g->var] = *saved; else sigma.erase(g->var);
          return true;
        }
      }
      if (saved) sigma[g->var] = *saved; else sigma.erase(g->var);
      return false;
    }
  }
  return false;
}

std::vector<Term> witness_universe(const Instance& inst, const Substitution& sigma,
                                   const ConstantPool& pool) {
  std::set<Term> w = active_domain(inst);
  auto ns = nulls_of(inst);
  w.insert(ns.begin(), ns.end());
  w.insert(pool.constants.begin(), pool.constants.end());
  std::set<Term> avoid = w;
  for (const auto& [_, t] : sigma) avoid.insert(t);
  for (const Term& f : fresh_constants(static_cast<std::size_t>(std::max(pool.fresh_budget, 0)), avoid)) {
    w.insert(f);
  }
  return {w.begin(), w.end()};
}

}  // namespace

bool satisfies(const Instance& inst, const Substitution& sigma, const Guard& g,
               const ConstantPool& pool) {
  for (const std::string& v : free_vars(g)) {
    if (!sigma.count(v)) throw UnboundVariable("free variable " + v + " is unbound");
  }
  Substitution scratch = sigma;
  return sat(inst, scratch, g, witness_universe(inst, sigma, pool));
}

std::set<Substitution> matches(const Guard& g, const Instance& inst, const ConstantPool& pool) {
  std::vector<std::string> fv;
  for (const std::string& v : free_vars(g)) fv.push_back(v);

  std::set<Term> range = active_domain(inst);
  auto ns = nulls_of(inst);
  range.insert(ns.begin(), ns.end());
  range.insert(pool.constants.begin(), pool.constants.end());
  std::vector<Term> universe(range.begin(), range.end());

  std::set<Substitution> out;
  Substitution sigma;
  std::vector<Term> witnesses;  // computed once fv is fully bound; depends only on inst/pool
  auto wit = witness_universe(inst, {}, pool);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == fv.size()) {
      Substitution scratch = sigma;
      if (sat(inst, scratch, g, wit)) out.insert(sigma);
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

namespace {

struct HomSearch {
  const std::vector<Atom>& src;
  const Instance& dst;
  std::map<std::string, std::vector<Atom>> dst_by_pred;
  Homomorphism map;  // over src terms (vars and nulls; constants checked)
  std::uint64_t steps = 0;
  std::uint64_t budget;
  const std::function<bool(const Homomorphism&)>* visit = nullptr;
  bool stopped = false;
  bool found = false;

  HomSearch(const std::vector<Atom>& s, const Instance& d, std::uint64_t b)
      : src(s), dst(d), budget(b) {
    for (const Atom& a : d) dst_by_pred[a.pred].push_back(a);
  }

  bool term_compatible(const Term& s, const Term& t) const {
    if (s.is_constant()) return s == t;
    auto it = map.find(s);
    return it == map.end() || it->second == t;
  }

  // Number of candidate targets for an atom under the current partial map.
  std::size_t candidate_count(const Atom& a) const {
    auto it = dst_by_pred.find(a.pred);
    if (it == dst_by_pred.end()) return 0;
    std::size_t n = 0;
    for (const Atom& cand : it->second) {
      bool ok = true;
      for (std::size_t i = 0; i < a.terms.size() && ok; ++i) {
        ok = term_compatible(a.terms[i], cand.terms[i]);
      }
      if (ok) ++n;
    }
    return n;
  }

  // Returns true when the search should stop unwinding: a homomorphism was
  // found (find mode) or the visitor asked to stop (enumeration mode).
  bool search(std::vector<bool>& done) {
    if (++steps > budget) throw HomSearchTimeout("homomorphism search budget exceeded");
    // Select the pending atom with the fewest candidates (forward checking).
    std::size_t best = src.size();
    std::size_t best_count = SIZE_MAX;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (done[i]) continue;
      std::size_t c = candidate_count(src[i]);
      if (c < best_count) {
        best_count = c;
        best = i;
        if (c == 0) break;
      }
    }
    if (best == src.size()) {
      if (visit) {
        if (!(*visit)(map)) {
          stopped = true;
          return true;
        }
        return false;  // complete hom reported, keep enumerating
      }
      found = true;
      return true;
    }
    if (best_count == 0) return false;

    const Atom& a = src[best];
    done[best] = true;
    for (const Atom& cand : dst_by_pred[a.pred]) {
      std::vector<Term> newly;
      bool ok = true;
      for (std::size_t i = 0; i < a.terms.size() && ok; ++i) {
        const Term& s = a.terms[i];
        const Term& t = cand.terms[i];
        if (s.is_constant()) {
          ok = (s == t);
        } else if (auto it = map.find(s); it != map.end()) {
          ok = (it->second == t);
        } else {
          map[s] = t;
          newly.push_back(s);
        }
      }
      if (ok && search(done)) {
        done[best] = false;
        return true;  // keep `map` intact for the caller
      }
      for (const Term& s : newly) map.erase(s);
    }
    done[best] = false;
    return false;
  }
};

Homomorphism with_constant_identities(const std::vector<Atom>& src, Homomorphism h) {
  for (const Atom& a : src) {
    for (const Term& t : a.terms) {
      if (t.is_constant()) h[t] = t;
    }
  }
  return h;
}

}  // namespace

std::optional<Homomorphism> find_homomorphism(const Instance& src, const Instance& dst,
                                              const Homomorphism& fixed, const HomOptions& opts) {
  std::vector<Atom> atoms(src.begin(), src.end());
  HomSearch hs(atoms, dst, opts.step_budget);
  for (const auto& [s, t] : fixed) {
    if (s.is_constant() && s != t) return std::nullopt;
    if (!s.is_constant()) hs.map[s] = t;
  }
  std::vector<bool> done(atoms.size(), false);
  hs.search(done);
  if (hs.found) return with_constant_identities(atoms, hs.map);
  return std::nullopt;
}

bool for_each_homomorphism(const Instance& src, const Instance& dst, const Homomorphism& fixed,
                           const std::function<bool(const Homomorphism&)>& visit,
                           const HomOptions& opts) {
  std::vector<Atom> atoms(src.begin(), src.end());
  HomSearch hs(atoms, dst, opts.step_budget);
  for (const auto& [s, t] : fixed) {
    if (s.is_constant() && s != t) return false;
    if (!s.is_constant()) hs.map[s] = t;
  }
  auto wrapped = [&](const Homomorphism& h) { return visit(with_constant_identities(atoms, h)); };
  std::function<bool(const Homomorphism&)> w = wrapped;
  hs.visit = &w;
  std::vector<bool> done(atoms.size(), false);
  hs.search(done);
  return hs.stopped;
}

bool hom_leq(const Instance& i, const Instance& j, const HomOptions& opts) {
  return find_homomorphism(i, j, {}, opts).has_value();
}

bool hom_equiv(const Instance& i, const Instance& j, const HomOptions& opts) {
  return hom_leq(i, j, opts) && hom_leq(j, i, opts);
}

namespace {

Instance image_of(const Instance& inst, const Homomorphism& h) {
  Instance out;
  for (const Atom& a : inst) {
    Atom b = a;
    for (Term& t : b.terms) {
      auto it = h.find(t);
      if (it != h.end()) t = it->second;
    }
    out.insert(std::move(b));
  }
  return out;
}

// Cheap pass: retract one null onto another term of the instance.
bool greedy_single_null_step(Instance& inst) {
  std::set<Term> terms;
  for (const Atom& a : inst) terms.insert(a.terms.begin(), a.terms.end());
  for (const Term& n : nulls_of(inst)) {
    for (const Term& t : terms) {
      if (t == n) continue;
      Homomorphism h{{n, t}};
      Instance img = image_of(inst, h);
      bool endo = std::all_of(img.begin(), img.end(),
                              [&](const Atom& a) { return inst.count(a) > 0; });
      if (endo && img.size() < inst.size()) {
        inst = std::move(img);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Instance core(const Instance& inst, const HomOptions& opts) {
  Instance cur = inst;
  for (;;) {
    if (greedy_single_null_step(cur)) continue;
    // Full retraction search: any endomorphism with a strictly smaller image.
    std::optional<Instance> smaller;
    for_each_homomorphism(cur, cur, {}, [&](const Homomorphism& h) {
      Instance img = image_of(cur, h);
      if (img.size() < cur.size()) {
        smaller = std::move(img);
        return false;
      }
      return true;
    }, opts);
    if (!smaller) return cur;
    cur = std::move(*smaller);
  }
}

Atom apply(const Substitution& sigma, const Atom& atom) {
  Atom out = atom;
  for (Term& t : out.terms) t = subst_term(sigma, t, false);
  return out;
}

std::set<Atom> apply(const Substitution& sigma, const std::set<Atom>& atoms) {
  std::set<Atom> out;
  for (const Atom& a : atoms) out.insert(apply(sigma, a));
  return out;
}

Substitution extend_with_fresh_nulls(const Substitution& sigma, const std::set<std::string>& vars,
                                     FreshSource& nulls) {
  Substitution out = sigma;
  for (const std::string& v : vars) {
    if (sigma.count(v)) throw DmsError("extension variable " + v + " already bound");
    out[v] = Term::null(nulls.fresh());
  }
  return out;
}

std::vector<Substitution> extensions_with_constants(const Substitution& sigma,
                                                    const std::set<std::string>& vars,
                                                    const ConstantPool& pool,
                                                    const std::set<Term>& avoid) {
  for (const std::string& v : vars) {
    if (sigma.count(v)) throw DmsError("extension variable " + v + " already bound");
  }
  std::set<Term> avoid_all = avoid;
  for (const Term& c : pool.constants) avoid_all.insert(c);
  for (const auto& [_, t] : sigma) avoid_all.insert(t);

  std::vector<Term> range = pool.constants;
  for (const Term& f :
       fresh_constants(static_cast<std::size_t>(std::max(pool.fresh_budget, 0)), avoid_all)) {
    range.push_back(f);
  }

  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<Substitution> out;
  Substitution cur = sigma;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == vs.size()) {
      out.push_back(cur);
      return;
    }
    for (const Term& t : range) {
      cur[vs[k]] = t;
      rec(k + 1);
    }
    cur.erase(vs[k]);
  };
  rec(0);
  return out;
}

}  // namespace dms
