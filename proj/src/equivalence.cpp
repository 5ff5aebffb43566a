// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/equivalence.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace dms {

std::string to_string(const CheckReport& r) {
  if (r.holds) {
    return "holds (depth " + std::to_string(r.explored_depth) + ", " +
           std::to_string(r.samples) + " checks)";
  }
  std::string out = "fails: " + r.reason;
  if (r.label) out += " at label " + to_string(*r.label);
  if (!r.pair.empty()) out += " on " + r.pair;
  return out;
}

std::vector<std::size_t> largest_bisimulation(const Lts& lts) {
  std::vector<std::size_t> block(lts.states.size(), 0);
  if (lts.states.empty()) return block;

  std::map<Label, std::size_t> label_id;
  for (const Transition& t : lts.transitions) {
    label_id.emplace(t.label, label_id.size());
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // Signature: the set of (label, target block) pairs.
    std::map<std::size_t, std::set<std::pair<std::size_t, std::size_t>>> sig;
    for (const Transition& t : lts.transitions) {
      sig[t.from].insert({label_id.at(t.label), block[t.to]});
    }
    std::map<std::pair<std::size_t, std::string>, std::size_t> renumber;
    std::vector<std::size_t> next(lts.states.size());
    for (std::size_t s = 0; s < lts.states.size(); ++s) {
      std::ostringstream key;
      for (auto& [l, b] : sig[s]) key << l << ":" << b << ";";
      auto [it, _] = renumber.emplace(std::make_pair(block[s], key.str()), renumber.size());
      next[s] = it->second;
    }
    if (next != block) {
      block = std::move(next);
      changed = true;
    }
  }
  return block;
}

bool simulates(const Lts& lts, std::size_t p, std::size_t q) {
  const std::size_t n = lts.states.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));

  std::map<std::size_t, std::vector<Transition>> out;
  for (const Transition& t : lts.transitions) out[t.from].push_back(t);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!rel[a][b]) continue;
        // (a,b) survives iff every a-step has a matching b-step.
        bool ok = true;
        for (const Transition& ta : out[a]) {
          bool matched = false;
          for (const Transition& tb : out[b]) {
            if (tb.label == ta.label && rel[ta.to][tb.to]) {
              matched = true;
              break;
            }
          }
          if (!matched) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          rel[a][b] = false;
          changed = true;
        }
      }
    }
  }
  return rel[p][q];
}

namespace {

bool is_null_game_domain(DomainId d) {
  return d == DomainId::NullMeet || d == DomainId::NullPair;
}

std::vector<Term> shared_constant_universe(const AbstractState& state,
                                           const std::vector<Database>& c,
                                           const ConstantPool& pool) {
  std::set<Term> u;
  auto widen = [&](const Instance& inst) {
    auto ad = active_domain(inst);
    u.insert(ad.begin(), ad.end());
  };
  if (state.lower) widen(*state.lower);
  if (state.upper) widen(*state.upper);
  for (const Database& d : c) widen(d.atoms());
  u.insert(pool.constants.begin(), pool.constants.end());
  return {u.begin(), u.end()};
}

std::set<Substitution> constant_matches_on(const std::function<bool(const Substitution&)>& holds,
                                           const std::vector<std::string>& fv,
                                           const std::vector<Term>& universe) {
  std::set<Substitution> out;
  Substitution sigma;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == fv.size()) {
      if (holds(sigma)) out.insert(sigma);
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

struct BisimGame {
  const DmsSystem& system;
  const ExplorationConfig& config;
  FreshSource nulls;
  std::size_t samples = 0;
  std::map<std::string, std::size_t> memo;  // pair key -> verified depth

  CheckReport fail(const AbstractState& a, const std::vector<Database>& c, const Label& label,
                   const std::string& reason) {
    CheckReport r;
    r.holds = false;
    r.reason = reason;
    r.label = label;
    std::string cs = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) cs += ", ";
      cs += to_string(c[i].atoms());
    }
    cs += "}";
    r.pair = "(" + to_string(a) + ", " + cs + ")";
    r.samples = samples;
    return r;
  }

  static std::string key_of(const AbstractState& a, const std::vector<Database>& c) {
    std::string k = to_string(canonical_state(a)) + "|";
    std::vector<std::string> members;
    for (const Database& d : c) members.push_back(to_string(d.atoms()));
    std::sort(members.begin(), members.end());
    for (auto& m : members) k += m + ";";
    return k;
  }

  Instance const_step_component(const Instance& comp, const Action& act,
                                const Substitution& star) {
    Instance next = comp;
    for (const Atom& a : dms::apply(star, act.del)) next.erase(a);
    for (const Atom& a : dms::apply(star, act.add)) next.insert(a);
    return next;
  }

  std::optional<CheckReport> play(const AbstractState& a, const std::vector<Database>& c,
                                  std::size_t depth) {
    std::string key = key_of(a, c);
    if (auto it = memo.find(key); it != memo.end() && it->second >= depth) return std::nullopt;

    for (const Action& act : system.actions) {
      if (!config.allow_unlicensed) require_licensed(a.domain, act.guard);

      std::vector<std::string> fv;
      for (const std::string& v : free_vars(act.guard)) fv.push_back(v);
      std::vector<Term> universe = shared_constant_universe(a, c, config.pool);

      auto abs_holds = [&](const Substitution& s) {
        return abstract_match_holds(a, act.guard, s, config.pool);
      };
      auto con_holds = [&](const Substitution& s) {
        return std::all_of(c.begin(), c.end(), [&](const Database& d) {
          return satisfies(d.atoms(), s, act.guard, config.pool);
        });
      };
      std::set<Substitution> m_abs = constant_matches_on(abs_holds, fv, universe);
      std::set<Substitution> m_con = constant_matches_on(con_holds, fv, universe);
      ++samples;

      if (m_abs != m_con) {
        std::vector<Substitution> diff;
        std::set_symmetric_difference(m_abs.begin(), m_abs.end(), m_con.begin(), m_con.end(),
                                      std::back_inserter(diff));
        const Substitution& w = diff.front();
        bool abstract_only = m_abs.count(w) > 0;
        return fail(a, c, Label{act.name, w},
                    abstract_only ? "abstractly enabled but not enabled on every member"
                                  : "enabled on every member but not abstractly enabled");
      }
      if (depth == 0) continue;

      std::set<std::string> open = act.unbound_add_vars();
      ConstantPool ext_pool;
      ext_pool.constants = universe;
      ext_pool.fresh_budget = std::max(config.pool.fresh_budget, open.empty() ? 0 : 2);

      for (const Substitution& sigma : m_abs) {
        std::vector<Substitution> extensions =
            extensions_with_constants(sigma, open, ext_pool, {});

        if (is_null_game_domain(a.domain)) {
          // Fresh-null abstract step; the concrete side aggregates every
          // extension. The upper component of a pair collects all add
          // instantiations so it stays the exact union of the members.
          if (a.lower) nulls.bump_past(max_null_index(*a.lower));
          if (a.upper) nulls.bump_past(max_null_index(*a.upper));
          Substitution star_null = extend_with_fresh_nulls(sigma, open, nulls);
          AbstractState a2;
          a2.domain = a.domain;
          if (a.lower) {
            a2.lower = const_step_component(*a.lower, act, star_null);
          }
          if (a.upper) {
            Instance up = *a.upper;
            for (const Atom& atom : dms::apply(sigma, act.del)) up.erase(atom);
            for (const Substitution& star : extensions) {
              for (const Atom& atom : dms::apply(star, act.add)) up.insert(atom);
            }
            a2.upper = std::move(up);
          }
          std::set<Database> agg;
          for (const Substitution& star : extensions) {
            for (const Database& d : c) {
              Database next = concrete_step(d, act, star);
              agg.insert(next);
            }
          }
          std::vector<Database> c2(agg.begin(), agg.end());
          if (auto r = play(a2, c2, depth - 1)) return r;
        } else {
          for (const Substitution& star : extensions) {
            AbstractState a2;
            a2.domain = a.domain;
            if (a.lower) a2.lower = const_step_component(*a.lower, act, star);
            if (a.upper) a2.upper = const_step_component(*a.upper, act, star);
            std::set<Database> next_set;
            for (const Database& d : c) next_set.insert(concrete_step(d, act, star));
            std::vector<Database> c2(next_set.begin(), next_set.end());
            AbstractState expect = alpha(a.domain, c2);
            if (!(expect.lower == a2.lower && expect.upper == a2.upper)) {
              return fail(a, c, Label{act.name, star},
                          "abstract successor differs from the abstraction of the lifted step");
            }
            if (auto r = play(a2, c2, depth - 1)) return r;
          }
        }
      }
    }
    std::size_t& best = memo[key];
    best = std::max(best, depth);
    return std::nullopt;
  }
};

}  // namespace

CheckReport check_forall_bisim(const AbstractState& state, const std::vector<Database>& c,
                               const DmsSystem& system, const ExplorationConfig& config,
                               std::size_t depth) {
  BisimGame game{system, config, FreshSource{}, 0, {}};
  if (state.lower) game.nulls.bump_past(max_null_index(*state.lower));
  if (state.upper) game.nulls.bump_past(max_null_index(*state.upper));
  if (auto r = game.play(state, c, depth)) {
    r->explored_depth = depth;
    return *r;
  }
  CheckReport r;
  r.holds = true;
  r.explored_depth = depth;
  r.samples = game.samples;
  return r;
}

namespace {

struct RandomUniverse {
  std::vector<PredicateSymbol> preds;
  std::vector<Term> constants;
  std::vector<Atom> all_atoms;
};

RandomUniverse sample_universe(std::mt19937_64& rng, const GaloisSpec& spec) {
  RandomUniverse u;
  static const std::vector<std::string> pred_names{"p", "q", "r"};
  static const std::vector<std::string> const_names{"A", "B", "C", "D"};
  std::uniform_int_distribution<std::size_t> npred(1, std::max<std::size_t>(1, spec.max_preds));
  std::uniform_int_distribution<std::size_t> nconst(1, std::max<std::size_t>(1, spec.max_pool));
  std::size_t np = npred(rng);
  std::size_t nc = nconst(rng);
  for (std::size_t i = 0; i < np && i < pred_names.size(); ++i) {
    std::uniform_int_distribution<std::size_t> arity(1, std::max<std::size_t>(1, spec.max_arity));
    u.preds.push_back({pred_names[i], arity(rng)});
  }
  for (std::size_t i = 0; i < nc && i < const_names.size(); ++i) {
    u.constants.push_back(Term::constant(const_names[i]));
  }
  for (const PredicateSymbol& p : u.preds) {
    std::vector<Term> args(p.arity);
    std::function<void(std::size_t)> build = [&](std::size_t k) {
      if (k == p.arity) {
        u.all_atoms.push_back(Atom{p.name, args});
        return;
      }
      for (const Term& c : u.constants) {
        args[k] = c;
        build(k + 1);
      }
    };
    build(0);
  }
  return u;
}

Database sample_database(std::mt19937_64& rng, const RandomUniverse& u, std::size_t max_atoms) {
  std::uniform_int_distribution<std::size_t> natoms(0, max_atoms);
  std::uniform_int_distribution<std::size_t> pick(0, u.all_atoms.empty() ? 0 : u.all_atoms.size() - 1);
  Instance inst;
  std::size_t n = natoms(rng);
  for (std::size_t i = 0; i < n && !u.all_atoms.empty(); ++i) inst.insert(u.all_atoms[pick(rng)]);
  return Database(inst);
}

}  // namespace

CheckReport check_galois_with(DomainId domain, const GaloisSpec& spec, const AlphaFn& alpha_fn) {
  std::mt19937_64 rng(spec.seed);
  CheckReport report;
  report.holds = true;

  for (std::size_t s = 0; s < spec.samples; ++s) {
    RandomUniverse u = sample_universe(rng, spec);
    std::uniform_int_distribution<std::size_t> nset(1, std::max<std::size_t>(1, spec.max_set));
    std::vector<Database> c;
    std::size_t n = nset(rng);
    for (std::size_t i = 0; i < n; ++i) c.push_back(sample_database(rng, u, spec.max_atoms));

    AbstractState a = alpha_fn(domain, c);

    // Law (2), exact: every member is concretized back.
    for (const Database& d : c) {
      ++report.samples;
      if (!gamma_contains(a, d)) {
        report.holds = false;
        report.reason = "law (2) violated: member " + to_string(d.atoms()) +
                        " not contained in gamma of " + to_string(a);
        return report;
      }
    }

    // Law (1), sampled monotonicity: C subset-of C' implies alpha(C) <= alpha(C').
    std::vector<Database> c_bigger = c;
    std::uniform_int_distribution<std::size_t> extra(1, 2);
    std::size_t more = extra(rng);
    for (std::size_t i = 0; i < more; ++i) c_bigger.push_back(sample_database(rng, u, spec.max_atoms));
    ++report.samples;
    if (!state_leq(a, alpha_fn(domain, c_bigger))) {
      report.holds = false;
      report.reason = "law (1) violated: alpha not monotone under C within C'";
      return report;
    }

    // Law (3), bounded optimality: alpha of the bounded concretization stays
    // below the state.
    ConstantPool pool;
    pool.constants = u.constants;
    std::size_t state_atoms = 0;
    if (a.lower) state_atoms = std::max(state_atoms, a.lower->size());
    if (a.upper) state_atoms = std::max(state_atoms, a.upper->size());
    std::size_t bound = std::min<std::size_t>(state_atoms + 1, 3);
    std::vector<Database> g = gamma_enumerate(a, pool, bound);
    if (!g.empty()) {
      ++report.samples;
      if (!state_leq(alpha_fn(domain, g), a)) {
        report.holds = false;
        report.reason = "law (3) violated: alpha of bounded gamma is not below the state";
        return report;
      }
    }
  }
  return report;
}

CheckReport check_galois(DomainId domain, const GaloisSpec& spec) {
  return check_galois_with(domain, spec,
                           [](DomainId d, const std::vector<Database>& c) { return alpha(d, c); });
}

}  // namespace dms
