// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dms/engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dms {

std::set<std::string> Action::unbound_add_vars() const {
  std::set<std::string> fv = free_vars(guard);
  std::set<std::string> out;
  for (const Atom& a : add) {
    for (const Term& t : a.terms) {
      if (t.is_variable() && !fv.count(t.name)) out.insert(t.name);
    }
  }
  return out;
}

const Action* DmsSystem::find_action(const std::string& name) const {
  for (const Action& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

namespace {

void check_atoms_against_vocab(const std::set<Atom>& atoms, const std::set<PredicateSymbol>& vocab,
                               const std::string& where, std::vector<Diagnostic>& out) {
  for (const Atom& a : atoms) {
    PredicateSymbol p{a.pred, a.terms.size()};
    if (!vocab.count(p)) {
      out.push_back({where, "predicate " + a.pred + "/" + std::to_string(a.terms.size()) +
                                " is not in the vocabulary"});
    }
  }
}

std::set<Atom> guard_atoms(const Guard& g) {
  std::set<Atom> out;
  switch (g->tag) {
    case GuardTag::True:
    case GuardTag::Eq:
      break;
    case GuardTag::Atom:
      out.insert(g->atom);
      break;
    case GuardTag::Not:
      out = guard_atoms(g->child);
      break;
    case GuardTag::And: {
      out = guard_atoms(g->left);
      auto r = guard_atoms(g->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case GuardTag::Exists:
      out = guard_atoms(g->child);
      break;
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> validate(const DmsSystem& system) {
  std::vector<Diagnostic> out;
  if (!system.vocabulary.empty()) {
    check_atoms_against_vocab(system.initial, system.vocabulary, "init", out);
  }
  std::set<std::string> names;
  for (const Action& act : system.actions) {
    if (!names.insert(act.name).second) {
      out.push_back({act.name, "duplicate action name"});
    }
    std::set<std::string> fv = free_vars(act.guard);
    for (const Atom& a : act.del) {
      for (const Term& t : a.terms) {
        if (t.is_variable() && !fv.count(t.name)) {
          out.push_back({act.name, "del variable " + t.name + " is not bound by the guard"});
        }
      }
    }
    if (classify(act.guard) == Fragment::GeneralFOL) {
      out.push_back({act.name, "guard is outside the Table-1 fragments"});
    }
    if (!system.vocabulary.empty()) {
      check_atoms_against_vocab(guard_atoms(act.guard), system.vocabulary, act.name, out);
      check_atoms_against_vocab(act.del, system.vocabulary, act.name, out);
      check_atoms_against_vocab(act.add, system.vocabulary, act.name, out);
    }
  }
  return out;
}

std::string to_string(const Label& l) {
  return "<" + l.action + ", " + to_string(l.sigma) + ">";
}

bool label_compatible(const Label& abstract_label, const Label& concrete_label) {
  if (abstract_label.action != concrete_label.action) return false;
  std::map<Term, Term> inst;  // null -> constant
  for (const auto& [v, t] : abstract_label.sigma) {
    auto it = concrete_label.sigma.find(v);
    if (it == concrete_label.sigma.end()) return false;
    if (t.is_constant()) {
      if (it->second != t) return false;
    } else if (t.is_null()) {
      auto [pos, inserted] = inst.emplace(t, it->second);
      if (!inserted && pos->second != it->second) return false;
    } else {
      return false;
    }
  }
  return true;
}

std::string to_string(const LtsState& s) {
  if (std::holds_alternative<Instance>(s)) return to_string(std::get<Instance>(s));
  return to_string(std::get<AbstractState>(s));
}

std::vector<Transition> Lts::out_of(std::size_t state) const {
  std::vector<Transition> out;
  for (const Transition& t : transitions) {
    if (t.from == state) out.push_back(t);
  }
  return out;
}

namespace {

ConstantPool guard_check_pool(const Guard& g) {
  // Enough fresh witnesses for the quantifier prefix; absence witnesses only
  // need constants occurring in no instance.
  auto fv = free_vars(g);
  auto av = all_vars(g);
  int quantified = static_cast<int>(av.size() - fv.size());
  ConstantPool pool;
  pool.fresh_budget = quantified + 1;
  return pool;
}

}  // namespace

Database concrete_step(const Database& d, const Action& act, const Substitution& sigma_star) {
  std::set<std::string> needed = free_vars(act.guard);
  for (const Atom& a : act.add) {
    for (const Term& t : a.terms) {
      if (t.is_variable()) needed.insert(t.name);
    }
  }
  Substitution match_part;
  for (const std::string& v : needed) {
    auto it = sigma_star.find(v);
    if (it == sigma_star.end()) {
      throw IncompleteExtension("sigma* does not bind " + v);
    }
    if (!it->second.is_constant()) {
      throw IncompleteExtension("sigma* binds " + v + " to a non-constant");
    }
  }
  for (const std::string& v : free_vars(act.guard)) match_part[v] = sigma_star.at(v);
  if (!satisfies(d.atoms(), match_part, act.guard, guard_check_pool(act.guard))) {
    throw NotEnabled("action " + act.name + " is not enabled under " + to_string(match_part));
  }
  Instance next = d.atoms();
  for (const Atom& a : dms::apply(sigma_star, act.del)) next.erase(a);
  for (const Atom& a : dms::apply(sigma_star, act.add)) next.insert(a);
  return Database(next);
}

std::vector<std::pair<Label, Database>> concrete_successors(const Database& d,
                                                            const DmsSystem& system,
                                                            const ConstantPool& pool) {
  std::vector<std::pair<Label, Database>> out;
  std::set<Term> avoid = active_domain(d.atoms());
  for (const Action& act : system.actions) {
    for (const Substitution& sigma : matches(act.guard, d.atoms(), pool)) {
      for (const Substitution& star :
           extensions_with_constants(sigma, act.unbound_add_vars(), pool, avoid)) {
        out.emplace_back(Label{act.name, star}, concrete_step(d, act, star));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AbstractState abstract_step(const AbstractState& state, const Action& act,
                            const Substitution& sigma, FreshSource& nulls,
                            const ConstantPool& pool, bool enforce_fragment) {
  if (enforce_fragment) require_licensed(state.domain, act.guard);
  if (!abstract_match_holds(state, act.guard, sigma, pool)) {
    throw NotEnabled("action " + act.name + " is not abstractly enabled under " +
                     to_string(sigma));
  }
  // Fresh nulls must not collide with nulls already in the state.
  if (state.lower) nulls.bump_past(max_null_index(*state.lower));
  if (state.upper) nulls.bump_past(max_null_index(*state.upper));
  Substitution star = extend_with_fresh_nulls(sigma, act.unbound_add_vars(), nulls);
  auto step_component = [&](const Instance& comp) {
    Instance next = comp;
    for (const Atom& a : dms::apply(star, act.del)) next.erase(a);
    for (const Atom& a : dms::apply(star, act.add)) next.insert(a);
    return next;
  };
  AbstractState out;
  out.domain = state.domain;
  if (state.lower) out.lower = step_component(*state.lower);
  if (state.upper) out.upper = step_component(*state.upper);
  return canonical_state(out);
}

std::optional<std::vector<Database>> lifted_forall_step(const std::vector<Database>& c,
                                                        const Action& act,
                                                        const Substitution& sigma,
                                                        const Substitution& sigma_star,
                                                        const ConstantPool& pool) {
  for (const auto& [v, t] : sigma) {
    auto it = sigma_star.find(v);
    if (it == sigma_star.end() || it->second != t) {
      throw DmsError("sigma is not contained in sigma*");
    }
  }
  for (const Database& d : c) {
    if (!satisfies(d.atoms(), sigma, act.guard, pool)) return std::nullopt;
  }
  std::vector<Database> out;
  for (const Database& d : c) out.push_back(concrete_step(d, act, sigma_star));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct StateIndex {
  Dedup dedup;
  std::map<std::string, std::size_t> by_key;             // canonical rendering -> index
  std::map<std::string, std::vector<std::size_t>> by_profile;  // hom-equiv buckets

  // Constant atoms are invariant under hom-equivalence, so they bucket it.
  static std::string profile_of(const LtsState& s) {
    auto constants_only = [](const Instance& inst) {
      Instance out;
      for (const Atom& a : inst) {
        if (a.constant_only()) out.insert(a);
      }
      return out;
    };
    if (std::holds_alternative<Instance>(s)) {
      return to_string(constants_only(std::get<Instance>(s)));
    }
    const AbstractState& a = std::get<AbstractState>(s);
    std::string out;
    if (a.lower) out += "L" + to_string(constants_only(*a.lower));
    if (a.upper) out += "U" + to_string(constants_only(*a.upper));
    return out;
  }

  static bool equivalent(const LtsState& a, const LtsState& b) {
    if (std::holds_alternative<Instance>(a) != std::holds_alternative<Instance>(b)) return false;
    if (std::holds_alternative<Instance>(a)) {
      return hom_equiv(std::get<Instance>(a), std::get<Instance>(b));
    }
    const AbstractState& x = std::get<AbstractState>(a);
    const AbstractState& y = std::get<AbstractState>(b);
    if (x.domain != y.domain) return false;
    if (x.lower.has_value() != y.lower.has_value() ||
        x.upper.has_value() != y.upper.has_value()) {
      return false;
    }
    if (x.lower && !hom_equiv(*x.lower, *y.lower)) return false;
    if (x.upper && !hom_equiv(*x.upper, *y.upper)) return false;
    return true;
  }

  // Returns (index, inserted).
  std::pair<std::size_t, bool> find_or_insert(const LtsState& canon,
                                              std::vector<LtsState>& states) {
    std::string key = to_string(canon);
    if (auto it = by_key.find(key); it != by_key.end()) return {it->second, false};
    if (dedup == Dedup::HomEquiv) {
      std::string prof = profile_of(canon);
      for (std::size_t idx : by_profile[prof]) {
        if (equivalent(canon, states[idx])) {
          by_key.emplace(std::move(key), idx);
          return {idx, false};
        }
      }
    }
    std::size_t idx = states.size();
    states.push_back(canon);
    by_key.emplace(std::move(key), idx);
    by_profile[profile_of(canon)].push_back(idx);
    return {idx, true};
  }
};

LtsState canonical_lts_state(const LtsState& s) {
  if (std::holds_alternative<Instance>(s)) return canonicalize(std::get<Instance>(s));
  return canonical_state(std::get<AbstractState>(s));
}

}  // namespace

Lts explore(const DmsSystem& system, std::optional<DomainId> domain,
            const ExplorationConfig& config, FreshSource& nulls) {
  if (domain && !config.allow_unlicensed) {
    for (const Action& act : system.actions) require_licensed(*domain, act.guard);
  }

  Lts lts;
  lts.domain = domain;
  StateIndex index{config.dedup, {}, {}};

  LtsState root;
  if (domain) {
    root = alpha(*domain, {Database(system.initial)});
  } else {
    root = system.initial;  // Database invariant checked below
    if (!is_database(system.initial)) {
      throw DmsError("concrete exploration requires a null-free initial database");
    }
  }
  root = canonical_lts_state(root);
  auto [root_idx, _] = index.find_or_insert(root, lts.states);
  lts.initial = root_idx;

  std::deque<std::pair<std::size_t, std::size_t>> frontier;  // (state, depth)
  frontier.emplace_back(root_idx, 0);
  std::set<std::size_t> expanded;
  std::set<Transition> transitions;

  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (expanded.count(cur)) continue;
    if (depth >= config.max_depth) {
      lts.truncated = true;
      continue;
    }
    expanded.insert(cur);

    std::vector<std::pair<Label, LtsState>> succs;
    if (domain) {
      const AbstractState& st = std::get<AbstractState>(lts.states[cur]);
      for (const Action& act : system.actions) {
        for (const Substitution& sigma :
             abstract_matches(st, act.guard, config.pool, !config.allow_unlicensed)) {
          succs.emplace_back(Label{act.name, sigma},
                             abstract_step(st, act, sigma, nulls, config.pool,
                                           !config.allow_unlicensed));
        }
      }
    } else {
      const Instance& st = std::get<Instance>(lts.states[cur]);
      for (auto& [label, next] : concrete_successors(Database(st), system, config.pool)) {
        succs.emplace_back(label, next.atoms());
      }
    }

    for (auto& [label, next] : succs) {
      if (lts.states.size() >= config.max_states) {
        lts.truncated = true;
        break;
      }
      auto [idx, inserted] = index.find_or_insert(canonical_lts_state(next), lts.states);
      transitions.insert(Transition{cur, label, idx});
      if (inserted) frontier.emplace_back(idx, depth + 1);
    }
  }
  lts.transitions.assign(transitions.begin(), transitions.end());
  return lts;
}

ReachResult reachable(const DmsSystem& system, const std::string& target_action,
                      std::optional<DomainId> domain, const ExplorationConfig& config,
                      FreshSource& nulls) {
  const Action* target = system.find_action(target_action);
  if (!target) throw DmsError("unknown target action " + target_action);

  auto enables_target = [&](const LtsState& s) {
    if (domain) {
      return !abstract_matches(std::get<AbstractState>(s), target->guard, config.pool,
                               !config.allow_unlicensed)
                  .empty();
    }
    return !matches(target->guard, std::get<Instance>(s), config.pool).empty();
  };

  // Breadth-first search mirroring explore(), with parent links for traces.
  if (domain && !config.allow_unlicensed) {
    for (const Action& act : system.actions) require_licensed(*domain, act.guard);
  }
  Lts lts;
  lts.domain = domain;
  StateIndex index{config.dedup, {}, {}};
  LtsState root = domain
                      ? LtsState(alpha(*domain, {Database(system.initial)}))
                      : LtsState(system.initial);
  root = canonical_lts_state(root);
  auto [root_idx, _] = index.find_or_insert(root, lts.states);

  std::vector<std::optional<std::pair<std::size_t, Label>>> parent(1, std::nullopt);
  auto trace_to = [&](std::size_t idx) {
    std::vector<Label> trace;
    while (parent[idx]) {
      trace.push_back(parent[idx]->second);
      idx = parent[idx]->first;
    }
    std::reverse(trace.begin(), trace.end());
    return trace;
  };

  ReachResult result;
  std::deque<std::pair<std::size_t, std::size_t>> frontier;
  frontier.emplace_back(root_idx, 0);
  std::set<std::size_t> expanded;

  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (expanded.count(cur)) continue;
    expanded.insert(cur);

    if (enables_target(lts.states[cur])) {
      result.reached = true;
      result.trace = trace_to(cur);
      return result;
    }
    if (depth >= config.max_depth) {
      result.truncated = true;
      continue;
    }

    std::vector<std::pair<Label, LtsState>> succs;
    if (domain) {
      const AbstractState& st = std::get<AbstractState>(lts.states[cur]);
      for (const Action& act : system.actions) {
        for (const Substitution& sigma :
             abstract_matches(st, act.guard, config.pool, !config.allow_unlicensed)) {
          succs.emplace_back(Label{act.name, sigma},
                             abstract_step(st, act, sigma, nulls, config.pool,
                                           !config.allow_unlicensed));
        }
      }
    } else {
      const Instance& st = std::get<Instance>(lts.states[cur]);
      for (auto& [label, next] : concrete_successors(Database(st), system, config.pool)) {
        succs.emplace_back(label, next.atoms());
      }
    }

    for (auto& [label, next] : succs) {
      if (lts.states.size() >= config.max_states) {
        result.truncated = true;
        break;
      }
      auto [idx, inserted] = index.find_or_insert(canonical_lts_state(next), lts.states);
      if (inserted) {
        parent.push_back(std::make_pair(cur, label));
        frontier.emplace_back(idx, depth + 1);
      }
    }
  }
  return result;
}

std::optional<Database> replay_trace(const DmsSystem& system, const std::vector<Label>& trace,
                                     const ConstantPool& pool) {
  Database cur(system.initial);
  for (const Label& label : trace) {
    const Action* act = system.find_action(label.action);
    if (!act) return std::nullopt;
    // Abstract labels carry the match only; ground any null bindings and any
    // open add variables with pool constants, first extension that fires.
    std::vector<Substitution> candidates;
    bool has_null = std::any_of(label.sigma.begin(), label.sigma.end(),
                                [](const auto& kv) { return kv.second.is_null(); });
    if (has_null) {
      // Instantiate nulls consistently by every pool choice.
      std::set<Term> nulls;
      for (const auto& [_, t] : label.sigma) {
        if (t.is_null()) nulls.insert(t);
      }
      std::vector<Term> null_list(nulls.begin(), nulls.end());
      std::vector<Substitution> partial{{}};
      std::vector<std::map<Term, Term>> insts{{}};
      for (const Term& n : null_list) {
        std::vector<std::map<Term, Term>> next;
        for (const auto& m : insts) {
          for (const Term& c : pool.constants) {
            auto m2 = m;
            m2[n] = c;
            next.push_back(std::move(m2));
          }
        }
        insts = std::move(next);
      }
      for (const auto& m : insts) {
        Substitution s;
        for (const auto& [v, t] : label.sigma) s[v] = t.is_null() ? m.at(t) : t;
        candidates.push_back(std::move(s));
      }
    } else {
      candidates.push_back(label.sigma);
    }
    bool stepped = false;
    for (const Substitution& sigma : candidates) {
      for (const Substitution& star :
           extensions_with_constants(sigma, act->unbound_add_vars(), pool,
                                     active_domain(cur.atoms()))) {
        try {
          cur = concrete_step(cur, *act, star);
          stepped = true;
          break;
        } catch (const NotEnabled&) {
        } catch (const IncompleteExtension&) {
        }
      }
      if (stepped) break;
    }
    if (!stepped) return std::nullopt;
  }
  return cur;
}

std::string to_dot(const Lts& lts) {
  std::ostringstream out;
  out << "digraph lts {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    out << "  s" << i << " [label=\"" << to_string(lts.states[i]) << "\""
        << (i == lts.initial ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const Transition& t : lts.transitions) {
    out << "  s" << t.from << " -> s" << t.to << " [label=\"" << t.label.action << " "
        << to_string(t.label.sigma) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace dms
