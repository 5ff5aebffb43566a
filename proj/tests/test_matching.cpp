// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "dms/matching.hpp"

using namespace dms;

namespace {

Term A() { return Term::constant("A"); }
Term B() { return Term::constant("B"); }
Term C() { return Term::constant("C"); }
Term vx() { return Term::variable("x"); }
Term vy() { return Term::variable("y"); }

Atom p1(Term t) { return Atom{"P", {t}}; }
Atom f2(Term a, Term b) { return Atom{"F", {a, b}}; }

Instance d_e() {
  return {p1(A()), p1(B()), p1(C()), f2(A(), B()), f2(B(), A()), f2(A(), C())};
}

Guard g_sf() { return g_and(g_atom(f2(vx(), vy())), g_atom(f2(vy(), vx()))); }
Guard g_df() { return g_and(g_atom(f2(vx(), vy())), g_not(g_atom(f2(vy(), vx())))); }
Guard g_af() { return g_exists("y", g_atom(f2(vx(), vy()))); }
Guard g_nf() { return g_and(g_not(g_atom(f2(vx(), vy()))), g_not(g_atom(f2(vy(), vx())))); }

Substitution sub(std::initializer_list<std::pair<std::string, Term>> bs) {
  Substitution s;
  for (auto& [v, t] : bs) s[v] = t;
  return s;
}

// Independent oracle for guard matches: direct recursive evaluation of the
// satisfaction clauses over an explicitly given witness universe.
bool oracle_sat(const Instance& inst, std::map<std::string, Term> env, const Guard& g,
                const std::vector<Term>& universe) {
  switch (g->tag) {
    case GuardTag::True:
      return true;
    case GuardTag::Atom: {
      Atom a = g->atom;
      for (Term& t : a.terms) {
        if (t.is_variable()) t = env.at(t.name);
      }
      return inst.count(a) > 0;
    }
    case GuardTag::Eq: {
      Term l = g->lhs.is_variable() ? env.at(g->lhs.name) : g->lhs;
      Term r = g->rhs.is_variable() ? env.at(g->rhs.name) : g->rhs;
      return l == r;
    }
    case GuardTag::Not:
      return !oracle_sat(inst, env, g->child, universe);
    case GuardTag::And:
      return oracle_sat(inst, env, g->left, universe) &&
             oracle_sat(inst, env, g->right, universe);
    case GuardTag::Exists:
      for (const Term& w : universe) {
        auto e = env;
        e[g->var] = w;
        if (oracle_sat(inst, e, g->child, universe)) return true;
      }
      return false;
  }
  return false;
}

std::set<Substitution> oracle_matches(const Guard& g, const Instance& inst,
                                      const ConstantPool& pool) {
  std::set<Term> range = active_domain(inst);
  auto ns = nulls_of(inst);
  range.insert(ns.begin(), ns.end());
  range.insert(pool.constants.begin(), pool.constants.end());
  std::vector<Term> univ(range.begin(), range.end());
  std::set<Term> avoid = range;
  for (const Term& f : fresh_constants(static_cast<std::size_t>(pool.fresh_budget), avoid)) {
    univ.push_back(f);
  }
  std::vector<Term> sub_range(range.begin(), range.end());
  std::vector<std::string> fv(free_vars(g).begin(), free_vars(g).end());
  std::set<Substitution> out;
  std::vector<std::size_t> idx(fv.size(), 0);
  std::function<void(std::size_t, std::map<std::string, Term>)> rec =
      [&](std::size_t k, std::map<std::string, Term> env) {
        if (k == fv.size()) {
          if (oracle_sat(inst, env, g, univ)) {
            Substitution s;
            for (auto& [v, t] : env) s[v] = t;
            out.insert(s);
          }
          return;
        }
        for (const Term& t : sub_range) {
          env[fv[k]] = t;
          rec(k + 1, env);
        }
      };
  rec(0, {});
  return out;
}

std::mt19937_64 g_rng(20250809);

Instance random_small_instance(bool with_nulls = false) {
  std::uniform_int_distribution<int> natoms(0, 4);
  std::uniform_int_distribution<int> pick(0, with_nulls ? 3 : 2);
  auto term = [&]() -> Term {
    switch (pick(g_rng)) {
      case 0: return A();
      case 1: return B();
      case 2: return C();
      default: return Term::null(static_cast<std::uint64_t>(pick(g_rng)));
    }
  };
  Instance out;
  int n = natoms(g_rng);
  for (int i = 0; i < n; ++i) {
    if (pick(g_rng) == 0) out.insert(p1(term()));
    else out.insert(f2(term(), term()));
  }
  return out;
}

}  // namespace

TEST_CASE("satisfies implements the satisfaction clauses") {
  ConstantPool pool;
  CHECK(satisfies(d_e(), sub({{"x", A()}, {"y", B()}}), g_sf(), pool));
  CHECK_FALSE(satisfies(d_e(), sub({{"x", A()}, {"y", B()}}), g_df(), pool));
  CHECK(satisfies({}, {}, g_true(), pool));
  CHECK_THROWS_AS(satisfies(d_e(), {}, g_sf(), pool), UnboundVariable);
}

TEST_CASE("matches reproduce the social-network guard matches") {
  ConstantPool pool;
  CHECK(matches(g_sf(), d_e(), pool) ==
        std::set<Substitution>{sub({{"x", A()}, {"y", B()}}), sub({{"x", B()}, {"y", A()}})});
  CHECK(matches(g_df(), d_e(), pool) == std::set<Substitution>{sub({{"x", A()}, {"y", C()}})});
  CHECK(matches(g_af(), d_e(), pool) ==
        std::set<Substitution>{sub({{"x", A()}}), sub({{"x", B()}})});

  ConstantPool abc = ConstantPool::of_names({"A", "B", "C"});
  CHECK(matches(g_nf(), d_e(), abc) ==
        std::set<Substitution>{sub({{"x", B()}, {"y", C()}}), sub({{"x", C()}, {"y", B()}}),
                               sub({{"x", A()}, {"y", A()}}), sub({{"x", B()}, {"y", B()}}),
                               sub({{"x", C()}, {"y", C()}})});
}

TEST_CASE("matches agree with the brute-force satisfaction oracle") {
  ConstantPool pool = ConstantPool::of_names({"A", "B"}, 1);
  std::vector<Guard> guards{g_sf(), g_df(), g_af(), g_nf(), g_true(),
                            g_forall_not({"y"}, {f2(vx(), vy())})};
  for (int i = 0; i < 120; ++i) {
    Instance inst = random_small_instance(i % 2 == 1);
    for (const Guard& g : guards) {
      CHECK(matches(g, inst, pool) == oracle_matches(g, inst, pool));
    }
  }
}

TEST_CASE("find_homomorphism on the worked examples") {
  auto h1 = find_homomorphism({f2(vx(), vy())}, {f2(A(), C())});
  REQUIRE(h1.has_value());
  CHECK(h1->at(vx()) == A());
  CHECK(h1->at(vy()) == C());

  CHECK(find_homomorphism({f2(Term::null(0), Term::null(1))}, {f2(Term::null(0), Term::null(0))})
            .has_value());
  CHECK_FALSE(
      find_homomorphism({f2(Term::null(0), Term::null(0))}, {f2(Term::null(0), Term::null(1))})
          .has_value());
}

TEST_CASE("hom_leq matches subset on databases") {
  // Exhaustive over all databases on one binary predicate over {A,B}.
  std::vector<Atom> atoms{f2(A(), A()), f2(A(), B()), f2(B(), A()), f2(B(), B())};
  std::vector<Instance> dbs;
  for (unsigned mask = 0; mask < 16; ++mask) {
    Instance d;
    for (unsigned i = 0; i < 4; ++i) {
      if (mask & (1u << i)) d.insert(atoms[i]);
    }
    dbs.push_back(d);
  }
  for (const Instance& d1 : dbs) {
    for (const Instance& d2 : dbs) {
      bool subset = std::all_of(d1.begin(), d1.end(),
                                [&](const Atom& a) { return d2.count(a) > 0; });
      CHECK(hom_leq(d1, d2) == subset);
    }
  }
}

TEST_CASE("hom facts with labeled nulls") {
  Instance pa{p1(A())};
  Instance pan{p1(A()), p1(Term::null(0))};
  CHECK(hom_leq(pa, pan));
  CHECK(hom_leq(pan, pa));
  CHECK(hom_equiv(pa, pan));
  CHECK_FALSE(hom_leq(pa, {p1(B())}));
  CHECK_FALSE(hom_equiv({f2(Term::null(0), Term::null(1))}, {f2(Term::null(0), Term::null(0))}));
}

TEST_CASE("hom_leq is a preorder and hom_equiv an equivalence") {
  std::vector<Instance> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(random_small_instance(true));
  for (const Instance& x : samples) {
    CHECK(hom_leq(x, x));
    for (const Instance& y : samples) {
      for (const Instance& z : samples) {
        if (hom_leq(x, y) && hom_leq(y, z)) CHECK(hom_leq(x, z));
      }
    }
  }
}

TEST_CASE("core computes minimal retracts") {
  CHECK(core({p1(A()), p1(Term::null(0))}) == Instance{p1(A())});
  Instance db = d_e();
  CHECK(core(db) == db);
  CHECK(core({f2(Term::null(0), Term::null(1)), f2(A(), C())}) == Instance{f2(A(), C())});
}

TEST_CASE("core is idempotent and hom-equivalent to its input") {
  for (int i = 0; i < 120; ++i) {
    Instance inst = random_small_instance(true);
    Instance c = core(inst);
    CHECK(hom_equiv(c, inst));
    CHECK(canonicalize(core(c)) == canonicalize(c));
    CHECK(std::all_of(c.begin(), c.end(), [&](const Atom& a) { return inst.count(a) > 0; }));
  }
}

TEST_CASE("CG matches coincide with homomorphism search") {
  // Both routes of the hom characterization, cross-checked on random inputs.
  ConstantPool pool;
  Guard cg = g_exists("y", g_and(g_atom(f2(vx(), vy())), g_atom(p1(vy()))));
  Instance body{f2(vx(), vy()), p1(vy())};
  for (int i = 0; i < 150; ++i) {
    Instance inst = random_small_instance(true);
    std::set<Substitution> via_matches = matches(cg, inst, pool);

    std::set<Term> range = active_domain(inst);
    auto ns = nulls_of(inst);
    range.insert(ns.begin(), ns.end());
    std::set<Substitution> via_hom;
    for (const Term& t : range) {
      Homomorphism fixed{{vx(), t}};
      if (find_homomorphism(body, inst, fixed)) via_hom.insert(sub({{"x", t}}));
    }
    CHECK(via_matches == via_hom);
  }
}

TEST_CASE("CNA matches coincide with the total-assignment characterization") {
  ConstantPool pool = ConstantPool::of_names({"A", "B"}, 1);
  Guard cna = g_forall_not({"y"}, {f2(vx(), vy())});
  for (int i = 0; i < 120; ++i) {
    Instance inst = random_small_instance(false);
    std::set<Substitution> via_matches = matches(cna, inst, pool);

    // sigma is a match iff every total constant assignment h extending sigma
    // keeps the guard atoms out of the instance; equivalently no witness for
    // y lands F(sigma x, y) inside.
    std::set<Term> range = active_domain(inst);
    range.insert(pool.constants.begin(), pool.constants.end());
    std::set<Term> avoid = range;
    std::vector<Term> univ(range.begin(), range.end());
    for (const Term& f : fresh_constants(1, avoid)) univ.push_back(f);
    std::set<Substitution> expected;
    for (const Term& t : range) {
      bool blocked = false;
      for (const Term& w : univ) {
        if (inst.count(f2(t, w))) blocked = true;
      }
      if (!blocked) expected.insert(sub({{"x", t}}));
    }
    CHECK(via_matches == expected);
  }
}

TEST_CASE("satisfies is monotone for CGs and antitone for CNAs") {
  ConstantPool pool = ConstantPool::of_names({"A", "B"});
  Guard cg = g_af();
  Guard cna = g_forall_not({"y"}, {f2(vx(), vy())});
  for (int i = 0; i < 100; ++i) {
    Instance small = random_small_instance(false);
    Instance big = small;
    Instance extra = random_small_instance(false);
    big.insert(extra.begin(), extra.end());
    for (const Term& t : std::vector<Term>{A(), B()}) {
      Substitution s = sub({{"x", t}});
      if (satisfies(small, s, cg, pool)) CHECK(satisfies(big, s, cg, pool));
      if (satisfies(big, s, cna, pool)) CHECK(satisfies(small, s, cna, pool));
    }
  }
}

TEST_CASE("apply substitutes only bound variables") {
  CHECK(apply(sub({{"x", A()}}), std::set<Atom>{f2(vx(), vy())}) ==
        std::set<Atom>{f2(A(), vy())});
  CHECK(apply(sub({{"x", A()}, {"y", B()}}), std::set<Atom>{f2(vx(), vy())}) ==
        std::set<Atom>{f2(A(), B())});
  std::set<Atom> s{p1(vx())};
  CHECK(apply({}, s) == s);
}

TEST_CASE("fresh-null extension") {
  FreshSource nulls;
  Substitution s1 = extend_with_fresh_nulls({}, {"x"}, nulls);
  REQUIRE(s1.count("x"));
  CHECK(s1.at("x").is_null());
  Substitution s2 = extend_with_fresh_nulls({}, {"x"}, nulls);
  CHECK(s1.at("x") != s2.at("x"));
  Substitution base = sub({{"x", A()}});
  CHECK(extend_with_fresh_nulls(base, {}, nulls) == base);
  CHECK_THROWS_AS(extend_with_fresh_nulls(base, {"x"}, nulls), DmsError);
}

TEST_CASE("constant extensions enumerate pool plus fresh") {
  ConstantPool pool = ConstantPool::of_names({"A", "B"}, 1);
  auto exts = extensions_with_constants({}, {"x"}, pool);
  CHECK(exts.size() == 3);  // (|pool| + budget)^|vars|

  ConstantPool two = ConstantPool::of_names({"A", "B"});
  auto exts2 = extensions_with_constants({}, {"x", "y"}, two);
  CHECK(exts2.size() == 4);

  CHECK(extensions_with_constants(sub({{"x", A()}}), {}, pool) ==
        std::vector<Substitution>{sub({{"x", A()}})});

  ConstantPool one = ConstantPool::of_names({"A"});
  CHECK(extensions_with_constants({}, {"x", "y"}, one) ==
        std::vector<Substitution>{sub({{"x", A()}, {"y", A()}})});
}

TEST_CASE("fresh constants witness CNA matches adequately") {
  // A CNA has a match over any widened constant universe iff the assignment
  // sending every free variable to a distinct brand-new constant is already a
  // match: fresh constants occur in no instance. The all-constant negated
  // atom makes the equivalence non-vacuous.
  Guard cna = g_and(g_not(g_atom(f2(A(), A()))),
                    g_and(g_not(g_atom(f2(vx(), vy()))), g_not(g_atom(f2(vy(), vx())))));
  for (int i = 0; i < 120; ++i) {
    Instance inst = random_small_instance(false);
    ConstantPool pool = ConstantPool::of_names({"A", "B", "C"});
    ConstantPool widened = pool;
    widened.constants.push_back(Term::constant("Z1"));
    widened.constants.push_back(Term::constant("Z2"));

    bool any_match = !matches(cna, inst, widened).empty();
    Substitution all_fresh = sub({{"x", Term::constant("Z1")}, {"y", Term::constant("Z2")}});
    bool fresh_match = satisfies(inst, all_fresh, cna, pool);
    CHECK(any_match == fresh_match);
  }
}

TEST_CASE("hom search respects the step budget") {
  Instance big;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      big.insert(f2(Term::null(static_cast<std::uint64_t>(i)),
                    Term::null(static_cast<std::uint64_t>(100 + j))));
    }
  }
  HomOptions opts;
  opts.step_budget = 3;
  CHECK_THROWS_AS(find_homomorphism(big, big, {}, opts), HomSearchTimeout);
}
