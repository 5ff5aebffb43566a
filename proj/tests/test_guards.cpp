// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dms/guards.hpp"

using namespace dms;

namespace {

Term vx() { return Term::variable("x"); }
Term vy() { return Term::variable("y"); }
Atom fxy() { return Atom{"F", {vx(), vy()}}; }
Atom fyx() { return Atom{"F", {vy(), vx()}}; }

Guard g_sf() { return g_and(g_atom(fxy()), g_atom(fyx())); }
Guard g_df() { return g_and(g_atom(fxy()), g_not(g_atom(fyx()))); }
Guard g_af() { return g_exists("y", g_atom(fxy())); }
Guard g_nf() { return g_and(g_not(g_atom(fxy())), g_not(g_atom(fyx()))); }

}  // namespace

TEST_CASE("free_vars follows the recursive definition") {
  CHECK(free_vars(g_af()) == std::set<std::string>{"x"});
  CHECK(free_vars(g_df()) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(g_true()).empty());
  CHECK(free_vars(g_eq(vx(), Term::constant("A"))) == std::set<std::string>{"x"});
}

TEST_CASE("classify picks the most specific fragment") {
  CHECK(classify(g_sf()) == Fragment::PfCG);
  CHECK(classify(g_af()) == Fragment::CG);
  CHECK(classify(g_df()) == Fragment::PfNCG);
  CHECK(classify(g_exists("y", g_df())) == Fragment::NCG);
  CHECK(classify(g_nf()) == Fragment::CNA);
  CHECK(classify(g_forall_not({"y"}, {fxy(), fyx()})) == Fragment::CNA);
  CHECK(classify(g_true()) == Fragment::PfCG);
  // Negating a positive existential is not in any Table-1 row.
  CHECK(classify(g_not(g_af())) == Fragment::GeneralFOL);
}

TEST_CASE("normalize splits positive and negative parts") {
  NormalGuard df = normalize(g_df());
  CHECK(df.quantified.empty());
  CHECK(df.positive == std::set<Atom>{fxy()});
  CHECK(df.negative == std::set<Atom>{fyx()});
  CHECK(df.polarity == PrefixPolarity::Existential);

  NormalGuard t = normalize(g_true());
  CHECK(t.quantified.empty());
  CHECK(t.positive.empty());
  CHECK(t.negative.empty());

  NormalGuard nf = normalize(g_nf());
  CHECK(nf.positive.empty());
  CHECK(nf.negative == std::set<Atom>{fxy(), fyx()});
  CHECK(nf.polarity == PrefixPolarity::Universal);

  CHECK_THROWS_AS(normalize(g_not(g_af())), NotNormalizable);
}

TEST_CASE("normalize eliminates equalities by unification") {
  // F(x,y) & x = y collapses to F(x,x) with y identified to x.
  Guard g = g_and(g_atom(fxy()), g_eq(vx(), vy()));
  NormalGuard ng = normalize(g);
  CHECK(ng.positive == std::set<Atom>{Atom{"F", {vx(), vx()}}});
  REQUIRE(ng.identified.count("y"));
  CHECK(ng.identified.at("y") == vx());
  CHECK_FALSE(ng.unsat);

  // Constant-variable equality grounds the variable.
  Guard gc = g_and(g_atom(fxy()), g_eq(vx(), Term::constant("A")));
  NormalGuard ngc = normalize(gc);
  CHECK(ngc.positive == std::set<Atom>{Atom{"F", {Term::constant("A"), vy()}}});

  // Contradictory constant equality marks the guard unsatisfiable.
  Guard bad = g_and(g_atom(fxy()), g_eq(Term::constant("A"), Term::constant("B")));
  CHECK(normalize(bad).unsat);

  // A quantified variable unified with a free one leaves the prefix.
  Guard q = g_exists("y", g_and(g_atom(fxy()), g_eq(vx(), vy())));
  NormalGuard nq = normalize(q);
  CHECK(nq.quantified.empty());
}

TEST_CASE("safety of normal guards") {
  CHECK(is_safe(normalize(g_df())));
  NormalGuard unsafe;
  unsafe.negative = {fxy()};
  CHECK_FALSE(is_safe(unsafe));
  CHECK(is_safe(normalize(g_sf())));  // vacuous for CGs
  CHECK_THROWS_AS(is_safe(normalize(g_nf())), DmsError);
}

TEST_CASE("classification is stable under normalize and rebuild") {
  std::vector<Guard> samples{
      g_true(),
      g_sf(),
      g_df(),
      g_af(),
      g_nf(),
      g_exists("y", g_df()),
      g_forall_not({"y"}, {fxy()}),
      g_and(g_atom(fxy()), g_eq(vx(), vy())),
      g_exists("z", g_and(g_atom(Atom{"F", {vx(), Term::variable("z")}}), g_atom(fxy()))),
  };
  for (const Guard& g : samples) {
    NormalGuard ng = normalize(g);
    CHECK(classify(g) == classify(rebuild(ng)));
    CHECK(free_vars(rebuild(ng)) == free_vars(g));
  }
}

TEST_CASE("guard equalities reject nulls") {
  CHECK_THROWS_AS(g_eq(Term::null(0), vx()), DmsError);
}
