// Copyright (c) dms-abstraction contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "dms/core.hpp"
#include "dms/matching.hpp"

using namespace dms;

namespace {

Term A() { return Term::constant("A"); }
Term B() { return Term::constant("B"); }

Atom p1(Term t) { return Atom{"P", {t}}; }
Atom f2(Term a, Term b) { return Atom{"F", {a, b}}; }

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> natoms(0, 5);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> cpick(0, 1);
  std::uniform_int_distribution<std::uint64_t> npick(0, 9);
  auto term = [&]() {
    if (kind(rng) == 0) return cpick(rng) ? A() : B();
    return Term::null(npick(rng));
  };
  Instance out;
  int n = natoms(rng);
  for (int i = 0; i < n; ++i) {
    if (kind(rng) == 0) out.insert(p1(term()));
    else out.insert(f2(term(), term()));
  }
  return out;
}

}  // namespace

TEST_CASE("make_atom checks arity") {
  PredicateSymbol p{"P", 1};
  PredicateSymbol f{"F", 2};
  CHECK(make_atom(p, {A()}) == p1(A()));
  CHECK_THROWS_AS(make_atom(f, {A()}), ArityMismatch);
  CHECK(make_atom(f, {Term::null(0), Term::null(1)}) == f2(Term::null(0), Term::null(1)));
  try {
    make_atom(f, {A()});
  } catch (const ArityMismatch& e) {
    CHECK(e.expected == 2);
    CHECK(e.got == 1);
  }
}

TEST_CASE("active_domain collects constants only") {
  CHECK(active_domain({}).empty());
  Instance de{p1(A()), p1(B()), p1(Term::constant("C")), f2(A(), B()), f2(B(), A()),
              f2(A(), Term::constant("C"))};
  CHECK(active_domain(de) == std::set<Term>{A(), B(), Term::constant("C")});
  CHECK(active_domain({p1(Term::null(0))}).empty());
}

TEST_CASE("is_database") {
  CHECK(is_database({p1(A())}));
  CHECK_FALSE(is_database({p1(Term::null(0))}));
  CHECK(is_database({}));
  CHECK_THROWS_AS(Database(Instance{p1(Term::null(0))}), DmsError);
}

TEST_CASE("canonicalize renumbers nulls deterministically") {
  CHECK(canonicalize({p1(Term::null(7))}) == Instance{p1(Term::null(0))});
  CHECK(canonicalize({f2(Term::null(3), Term::null(3))}) ==
        Instance{f2(Term::null(0), Term::null(0))});
}

TEST_CASE("canonicalize is idempotent and preserves atom count") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 300; ++i) {
    Instance inst = random_instance(rng);
    Instance c1 = canonicalize(inst);
    CHECK(c1.size() == inst.size());
    CHECK(canonicalize(c1) == c1);
  }
}

TEST_CASE("canonicalize maps null-renamings to one representative") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Instance inst = random_instance(rng);
    Instance renamed = shift_nulls(inst, 17);
    CHECK(canonicalize(inst) == canonicalize(renamed));
    CHECK(hom_equiv(canonicalize(inst), inst));
  }
}

TEST_CASE("canonically equal instances are isomorphic") {
  // Equality after canonicalization implies a null-renaming bijection, which
  // hom search certifies in both directions.
  Instance i{f2(Term::null(5), Term::null(9)), p1(Term::null(5))};
  Instance j{f2(Term::null(2), Term::null(0)), p1(Term::null(2))};
  REQUIRE(canonicalize(i) == canonicalize(j));
  CHECK(hom_equiv(i, j));
}

TEST_CASE("fresh source is monotone") {
  FreshSource src;
  auto a = src.fresh();
  auto b = src.fresh();
  CHECK(a < b);
  src.bump_past(100);
  CHECK(src.fresh() > 100);
}
