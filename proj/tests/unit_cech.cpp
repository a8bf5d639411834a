#include <doctest.h>

#include <memory>

#include "helpers.hpp"
#include "lcoh/cech.hpp"
#include "lcoh/field.hpp"

using lcoh::DegreeKey;
using lcoh::DegreeWindow;
using lcoh::Exp;
using lcoh::FineCechComplex;
using lcoh::FreeModule;
using lcoh::LocalCohomologyModule;
using lcoh::Polynomial;
using lcoh::Rational;
using testutil::P;

namespace {

Exp exp4(int32_t a, int32_t b, int32_t c, int32_t d) {
  Exp e(4, 0);
  e[0] = a;
  e[1] = b;
  e[2] = c;
  e[3] = d;
  return e;
}

}  // namespace

TEST_CASE("support cohomology of a two-variable ideal sits in degree two") {
  auto r = testutil::ring4();
  FineCechComplex<Rational> c(r, {P<Rational>(r, "x"), P<Rational>(r, "y")});
  // classes live exactly where both inverted variables are negative and the
  // polynomial directions are nonnegative
  CHECK(c.cohomology(2, exp4(-1, -1, 0, 0)).dim == 1);
  CHECK(c.cohomology(2, exp4(-2, -1, 3, 0)).dim == 1);
  CHECK(c.cohomology(2, exp4(-1, 0, 0, 0)).dim == 0);
  CHECK(c.cohomology(2, exp4(0, 0, 0, 0)).dim == 0);
  CHECK(c.cohomology(2, exp4(-1, -1, -1, 0)).dim == 0);
  for (int32_t a = -2; a <= 0; ++a)
    for (int32_t b = -2; b <= 0; ++b) {
      CHECK(c.cohomology(0, exp4(a, b, 0, 0)).dim == 0);
      CHECK(c.cohomology(1, exp4(a, b, 0, 0)).dim == 0);
    }
}

TEST_CASE("fine local cohomology module exposes labeled slices") {
  auto r = testutil::ring4();
  LocalCohomologyModule<Rational> h2(r, {P<Rational>(r, "x"), P<Rational>(r, "y")}, 2);
  CHECK(h2.fine_graded());
  auto d = DegreeKey::fine_key(exp4(-1, -1, 0, 0));
  REQUIRE(h2.slice(d).dim == 1);
  CHECK(h2.slice(d).labels[0] == "x^-1*y^-1");

  // multiplication by x pushes the class out of the support
  auto mx = h2.mult(P<Rational>(r, "x"), d);
  CHECK(mx.rows == 0);
  // multiplication by z stays inside
  auto mz = h2.mult(P<Rational>(r, "z"), d);
  REQUIRE(mz.rows == 1);
  CHECK(mz.get(0, 0) == Rational(1));
}

TEST_CASE("two skew coordinate lines have third cohomology") {
  auto r = testutil::ring4();
  FineCechComplex<Rational> c(r, {P<Rational>(r, "x*z"), P<Rational>(r, "x*w"),
                                  P<Rational>(r, "y*z"), P<Rational>(r, "y*w")});
  CHECK(c.cohomology(3, exp4(-1, -1, -1, -1)).dim == 1);
  CHECK(c.cohomology(3, exp4(-2, -1, -1, -1)).dim == 1);
  CHECK(c.cohomology(3, exp4(-1, -1, -1, 0)).dim == 0);
  CHECK(c.cohomology(3, exp4(0, 0, -1, -1)).dim == 0);
}

TEST_CASE("additivity for disjoint coordinate lines") {
  auto r = testutil::ring4();
  std::vector<Polynomial<Rational>> i1 = {P<Rational>(r, "x"), P<Rational>(r, "y")};
  std::vector<Polynomial<Rational>> i2 = {P<Rational>(r, "z"), P<Rational>(r, "w")};
  auto rep = lcoh::mayer_vietoris_check(r, i1, i2, 2, DegreeWindow::uniform_box(4, -2, 1));
  CHECK(rep.inter_gens.size() == 4);
  CHECK(rep.violations == 0);
  CHECK(rep.hypothesis_failures == 0);
  // the box contains slices where each line contributes
  int32_t mass = 0;
  for (auto& row : rep.rows) mass += row.lhs;
  CHECK(mass == 32);
}

TEST_CASE("tower slices converge to the punctual dimensions") {
  auto r = testutil::ring2();
  auto a = std::make_shared<FreeModule<Rational>>(r, false);
  LocalCohomologyModule<Rational> h2(a, {P<Rational>(r, "x"), P<Rational>(r, "y")}, 2);
  CHECK(!h2.fine_graded());
  // graded pieces of the top cohomology of the maximal ideal on k[x,y]:
  // dimension |d| - 1 for d <= -2, zero from degree -1 upward
  for (int32_t n = 2; n <= 4; ++n) {
    CHECK(h2.slice(DegreeKey::total_key(-2, n)).dim == 1);
    CHECK(h2.slice(DegreeKey::total_key(-3, n)).dim == 2);
    CHECK(h2.slice(DegreeKey::total_key(0, n)).dim == 0);
    CHECK(h2.slice(DegreeKey::total_key(-1, n)).dim == 0);
  }
  // transitions carry the stable classes forward with full rank
  CHECK(lcoh::rank(h2.transition(DegreeKey::total_key(-2, 2))) == 1);
  CHECK(lcoh::rank(h2.transition(DegreeKey::total_key(-3, 2))) == 2);
}

TEST_CASE("lower tower cohomology of a full-depth ideal vanishes") {
  auto r = testutil::ring2();
  auto a = std::make_shared<FreeModule<Rational>>(r, false);
  LocalCohomologyModule<Rational> h1(a, {P<Rational>(r, "x"), P<Rational>(r, "y")}, 1);
  for (int32_t n = 1; n <= 3; ++n)
    for (int64_t d = -3; d <= 1; ++d)
      CHECK(h1.slice(DegreeKey::total_key(d, n)).dim == 0);
}

TEST_CASE("shared tower serves several cohomological indices") {
  auto r = testutil::ring2();
  auto a = std::make_shared<FreeModule<Rational>>(r, false);
  auto tower = std::make_shared<lcoh::CechTower<Rational>>(
      a, std::vector<Polynomial<Rational>>{P<Rational>(r, "x"), P<Rational>(r, "y")});
  LocalCohomologyModule<Rational> h1(tower, 1);
  LocalCohomologyModule<Rational> h2(tower, 2);
  CHECK(h1.slice(DegreeKey::total_key(-2, 2)).dim == 0);
  CHECK(h2.slice(DegreeKey::total_key(-2, 2)).dim == 1);
  CHECK(h2.index() == 2);
  CHECK(h2.class_label(DegreeKey::total_key(-2, 2), 0) != "0");
}

TEST_CASE("level keys are validated") {
  auto r = testutil::ring2();
  auto a = std::make_shared<FreeModule<Rational>>(r, false);
  LocalCohomologyModule<Rational> h2(a, {P<Rational>(r, "x"), P<Rational>(r, "y")}, 2);
  CHECK_THROWS_AS(h2.slice(DegreeKey::total_key(-2, 0)), std::logic_error);
  CHECK_THROWS_AS(h2.slice(DegreeKey::fine_key(Exp(2, 0))), std::logic_error);
}
