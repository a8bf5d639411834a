#include <doctest.h>

#include <memory>

#include "helpers.hpp"
#include "lcoh/field.hpp"
#include "lcoh/module.hpp"

using lcoh::DegreeKey;
using lcoh::DirectSumModule;
using lcoh::ElementHandle;
using lcoh::Exp;
using lcoh::FreeModule;
using lcoh::FreeQuotientModule;
using lcoh::InverseSystemModule;
using lcoh::KernelModule;
using lcoh::ModulePtr;
using lcoh::Polynomial;
using lcoh::QuotientModule;
using lcoh::Rational;
using lcoh::SparseMatrix;
using lcoh::SVec;
using testutil::P;

namespace {

bool same_matrix(const SparseMatrix<Rational>& a, const SparseMatrix<Rational>& b) {
  return a.rows == b.rows && a.cols == b.cols && a.row == b.row;
}

Exp exp2(int32_t a, int32_t b) {
  Exp e(2, 0);
  e[0] = a;
  e[1] = b;
  return e;
}

Exp exp4(int32_t a, int32_t b, int32_t c, int32_t d) {
  Exp e(4, 0);
  e[0] = a;
  e[1] = b;
  e[2] = c;
  e[3] = d;
  return e;
}

}  // namespace

TEST_CASE("free module slices and multiplication compose") {
  auto r = testutil::ring3();
  FreeModule<Rational> m(r, false);
  CHECK(m.slice(DegreeKey::total_key(0)).dim == 1);
  CHECK(m.slice(DegreeKey::total_key(2)).dim == 6);
  CHECK(m.slice(DegreeKey::total_key(-1)).dim == 0);
  CHECK(m.slice(DegreeKey::total_key(2)).labels[0] == "x^2");

  auto x = P<Rational>(r, "x");
  auto y = P<Rational>(r, "y");
  auto xy = P<Rational>(r, "x*y");
  auto composed = m.mult(y, DegreeKey::total_key(3)).mul(m.mult(x, DegreeKey::total_key(2)));
  CHECK(same_matrix(composed, m.mult(xy, DegreeKey::total_key(2))));
}

TEST_CASE("fine free module slices are single monomials") {
  auto r = testutil::ring2();
  FreeModule<Rational> m(r, true);
  CHECK(m.slice(DegreeKey::fine_key(exp2(1, 2))).dim == 1);
  CHECK(m.slice(DegreeKey::fine_key(exp2(-1, 0))).dim == 0);
  auto x = P<Rational>(r, "x");
  auto mm = m.mult(x, DegreeKey::fine_key(exp2(1, 2)));
  CHECK(mm.rows == 1);
  CHECK(mm.cols == 1);
  CHECK(mm.get(0, 0) == Rational(1));
}

TEST_CASE("quadric cone has square slice dimensions") {
  auto r = testutil::ring4();
  FreeQuotientModule<Rational> b(r, {P<Rational>(r, "x*w - y*z")});
  for (int64_t d = 0; d <= 5; ++d)
    CHECK(b.slice(DegreeKey::total_key(d)).dim == (d + 1) * (d + 1));
}

TEST_CASE("twisted cubic cone grows by three per degree") {
  auto r = testutil::ring4();
  FreeQuotientModule<Rational> b(r, {P<Rational>(r, "x*z - y^2"), P<Rational>(r, "y*w - z^2"),
                                     P<Rational>(r, "x*w - y*z")});
  CHECK(b.slice(DegreeKey::total_key(0)).dim == 1);
  for (int64_t d = 1; d <= 4; ++d)
    CHECK(b.slice(DegreeKey::total_key(d)).dim == 3 * d + 1);
}

TEST_CASE("monomial complete intersection dimensions") {
  auto r = testutil::ring2();
  FreeQuotientModule<Rational> b(r, {P<Rational>(r, "x^2"), P<Rational>(r, "y^2")});
  int64_t expect[] = {1, 2, 1, 0, 0};
  for (int64_t d = 0; d <= 4; ++d) CHECK(b.slice(DegreeKey::total_key(d)).dim == expect[d]);
}

TEST_CASE("quotient reduce and embed invert each other") {
  auto r = testutil::ring4();
  FreeQuotientModule<Rational> b(r, {P<Rational>(r, "x*w - y*z")});
  DegreeKey d = DegreeKey::total_key(2);
  int32_t dim = b.slice(d).dim;
  REQUIRE(dim == 9);
  for (int32_t i = 0; i < dim; ++i) {
    SVec<Rational> unit = lcoh::svec_unit<Rational>(i);
    SVec<Rational> back = b.reduce_vector(2, b.embed_vector(2, unit));
    CHECK(back == unit);
  }
}

TEST_CASE("quotient multiplication respects the relation") {
  auto r = testutil::ring4();
  FreeQuotientModule<Rational> b(r, {P<Rational>(r, "x*w - y*z")});
  DegreeKey d1 = DegreeKey::total_key(1);
  // xw and yz agree in the quotient: multiply x by w and y by z from degree 0
  DegreeKey d0 = DegreeKey::total_key(0);
  auto xw = b.mult(P<Rational>(r, "x*w"), d0);
  auto yz = b.mult(P<Rational>(r, "y*z"), d0);
  CHECK(same_matrix(xw, yz));
  CHECK(b.slice(d1).dim == 4);
}

TEST_CASE("inverse system support and multiplication") {
  auto r = testutil::ring2();
  InverseSystemModule<Rational> e(r, {0, 1});
  CHECK(e.slice(DegreeKey::fine_key(exp2(-1, -2))).dim == 1);
  CHECK(e.slice(DegreeKey::fine_key(exp2(0, -1))).dim == 0);
  CHECK(e.slice(DegreeKey::fine_key(exp2(1, 1))).dim == 0);

  auto x = P<Rational>(r, "x");
  auto into = e.mult(x, DegreeKey::fine_key(exp2(-2, -2)));
  REQUIRE(into.rows == 1);
  CHECK(into.get(0, 0) == Rational(1));
  auto out = e.mult(x, DegreeKey::fine_key(exp2(-1, -2)));
  CHECK(out.rows == 0);
}

TEST_CASE("partial inverse system keeps polynomial directions") {
  auto r = testutil::ring4();
  InverseSystemModule<Rational> h2(r, {0, 1});
  CHECK(h2.slice(DegreeKey::fine_key(exp4(-1, -1, 0, 3))).dim == 1);
  CHECK(h2.slice(DegreeKey::fine_key(exp4(-1, 0, 0, 0))).dim == 0);
  CHECK(h2.slice(DegreeKey::fine_key(exp4(-1, -1, -1, 0))).dim == 0);
  auto z = P<Rational>(r, "z");
  auto mz = h2.mult(z, DegreeKey::fine_key(exp4(-1, -1, 2, 0)));
  REQUIRE(mz.rows == 1);
  CHECK(mz.get(0, 0) == Rational(1));
}

TEST_CASE("direct sum stacks slices with tagged labels") {
  auto r = testutil::ring2();
  auto e1 = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  auto e2 = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  DirectSumModule<Rational> s({e1, e2});
  DegreeKey d = DegreeKey::fine_key(exp2(-1, -1));
  REQUIRE(s.slice(d).dim == 2);
  CHECK(s.slice(d).labels[0] == "0|x^-1*y^-1");
  CHECK(s.slice(d).labels[1] == "1|x^-1*y^-1");
  CHECK(s.locate(d, 1) == std::pair<int, int32_t>(1, 0));
  CHECK(s.offset_of(d, 1) == 1);

  auto x = P<Rational>(r, "x");
  auto m = s.mult(x, DegreeKey::fine_key(exp2(-2, -1)));
  CHECK(m.rows == 2);
  CHECK(m.cols == 2);
  CHECK(m.get(0, 0) == Rational(1));
  CHECK(m.get(1, 1) == Rational(1));
  CHECK(m.get(0, 1) == Rational(0));
}

TEST_CASE("annihilator submodule of an inverse system") {
  auto r = testutil::ring2();
  auto e = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  auto x = P<Rational>(r, "x");
  KernelModule<Rational> k(e, {x});
  // x kills exactly the slices with x-exponent -1
  CHECK(k.slice(DegreeKey::fine_key(exp2(-1, -2))).dim == 1);
  CHECK(k.slice(DegreeKey::fine_key(exp2(-2, -2))).dim == 0);

  SVec<Rational> one = lcoh::svec_unit<Rational>(0);
  DegreeKey d = DegreeKey::fine_key(exp2(-1, -3));
  auto parent_coords = k.embed_vector(d, one);
  CHECK(k.restrict_vector(d, parent_coords) == one);
}

TEST_CASE("socle of the full inverse system sits at the corner") {
  auto r = testutil::ring2();
  auto e = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  KernelModule<Rational> soc(e, {P<Rational>(r, "x"), P<Rational>(r, "y")});
  CHECK(soc.slice(DegreeKey::fine_key(exp2(-1, -1))).dim == 1);
  CHECK(soc.slice(DegreeKey::fine_key(exp2(-1, -2))).dim == 0);
  CHECK(soc.slice(DegreeKey::fine_key(exp2(-2, -1))).dim == 0);
}

TEST_CASE("divisible module has zero quotient") {
  auto r = testutil::ring2();
  auto e = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0});
  auto x = P<Rational>(r, "x");
  QuotientModule<Rational> q(e, {x});
  CHECK(q.slice(DegreeKey::fine_key(exp2(-1, 0))).dim == 0);
  CHECK(q.slice(DegreeKey::fine_key(exp2(-2, 3))).dim == 0);
}

TEST_CASE("quotient of the free module by a variable") {
  auto r = testutil::ring2();
  auto a = std::make_shared<FreeModule<Rational>>(r, false);
  QuotientModule<Rational> q(a, {P<Rational>(r, "x")});
  // A/xA is the polynomial ring in y: one dimension per degree
  for (int64_t d = 0; d <= 4; ++d) CHECK(q.slice(DegreeKey::total_key(d)).dim == 1);
}

TEST_CASE("element handles resolve labels inside sums") {
  auto r = testutil::ring2();
  auto e1 = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  auto e2 = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  DirectSumModule<Rational> s({e1, e2});
  CHECK_THROWS_AS(lcoh::make_single_element(s, "x^-1*y^-1"), std::invalid_argument);

  InverseSystemModule<Rational> single(r, {0, 1});
  auto h = lcoh::make_single_element(single, "x^-1*y^-2");
  CHECK(h.degree == DegreeKey::fine_key(exp2(-1, -2)));
  REQUIRE(h.coords.size() == 1);
  CHECK(h.coords[0].second == Rational(1));

  CHECK_THROWS_AS(lcoh::make_single_element(single, "x^-1 + x^-2"), std::invalid_argument);
  CHECK_THROWS_AS(lcoh::make_single_element(single, "x^2*y^3"), std::invalid_argument);
}

TEST_CASE("annihilating powers in an inverse system") {
  auto r = testutil::ring2();
  InverseSystemModule<Rational> e(r, {0, 1});
  auto h = lcoh::make_single_element(e, "x^-1*y^-2");
  auto x = P<Rational>(r, "x");
  auto y = P<Rational>(r, "y");
  auto px = lcoh::annihilating_power(e, x, h, 5);
  REQUIRE(px.has_value());
  CHECK(*px == 1);
  auto py = lcoh::annihilating_power(e, y, h, 5);
  REQUIRE(py.has_value());
  CHECK(*py == 2);
  auto capped = lcoh::annihilating_power(e, y, h, 1);
  CHECK(!capped.has_value());

  ElementHandle<Rational> zero{DegreeKey::fine_key(exp2(-1, -1)), {}, "0"};
  auto pz = lcoh::annihilating_power(e, x, zero, 5);
  REQUIRE(pz.has_value());
  CHECK(*pz == 0);
  CHECK(lcoh::is_zero_in_tower(e, zero, 3));
  CHECK(!lcoh::is_zero_in_tower(e, h, 3));
}
