#include "doctest.h"
#include "helpers.hpp"

#include <lcoh/quasicyclic.hpp>

#include <memory>

using namespace lcoh;
using testutil::P;

namespace {

std::shared_ptr<InverseSystemModule<Rational>> full_inverse_system(RingPtr r) {
  return std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
}

}  // namespace

TEST_CASE("cyclic cover of a socle-adjacent pair in the full inverse system") {
  auto r = testutil::ring2();
  auto E = full_inverse_system(r);
  auto m = make_single_element<Rational>(*E, "x^-1*y^-2");
  auto n = make_single_element<Rational>(*E, "x^-2*y^-1");
  DegreeWindow box = DegreeWindow::uniform_box(2, -4, -1);
  Budget budget;

  CyclicCoverWitness<Rational> wit =
      cyclic_cover<Rational>(E, m, n, P<Rational>(r, "x"), P<Rational>(r, "y"), box, budget);

  CHECK(wit.status == Status::Holds);
  CHECK(wit.reason == "alpha covers the pair");
  CHECK(wit.i == 1);
  CHECK(wit.j == 1);
  CHECK(wit.m_prime.label == "x^-1*y^-3");
  CHECK(wit.n_prime.label == "x^-3*y^-1");
  CHECK(wit.alpha == "x^-1*y^-3 + x^-3*y^-1");
  CHECK(wit.coreg_xy.status == Status::Holds);
  CHECK(wit.coreg_yx.status == Status::Holds);
  REQUIRE(wit.transcripts.size() == 4);
  for (auto& t : wit.transcripts) CHECK(t.verified);
  CHECK(wit.transcripts[1].equation == "(x)*(n') = x^-2*y^-1");
}

TEST_CASE("cyclic cover rejects a pair that is not coregular") {
  auto r = testutil::ring2();
  auto A = std::make_shared<FreeModule<Rational>>(r, true);
  auto m = make_single_element<Rational>(*A, "x");
  auto n = make_single_element<Rational>(*A, "y");
  DegreeWindow box = DegreeWindow::uniform_box(2, 0, 2);
  Budget budget;
  CHECK_THROWS_WITH_AS(
      cyclic_cover<Rational>(A, m, n, P<Rational>(r, "x"), P<Rational>(r, "y"), box, budget),
      "(x,y) is not a coregular pair on M", PreconditionError);
}

TEST_CASE("cyclic cover refuses unverified coregularity and zero inputs") {
  auto r = testutil::ring2();
  auto E = full_inverse_system(r);
  auto m = make_single_element<Rational>(*E, "x^-1*y^-2");
  auto n = make_single_element<Rational>(*E, "x^-2*y^-1");
  Budget budget;

  // window misses the support entirely, so the coregularity probe is vacuous
  DegreeWindow empty_box = DegreeWindow::uniform_box(2, 1, 2);
  CHECK_THROWS_WITH_AS(
      cyclic_cover<Rational>(E, m, n, P<Rational>(r, "x"), P<Rational>(r, "y"), empty_box, budget),
      "coregularity of (x,y) on M is unverified under the budget", PreconditionError);

  DegreeWindow box = DegreeWindow::uniform_box(2, -4, -1);
  ElementHandle<Rational> zero;
  CHECK_THROWS_WITH_AS(
      cyclic_cover<Rational>(E, zero, n, P<Rational>(r, "x"), P<Rational>(r, "y"), box, budget),
      "pair elements must be nonzero", std::invalid_argument);
}

TEST_CASE("cyclic cover reports a capped annihilating-power search") {
  auto r = testutil::ring2();
  auto E = full_inverse_system(r);
  auto m = make_single_element<Rational>(*E, "x^-1*y^-2");
  auto n = make_single_element<Rational>(*E, "x^-2*y^-1");
  DegreeWindow box = DegreeWindow::uniform_box(2, -4, -1);
  Budget budget;
  budget.power_cap = 0;

  CyclicCoverWitness<Rational> wit =
      cyclic_cover<Rational>(E, m, n, P<Rational>(r, "x"), P<Rational>(r, "y"), box, budget);
  CHECK(wit.status == Status::Inconclusive);
  CHECK(wit.reason == "no annihilating power within cap 0");
}

TEST_CASE("pair search finds a single-slot witness in the full inverse system") {
  auto r = testutil::ring2();
  auto E = full_inverse_system(r);
  auto m = make_single_element<Rational>(*E, "x^-1*y^-2");
  auto n = make_single_element<Rational>(*E, "x^-2*y^-1");
  DegreeWindow box = DegreeWindow::uniform_box(2, -4, -1);
  Budget budget;

  PairSearchReport rep = pair_in_cyclic_search<Rational>(E, m, n, box, 3, budget);
  CHECK(rep.found);
  CHECK(rep.status == Status::Holds);
  CHECK(rep.reason == "witness found");
  CHECK(rep.alpha == "x^-4*y^-2");
  CHECK(rep.f == "x^3");
  CHECK(rep.g == "x^2*y");
  CHECK(rep.singles == 3);
  CHECK(rep.pairs == 0);
  CHECK(rep.reach_skips == 2);
  CHECK(rep.solves > 0);
  CHECK(rep.bounds.find("degree <= 3") != std::string::npos);
}

TEST_CASE("pair search covers a zero element trivially") {
  auto r = testutil::ring2();
  auto E = full_inverse_system(r);
  auto n = make_single_element<Rational>(*E, "x^-2*y^-1");
  ElementHandle<Rational> zero;
  DegreeWindow box = DegreeWindow::uniform_box(2, -4, -1);
  Budget budget;

  PairSearchReport rep = pair_in_cyclic_search<Rational>(E, zero, n, box, 2, budget);
  CHECK(rep.found);
  CHECK(rep.status == Status::Holds);
  CHECK(rep.f == "0");
  CHECK(rep.g == "1");
  CHECK(rep.alpha == n.label);
  CHECK(rep.reason == "zero element is covered trivially");
}

TEST_CASE("pair search misses a support-separated cross pair") {
  auto r = testutil::ring2();
  auto a = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0});
  auto b = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{1});
  auto M = std::make_shared<DirectSumModule<Rational>>(
      std::vector<ModulePtr<Rational>>{a, b});
  auto m = make_single_element<Rational>(*M, "x^-1");
  auto n = make_single_element<Rational>(*M, "y^-1");
  DegreeWindow box = DegreeWindow::uniform_box(2, -2, 0);
  Budget budget;

  PairSearchReport rep = pair_in_cyclic_search<Rational>(M, m, n, box, 2, budget);
  CHECK_FALSE(rep.found);
  CHECK(rep.status == Status::Inconclusive);
  CHECK(rep.reason == "none under bounds");
  CHECK(rep.pairs > 0);
}

TEST_CASE("pair search works through tower levels") {
  auto r = testutil::ring2();
  auto A = std::make_shared<FreeModule<Rational>>(r, false);
  auto h2 = std::make_shared<LocalCohomologyModule<Rational>>(
      A, std::vector<Polynomial<Rational>>{P<Rational>(r, "x"), P<Rational>(r, "y")}, 2);

  ElementHandle<Rational> m;
  m.degree = DegreeKey::total_key(-2, 2);
  m.coords = svec_unit<Rational>(0);
  m.label = "h2[-2]#0";
  ElementHandle<Rational> n;
  n.degree = DegreeKey::total_key(-3, 2);
  n.coords = svec_unit<Rational>(0);
  n.label = "h2[-3]#0";

  DegreeWindow win = DegreeWindow::total_window(-4, -4);
  Budget budget;
  PairSearchReport rep = pair_in_cyclic_search<Rational>(h2, m, n, win, 2, budget);
  CHECK(rep.found);
  CHECK(rep.status == Status::Holds);
  CHECK(rep.f == "x*y");
  CHECK(rep.g == "x");
  CHECK(rep.bounds.find("levels <=") != std::string::npos);
}

TEST_CASE("skew socle obstruction certifies a separated pair") {
  auto r = testutil::ring2();
  auto a = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0});
  auto b = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{1});
  auto M = std::make_shared<DirectSumModule<Rational>>(
      std::vector<ModulePtr<Rational>>{a, b});
  auto m = make_single_element<Rational>(*M, "x^-1");
  auto n = make_single_element<Rational>(*M, "y^-1");

  Obstruction ob = skew_socle_obstruction<Rational>(M, m, n);
  CHECK(ob.kind == Obstruction::Kind::Certificate);
  CHECK(ob.conclusion ==
        "no alpha in M and f, g in the ring satisfy f*alpha = m and g*alpha = n; "
        "the pair lies in no cyclic submodule, with no degree or level bound on the claim");
  CHECK(ob.pair_desc.find("m = ") != std::string::npos);
  bool has_boundary_check = false;
  for (auto& p : ob.premises)
    if (p.find("checked: summand") != std::string::npos) has_boundary_check = true;
  CHECK(has_boundary_check);
  CHECK(ob.narrative.size() == 5);
}

TEST_CASE("skew socle obstruction certifies the four-variable pair") {
  auto r = testutil::ring4();
  auto a = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  auto b = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{2, 3});
  auto M = std::make_shared<DirectSumModule<Rational>>(
      std::vector<ModulePtr<Rational>>{a, b});
  auto m = make_single_element<Rational>(*M, "x^-1*y^-1");
  auto n = make_single_element<Rational>(*M, "z^-1*w^-1");

  Obstruction ob = skew_socle_obstruction<Rational>(M, m, n);
  CHECK(ob.kind == Obstruction::Kind::Certificate);
}

TEST_CASE("skew socle obstruction declines out-of-scope pairs") {
  auto r = testutil::ring2();
  auto a = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0});
  auto b = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{1});
  auto M = std::make_shared<DirectSumModule<Rational>>(
      std::vector<ModulePtr<Rational>>{a, b});

  SUBCASE("both elements in one summand") {
    auto m = make_single_element<Rational>(*M, "x^-1");
    auto n = make_single_element<Rational>(*M, "x^-2");
    Obstruction ob = skew_socle_obstruction<Rational>(M, m, n);
    CHECK(ob.kind == Obstruction::Kind::NotApplicable);
    CHECK(ob.conclusion == "both elements lie in the same summand; no obstruction claimed");
  }

  SUBCASE("m sees the other support") {
    auto m = make_single_element<Rational>(*M, "x^-1*y");
    auto n = make_single_element<Rational>(*M, "y^-1");
    Obstruction ob = skew_socle_obstruction<Rational>(M, m, n);
    CHECK(ob.kind == Obstruction::Kind::NotApplicable);
    CHECK(ob.conclusion == "m has nonzero exponent on y; the support argument does not apply");
  }

  SUBCASE("zero element") {
    ElementHandle<Rational> zero;
    auto n = make_single_element<Rational>(*M, "y^-1");
    Obstruction ob = skew_socle_obstruction<Rational>(M, zero, n);
    CHECK(ob.kind == Obstruction::Kind::NotApplicable);
    CHECK(ob.conclusion == "a zero element is covered trivially; no obstruction");
  }
}

TEST_CASE("skew socle obstruction rejects malformed modules") {
  auto r = testutil::ring2();

  auto E = full_inverse_system(r);
  auto m = make_single_element<Rational>(*E, "x^-1*y^-1");
  CHECK_THROWS_WITH_AS(skew_socle_obstruction<Rational>(E, m, m),
                       "module is not a direct sum of two summands", PreconditionError);

  auto a = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{0, 1});
  auto b = std::make_shared<InverseSystemModule<Rational>>(r, std::vector<int>{1});
  auto M = std::make_shared<DirectSumModule<Rational>>(
      std::vector<ModulePtr<Rational>>{a, b});
  auto mm = make_single_element<Rational>(*M, "x^-1*y^-1");
  CHECK_THROWS_WITH_AS(skew_socle_obstruction<Rational>(M, mm, mm),
                       "summands share negative variable y: not support-separated",
                       PreconditionError);
}
