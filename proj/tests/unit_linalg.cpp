#include <doctest.h>

#include "lcoh/field.hpp"
#include "lcoh/linalg.hpp"

using lcoh::ColSpace;
using lcoh::Rational;
using lcoh::SparseMatrix;
using lcoh::SVec;

namespace {

SparseMatrix<Rational> dense(int32_t rows, int32_t cols,
                             std::vector<std::vector<int64_t>> vals) {
  SparseMatrix<Rational> m(rows, cols);
  for (int32_t r = 0; r < rows; ++r)
    for (int32_t c = 0; c < cols; ++c)
      if (vals[r][c] != 0) m.set_entry(r, c, Rational(vals[r][c]));
  return m;
}

}  // namespace

TEST_CASE("rank and kernel of a rank-one matrix") {
  auto m = dense(2, 2, {{1, 2}, {2, 4}});
  CHECK(lcoh::rank(m) == 1);
  auto ker = lcoh::kernel_basis(m);
  REQUIRE(ker.size() == 1);
  SVec<Rational> expect = {{0, Rational(-2)}, {1, Rational(1)}};
  CHECK(ker[0] == expect);
  CHECK(m.apply(ker[0]).empty());
}

TEST_CASE("canonical reduced echelon form") {
  auto m = dense(2, 3, {{0, 1, 1}, {1, 1, 1}});
  auto e = lcoh::rref(m);
  REQUIRE(e.rank() == 2);
  CHECK(e.leads == std::vector<int32_t>{0, 1});
  SVec<Rational> r0 = {{0, Rational(1)}};
  SVec<Rational> r1 = {{1, Rational(1)}, {2, Rational(1)}};
  CHECK(e.rows[0].main == r0);
  CHECK(e.rows[1].main == r1);
  CHECK(e.free_positions() == std::vector<int32_t>{2});
}

TEST_CASE("row order does not change the reduced form") {
  auto a = lcoh::rref(dense(3, 3, {{1, 2, 3}, {2, 4, 7}, {0, 0, 1}}));
  auto b = lcoh::rref(dense(3, 3, {{0, 0, 1}, {2, 4, 7}, {1, 2, 3}}));
  REQUIRE(a.rank() == b.rank());
  CHECK(a.leads == b.leads);
  for (size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].main == b.rows[i].main);
}

TEST_CASE("kernel basis has a unit at each free column") {
  auto m = dense(1, 3, {{1, 1, 1}});
  auto ker = lcoh::kernel_basis(m);
  REQUIRE(ker.size() == 2);
  SVec<Rational> k0 = {{0, Rational(-1)}, {1, Rational(1)}};
  SVec<Rational> k1 = {{0, Rational(-1)}, {2, Rational(1)}};
  CHECK(ker[0] == k0);
  CHECK(ker[1] == k1);
  for (auto& v : ker) CHECK(m.apply(v).empty());
}

TEST_CASE("column space membership, expression, and complement") {
  auto m = dense(3, 2, {{1, 0}, {0, 1}, {1, 1}});
  ColSpace<Rational> cs(m, true);
  CHECK(cs.rank() == 2);

  SVec<Rational> in = {{0, Rational(1)}, {1, Rational(1)}, {2, Rational(2)}};
  CHECK(cs.contains(in));
  auto x = cs.express(in);
  REQUIRE(x.has_value());
  CHECK(m.apply(*x) == in);
  SVec<Rational> coords = {{0, Rational(1)}, {1, Rational(1)}};
  CHECK(*x == coords);

  SVec<Rational> out = {{2, Rational(1)}};
  CHECK(!cs.contains(out));
  CHECK(!cs.express(out).has_value());
  CHECK(cs.residual(out) == out);
  CHECK(cs.complement_positions() == std::vector<int32_t>{2});
}

TEST_CASE("expression self-check on a rectangular system") {
  auto m = dense(4, 3, {{2, 0, 1}, {0, 3, 1}, {1, 1, 1}, {0, 0, 5}});
  ColSpace<Rational> cs(m, true);
  SVec<Rational> target = m.apply({{0, Rational(2)}, {1, Rational(-1)}, {2, Rational(3)}});
  auto x = cs.express(target);
  REQUIRE(x.has_value());
  CHECK(m.apply(*x) == target);
}

TEST_CASE("matrix algebra helpers") {
  auto a = dense(2, 2, {{1, 2}, {3, 4}});
  auto b = dense(2, 2, {{0, 1}, {1, 0}});
  auto ab = a.mul(b);
  CHECK(ab.get(0, 0) == Rational(2));
  CHECK(ab.get(0, 1) == Rational(1));
  CHECK(ab.get(1, 0) == Rational(4));
  CHECK(ab.get(1, 1) == Rational(3));

  auto h = SparseMatrix<Rational>::hstack(a, b);
  CHECK(h.cols == 4);
  CHECK(h.get(0, 3) == Rational(1));
  auto v = SparseMatrix<Rational>::vstack(a, b);
  CHECK(v.rows == 4);
  CHECK(v.get(3, 0) == Rational(1));

  auto cols = a.columns();
  auto back = SparseMatrix<Rational>::from_columns(2, cols);
  CHECK(back.get(1, 0) == Rational(3));
  CHECK(lcoh::rank(SparseMatrix<Rational>::identity(5)) == 5);
}

TEST_CASE("accumulating entries cancels to empty") {
  SparseMatrix<Rational> m(1, 1);
  m.add_entry(0, 0, Rational(3));
  m.add_entry(0, 0, Rational(-3));
  CHECK(m.nnz() == 0);
  CHECK(lcoh::rank(m) == 0);
}
