#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcoh/linalg.hpp"
#include "lcoh/module.hpp"
#include "lcoh/polynomial.hpp"

namespace lcoh {

// Certificate that f = sum_i c_i * g_i with homogeneous cofactors c_i.
template <class K>
struct MembershipCertificate {
  std::vector<Polynomial<K>> cofactors;  // aligned with the generator list

  bool verify(const Polynomial<K>& f, const std::vector<Polynomial<K>>& gens) const {
    if (cofactors.size() != gens.size()) return false;
    Polynomial<K> acc(f.ring());
    for (size_t i = 0; i < gens.size(); ++i) acc = acc + cofactors[i] * gens[i];
    return acc == f;
  }
};

template <class K>
struct MembershipResult {
  bool found = false;
  std::optional<MembershipCertificate<K>> certificate;
};

// Decide whether homogeneous f lies in the ideal (g_1,...,g_k) by solving the
// exact linear system over the degree-(deg f) slice: the relevant cofactor
// degrees are forced, so the answer is unconditional, not bounded.
template <class K>
MembershipResult<K> ideal_membership(const Polynomial<K>& f,
                                     const std::vector<Polynomial<K>>& gens) {
  if (f.is_zero()) {
    MembershipResult<K> r;
    r.found = true;
    r.certificate = MembershipCertificate<K>{
        std::vector<Polynomial<K>>(gens.size(), Polynomial<K>(f.ring()))};
    return r;
  }
  if (!f.is_homogeneous() || f.has_negative_exponent())
    throw std::invalid_argument("membership needs a homogeneous polynomial");
  RingPtr ring = f.ring();
  int n = ring->n();
  int64_t d = f.degree();

  // columns: for each generator, the monomial basis of its cofactor degree
  struct Block {
    size_t gen;
    int64_t cdeg;
    int32_t offset;
  };
  std::vector<Block> blocks;
  int32_t rows = static_cast<int32_t>(monomial_basis_size(n, d));
  SparseMatrix<K> sys(rows, 0);
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].is_zero() || !gens[i].is_homogeneous() || gens[i].has_negative_exponent())
      throw std::invalid_argument("ideal generators must be homogeneous polynomials");
    int64_t cdeg = d - gens[i].degree();
    if (cdeg < 0) continue;
    blocks.push_back({i, cdeg, sys.cols});
    sys = SparseMatrix<K>::hstack(sys, FreeModule<K>::free_mult_matrix(ring, gens[i], cdeg));
  }

  // target vector: f over the degree-d monomial basis
  const auto& idx = FreeModule<K>::monomial_index(n, d);
  SVec<K> target;
  for (auto& t : f.terms()) target.push_back({idx.at(t.e), t.c});
  std::sort(target.begin(), target.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  MembershipResult<K> r;
  ColSpace<K> cs(sys, true);
  auto sol = cs.express(target);
  if (!sol) return r;
  r.found = true;
  MembershipCertificate<K> cert;
  cert.cofactors.assign(gens.size(), Polynomial<K>(ring));
  for (auto& [col, c] : *sol) {
    // locate the block containing this column
    const Block* b = nullptr;
    for (auto& bl : blocks)
      if (col >= bl.offset) b = &bl;
    const auto& basis = monomial_basis(n, b->cdeg);
    cert.cofactors[b->gen] =
        cert.cofactors[b->gen] + Polynomial<K>::monomial(ring, basis[col - b->offset], c);
  }
  if (!cert.verify(f, gens)) throw std::logic_error("membership certificate failed to verify");
  r.certificate = std::move(cert);
  return r;
}

// least e in [1, cap] with f^e in (gens), together with its certificate
template <class K>
struct PowerMembershipResult {
  bool found = false;
  int32_t power = 0;
  std::optional<MembershipCertificate<K>> certificate;
};

template <class K>
PowerMembershipResult<K> power_membership(const Polynomial<K>& f,
                                          const std::vector<Polynomial<K>>& gens,
                                          int32_t cap) {
  PowerMembershipResult<K> r;
  Polynomial<K> p = f;
  for (int32_t e = 1; e <= cap; ++e) {
    auto m = ideal_membership(p, gens);
    if (m.found) {
      r.found = true;
      r.power = e;
      r.certificate = std::move(m.certificate);
      return r;
    }
    p = p * f;
  }
  return r;
}

}  // namespace lcoh
