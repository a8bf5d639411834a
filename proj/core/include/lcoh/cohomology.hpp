#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "lcoh/linalg.hpp"

namespace lcoh {

// Cohomology of one slice of a cochain complex: ker(d_out)/im(d_in), with
// representative cocycles and a tableau that rewrites any cocycle into class
// coordinates. Row semantics of `cls`: a row (v | a) certifies that
// v + sum_t a_t * rep_t is a coboundary.
template <class K>
struct CohomologySlice {
  int32_t dim = 0;
  int32_t cochain_dim = 0;
  int32_t cocycle_rank = 0;
  int32_t boundary_rank = 0;
  std::vector<SVec<K>> reps;  // representative cocycles, cochain coordinates
  Echelon<K> cls;

  // class coordinates of a cocycle; nullopt when the vector is no cocycle
  std::optional<SVec<K>> express(const SVec<K>& z) const {
    EchRow<K> r = cls.reduce_row({z, {}});
    if (!r.main.empty()) return std::nullopt;
    return r.aug;
  }
  bool vanishes(const SVec<K>& z) const {
    auto c = express(z);
    if (!c) throw std::logic_error("vanishing test on a non-cocycle");
    return c->empty();
  }
};

template <class K>
CohomologySlice<K> cohomology_slice(const SparseMatrix<K>& d_in, const SparseMatrix<K>& d_out) {
  if (d_in.rows != d_out.cols) throw std::logic_error("cohomology slice shape mismatch");
  if (d_out.mul(d_in).nnz() != 0) throw std::logic_error("differentials do not compose to zero");
  CohomologySlice<K> h;
  h.cochain_dim = d_out.cols;
  h.cls.width = h.cochain_dim;

  for (auto& b : d_in.columns()) h.cls.insert_row({b, {}});
  h.boundary_rank = h.cls.rank();

  auto zbasis = kernel_basis(d_out);
  h.cocycle_rank = static_cast<int32_t>(zbasis.size());
  for (auto& z : zbasis) {
    EchRow<K> r = h.cls.reduce_row({z, {}});
    if (r.main.empty()) continue;
    int32_t t = h.dim++;
    h.reps.push_back(z);
    svec_axpy(r.aug, K(-1), svec_unit<K>(t));
    h.cls.insert_row(std::move(r));
  }
  h.cls.aug_width = h.dim;
  return h;
}

// Matrix induced on cohomology by a chain map given at the cochain level
// (the map must commute with the differentials; images of cocycles are then
// cocycles, which this asserts).
template <class K>
SparseMatrix<K> induced_on_cohomology(const CohomologySlice<K>& src,
                                      const CohomologySlice<K>& tgt,
                                      const SparseMatrix<K>& chain_map) {
  if (chain_map.cols != src.cochain_dim || chain_map.rows != tgt.cochain_dim)
    throw std::logic_error("chain map shape mismatch");
  SparseMatrix<K> m(tgt.dim, src.dim);
  for (int32_t t = 0; t < src.dim; ++t) {
    SVec<K> img = chain_map.apply(src.reps[t]);
    auto c = tgt.express(img);
    if (!c) throw std::logic_error("chain map image is not a cocycle");
    for (auto& [i, v] : *c) m.add_entry(i, t, v);
  }
  return m;
}

}  // namespace lcoh
