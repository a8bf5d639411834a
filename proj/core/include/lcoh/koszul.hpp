#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lcoh/cohomology.hpp"
#include "lcoh/module.hpp"

namespace lcoh {

inline std::vector<std::vector<uint32_t>> subset_table(int r) {
  std::vector<std::vector<uint32_t>> t(r + 1);
  for (uint32_t m = 0; m < (1u << r); ++m) t[__builtin_popcount(m)].push_back(m);
  return t;
}

inline int subset_sign(uint32_t s, int j) {
  // sign of inserting index j into subset s: parity of smaller members
  return (__builtin_popcount(s & ((1u << j) - 1)) % 2 == 0) ? 1 : -1;
}

inline std::string subset_name(uint32_t s) {
  std::string out = "S{";
  bool first = true;
  for (int j = 0; s >> j; ++j) {
    if (!(s >> j & 1u)) continue;
    if (!first) out += ",";
    out += std::to_string(j);
    first = false;
  }
  return out + "}";
}

// Optional persistence hook for computed cohomology slices. Slices pass
// through as shared pointers so in-memory stores never copy the tableaux.
template <class K>
struct CohomologyStore {
  virtual ~CohomologyStore() = default;
  virtual std::shared_ptr<const CohomologySlice<K>> load(int i, const DegreeKey& d) = 0;
  virtual void save(int i, const DegreeKey& d,
                    std::shared_ptr<const CohomologySlice<K>> h) = 0;
};

// Keeps slices in a map, for sharing across towers over one ideal in one run.
template <class K>
struct MemoryCohomologyStore : CohomologyStore<K> {
  std::shared_ptr<const CohomologySlice<K>> load(int i, const DegreeKey& d) override {
    auto it = slices_.find({i, d});
    return it == slices_.end() ? nullptr : it->second;
  }
  void save(int i, const DegreeKey& d,
            std::shared_ptr<const CohomologySlice<K>> h) override {
    slices_.emplace(std::make_pair(i, d), std::move(h));
  }
  size_t size() const { return slices_.size(); }

private:
  std::map<std::pair<int, DegreeKey>, std::shared_ptr<const CohomologySlice<K>>> slices_;
};

// Koszul cochain complex K(q_1..q_r; M). The slice of K^p at degree key d is
// the direct sum over p-subsets S of the M-slices at d + sum_{j in S} deg q_j
// (level preserved), so all differentials preserve d. For towers, level maps
// act componentwise through the base module transitions.
template <class K>
class KoszulComplex {
public:
  KoszulComplex(ModulePtr<K> m, std::vector<Polynomial<K>> elems,
                std::shared_ptr<CohomologyStore<K>> store = nullptr)
      : m_(std::move(m)), elems_(std::move(elems)), store_(std::move(store)),
        subsets_(subset_table(int(elems_.size()))) {
    if (elems_.empty()) throw std::invalid_argument("empty sequence");
    if (elems_.size() > 20) throw std::invalid_argument("sequence too long");
    for (auto& q : elems_) {
      if (q.is_zero() || !q.is_homogeneous())
        throw std::invalid_argument("sequence entries must be homogeneous and nonzero");
      if (m_->fine_graded() && !q.is_monomial())
        throw std::invalid_argument("fine-graded Koszul complex needs monomials");
    }
  }

  int length() const { return static_cast<int>(elems_.size()); }
  Module<K>& module() { return *m_; }
  const std::vector<Polynomial<K>>& elems() const { return elems_; }

  DegreeKey component_key(const DegreeKey& d, uint32_t S) const {
    DegreeKey k = d;
    for (int j = 0; S >> j; ++j)
      if (S >> j & 1u) k = k.shifted_by_poly(elems_[j]);
    return k;
  }

  struct CochainSlice {
    int32_t dim = 0;
    std::vector<uint32_t> mask;
    std::vector<DegreeKey> key;
    std::vector<int32_t> offset;
    std::vector<std::string> labels;
    int component_of(int32_t idx) const {
      int c = 0;
      while (c + 1 < static_cast<int>(offset.size()) && offset[c + 1] <= idx) ++c;
      return c;
    }
  };

  const CochainSlice& cochain(int p, const DegreeKey& d) {
    auto ck = std::make_pair(p, d);
    auto it = cochain_cache_.find(ck);
    if (it != cochain_cache_.end()) return it->second;
    CochainSlice cs;
    if (p >= 0 && p <= length()) {
      for (uint32_t S : subsets_[p]) {
        DegreeKey k = component_key(d, S);
        const Slice<K>& sl = m_->slice(k);
        cs.mask.push_back(S);
        cs.key.push_back(k);
        cs.offset.push_back(cs.dim);
        for (auto& l : sl.labels) cs.labels.push_back(subset_name(S) + ":" + l);
        cs.dim += sl.dim;
      }
    }
    return cochain_cache_.emplace(ck, std::move(cs)).first->second;
  }

  // d: K^p_d -> K^{p+1}_d
  const SparseMatrix<K>& differential(int p, const DegreeKey& d) {
    auto ck = std::make_pair(p, d);
    auto it = diff_cache_.find(ck);
    if (it != diff_cache_.end()) return it->second;
    const CochainSlice& src = cochain(p, d);
    const CochainSlice& tgt = cochain(p + 1, d);
    SparseMatrix<K> m(tgt.dim, src.dim);
    if (p >= 0 && p < length()) {
      for (size_t si = 0; si < src.mask.size(); ++si) {
        uint32_t S = src.mask[si];
        for (int j = 0; j < length(); ++j) {
          if (S >> j & 1u) continue;
          uint32_t T = S | (1u << j);
          size_t ti = index_of(tgt, T);
          K sgn(subset_sign(S, j));
          const SparseMatrix<K>& blk = m_->mult(elems_[j], src.key[si]);
          for (int32_t r = 0; r < blk.rows; ++r)
            for (auto& [c, v] : blk.row[r])
              m.add_entry(tgt.offset[ti] + r, src.offset[si] + c, sgn * v);
        }
      }
    }
    return diff_cache_.emplace(ck, std::move(m)).first->second;
  }

  // componentwise multiplication by homogeneous g: K^p_d -> K^p_{d + deg g}
  SparseMatrix<K> mult(const Polynomial<K>& g, int p, const DegreeKey& d) {
    const CochainSlice& src = cochain(p, d);
    const CochainSlice& tgt = cochain(p, d.shifted_by_poly(g));
    SparseMatrix<K> m(tgt.dim, src.dim);
    for (size_t si = 0; si < src.mask.size(); ++si) {
      const SparseMatrix<K>& blk = m_->mult(g, src.key[si]);
      for (int32_t r = 0; r < blk.rows; ++r)
        for (auto& [c, v] : blk.row[r])
          m.add_entry(tgt.offset[si] + r, src.offset[si] + c, v);
    }
    return m;
  }

  // componentwise level transition (leveled base modules): K^p(N) -> K^p(N+1)
  SparseMatrix<K> transition(int p, const DegreeKey& d) {
    const CochainSlice& src = cochain(p, d);
    const CochainSlice& tgt = cochain(p, d.at_level(d.level + 1));
    SparseMatrix<K> m(tgt.dim, src.dim);
    for (size_t si = 0; si < src.mask.size(); ++si) {
      const SparseMatrix<K>& blk = m_->transition(src.key[si]);
      for (int32_t r = 0; r < blk.rows; ++r)
        for (auto& [c, v] : blk.row[r])
          m.add_entry(tgt.offset[si] + r, src.offset[si] + c, v);
    }
    return m;
  }

  const CohomologySlice<K>& cohomology(int i, const DegreeKey& d) {
    auto ck = std::make_pair(i, d);
    auto it = coh_cache_.find(ck);
    if (it != coh_cache_.end()) return *it->second;
    std::shared_ptr<const CohomologySlice<K>> h;
    if (i < 0 || i > length()) {
      h = std::make_shared<CohomologySlice<K>>();
    } else if (store_ && (h = store_->load(i, d))) {
      // loaded
    } else {
      const SparseMatrix<K>& dout = differential(i, d);
      SparseMatrix<K> din =
          (i == 0) ? SparseMatrix<K>(dout.cols, 0) : differential(i - 1, d);
      h = std::make_shared<CohomologySlice<K>>(cohomology_slice(din, dout));
      if (store_) store_->save(i, d, h);
    }
    return *coh_cache_.emplace(ck, std::move(h)).first->second;
  }

  // maps induced on cohomology
  SparseMatrix<K> cohomology_mult(const Polynomial<K>& g, int i, const DegreeKey& d) {
    return induced_on_cohomology(cohomology(i, d), cohomology(i, d.shifted_by_poly(g)),
                                 mult(g, i, d));
  }
  SparseMatrix<K> cohomology_transition(int i, const DegreeKey& d) {
    return induced_on_cohomology(cohomology(i, d), cohomology(i, d.at_level(d.level + 1)),
                                 transition(i, d));
  }

  // render a cochain vector through component labels
  std::string render(int p, const DegreeKey& d, const SVec<K>& v) {
    const CochainSlice& cs = cochain(p, d);
    if (v.empty()) return "0";
    std::string out;
    for (auto& [i, c] : v) {
      if (!out.empty()) out += " + ";
      out += "(" + c.to_string() + ")*" + cs.labels[i];
    }
    return out;
  }

private:
  size_t index_of(const CochainSlice& cs, uint32_t mask) const {
    for (size_t i = 0; i < cs.mask.size(); ++i)
      if (cs.mask[i] == mask) return i;
    throw std::logic_error("subset not in cochain slice");
  }

  ModulePtr<K> m_;
  std::vector<Polynomial<K>> elems_;
  std::shared_ptr<CohomologyStore<K>> store_;
  std::vector<std::vector<uint32_t>> subsets_;
  std::map<std::pair<int, DegreeKey>, CochainSlice> cochain_cache_;
  std::map<std::pair<int, DegreeKey>, SparseMatrix<K>> diff_cache_;
  std::map<std::pair<int, DegreeKey>, std::shared_ptr<const CohomologySlice<K>>> coh_cache_;
};

// Long-exact-sequence probe relating K(x_1..x_{r-1}; M) and K(x_1..x_r; M):
// per slice, dim H^i(x)_d must equal
//   dim coker(x_r : H^{i-1}(x')_d -> H^{i-1}(x')_{d'}) +
//   dim ker  (x_r : H^i(x')_d   -> H^i(x')_{d'})
// with d' = d + deg x_r, the connecting homomorphism being multiplication
// by x_r.
struct LesProbeRow {
  int i = 0;
  int32_t h_full = 0;        // dim H^i(x_1..x_r)_d
  int32_t coker_below = 0;   // dim coker on H^{i-1}(x')
  int32_t ker_here = 0;      // dim ker on H^i(x')
  bool consistent = false;
};

template <class K>
std::vector<LesProbeRow> koszul_les_probe(ModulePtr<K> m,
                                          const std::vector<Polynomial<K>>& seq,
                                          const DegreeKey& d) {
  if (seq.size() < 2) throw std::invalid_argument("probe needs length >= 2");
  KoszulComplex<K> full(m, seq);
  std::vector<Polynomial<K>> head(seq.begin(), seq.end() - 1);
  KoszulComplex<K> sub(m, head);
  const Polynomial<K>& last = seq.back();
  std::vector<LesProbeRow> rows;
  for (int i = 0; i <= full.length(); ++i) {
    LesProbeRow row;
    row.i = i;
    row.h_full = full.cohomology(i, d).dim;
    if (i - 1 >= 0 && i - 1 <= sub.length()) {
      SparseMatrix<K> mm = sub.cohomology_mult(last, i - 1, d);
      row.coker_below = mm.rows - rank(mm);
    }
    if (i <= sub.length()) {
      SparseMatrix<K> mm = sub.cohomology_mult(last, i, d);
      row.ker_here = mm.cols - rank(mm);
    }
    row.consistent = (row.h_full == row.coker_below + row.ker_here);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lcoh
