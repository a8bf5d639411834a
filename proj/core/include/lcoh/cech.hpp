#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lcoh/cohomology.hpp"
#include "lcoh/koszul.hpp"
#include "lcoh/module.hpp"

namespace lcoh {

// ---------------------------------------------------------------------------
// Fine-graded Čech complex on monomial generators. A fine degree e lies in
// the localization A_{f_S} exactly when its exponents are nonnegative outside
// the variables of f_S, so every term slice has dimension 0 or 1 and the
// whole computation is combinatorial; cohomology slices are exact values of
// H^i_I(A)_e, no truncation involved.
template <class K>
class FineCechComplex {
public:
  FineCechComplex(RingPtr ring, std::vector<Polynomial<K>> gens)
      : ring_(std::move(ring)), gens_(std::move(gens)) {
    if (gens_.empty()) throw std::invalid_argument("no generators");
    if (gens_.size() > 20) throw std::invalid_argument("too many generators");
    subsets_ = subset_table(static_cast<int>(gens_.size()));
    for (auto& g : gens_) {
      if (!g.is_monomial() || g.has_negative_exponent())
        throw std::invalid_argument("fine-graded complex needs monomial generators");
      uint32_t vm = 0;
      const Exp& e = g.leading_exp();
      for (size_t v = 0; v < e.size(); ++v)
        if (e[v] > 0) vm |= (1u << v);
      gen_vars_.push_back(vm);
    }
  }

  int s() const { return static_cast<int>(gens_.size()); }
  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial<K>>& gens() const { return gens_; }

  uint32_t subset_vars(uint32_t S) const {
    uint32_t vm = 0;
    for (int j = 0; S >> j; ++j)
      if (S >> j & 1u) vm |= gen_vars_[j];
    return vm;
  }

  bool present(uint32_t S, const Exp& e) const {
    uint32_t vm = subset_vars(S);
    for (size_t v = 0; v < e.size(); ++v)
      if (!(vm >> v & 1u) && e[v] < 0) return false;
    return true;
  }

  struct CochainSlice {
    int32_t dim = 0;
    std::vector<uint32_t> mask;    // present subsets only
    std::vector<std::string> labels;
    int32_t position(uint32_t S) const {
      for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i] == S) return static_cast<int32_t>(i);
      return -1;
    }
  };

  const CochainSlice& cochain(int p, const Exp& e) {
    auto ck = std::make_pair(p, e);
    auto it = cochain_cache_.find(ck);
    if (it != cochain_cache_.end()) return it->second;
    CochainSlice cs;
    if (p >= 0 && p <= s()) {
      for (uint32_t S : subsets_[p]) {
        if (!present(S, e)) continue;
        cs.mask.push_back(S);
        cs.labels.push_back(subset_name(S) + ":" + exp_to_string(e, *ring_));
        ++cs.dim;
      }
    }
    return cochain_cache_.emplace(ck, std::move(cs)).first->second;
  }

  // localization inclusions with alternating signs: C^p_e -> C^{p+1}_e
  const SparseMatrix<K>& differential(int p, const Exp& e) {
    auto ck = std::make_pair(p, e);
    auto it = diff_cache_.find(ck);
    if (it != diff_cache_.end()) return it->second;
    const CochainSlice& src = cochain(p, e);
    const CochainSlice& tgt = cochain(p + 1, e);
    SparseMatrix<K> m(tgt.dim, src.dim);
    for (size_t si = 0; si < src.mask.size(); ++si) {
      uint32_t S = src.mask[si];
      for (int j = 0; j < s(); ++j) {
        if (S >> j & 1u) continue;
        int32_t ti = tgt.position(S | (1u << j));
        if (ti < 0) throw std::logic_error("localization target absent");
        m.add_entry(ti, static_cast<int32_t>(si), K(subset_sign(S, j)));
      }
    }
    return diff_cache_.emplace(ck, std::move(m)).first->second;
  }

  // componentwise multiplication by a monomial: C^p_e -> C^p_{e + exp}
  SparseMatrix<K> mult(const Polynomial<K>& mono, int p, const Exp& e) {
    if (!mono.is_monomial()) throw std::invalid_argument("fine multiplication needs a monomial");
    Exp te = exp_add(e, mono.leading_exp());
    const CochainSlice& src = cochain(p, e);
    const CochainSlice& tgt = cochain(p, te);
    SparseMatrix<K> m(tgt.dim, src.dim);
    for (size_t si = 0; si < src.mask.size(); ++si) {
      int32_t ti = tgt.position(src.mask[si]);
      if (ti < 0) throw std::logic_error("monomial action left the localization support");
      m.add_entry(ti, static_cast<int32_t>(si), mono.leading_coeff());
    }
    return m;
  }

  const CohomologySlice<K>& cohomology(int i, const Exp& e) {
    auto ck = std::make_pair(i, e);
    auto it = coh_cache_.find(ck);
    if (it != coh_cache_.end()) return it->second;
    CohomologySlice<K> h;
    if (i >= 0 && i <= s()) {
      const SparseMatrix<K>& dout = differential(i, e);
      SparseMatrix<K> din = (i == 0) ? SparseMatrix<K>(dout.cols, 0) : differential(i - 1, e);
      h = cohomology_slice(din, dout);
    }
    return coh_cache_.emplace(ck, std::move(h)).first->second;
  }

private:
  RingPtr ring_;
  std::vector<Polynomial<K>> gens_;
  std::vector<uint32_t> gen_vars_;
  std::vector<std::vector<uint32_t>> subsets_;
  std::map<std::pair<int, Exp>, CochainSlice> cochain_cache_;
  std::map<std::pair<int, Exp>, SparseMatrix<K>> diff_cache_;
  std::map<std::pair<int, Exp>, CohomologySlice<K>> coh_cache_;
};

// ---------------------------------------------------------------------------
// Truncation tower for general homogeneous ideals: the level-N complex is the
// Koszul cochain complex on f_1^N..f_s^N over the base module, and the
// transition into level N+1 multiplies the S-component by prod_{j in S} f_j.
// Transitions commute with the differentials and with multiplication, and
// the colimit over N recovers H^i_I of the base.
template <class K>
class CechTower {
public:
  CechTower(ModulePtr<K> base, std::vector<Polynomial<K>> gens,
            std::shared_ptr<CohomologyStore<K>> store = nullptr)
      : base_(std::move(base)), gens_(std::move(gens)), store_(std::move(store)) {
    if (base_->exactness() != Module<K>::Exactness::Exact || base_->fine_graded())
      throw std::invalid_argument("tower base must be exact and total-graded");
    if (gens_.empty()) throw std::invalid_argument("no generators");
    for (auto& g : gens_)
      if (g.is_zero() || !g.is_homogeneous() || g.has_negative_exponent())
        throw std::invalid_argument("generators must be homogeneous polynomials");
  }

  int s() const { return static_cast<int>(gens_.size()); }
  Module<K>& base() { return *base_; }
  const ModulePtr<K>& base_ptr() const { return base_; }
  const std::vector<Polynomial<K>>& gens() const { return gens_; }

  KoszulComplex<K>& level(int32_t N) {
    if (N < 1) throw std::invalid_argument("levels start at 1");
    auto it = levels_.find(N);
    if (it != levels_.end()) return *it->second;
    std::vector<Polynomial<K>> elems;
    elems.reserve(gens_.size());
    for (auto& g : gens_) elems.push_back(g.pow(N));
    std::shared_ptr<CohomologyStore<K>> st;
    if (store_) st = std::make_shared<LevelStore>(store_, N);
    auto kc = std::make_unique<KoszulComplex<K>>(base_, std::move(elems), st);
    return *levels_.emplace(N, std::move(kc)).first->second;
  }

  const Polynomial<K>& subset_product(uint32_t S) {
    auto it = products_.find(S);
    if (it != products_.end()) return it->second;
    Polynomial<K> p = Polynomial<K>::constant(base_->ring(), K(1));
    for (int j = 0; S >> j; ++j)
      if (S >> j & 1u) p = p * gens_[j];
    return products_.emplace(S, std::move(p)).first->second;
  }

  // chain-level transition C^p(N)_d -> C^p(N+1)_d
  SparseMatrix<K> transition(int p, int64_t d, int32_t N) {
    DegreeKey key = DegreeKey::total_key(d);
    const auto& src = level(N).cochain(p, key);
    const auto& tgt = level(N + 1).cochain(p, key);
    SparseMatrix<K> m(tgt.dim, src.dim);
    for (size_t si = 0; si < src.mask.size(); ++si) {
      uint32_t S = src.mask[si];
      if (S == 0) {
        const Slice<K>& bs = base_->slice(src.key[si]);
        for (int32_t r = 0; r < bs.dim; ++r) m.add_entry(tgt.offset[si] + r, src.offset[si] + r, K(1));
        continue;
      }
      const SparseMatrix<K>& blk = base_->mult(subset_product(S), src.key[si]);
      for (int32_t r = 0; r < blk.rows; ++r)
        for (auto& [c, v] : blk.row[r])
          m.add_entry(tgt.offset[si] + r, src.offset[si] + c, v);
    }
    return m;
  }

  const CohomologySlice<K>& cohomology(int i, int64_t d, int32_t N) {
    return level(N).cohomology(i, DegreeKey::total_key(d));
  }

  // induced maps on cohomology
  SparseMatrix<K> cohomology_transition(int i, int64_t d, int32_t N) {
    return induced_on_cohomology(cohomology(i, d, N), cohomology(i, d, N + 1),
                                 transition(i, d, N));
  }
  SparseMatrix<K> cohomology_mult(const Polynomial<K>& g, int i, int64_t d, int32_t N) {
    return level(N).cohomology_mult(g, i, DegreeKey::total_key(d));
  }

private:
  struct LevelStore : CohomologyStore<K> {
    LevelStore(std::shared_ptr<CohomologyStore<K>> inner, int32_t N)
        : inner_(std::move(inner)), level_(N) {}
    std::shared_ptr<const CohomologySlice<K>> load(int i, const DegreeKey& d) override {
      return inner_->load(i, d.at_level(level_));
    }
    void save(int i, const DegreeKey& d,
              std::shared_ptr<const CohomologySlice<K>> h) override {
      inner_->save(i, d.at_level(level_), std::move(h));
    }
    std::shared_ptr<CohomologyStore<K>> inner_;
    int32_t level_;
  };

  ModulePtr<K> base_;
  std::vector<Polynomial<K>> gens_;
  std::shared_ptr<CohomologyStore<K>> store_;
  std::map<int32_t, std::unique_ptr<KoszulComplex<K>>> levels_;
  std::map<uint32_t, Polynomial<K>> products_;
};

// ---------------------------------------------------------------------------
// H^i_I packaged as a module. Fine-graded (monomial generators) slices are
// exact; total-graded slices live at truncation levels with transitions.
template <class K>
class LocalCohomologyModule : public Module<K> {
public:
  // fine-graded, exact: monomial generators over the free module
  LocalCohomologyModule(RingPtr ring, std::vector<Polynomial<K>> gens, int i)
      : ring_(std::move(ring)), gens_(std::move(gens)), i_(i), fine_(true) {
    fine_cech_ = std::make_unique<FineCechComplex<K>>(ring_, gens_);
  }

  // leveled: arbitrary homogeneous generators over an exact total-graded base
  LocalCohomologyModule(ModulePtr<K> base, std::vector<Polynomial<K>> gens, int i,
                        std::shared_ptr<CohomologyStore<K>> store = nullptr)
      : ring_(base->ring()), gens_(std::move(gens)), i_(i), fine_(false) {
    tower_ = std::make_shared<CechTower<K>>(std::move(base), gens_, std::move(store));
  }

  // leveled over an existing tower, sharing its cochain and cohomology caches
  LocalCohomologyModule(std::shared_ptr<CechTower<K>> tower, int i)
      : ring_(tower->base().ring()), gens_(tower->gens()), i_(i), fine_(false),
        tower_(std::move(tower)) {}

  RingPtr ring() const override { return ring_; }
  bool fine_graded() const override { return fine_; }
  typename Module<K>::Exactness exactness() const override {
    return fine_ ? Module<K>::Exactness::Exact : Module<K>::Exactness::Leveled;
  }
  std::string descriptor() const override {
    std::string s = "lc{h" + std::to_string(i_) + ";";
    s += fine_ ? "fine" : ("base:" + tower_->base().descriptor());
    s += ";" + ring_->key();
    for (auto& g : gens_) s += ";" + g.to_string();
    return s + "}";
  }
  const std::vector<Polynomial<K>>* ambient_ideal() const override { return &gens_; }

  int index() const { return i_; }
  FineCechComplex<K>& fine_complex() { return *fine_cech_; }
  CechTower<K>& tower() { return *tower_; }
  const std::shared_ptr<CechTower<K>>& tower_ptr() const { return tower_; }

  const CohomologySlice<K>& cohomology(const DegreeKey& d) {
    if (fine_) return fine_cech_->cohomology(i_, d.fine);
    return tower_->cohomology(i_, d.total, d.level);
  }

  // render the j-th basis class of a slice through its cocycle representative
  std::string class_label(const DegreeKey& d, int32_t j) {
    const CohomologySlice<K>& h = cohomology(d);
    if (fine_) {
      const auto& cs = fine_cech_->cochain(i_, d.fine);
      std::string out;
      for (auto& [idx, c] : h.reps[j]) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")*" + cs.labels[idx];
      }
      return out.empty() ? "0" : out;
    }
    return tower_->level(d.level).render(i_, DegreeKey::total_key(d.total), h.reps[j]);
  }

protected:
  Slice<K> compute_slice(const DegreeKey& d) override {
    const CohomologySlice<K>& h = cohomology(d);
    Slice<K> s;
    s.dim = h.dim;
    for (int32_t j = 0; j < h.dim; ++j) {
      if (fine_ && h.dim == 1) {
        s.labels.push_back(exp_to_string(d.fine, *ring_));
      } else {
        s.labels.push_back("c#" + std::to_string(j));
      }
    }
    return s;
  }

  SparseMatrix<K> compute_mult(const Polynomial<K>& f, const DegreeKey& d) override {
    if (fine_) {
      DegreeKey t = d.shifted_by_poly(f);
      return induced_on_cohomology(fine_cech_->cohomology(i_, d.fine),
                                   fine_cech_->cohomology(i_, t.fine),
                                   fine_cech_->mult(f, i_, d.fine));
    }
    return tower_->cohomology_mult(f, i_, d.total, d.level);
  }

  SparseMatrix<K> compute_transition(const DegreeKey& d) override {
    if (fine_) throw std::logic_error("fine-graded slices are exact");
    return tower_->cohomology_transition(i_, d.total, d.level);
  }

private:
  RingPtr ring_;
  std::vector<Polynomial<K>> gens_;
  int i_;
  bool fine_;
  std::unique_ptr<FineCechComplex<K>> fine_cech_;
  std::shared_ptr<CechTower<K>> tower_;
};

// ---------------------------------------------------------------------------
// Mayer-Vietoris additivity probe for a pair of monomial ideals: per fine
// degree in the box, dim H^i of the intersection ideal (pairwise generator
// products) must equal the sum of the summand dimensions, provided
// H^i and H^{i+1} of the sum ideal vanish there.
struct MvSliceRow {
  Exp e;
  int32_t lhs = 0;     // H^i of the intersection ideal
  int32_t rhs1 = 0;    // H^i of I1
  int32_t rhs2 = 0;    // H^i of I2
  int32_t sum_i = 0;   // H^i of I1+I2 (hypothesis term)
  int32_t sum_i1 = 0;  // H^{i+1} of I1+I2 (hypothesis term)
  bool additive = false;
  bool hypothesis = false;
};

template <class K>
struct MvReport {
  int i = 0;
  std::vector<Polynomial<K>> inter_gens;
  std::vector<MvSliceRow> rows;
  int32_t violations = 0;
  int32_t hypothesis_failures = 0;
};

template <class K>
MvReport<K> mayer_vietoris_check(RingPtr ring, const std::vector<Polynomial<K>>& i1,
                                 const std::vector<Polynomial<K>>& i2, int i,
                                 const DegreeWindow& box) {
  MvReport<K> rep;
  rep.i = i;
  for (auto& f : i1)
    for (auto& g : i2) {
      Polynomial<K> p = f * g;
      // normalize to a monic monomial; duplicates are harmless but dropped
      p = Polynomial<K>::monomial(ring, p.leading_exp(), K(1));
      bool dup = false;
      for (auto& q : rep.inter_gens) dup = dup || (q == p);
      if (!dup) rep.inter_gens.push_back(p);
    }
  std::vector<Polynomial<K>> sum_gens = i1;
  sum_gens.insert(sum_gens.end(), i2.begin(), i2.end());

  FineCechComplex<K> c_inter(ring, rep.inter_gens);
  FineCechComplex<K> c1(ring, i1);
  FineCechComplex<K> c2(ring, i2);
  FineCechComplex<K> c_sum(ring, sum_gens);

  box.for_each([&](const DegreeKey& d) {
    MvSliceRow row;
    row.e = d.fine;
    row.lhs = c_inter.cohomology(i, d.fine).dim;
    row.rhs1 = c1.cohomology(i, d.fine).dim;
    row.rhs2 = c2.cohomology(i, d.fine).dim;
    row.sum_i = c_sum.cohomology(i, d.fine).dim;
    row.sum_i1 = c_sum.cohomology(i + 1, d.fine).dim;
    row.hypothesis = (row.sum_i == 0 && row.sum_i1 == 0);
    row.additive = (row.lhs == row.rhs1 + row.rhs2);
    if (!row.additive) ++rep.violations;
    if (!row.hypothesis) ++rep.hypothesis_failures;
    rep.rows.push_back(std::move(row));
  });
  return rep;
}

}  // namespace lcoh
