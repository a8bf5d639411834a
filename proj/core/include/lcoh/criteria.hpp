#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lcoh/coreg.hpp"

namespace lcoh {

// ---------------------------------------------------------------------------
// Radical containment side: for each ideal generator, search for the least
// power landing in the candidate ideal, with a self-verified certificate.

struct PowerRow {
  std::string gen;
  bool found = false;
  int32_t exponent = 0;
  std::string certificate;
  std::string note;
};

namespace detail {

// nonnegative total-degree window at the scale of the requested one, used for
// hypotheses about the ring itself (A-regularity of a sequence)
template <class K>
DegreeWindow regularity_window(const DegreeWindow& window,
                               const std::vector<Polynomial<K>>& seq) {
  int64_t reach = 0;
  window.for_each([&](const DegreeKey& k) {
    reach = std::max(reach, k.total < 0 ? -k.total : k.total);
  });
  int64_t sdeg = 0;
  for (auto& q : seq) sdeg += q.degree();
  return DegreeWindow::total_window(0, reach + sdeg);
}

}  // namespace detail

template <class K>
std::pair<Status, std::vector<PowerRow>> radical_containment(
    const std::vector<Polynomial<K>>& ideal_gens, const std::vector<Polynomial<K>>& seq,
    int32_t cap) {
  std::vector<PowerRow> rows;
  Status st = Status::Holds;
  for (auto& g : ideal_gens) {
    PowerRow row;
    row.gen = g.to_string();
    auto pm = power_membership(g, seq, cap);
    row.found = pm.found;
    if (pm.found) {
      row.exponent = pm.power;
      std::string c;
      for (size_t j = 0; j < pm.certificate->cofactors.size(); ++j) {
        if (j) c += " | ";
        c += pm.certificate->cofactors[j].to_string();
      }
      row.certificate = c;
    } else {
      row.note = "no exponent <= " + std::to_string(cap);
      st = Status::Fails;
    }
    rows.push_back(std::move(row));
  }
  return {st, std::move(rows)};
}

// ---------------------------------------------------------------------------
// H^i of a leveled module over the window; keeps only non-Holds rows
template <class K>
Status stable_vanishing(Module<K>& M, int i, const DegreeWindow& window,
                        const Budget& budget, std::vector<VanishRow>& out) {
  Status st = Status::Holds;
  window.for_each([&](const DegreeKey& d0) {
    VanishRow row = vanish_ladder<K>(
        i, d0.total, budget,
        [&](int32_t N) { return M.slice(DegreeKey::total_key(d0.total, N)).dim; },
        [&](int32_t N) {
          return M.transition(DegreeKey::total_key(d0.total, N - 1));
        });
    st = combine_status(st, row.status);
    if (row.status != Status::Holds) out.push_back(std::move(row));
  });
  return st;
}

// ---------------------------------------------------------------------------
// Set-theoretic complete intersection criterion: for an A-regular sequence
// seq inside I, radical equality with I is equivalent to seq being coregular
// on H^r_I(A) together with H^i_I(A) = 0 for i > r. Both sides are evaluated
// independently under the budget and compared.

struct HellusReport {
  Status status = Status::Inconclusive;
  std::string reason;
  bool discrepancy = false;
  Status regularity = Status::Inconclusive;
  std::vector<KoszulVanishRow> regularity_rows;
  Status side_radical = Status::Inconclusive;
  std::vector<PowerRow> powers;
  Status side_coreg = Status::Inconclusive;
  KoszulReport coregular;
  std::vector<VanishRow> vanishing;
  std::string structural_note;
};

template <class K>
HellusReport hellus_check(RingPtr ring, const std::vector<Polynomial<K>>& ideal_gens,
                          const std::vector<Polynomial<K>>& seq, const DegreeWindow& window,
                          const Budget& budget,
                          std::shared_ptr<CohomologyStore<K>> store = nullptr) {
  if (seq.empty() || ideal_gens.empty())
    throw std::invalid_argument("need a nonempty ideal and sequence");
  if (window.fine) throw std::invalid_argument("this check needs a total-degree window");
  HellusReport rep;
  int r = static_cast<int>(seq.size());
  require_membership(seq, ideal_gens, "sequence");

  auto freeA = std::make_shared<FreeModule<K>>(ring, false);
  // the A-regularity hypothesis lives on the ring's support, so it is probed
  // over nonnegative degrees at the scale of the requested window
  KoszulReport reg =
      koszul_vanishing<K>(freeA, seq, detail::regularity_window(window, seq), budget, 0, r - 1);
  rep.regularity = reg.status;
  rep.regularity_rows = reg.rows;
  if (reg.status == Status::Fails)
    throw PreconditionError("sequence is not A-regular: " + reg.rows.front().note);

  auto [si, prows] = radical_containment(ideal_gens, seq, budget.power_cap);
  rep.side_radical = si;
  rep.powers = std::move(prows);

  auto tower = std::make_shared<CechTower<K>>(freeA, ideal_gens, store);
  auto m_r = std::make_shared<LocalCohomologyModule<K>>(tower, r);
  rep.coregular = is_coregular_koszul<K>(m_r, seq, window, budget);
  Status vst = Status::Holds;
  int top = std::min(static_cast<int>(ideal_gens.size()), static_cast<int>(ring->n()));
  for (int i = r + 1; i <= top; ++i) {
    auto m_i = std::make_shared<LocalCohomologyModule<K>>(tower, i);
    vst = combine_status(vst, stable_vanishing(*m_i, i, window, budget, rep.vanishing));
  }
  if (static_cast<int>(ideal_gens.size()) < static_cast<int>(ring->n()))
    rep.structural_note = "H^i vanishes identically for i > " +
                          std::to_string(ideal_gens.size()) +
                          " (cochain complex length)";
  rep.side_coreg = combine_status(rep.coregular.status, vst);

  if (rep.side_radical == Status::Inconclusive || rep.side_coreg == Status::Inconclusive) {
    rep.status = Status::Inconclusive;
    rep.reason = "a side is inconclusive under the budget";
  } else if (rep.side_radical == rep.side_coreg) {
    rep.status = rep.side_radical;
    rep.reason = "both sides agree";
  } else {
    rep.status = Status::Inconclusive;
    rep.discrepancy = true;
    rep.reason = "sides disagree: radical containment is " +
                 std::string(status_name(rep.side_radical)) + ", coregularity side is " +
                 std::string(status_name(rep.side_coreg));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Three-surface criterion: with f,g,h in I, (f,h) A-regular and H^i_I(A) = 0
// for i > 2, radical equality sqrt(I) = sqrt((f,g,h)) is equivalent to
// H^i(f,g,h; H^2_I(A)) = 0 for i >= 2.

struct ThreeSurfaceReport {
  Status status = Status::Inconclusive;  // criterion on H^{2,3}(f,g,h;M)
  std::string reason;
  Status fh_regular = Status::Inconclusive;
  std::vector<KoszulVanishRow> fh_rows;
  std::vector<VanishRow> upper_vanishing;  // H^i_I(A), i > 2
  std::string structural_note;
  KoszulReport vanishing_23;
  bool cross_eval = false;
  Status radical = Status::Inconclusive;
  std::vector<PowerRow> powers;
};

template <class K>
ThreeSurfaceReport three_surface_check(RingPtr ring, const Polynomial<K>& f,
                                       const Polynomial<K>& g, const Polynomial<K>& h,
                                       const std::vector<Polynomial<K>>& ideal_gens,
                                       const DegreeWindow& window, const Budget& budget,
                                       std::shared_ptr<CohomologyStore<K>> store = nullptr,
                                       bool cross_eval = true) {
  require_membership(std::vector<Polynomial<K>>{f, g, h}, ideal_gens, "surface triple");
  if (window.fine) throw std::invalid_argument("this check needs a total-degree window");
  ThreeSurfaceReport rep;
  auto freeA = std::make_shared<FreeModule<K>>(ring, false);

  std::vector<Polynomial<K>> fh{f, h};
  KoszulReport reg =
      koszul_vanishing<K>(freeA, fh, detail::regularity_window(window, fh), budget, 0, 1);
  rep.fh_regular = reg.status;
  rep.fh_rows = reg.rows;
  if (reg.status == Status::Fails)
    throw PreconditionError("(f,h) is not an A-regular sequence: " + reg.rows.front().note);

  Status pre = Status::Holds;
  auto tower = std::make_shared<CechTower<K>>(freeA, ideal_gens, store);
  int top = std::min(static_cast<int>(ideal_gens.size()), static_cast<int>(ring->n()));
  for (int i = 3; i <= top; ++i) {
    auto m_i = std::make_shared<LocalCohomologyModule<K>>(tower, i);
    pre = combine_status(pre, stable_vanishing(*m_i, i, window, budget, rep.upper_vanishing));
  }
  if (static_cast<int>(ideal_gens.size()) < static_cast<int>(ring->n()))
    rep.structural_note = "H^i vanishes identically for i > " +
                          std::to_string(ideal_gens.size()) +
                          " (cochain complex length)";
  if (pre == Status::Fails)
    throw PreconditionError("H^i of the ambient ideal does not vanish stably for some i > 2");

  auto M = std::make_shared<LocalCohomologyModule<K>>(tower, 2);
  rep.vanishing_23 =
      koszul_vanishing<K>(M, std::vector<Polynomial<K>>{f, g, h}, window, budget, 2, 3);
  rep.status = combine_status(rep.vanishing_23.status,
                              pre == Status::Holds ? Status::Holds : Status::Inconclusive);
  rep.reason = rep.vanishing_23.reason;
  if (pre == Status::Inconclusive && rep.reason.empty())
    rep.reason = "hypothesis ladder did not stabilize";

  if (cross_eval) {
    rep.cross_eval = true;
    auto [st, prows] =
        radical_containment(ideal_gens, std::vector<Polynomial<K>>{f, g, h}, budget.power_cap);
    rep.radical = st;
    rep.powers = std::move(prows);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Coboundary surjectivity of the two-row snake diagram over B = A/(h) with
// J = I B: delta maps H^0(f,g;M_2) onto H^2(f,g;M_1), where M_i = H^i_J(B).
// Per degree and level the map is assembled explicitly:
//   represent a kernel class v by a cocycle z, solve d(u~) = f z, reduce
//   g u~ modulo f into the hypersurface complex, express its class through
//   the base-change map on H^1, and read the result in M_1/(f,g)M_1.
// Every lift is an exact linear solve, so a failed solve is reported rather
// than assumed away.
//
// Stability mirrors the multiplication-surjectivity ladder: per level the
// deficiency counts target classes arriving through the tower transition
// that land outside the image of delta, and the verdict is read once the
// deficiency repeats across the stabilization span. Target slices that stay
// zero are believed only when the streak reaches the top of the budget.

struct DeltaSliceRow {
  int64_t degree = 0;
  int32_t top_level = 0;
  std::vector<int32_t> dim_h0;
  std::vector<int32_t> dim_target;
  std::vector<int32_t> rank_delta;
  std::vector<int32_t> deficiency;  // -1 where the source level was empty
  bool stable = false;
  Status status = Status::Inconclusive;
  std::string note;
};

struct DeltaReport {
  Status status = Status::Inconclusive;
  std::string reason;
  std::vector<DeltaSliceRow> rows;
  std::vector<VanishRow> upper_vanishing;  // (a) M_i = 0 for i > 2
  Status upper_status = Status::Inconclusive;
  KoszulReport coregular_pair;  // (b) (f,g) on M_2
  std::string nzd_note;
};

namespace detail {

// componentwise reduction C^p(B) -> C^p(B/fB) at one total degree and level
template <class K>
SparseMatrix<K> cech_base_change(CechTower<K>& src_tower, CechTower<K>& tgt_tower,
                                 FreeQuotientModule<K>& src_base,
                                 FreeQuotientModule<K>& tgt_base, int p, int64_t d,
                                 int32_t N) {
  const auto& src = src_tower.level(N).cochain(p, DegreeKey::total_key(d));
  const auto& tgt = tgt_tower.level(N).cochain(p, DegreeKey::total_key(d));
  SparseMatrix<K> m(tgt.dim, src.dim);
  for (size_t si = 0; si < src.key.size(); ++si) {
    int64_t e = src.key[si].total;
    const Slice<K>& bs = src_base.slice(src.key[si]);
    for (int32_t c = 0; c < bs.dim; ++c) {
      SVec<K> mono = src_base.embed_vector(e, svec_unit<K>(c));
      SVec<K> red = tgt_base.reduce_vector(e, mono);
      for (auto& [rr, v] : red) m.add_entry(tgt.offset[si] + rr, src.offset[si] + c, v);
    }
  }
  return m;
}

}  // namespace detail

template <class K>
DeltaReport delta_surjectivity_check(RingPtr ring, const Polynomial<K>& f,
                                     const Polynomial<K>& g, const Polynomial<K>& h,
                                     const std::vector<Polynomial<K>>& ideal_gens,
                                     const DegreeWindow& window, const Budget& budget,
                                     std::shared_ptr<CohomologyStore<K>> store_b = nullptr,
                                     std::shared_ptr<CohomologyStore<K>> store_bbar = nullptr) {
  require_membership(std::vector<Polynomial<K>>{f, g, h}, ideal_gens, "surface triple");
  if (window.fine) throw std::invalid_argument("coboundary check needs a total-degree window");
  DeltaReport rep;
  auto B = std::make_shared<FreeQuotientModule<K>>(ring, std::vector<Polynomial<K>>{h});
  auto Bbar = std::make_shared<FreeQuotientModule<K>>(ring, std::vector<Polynomial<K>>{h, f});
  int64_t df = f.degree(), dg = g.degree();

  // f must not kill anything in B across the degrees the snake walk touches
  int64_t lo = 0, hi = 0;
  window.for_each([&](const DegreeKey& d0) {
    lo = std::min(lo, d0.total);
    hi = std::max(hi, d0.total + df + dg + 2);
  });
  for (int64_t e = std::max<int64_t>(lo, 0); e <= hi; ++e) {
    if (B->slice(DegreeKey::total_key(e)).dim == 0) continue;
    if (!kernel_basis(B->mult(f, DegreeKey::total_key(e))).empty())
      throw PreconditionError("f is a zero-divisor on A/(h): kernel at degree " +
                              std::to_string(e));
  }
  rep.nzd_note = "f injective on A/(h) in degrees " + std::to_string(std::max<int64_t>(lo, 0)) +
                 ".." + std::to_string(hi);

  auto m2 = std::make_shared<LocalCohomologyModule<K>>(B, ideal_gens, 2, store_b);
  CechTower<K>& tw = m2->tower();
  CechTower<K> twb(Bbar, ideal_gens, store_bbar);

  // (a) and (b) side conditions
  rep.upper_status = Status::Holds;
  int top = std::min(static_cast<int>(ideal_gens.size()), static_cast<int>(ring->n()));
  for (int i = 3; i <= top; ++i) {
    Status st = Status::Holds;
    window.for_each([&](const DegreeKey& d0) {
      VanishRow row = vanish_ladder<K>(
          i, d0.total, budget,
          [&](int32_t N) { return tw.cohomology(i, d0.total, N).dim; },
          [&](int32_t N) { return tw.cohomology_transition(i, d0.total, N - 1); });
      st = combine_status(st, row.status);
      if (row.status != Status::Holds) rep.upper_vanishing.push_back(std::move(row));
    });
    rep.upper_status = combine_status(rep.upper_status, st);
  }
  rep.coregular_pair =
      is_coregular_koszul<K>(m2, std::vector<Polynomial<K>>{f, g}, window, budget);

  // the coboundary itself, degree by degree
  Status acc = Status::Holds;
  window.for_each([&](const DegreeKey& d0) {
    int64_t d = d0.total;
    int64_t e2 = d + df + dg;
    DeltaSliceRow row;
    row.degree = d;
    int32_t prev_def = -1, prev_dimT = -1;
    int32_t agree = 0;
    const int32_t span = std::max<int32_t>(2, budget.stabilization_span);
    std::vector<int32_t> prev_comp;
    int32_t N = 0;
    bool solve_failed = false;
    while (N < budget.max_level && !solve_failed) {
      ++N;
      const CohomologySlice<K>& H2d = tw.cohomology(2, d, N);
      SparseMatrix<K> Mf = tw.cohomology_mult(f, 2, d, N);
      SparseMatrix<K> Mg = tw.cohomology_mult(g, 2, d, N);
      auto kern = kernel_basis(SparseMatrix<K>::vstack(Mf, Mg));
      int32_t h0 = static_cast<int32_t>(kern.size());

      const CohomologySlice<K>& H1t = tw.cohomology(1, e2, N);
      SparseMatrix<K> If = tw.cohomology_mult(f, 1, e2 - df, N);
      SparseMatrix<K> Ig = tw.cohomology_mult(g, 1, e2 - dg, N);
      ColSpace<K> image_cs(SparseMatrix<K>::hstack(If, Ig), false);
      int32_t dimT = H1t.dim - image_cs.rank();
      std::vector<int32_t> comp = image_cs.complement_positions();

      if (dimT == 0 && prev_dimT == 0) {
        // zero-target streak: believed only if it reaches the ladder top
        row.dim_h0.push_back(h0);
        row.dim_target.push_back(0);
        row.rank_delta.push_back(0);
        row.deficiency.push_back(0);
        if (N == budget.max_level) row.stable = true;
        prev_def = -1;
        agree = 0;
        prev_dimT = 0;
        prev_comp.clear();
        continue;
      }

      int32_t rankD = 0;
      SparseMatrix<K> delta(static_cast<int32_t>(comp.size()), h0);
      if (dimT > 0 && h0 > 0) {
        KoszulComplex<K>& lvl = tw.level(N);
        DegreeKey kfd = DegreeKey::total_key(d + df);
        SparseMatrix<K> mf2 = lvl.mult(f, 2, DegreeKey::total_key(d));
        SparseMatrix<K> mg1 = lvl.mult(g, 1, kfd);
        ColSpace<K> d1cs(lvl.differential(1, kfd), true);
        const CohomologySlice<K>& H1bar = twb.cohomology(1, e2, N);
        SparseMatrix<K> rho1 = detail::cech_base_change(tw, twb, *B, *Bbar, 1, e2, N);
        SparseMatrix<K> rhoH =
            induced_on_cohomology(tw.cohomology(1, e2, N), H1bar, rho1);
        ColSpace<K> rhocs(rhoH, true);

        for (int32_t vj = 0; vj < h0; ++vj) {
          SVec<K> z;
          for (auto& [j, c] : kern[vj]) svec_axpy(z, c, H2d.reps[j]);
          SVec<K> fz = mf2.apply(z);
          auto ut = d1cs.express(fz);
          if (!ut) {
            row.note = "cocycle lift failed at level " + std::to_string(N);
            solve_failed = true;
            break;
          }
          SVec<K> gu = mg1.apply(*ut);
          SVec<K> rgu = rho1.apply(gu);
          auto cls = H1bar.express(rgu);
          if (!cls) {
            row.note = "reduced chain is not a cocycle at level " + std::to_string(N);
            solve_failed = true;
            break;
          }
          auto w = rhocs.express(*cls);
          if (!w) {
            row.note = "class has no preimage under the base change at level " +
                       std::to_string(N);
            solve_failed = true;
            break;
          }
          SVec<K> wres = image_cs.residual(*w);
          for (size_t ci = 0; ci < comp.size(); ++ci) {
            K val = svec_get(wres, comp[ci]);
            if (!(val == K(0))) delta.add_entry(static_cast<int32_t>(ci), vj, val);
          }
        }
        if (!solve_failed) rankD = rank(delta);
      }
      if (solve_failed) break;
      row.dim_h0.push_back(h0);
      row.dim_target.push_back(dimT);
      row.rank_delta.push_back(rankD);
      if (prev_dimT <= 0) {
        // no transition classes arrive from an empty previous target, so no
        // deficiency can be read at this level
        row.deficiency.push_back(-1);
        prev_def = -1;
        agree = 0;
      } else {
        SparseMatrix<K> Ttr = tw.cohomology_transition(1, e2, N - 1);
        SparseMatrix<K> tbar(static_cast<int32_t>(comp.size()),
                             static_cast<int32_t>(prev_comp.size()));
        for (size_t cj = 0; cj < prev_comp.size(); ++cj) {
          SVec<K> w = Ttr.apply(svec_unit<K>(prev_comp[cj]));
          SVec<K> wres = image_cs.residual(w);
          for (size_t ci = 0; ci < comp.size(); ++ci) {
            K val = svec_get(wres, comp[ci]);
            if (!(val == K(0)))
              tbar.add_entry(static_cast<int32_t>(ci), static_cast<int32_t>(cj), val);
          }
        }
        int32_t def = rank(SparseMatrix<K>::hstack(tbar, delta)) - rankD;
        row.deficiency.push_back(def);
        agree = (prev_def == def) ? agree + 1 : 1;
        if (agree >= span) {
          row.stable = true;
          break;
        }
        prev_def = def;
      }
      prev_dimT = dimT;
      prev_comp = std::move(comp);
    }
    row.top_level = N;
    if (solve_failed) {
      row.status = Status::Inconclusive;
    } else if (!row.stable) {
      row.status = Status::Inconclusive;
      row.note = "no stabilization by level " + std::to_string(budget.max_level);
    } else if (row.deficiency.back() == 0) {
      row.status = Status::Holds;
      if (row.dim_target.back() == 0) row.note = "target vanishes";
    } else {
      row.status = Status::Fails;
      row.note = "target class arriving at level " + std::to_string(N) +
                 " stays outside the image of delta; deficiency steady at " +
                 std::to_string(row.deficiency.back());
    }
    acc = combine_status(acc, row.status);
    bool mass = !row.dim_target.empty() && (row.dim_target.back() > 0 || row.dim_h0.back() > 0);
    if (row.status != Status::Holds || mass) rep.rows.push_back(std::move(row));
  });

  rep.status = acc;
  if (acc == Status::Inconclusive) rep.reason = "unstable or unsolvable slices in window";
  return rep;
}

}  // namespace lcoh
