#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lcoh/cech.hpp"
#include "lcoh/koszul.hpp"
#include "lcoh/membership.hpp"
#include "lcoh/module.hpp"

namespace lcoh {

enum class Status { Holds, Fails, Inconclusive };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    default: return "Inconclusive";
  }
}

// combine per-slice statuses: any Fails dominates, then any Inconclusive
inline Status combine_status(Status a, Status b) {
  if (a == Status::Fails || b == Status::Fails) return Status::Fails;
  if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
  return Status::Holds;
}

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Surjectivity of multiplication, degree by degree over the window.
//
// Exact backends decide each slice outright. Leveled backends walk the
// truncation tower, where a colimit class entering at level N need not be
// divisible until several transitions later, so each source level is pushed
// forward and its classes are tested against the multiplication image where
// they land. Transitions commute with multiplication, hence a covered class
// stays covered and the uncovered rank of a fixed source level can only drop
// as the push deepens: reaching zero certifies those classes for good, while
// a positive value that repeats across the stabilization span and persists
// to the top of the ladder pins the same uncovered classes at every computed
// level and is read as a stable counterexample. An uncovered rank still
// falling at the top is budget exhaustion, not evidence either way.
//
// Slices can onset late in the tower (zero for several levels, then mass),
// so zero dimensions low in the ladder prove nothing: a slice counts as
// stably zero only when the whole ladder is zero, and classes born at the
// very top outrun any finite check. Every verdict is relative to the budget
// and the reports say so.

struct SurjRow {
  DegreeKey target;
  std::vector<int32_t> dims;      // slice dim per computed level (exact: one entry)
  int32_t levels_from = 0;        // level of dims.front() (leveled only)
  int32_t rank_transition = 0;    // top-level transition rank (leveled)
  int32_t rank_mult = 0;          // top-level multiplication rank
  int32_t deficiency = 0;         // uncovered rank at the ladder top
  bool stable = false;
  Status status = Status::Inconclusive;
  std::string note;
  std::vector<std::string> witnesses;
};

struct SurjReport {
  std::string element;
  Status status = Status::Inconclusive;
  std::string reason;
  std::vector<SurjRow> rows;      // nonzero, failing, or unstable slices
  int64_t zero_slices = 0;        // fully zero stable slices skipped from rows
  int64_t covered_slices = 0;
};

namespace detail {

template <class K>
DegreeKey mult_source_key(const Polynomial<K>& x, const DegreeKey& target) {
  if (target.is_fine()) {
    if (!x.is_monomial()) throw std::logic_error("fine-graded step needs a monomial");
    return DegreeKey::fine_key(exp_sub(target.fine, x.leading_exp()));
  }
  return DegreeKey::total_key(target.total - x.degree(), target.level);
}

// rank of the columns of C modulo the column space cs
template <class K>
int32_t uncovered_rank(const SparseMatrix<K>& C, const ColSpace<K>& cs) {
  SparseMatrix<K> res(C.rows, C.cols);
  for (int32_t j = 0; j < C.cols; ++j) {
    SVec<K> r = cs.residual(C.apply(svec_unit<K>(j)));
    for (auto& [i, v] : r) res.add_entry(i, j, v);
  }
  return rank(res);
}

}  // namespace detail

// surjectivity of x : M -> M onto each target slice in the window
template <class K>
SurjReport check_mult_surjective(Module<K>& M, const Polynomial<K>& x,
                                 const DegreeWindow& window, const Budget& budget,
                                 bool want_witnesses = false, bool early_exit = false) {
  SurjReport rep;
  rep.element = x.to_string();
  bool any_nonzero = false;
  bool aborted = false;
  Status acc = Status::Holds;

  window.for_each([&](const DegreeKey& target0) {
    if (aborted) return;
    SurjRow row;
    if (M.exactness() == Module<K>::Exactness::Exact) {
      row.target = target0;
      const Slice<K>& tgt = M.slice(target0);
      row.dims = {tgt.dim};
      row.stable = true;
      if (tgt.dim == 0) {
        row.status = Status::Holds;
        ++rep.zero_slices;
        return;
      }
      any_nonzero = true;
      DegreeKey src = detail::mult_source_key(x, target0);
      const SparseMatrix<K>& m = M.mult(x, src);
      ColSpace<K> cs(m, want_witnesses);
      row.rank_mult = cs.rank();
      row.deficiency = tgt.dim - cs.rank();
      if (row.deficiency == 0) {
        row.status = Status::Holds;
        ++rep.covered_slices;
        if (want_witnesses) {
          for (int32_t j = 0; j < tgt.dim; ++j) {
            auto pre = cs.express(svec_unit<K>(j));
            std::string w = tgt.labels[j] + " <- [";
            bool first = true;
            for (auto& [c, v] : *pre) {
              if (!first) w += ", ";
              w += std::to_string(c) + ":" + v.to_string();
              first = false;
            }
            row.witnesses.push_back(w + "]");
          }
        }
      } else {
        row.status = Status::Fails;
        int32_t pos = cs.complement_positions().front();
        row.note = "no preimage for " + tgt.labels[pos] + " at " + target0.to_string();
      }
    } else {
      // truncation tower: push each source level forward and test coverage
      // where its classes land (see the note above SurjRow)
      int64_t d = target0.total;
      const int32_t top = budget.max_level;
      const int32_t span = std::max<int32_t>(2, budget.stabilization_span);
      if (top < 2) {
        row.target = target0;
        row.status = Status::Inconclusive;
        row.note = "ladder needs at least two levels";
        acc = combine_status(acc, row.status);
        rep.rows.push_back(std::move(row));
        return;
      }
      std::vector<int32_t> dims;           // dims[L-1] = slice dim at level L
      std::vector<SparseMatrix<K>> trans;  // trans[L-2] : level L-1 -> level L
      std::vector<ColSpace<K>> mult_cs;    // multiplication image per level
      for (int32_t L = 1; L <= top; ++L) {
        DegreeKey tk = DegreeKey::total_key(d, L);
        dims.push_back(M.slice(tk).dim);
        if (L >= 2) trans.push_back(M.transition(DegreeKey::total_key(d, L - 1)));
        DegreeKey src = detail::mult_source_key(x, tk);
        M.slice(src);
        mult_cs.emplace_back(M.mult(x, src), true);
      }
      row.target = DegreeKey::total_key(d, top);
      row.dims = dims;
      row.levels_from = 1;
      row.rank_transition = rank(trans.back());
      row.rank_mult = mult_cs.back().rank();
      bool all_zero = true;
      for (int32_t v : dims) all_zero = all_zero && v == 0;
      if (all_zero) {
        row.stable = true;
        row.status = Status::Holds;
        ++rep.zero_slices;
        return;
      }
      any_nonzero = true;
      // one run per source level: the composite push C and the trailing run
      // of equal uncovered ranks
      struct Defect {
        int32_t source = 0;
        int32_t unc = 0;
        int32_t run = 0;
        SparseMatrix<K> C;
      };
      std::optional<Defect> stable_defect;
      std::optional<Defect> unresolved;
      int32_t tested = 0;
      int32_t max_lag = 0;
      for (int32_t N0 = 1; N0 < top; ++N0) {
        if (dims[N0 - 1] == 0) continue;  // nothing enters at this level
        ++tested;
        SparseMatrix<K> C = trans[N0 - 1];
        int32_t unc = -1;
        int32_t run = 0;
        int32_t landed = 0;
        for (int32_t L = N0 + 1; L <= top; ++L) {
          if (L > N0 + 1) C = trans[L - 2].mul(C);
          int32_t u = detail::uncovered_rank(C, mult_cs[L - 1]);
          run = (u == unc) ? run + 1 : 1;
          unc = u;
          if (unc == 0) {
            landed = L;
            break;
          }
        }
        if (unc == 0) {
          max_lag = std::max(max_lag, landed - N0);
          if (want_witnesses) {
            for (int32_t j = 0; j < C.cols; ++j) {
              SVec<K> cls = C.apply(svec_unit<K>(j));
              if (cls.empty()) continue;  // the class dies on its own
              auto pre = mult_cs[landed - 1].express(cls);
              if (!pre) continue;
              std::string w = "c#" + std::to_string(j) + "@N" + std::to_string(N0) +
                              " <- @N" + std::to_string(landed) + " [";
              bool first = true;
              for (auto& [c, v] : *pre) {
                if (!first) w += ", ";
                w += std::to_string(c) + ":" + v.to_string();
                first = false;
              }
              row.witnesses.push_back(w + "]");
            }
          }
          continue;
        }
        if (run >= span) {
          if (!stable_defect) stable_defect = Defect{N0, unc, run, std::move(C)};
        } else if (!unresolved) {
          unresolved = Defect{N0, unc, run, std::move(C)};
        }
      }
      if (stable_defect) {
        row.status = Status::Fails;
        row.stable = true;
        row.deficiency = stable_defect->unc;
        // name one class whose push stays outside the image through the top
        for (int32_t j = 0; j < stable_defect->C.cols; ++j) {
          SVec<K> cls = stable_defect->C.apply(svec_unit<K>(j));
          if (cls.empty() || mult_cs[top - 1].contains(cls)) continue;
          row.note = "class c#" + std::to_string(j) + "@N" +
                     std::to_string(stable_defect->source) +
                     " stays uncovered through level " + std::to_string(top) +
                     "; uncovered rank steady at " + std::to_string(stable_defect->unc) +
                     " across " + std::to_string(stable_defect->run) + " levels";
          break;
        }
      } else if (unresolved) {
        row.status = Status::Inconclusive;
        row.deficiency = unresolved->unc;
        row.note = "classes from level " + std::to_string(unresolved->source) +
                   " stay uncovered at level " + std::to_string(top) +
                   " without a stable count";
      } else if (tested == 0) {
        row.status = Status::Inconclusive;
        row.note = "classes appear only at the top of the ladder";
      } else {
        row.status = Status::Holds;
        row.stable = true;
        ++rep.covered_slices;
        if (max_lag > 1)
          row.note = "covered within " + std::to_string(max_lag) + " transition steps";
      }
    }
    acc = combine_status(acc, row.status);
    if (row.dims.empty() || row.dims.back() != 0 || row.status != Status::Holds ||
        !row.witnesses.empty())
      rep.rows.push_back(std::move(row));
    if (early_exit && acc == Status::Fails) aborted = true;
  });

  if (!any_nonzero) {
    rep.status = Status::Inconclusive;
    rep.reason = "module vanishes in window";
    return rep;
  }
  rep.status = acc;
  if (acc == Status::Inconclusive) rep.reason = "unstable slices in window";
  return rep;
}

// ---------------------------------------------------------------------------
// Stable vanishing ladder for one leveled slice: dims per level plus one-step
// transition ranks. Vanishing evidence is read only at the top of the budget
// ladder, because slices can onset late and classes can take several steps to
// die. Accepted evidence, any of:
//   zero_top:   the top two dims are zero;
//   dead_top:   the top two one-step transitions have rank zero;
//   dead_span:  the composite transition over the stabilization span has
//               rank zero and its source level carries mass, so every class
//               alive at the bottom of the span dies inside it.
// The youngest levels are never certified by any finite check; every verdict
// is relative to the budget and the row keeps the full ladder. Only a
// persistent positive family (equal dims carried by full-rank transitions
// twice in a row) may stop the climb early, and that is a Fails.

struct VanishRow {
  int i = 0;
  int64_t degree = 0;
  std::vector<int32_t> dims;
  int32_t top_level = 0;
  int32_t rank_transition = 0;   // one-step rank at the top
  int32_t rank_composite = 0;    // span-step rank at the top
  bool stable = false;
  Status status = Status::Inconclusive;  // Holds means: vanishes stably
  std::string note;
};

template <class K, class DimAt, class TransAt>
VanishRow vanish_ladder(int i, int64_t d, const Budget& budget, DimAt&& dim_at,
                        TransAt&& trans_at) {
  VanishRow row;
  row.i = i;
  row.degree = d;
  row.dims.push_back(dim_at(1));
  std::vector<SparseMatrix<K>> trans;  // trans[N-2] : level N-1 -> N
  int32_t prev_rankT = -1;
  int32_t N = 1;
  bool vanished = false;
  while (N < budget.max_level) {
    ++N;
    row.dims.push_back(dim_at(N));
    trans.push_back(trans_at(N));
    int32_t rank_T = rank(trans.back());
    row.rank_transition = rank_T;
    bool persist_pair = row.dims[N - 1] == row.dims[N - 2] && rank_T == row.dims[N - 1] &&
                        rank_T > 0 && prev_rankT == rank_T;
    if (persist_pair) {
      row.stable = true;
      break;
    }
    if (N == budget.max_level) {
      bool zero_top = row.dims[N - 1] == 0 && row.dims[N - 2] == 0;
      bool dead_top = rank_T == 0 && prev_rankT == 0;
      int32_t span = std::max<int32_t>(2, budget.stabilization_span);
      span = std::min(span, N - 1);
      SparseMatrix<K> comp = trans.back();
      for (int32_t s = 1; s < span; ++s) comp = comp.mul(trans[trans.size() - 1 - s]);
      row.rank_composite = rank(comp);
      bool dead_span = row.rank_composite == 0 && row.dims[N - span] > 0;
      if (zero_top || dead_top || dead_span) {
        row.stable = true;
        vanished = true;
        if (dead_span && !dead_top && !zero_top)
          row.note = "classes through level " + std::to_string(N - span) +
                     " die by level " + std::to_string(N);
      }
    }
    prev_rankT = rank_T;
  }
  row.top_level = N;
  if (!row.stable) {
    row.status = Status::Inconclusive;
    row.note = "no stabilization by level " + std::to_string(budget.max_level);
  } else if (vanished) {
    row.status = Status::Holds;
  } else {
    row.status = Status::Fails;
    row.note = std::to_string(row.rank_transition) + " persistent classes at level " +
               std::to_string(N);
  }
  return row;
}

// ---------------------------------------------------------------------------
// Koszul vanishing criterion: the sequence is coregular iff H^i(seq; M) = 0
// for every i >= 1. On towers each (i, degree) slice walks the vanishing
// ladder above on the induced cohomology transitions.

struct KoszulVanishRow {
  int i = 0;
  DegreeKey target;
  std::vector<int32_t> dims;
  int32_t rank_transition = 0;
  bool stable = false;
  Status status = Status::Inconclusive;
  std::string note;
};

struct KoszulReport {
  std::vector<std::string> sequence;
  Status status = Status::Inconclusive;
  std::string reason;
  std::vector<KoszulVanishRow> rows;
  int64_t zero_slices = 0;
};

// vanishing of H^i(seq; M) for i in [i_min, i_max] over the window
template <class K>
KoszulReport koszul_vanishing(ModulePtr<K> M, const std::vector<Polynomial<K>>& seq,
                              const DegreeWindow& window, const Budget& budget, int i_min,
                              int i_max) {
  KoszulReport rep;
  for (auto& q : seq) rep.sequence.push_back(q.to_string());
  KoszulComplex<K> kc(M, seq);
  i_max = std::min(i_max, kc.length());
  Status acc = Status::Holds;
  bool any_module_mass = false;

  window.for_each([&](const DegreeKey& d0) {
    if (M->exactness() == Module<K>::Exactness::Exact) {
      if (M->slice(d0).dim > 0) any_module_mass = true;
      for (int i = i_min; i <= i_max; ++i) {
        KoszulVanishRow row;
        row.i = i;
        row.target = d0;
        row.stable = true;
        int32_t h = kc.cohomology(i, d0).dim;
        row.dims = {h};
        if (h == 0) {
          ++rep.zero_slices;
          continue;
        }
        row.status = Status::Fails;
        row.note = "H^" + std::to_string(i) + " nonzero (dim " + std::to_string(h) +
                   ") at " + d0.to_string();
        acc = combine_status(acc, Status::Fails);
        rep.rows.push_back(std::move(row));
      }
      return;
    }
    // leveled module: vanishing ladder per cohomological index
    if (M->slice(DegreeKey::total_key(d0.total, 2)).dim > 0) any_module_mass = true;
    for (int i = i_min; i <= i_max; ++i) {
      VanishRow vr = vanish_ladder<K>(
          i, d0.total, budget,
          [&](int32_t N) {
            return kc.cohomology(i, DegreeKey::total_key(d0.total, N)).dim;
          },
          [&](int32_t N) {
            return kc.cohomology_transition(i, DegreeKey::total_key(d0.total, N - 1));
          });
      if (vr.status == Status::Holds) {
        ++rep.zero_slices;
        continue;
      }
      KoszulVanishRow row;
      row.i = i;
      row.target = DegreeKey::total_key(d0.total, vr.top_level);
      row.dims = std::move(vr.dims);
      row.rank_transition = vr.rank_transition;
      row.stable = vr.stable;
      row.status = vr.status;
      row.note = "H^" + std::to_string(i) + ": " + vr.note;
      acc = combine_status(acc, row.status);
      rep.rows.push_back(std::move(row));
    }
  });

  if (!any_module_mass) {
    rep.status = Status::Inconclusive;
    rep.reason = "module vanishes in window";
    return rep;
  }
  rep.status = acc;
  if (acc == Status::Inconclusive) rep.reason = "unstable slices in window";
  return rep;
}

template <class K>
KoszulReport is_coregular_koszul(ModulePtr<K> M, const std::vector<Polynomial<K>>& seq,
                                 const DegreeWindow& window, const Budget& budget) {
  return koszul_vanishing(M, seq, window, budget, 1, static_cast<int>(seq.size()));
}

// ---------------------------------------------------------------------------
// Coregularity by the definition: x_1 surjective on M, then x_{i+1}
// surjective on the annihilator submodule 0 :_M (x_1..x_i).

struct CoregReport {
  std::vector<std::string> sequence;
  Status status = Status::Inconclusive;
  std::string reason;
  std::vector<SurjReport> steps;
};

// verify seq elements lie in the ideal; throws PreconditionError
template <class K>
void require_membership(const std::vector<Polynomial<K>>& seq,
                        const std::vector<Polynomial<K>>& ideal_gens,
                        const std::string& what) {
  for (auto& x : seq) {
    auto r = ideal_membership(x, ideal_gens);
    if (!r.found)
      throw PreconditionError(what + ": element " + x.to_string() +
                              " is not in the ambient ideal");
  }
}

template <class K>
CoregReport is_coregular_definition(ModulePtr<K> M, const std::vector<Polynomial<K>>& seq,
                                    const std::vector<Polynomial<K>>& ideal_gens,
                                    const DegreeWindow& window, const Budget& budget,
                                    bool want_witnesses = false) {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  if (!ideal_gens.empty()) require_membership(seq, ideal_gens, "coregular sequence");
  CoregReport rep;
  for (auto& q : seq) rep.sequence.push_back(q.to_string());
  Status acc = Status::Holds;
  for (size_t i = 0; i < seq.size(); ++i) {
    ModulePtr<K> target = M;
    if (i > 0) {
      std::vector<Polynomial<K>> prior(seq.begin(), seq.begin() + i);
      target = std::make_shared<KernelModule<K>>(M, prior);
    }
    SurjReport step = check_mult_surjective(*target, seq[i], window, budget, want_witnesses);
    acc = combine_status(acc, step.status);
    // a later step failing refutes the sequence no matter how earlier steps
    // came out, so only a definite failure stops the walk
    bool stop = step.status == Status::Fails;
    rep.steps.push_back(std::move(step));
    if (stop) break;
  }
  rep.status = acc;
  if (acc != Status::Holds) {
    for (size_t i = 0; i < rep.steps.size(); ++i) {
      if (rep.steps[i].status != acc) continue;
      rep.reason = rep.steps[i].reason.empty()
                       ? "step " + std::to_string(i + 1) + " is " + status_name(acc)
                       : "step " + std::to_string(i + 1) + ": " + rep.steps[i].reason;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Codepth search: depth-first over an ordered candidate pool, extending only
// verified sequences. Order independence of coregular sequences lets the
// search restrict to increasing pool positions.

struct CodepthReport {
  int32_t best = 0;
  std::vector<std::string> witness;
  std::vector<std::string> pool;    // candidates after the membership filter
  std::vector<std::string> rejected_pool;  // declared but outside the ideal
  int32_t max_len = 0;
  std::string exhaustion;
  bool any_inconclusive = false;
};

template <class K>
void codepth_dfs(ModulePtr<K> M, const std::vector<Polynomial<K>>& pool, size_t next,
                 std::vector<size_t>& current, const DegreeWindow& window,
                 const Budget& budget, int32_t max_len, CodepthReport& rep) {
  if (static_cast<int32_t>(current.size()) > rep.best) {
    rep.best = static_cast<int32_t>(current.size());
    rep.witness.clear();
    for (size_t idx : current) rep.witness.push_back(pool[idx].to_string());
  }
  if (static_cast<int32_t>(current.size()) >= max_len) return;
  for (size_t j = next; j < pool.size(); ++j) {
    ModulePtr<K> target = M;
    if (!current.empty()) {
      std::vector<Polynomial<K>> prior;
      for (size_t idx : current) prior.push_back(pool[idx]);
      target = std::make_shared<KernelModule<K>>(M, prior);
    }
    SurjReport step = check_mult_surjective(*target, pool[j], window, budget, false, true);
    if (step.status == Status::Inconclusive) rep.any_inconclusive = true;
    if (step.status != Status::Holds) continue;
    current.push_back(j);
    codepth_dfs(M, pool, j + 1, current, window, budget, max_len, rep);
    current.pop_back();
  }
}

template <class K>
CodepthReport codepth_search(ModulePtr<K> M, const std::vector<Polynomial<K>>& ideal_gens,
                             const std::vector<Polynomial<K>>& declared_pool,
                             int32_t auto_pool_degree, int32_t max_len,
                             const DegreeWindow& window, const Budget& budget) {
  CodepthReport rep;
  int32_t dim_a = static_cast<int32_t>(M->ring()->n());
  rep.max_len = std::min(max_len, dim_a);

  std::vector<Polynomial<K>> pool;
  auto add_candidate = [&](const Polynomial<K>& p) {
    if (p.is_zero()) return;
    for (auto& q : pool)
      if (q == p) return;
    auto r = ideal_membership(p, ideal_gens);
    if (!r.found) {
      rep.rejected_pool.push_back(p.to_string());
      return;
    }
    pool.push_back(p);
  };
  for (auto& p : declared_pool) add_candidate(p);
  RingPtr ring = M->ring();
  for (int64_t deg = 1; deg <= auto_pool_degree; ++deg) {
    for (auto& e : monomial_basis(ring->n(), deg))
      add_candidate(Polynomial<K>::monomial(ring, e, K(1)));
  }
  for (auto& p : pool) rep.pool.push_back(p.to_string());

  std::vector<size_t> current;
  codepth_dfs(M, pool, 0, current, window, budget, rep.max_len, rep);
  rep.exhaustion = "searched sequences from a pool of " + std::to_string(pool.size()) +
                   " candidates up to length " + std::to_string(rep.max_len) +
                   "; bound claimed only relative to this pool";
  return rep;
}

}  // namespace lcoh
