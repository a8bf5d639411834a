#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lcoh {

// Sparse vector: (index, value) pairs sorted by index, no zero values.
template <class K>
using SVec = std::vector<std::pair<int32_t, K>>;

template <class K>
SVec<K> svec_unit(int32_t i, const K& c = K(1)) {
  SVec<K> v;
  if (!c.is_zero()) v.push_back({i, c});
  return v;
}

// y += c * x
template <class K>
void svec_axpy(SVec<K>& y, const K& c, const SVec<K>& x) {
  if (c.is_zero() || x.empty()) return;
  SVec<K> out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      K v = c * x[j].second;
      if (!v.is_zero()) out.push_back({x[j].first, v});
      ++j;
    } else {
      K v = y[i].second + c * x[j].second;
      if (!v.is_zero()) out.push_back({y[i].first, v});
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

template <class K>
SVec<K> svec_scale(const SVec<K>& x, const K& c) {
  SVec<K> out;
  if (c.is_zero()) return out;
  out.reserve(x.size());
  for (auto& [i, v] : x) out.push_back({i, v * c});
  return out;
}

template <class K>
K svec_get(const SVec<K>& x, int32_t i) {
  size_t lo = 0, hi = x.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (x[mid].first < i)
      lo = mid + 1;
    else
      hi = mid;
  }
  return (lo < x.size() && x[lo].first == i) ? x[lo].second : K(0);
}

template <class K>
struct SparseMatrix {
  int32_t rows = 0, cols = 0;
  std::vector<SVec<K>> row;  // size() == rows

  SparseMatrix() = default;
  SparseMatrix(int32_t r, int32_t c) : rows(r), cols(c), row(r) {}

  void set_entry(int32_t r, int32_t c, const K& v) {
    if (v.is_zero()) return;
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, int32_t x) { return p.first < x; });
    if (it != rw.end() && it->first == c)
      it->second = v;
    else
      rw.insert(it, {c, v});
  }
  void add_entry(int32_t r, int32_t c, const K& v) {
    if (v.is_zero()) return;
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, int32_t x) { return p.first < x; });
    if (it != rw.end() && it->first == c) {
      it->second += v;
      if (it->second.is_zero()) rw.erase(it);
    } else {
      rw.insert(it, {c, v});
    }
  }
  K get(int32_t r, int32_t c) const { return svec_get(row[r], c); }

  size_t nnz() const {
    size_t s = 0;
    for (auto& r : row) s += r.size();
    return s;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols, rows);
    std::vector<size_t> cnt(cols, 0);
    for (auto& r : row)
      for (auto& [c, v] : r) ++cnt[c];
    for (int32_t c = 0; c < cols; ++c) t.row[c].reserve(cnt[c]);
    for (int32_t r = 0; r < rows; ++r)
      for (auto& [c, v] : row[r]) t.row[c].push_back({r, v});
    return t;
  }

  // y = M x, x indexed by columns
  SVec<K> apply(const SVec<K>& x) const {
    SVec<K> y;
    for (int32_t r = 0; r < rows; ++r) {
      K s(0);
      const auto& rw = row[r];
      size_t i = 0, j = 0;
      while (i < rw.size() && j < x.size()) {
        if (rw[i].first < x[j].first)
          ++i;
        else if (x[j].first < rw[i].first)
          ++j;
        else {
          s += rw[i].second * x[j].second;
          ++i;
          ++j;
        }
      }
      if (!s.is_zero()) y.push_back({r, s});
    }
    return y;
  }

  // this * o (modest sizes only; slice-level module arithmetic)
  SparseMatrix mul(const SparseMatrix& o) const {
    if (cols != o.rows) throw std::logic_error("matmul shape mismatch");
    SparseMatrix out(rows, o.cols);
    for (int32_t r = 0; r < rows; ++r) {
      std::map<int32_t, K> acc;
      for (auto& [c, a] : row[r])
        for (auto& [c2, b] : o.row[c]) {
          auto [it, fresh] = acc.try_emplace(c2, K(0));
          it->second += a * b;
        }
      for (auto& [c2, v] : acc)
        if (!v.is_zero()) out.row[r].push_back({c2, v});
    }
    return out;
  }

  static SparseMatrix identity(int32_t n) {
    SparseMatrix m(n, n);
    for (int32_t i = 0; i < n; ++i) m.row[i].push_back({i, K(1)});
    return m;
  }

  // [a | b]
  static SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows != b.rows) throw std::logic_error("hstack shape mismatch");
    SparseMatrix m(a.rows, a.cols + b.cols);
    for (int32_t r = 0; r < a.rows; ++r) {
      m.row[r] = a.row[r];
      for (auto& [c, v] : b.row[r]) m.row[r].push_back({c + a.cols, v});
    }
    return m;
  }
  // [a ; b]
  static SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols != b.cols) throw std::logic_error("vstack shape mismatch");
    SparseMatrix m(a.rows + b.rows, a.cols);
    for (int32_t r = 0; r < a.rows; ++r) m.row[r] = a.row[r];
    for (int32_t r = 0; r < b.rows; ++r) m.row[a.rows + r] = b.row[r];
    return m;
  }

  // columns of this matrix listed as sparse vectors
  std::vector<SVec<K>> columns() const {
    std::vector<SVec<K>> cs(cols);
    for (int32_t r = 0; r < rows; ++r)
      for (auto& [c, v] : row[r]) cs[c].push_back({r, v});
    return cs;
  }
  static SparseMatrix from_columns(int32_t rows, const std::vector<SVec<K>>& cs) {
    SparseMatrix m(rows, static_cast<int32_t>(cs.size()));
    for (int32_t c = 0; c < m.cols; ++c)
      for (auto& [r, v] : cs[c]) m.row[r].push_back({c, v});
    for (auto& r : m.row)
      std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return m;
  }
};

// Row of an (optionally augmented) elimination tableau.
template <class K>
struct EchRow {
  SVec<K> main;
  SVec<K> aug;
};

// Canonical reduced row echelon form of a list of sparse rows. RREF is
// unique, so every derived basis below is deterministic no matter which
// pivot row the sparsity heuristic picked.
template <class K>
struct Echelon {
  int32_t width = 0, aug_width = 0;
  std::vector<EchRow<K>> rows;   // sorted by lead index, lead coefficient 1
  std::vector<int32_t> leads;    // lead index per row
  int32_t rank() const { return static_cast<int32_t>(rows.size()); }

  int32_t row_for_lead(int32_t lead) const {
    auto it = std::lower_bound(leads.begin(), leads.end(), lead);
    if (it != leads.end() && *it == lead) return static_cast<int32_t>(it - leads.begin());
    return -1;
  }

  // v - (combination of echelon rows) with all lead positions cleared;
  // multipliers (by echelon row) optionally reported
  SVec<K> reduce(SVec<K> v, SVec<K>* multipliers = nullptr) const {
    if (multipliers) multipliers->clear();
    size_t guard = 0;
    for (size_t i = 0; i < v.size();) {
      int32_t r = row_for_lead(v[i].first);
      if (r < 0) {
        ++i;
        continue;
      }
      K c = -v[i].second;
      svec_axpy(v, c, rows[r].main);
      if (multipliers) multipliers->push_back({r, -c});
      if (++guard > rows.size() + v.size() + 16) {
        // each step strictly clears one lead position; this cannot loop
        throw std::logic_error("echelon reduce failed to terminate");
      }
      // v[i] got cleared; indices before i are unaffected (leads ascend)
    }
    if (multipliers)
      std::sort(multipliers->begin(), multipliers->end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  std::vector<int32_t> free_positions() const {
    std::vector<int32_t> f;
    size_t j = 0;
    for (int32_t c = 0; c < width; ++c) {
      if (j < leads.size() && leads[j] == c)
        ++j;
      else
        f.push_back(c);
    }
    return f;
  }

  // reduce main and aug jointly against the echelon rows
  EchRow<K> reduce_row(EchRow<K> r) const {
    size_t guard = 0;
    for (size_t i = 0; i < r.main.size();) {
      int32_t rr = row_for_lead(r.main[i].first);
      if (rr < 0) {
        ++i;
        continue;
      }
      K c = -r.main[i].second;
      svec_axpy(r.main, c, rows[rr].main);
      svec_axpy(r.aug, c, rows[rr].aug);
      if (++guard > rows.size() + r.main.size() + 16)
        throw std::logic_error("echelon reduce failed to terminate");
    }
    return r;
  }

  // insert a row, keeping the tableau fully reduced; false if dependent
  bool insert_row(EchRow<K> r) {
    r = reduce_row(std::move(r));
    if (r.main.empty()) return false;
    K inv = r.main.front().second.inv();
    r.main = svec_scale(r.main, inv);
    r.aug = svec_scale(r.aug, inv);
    int32_t lead = r.main.front().first;
    for (auto& er : rows) {
      K c = svec_get(er.main, lead);
      if (!c.is_zero()) {
        K nc = -c;
        svec_axpy(er.main, nc, r.main);
        svec_axpy(er.aug, nc, r.aug);
      }
    }
    auto pos = std::lower_bound(leads.begin(), leads.end(), lead);
    size_t idx = static_cast<size_t>(pos - leads.begin());
    leads.insert(pos, lead);
    rows.insert(rows.begin() + idx, std::move(r));
    return true;
  }
};

// Gaussian elimination to canonical RREF. Pivot rows are chosen sparsest-
// first to limit fill; the result is the unique RREF regardless.
template <class K>
Echelon<K> rref_rows(std::vector<EchRow<K>> work, int32_t width, int32_t aug_width) {
  Echelon<K> out;
  out.width = width;
  out.aug_width = aug_width;
  // bucket rows by current lead
  std::map<int32_t, std::vector<size_t>> bucket;
  for (size_t i = 0; i < work.size(); ++i)
    if (!work[i].main.empty()) bucket[work[i].main.front().first].push_back(i);

  std::vector<size_t> pivot_idx;
  std::vector<int32_t> pivot_lead;
  while (!bucket.empty()) {
    auto it = bucket.begin();
    int32_t lead = it->first;
    std::vector<size_t> rows_here = std::move(it->second);
    bucket.erase(it);
    // sparsest row as pivot; ties break on original index for determinism
    size_t best = rows_here[0];
    for (size_t idx : rows_here) {
      if (work[idx].main.size() < work[best].main.size() ||
          (work[idx].main.size() == work[best].main.size() && idx < best))
        best = idx;
    }
    for (size_t idx : rows_here) {
      if (idx == best) continue;
      K c = -(work[idx].main.front().second / work[best].main.front().second);
      svec_axpy(work[idx].main, c, work[best].main);
      svec_axpy(work[idx].aug, c, work[best].aug);
      if (!work[idx].main.empty()) bucket[work[idx].main.front().first].push_back(idx);
    }
    pivot_idx.push_back(best);
    pivot_lead.push_back(lead);
  }

  // back-substitution for full reduction, then pivot normalization
  const size_t np = pivot_idx.size();
  out.rows.resize(np);
  out.leads = pivot_lead;
  // process pivots from the rightmost lead backwards so each row is reduced
  // against already-final rows
  std::map<int32_t, size_t> lead_to_slot;
  for (size_t i = 0; i < np; ++i) lead_to_slot[pivot_lead[i]] = i;
  for (size_t i = np; i-- > 0;) {
    EchRow<K> r = std::move(work[pivot_idx[i]]);
    K inv = r.main.front().second.inv();
    r.main = svec_scale(r.main, inv);
    r.aug = svec_scale(r.aug, inv);
    // clear any later pivot columns
    for (size_t k = 1; k < r.main.size();) {
      auto slot = lead_to_slot.find(r.main[k].first);
      if (slot == lead_to_slot.end() || slot->second <= i) {
        ++k;
        continue;
      }
      const EchRow<K>& fin = out.rows[slot->second];
      K c = -r.main[k].second;
      svec_axpy(r.main, c, fin.main);
      svec_axpy(r.aug, c, fin.aug);
      // entry k was cleared; indices below k unchanged
    }
    out.rows[i] = std::move(r);
  }
  return out;
}

template <class K>
Echelon<K> rref(const SparseMatrix<K>& m) {
  std::vector<EchRow<K>> rows(m.rows);
  for (int32_t r = 0; r < m.rows; ++r) rows[r].main = m.row[r];
  return rref_rows(std::move(rows), m.cols, 0);
}

template <class K>
int32_t rank(const SparseMatrix<K>& m) {
  return rref(m).rank();
}

// Null space of the column map of m, canonical basis from the RREF free
// columns, one vector per free column in ascending column order.
template <class K>
std::vector<SVec<K>> kernel_basis(const SparseMatrix<K>& m) {
  Echelon<K> e = rref(m);
  std::vector<SVec<K>> out;
  for (int32_t f : e.free_positions()) {
    SVec<K> v;
    // pivot-row entries at column f, negated, plus a 1 at f
    for (size_t i = 0; i < e.rows.size(); ++i) {
      K c = svec_get(e.rows[i].main, f);
      if (!c.is_zero()) v.push_back({e.leads[i], -c});
    }
    v.push_back({f, K(1)});
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(v));
  }
  return out;
}

// Column space of a matrix in canonical echelon form, optionally tracking
// how each echelon generator is expressed in the original columns.
template <class K>
class ColSpace {
public:
  ColSpace() = default;
  explicit ColSpace(const SparseMatrix<K>& m, bool track_expression = false) {
    std::vector<EchRow<K>> rows(m.cols);
    auto cols = m.columns();
    for (int32_t c = 0; c < m.cols; ++c) {
      rows[c].main = std::move(cols[c]);
      if (track_expression) rows[c].aug = svec_unit<K>(c);
    }
    ech_ = rref_rows(std::move(rows), m.rows, track_expression ? m.cols : 0);
    tracked_ = track_expression;
  }

  int32_t rank() const { return ech_.rank(); }
  const Echelon<K>& echelon() const { return ech_; }

  bool contains(const SVec<K>& v) const { return ech_.reduce(v).empty(); }

  // residual of v modulo the column space (canonical: all lead positions cleared)
  SVec<K> residual(const SVec<K>& v) const { return ech_.reduce(v); }

  // x with M x = v, in original column coordinates (requires tracking)
  std::optional<SVec<K>> express(const SVec<K>& v) const {
    if (!tracked_) throw std::logic_error("ColSpace built without expression tracking");
    SVec<K> mult;
    SVec<K> res = ech_.reduce(v, &mult);
    if (!res.empty()) return std::nullopt;
    SVec<K> x;
    for (auto& [r, c] : mult) svec_axpy(x, c, ech_.rows[r].aug);
    return x;
  }

  // target coordinates not led by the column space: canonical complement
  // (quotient) basis positions
  std::vector<int32_t> complement_positions() const { return ech_.free_positions(); }

private:
  Echelon<K> ech_;
  bool tracked_ = false;
};

}  // namespace lcoh
