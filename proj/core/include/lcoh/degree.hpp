#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "lcoh/polynomial.hpp"

namespace lcoh {

// Grading key. Fine keys address one multidegree of a torus-graded module;
// Total keys address a total-degree slice, together with the truncation
// level N of the localization tower it was computed at (level 0 = module
// with exact finite slices, no tower).
struct DegreeKey {
  enum class Kind { Fine, Total };
  Kind kind = Kind::Total;
  Exp fine;
  int64_t total = 0;
  int32_t level = 0;

  static DegreeKey fine_key(Exp e) {
    DegreeKey k;
    k.kind = Kind::Fine;
    k.fine = std::move(e);
    k.total = 0;
    return k;
  }
  static DegreeKey total_key(int64_t d, int32_t level = 0) {
    DegreeKey k;
    k.kind = Kind::Total;
    k.total = d;
    k.level = level;
    return k;
  }

  bool is_fine() const { return kind == Kind::Fine; }

  int64_t total_degree() const { return is_fine() ? exp_total(fine) : total; }

  DegreeKey shifted_by_exp(const Exp& e) const {
    if (!is_fine()) throw std::logic_error("exp shift on total key");
    return fine_key(exp_add(fine, e));
  }
  DegreeKey shifted_by_total(int64_t d) const {
    if (is_fine()) throw std::logic_error("total shift on fine key");
    return total_key(total + d, level);
  }
  // shift by the degree of a homogeneous multiplier
  template <class K>
  DegreeKey shifted_by_poly(const Polynomial<K>& f) const {
    if (f.is_zero()) throw std::logic_error("degree shift by zero polynomial");
    if (is_fine()) {
      if (!f.is_monomial()) throw std::logic_error("fine-graded shift needs a monomial");
      return shifted_by_exp(f.leading_exp());
    }
    return shifted_by_total(f.degree());
  }
  DegreeKey at_level(int32_t n) const {
    if (is_fine()) return *this;
    return total_key(total, n);
  }

  std::string to_string() const {
    if (is_fine()) {
      std::string s = "(";
      for (size_t i = 0; i < fine.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(fine[i]);
      }
      return s + ")";
    }
    std::string s = std::to_string(total);
    if (level > 0) s += "@" + std::to_string(level);
    return s;
  }

  friend bool operator==(const DegreeKey& a, const DegreeKey& b) {
    return a.kind == b.kind && a.fine == b.fine && a.total == b.total && a.level == b.level;
  }
  friend bool operator<(const DegreeKey& a, const DegreeKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.fine != b.fine) return a.fine < b.fine;
    if (a.total != b.total) return a.total < b.total;
    return a.level < b.level;
  }
};

// Degree quantifier for checks: either a fine box [lo,hi]^n or a total
// degree window [lo,hi].
struct DegreeWindow {
  bool fine = false;
  int64_t lo = 0, hi = 0;  // total window
  std::vector<std::pair<int32_t, int32_t>> box;  // fine box, one per variable

  static DegreeWindow total_window(int64_t lo, int64_t hi) {
    DegreeWindow w;
    w.fine = false;
    w.lo = lo;
    w.hi = hi;
    return w;
  }
  static DegreeWindow fine_box(std::vector<std::pair<int32_t, int32_t>> b) {
    DegreeWindow w;
    w.fine = true;
    w.box = std::move(b);
    return w;
  }
  static DegreeWindow uniform_box(int n, int32_t lo, int32_t hi) {
    return fine_box(std::vector<std::pair<int32_t, int32_t>>(n, {lo, hi}));
  }

  bool contains(const DegreeKey& k) const {
    if (fine != k.is_fine()) return false;
    if (!fine) return k.total >= lo && k.total <= hi;
    if (k.fine.size() != box.size()) return false;
    for (size_t i = 0; i < box.size(); ++i)
      if (k.fine[i] < box[i].first || k.fine[i] > box[i].second) return false;
    return true;
  }

  // enumerate keys in deterministic order (fine: lexicographic scan;
  // total: ascending)
  template <class F>
  void for_each(F&& fn) const {
    if (!fine) {
      for (int64_t d = lo; d <= hi; ++d) fn(DegreeKey::total_key(d));
      return;
    }
    Exp cur(box.size());
    for (size_t i = 0; i < box.size(); ++i) cur[i] = box[i].first;
    while (true) {
      fn(DegreeKey::fine_key(cur));
      size_t i = box.size();
      while (i-- > 0) {
        if (cur[i] < box[i].second) {
          ++cur[i];
          for (size_t j = i + 1; j < box.size(); ++j) cur[j] = box[j].first;
          break;
        }
        if (i == 0) return;
      }
    }
  }

  std::string to_string() const {
    if (!fine) return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    std::string s = "box[";
    for (size_t i = 0; i < box.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(box[i].first) + ":" + std::to_string(box[i].second);
    }
    return s + "]";
  }
};

// Truncation/enumeration budget carried by a scenario.
struct Budget {
  int32_t max_level = 6;        // localization tower cap N_max
  int32_t stabilization_span = 2;  // levels that must agree to call data stable
  int64_t membership_degree_cap = 24;  // ideal membership search degree cap
  int32_t power_cap = 8;        // exponent cap for powers/annihilation searches
  int64_t gen_degree_cap = 6;   // degree cap for searched multiplier polynomials
};

}  // namespace lcoh
