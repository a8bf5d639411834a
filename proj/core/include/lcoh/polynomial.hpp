#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcoh/field.hpp"

namespace lcoh {

// Variable table. Order in `vars` is the monomial-order precedence:
// vars[0] > vars[1] > ... under graded reverse lexicographic order.
struct Ring {
  std::vector<std::string> vars;
  int n() const { return static_cast<int>(vars.size()); }
  int var_index(std::string_view name) const {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return static_cast<int>(i);
    return -1;
  }
  std::string key() const {
    std::string k;
    for (auto& v : vars) {
      k += v;
      k += ',';
    }
    return k;
  }
};
using RingPtr = std::shared_ptr<const Ring>;

// Exponent vector; negative entries are allowed (Laurent monomials label
// localization and inverse-system bases).
using Exp = std::vector<int32_t>;

inline int64_t exp_total(const Exp& e) { return std::accumulate(e.begin(), e.end(), int64_t{0}); }

inline Exp exp_add(const Exp& a, const Exp& b) {
  Exp r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exp exp_sub(const Exp& a, const Exp& b) {
  Exp r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool exp_nonneg(const Exp& e) {
  return std::all_of(e.begin(), e.end(), [](int32_t x) { return x >= 0; });
}

// true iff a > b in graded reverse lexicographic order (total degree first,
// ties broken by the last nonzero entry of a-b being negative)
inline bool grevlex_greater(const Exp& a, const Exp& b) {
  int64_t da = exp_total(a), db = exp_total(b);
  if (da != db) return da > db;
  for (size_t i = a.size(); i-- > 0;) {
    int32_t d = a[i] - b[i];
    if (d != 0) return d < 0;
  }
  return false;
}

struct GrevlexDesc {
  bool operator()(const Exp& a, const Exp& b) const { return grevlex_greater(a, b); }
};

std::string exp_to_string(const Exp& e, const Ring& ring);

// All monomials of total degree d in n variables, descending grevlex.
// Cached: bases are requested repeatedly by every slice computation.
const std::vector<Exp>& monomial_basis(int n, int64_t d);

inline int64_t monomial_basis_size(int n, int64_t d) {
  if (d < 0) return 0;
  // C(d+n-1, n-1)
  int64_t r = 1;
  for (int i = 1; i <= n - 1; ++i) r = r * (d + i) / i;
  return r;
}

template <class K>
class Polynomial {
public:
  struct Term {
    Exp e;
    K c;
  };

  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }
  static Polynomial constant(RingPtr ring, const K& c) {
    Polynomial p(ring);
    if (!c.is_zero()) p.terms_.push_back({Exp(ring->n(), 0), c});
    return p;
  }
  static Polynomial monomial(RingPtr ring, const Exp& e, const K& c) {
    Polynomial p(ring);
    if (!c.is_zero()) p.terms_.push_back({e, c});
    return p;
  }
  static Polynomial variable(RingPtr ring, int i) {
    Exp e(ring->n(), 0);
    e[i] = 1;
    return monomial(ring, e, K(1));
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t term_count() const { return terms_.size(); }

  // total degree of the leading term; callers deal in homogeneous data
  int64_t degree() const {
    if (is_zero()) throw std::logic_error("degree of zero polynomial");
    return exp_total(terms_.front().e);
  }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int64_t d = exp_total(terms_.front().e);
    for (auto& t : terms_)
      if (exp_total(t.e) != d) return false;
    return true;
  }
  bool has_negative_exponent() const {
    for (auto& t : terms_)
      if (!exp_nonneg(t.e)) return true;
    return false;
  }
  const Exp& leading_exp() const {
    if (is_zero()) throw std::logic_error("leading term of zero polynomial");
    return terms_.front().e;
  }
  const K& leading_coeff() const {
    if (is_zero()) throw std::logic_error("leading term of zero polynomial");
    return terms_.front().c;
  }

  Polynomial operator-() const {
    Polynomial r(ring_);
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({t.e, -t.c});
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b);
    Polynomial r(a.ring_ ? a.ring_ : b.ring_);
    r.terms_ = merge(a.terms_, b.terms_, false);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b);
    Polynomial r(a.ring_ ? a.ring_ : b.ring_);
    r.terms_ = merge(a.terms_, b.terms_, true);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b);
    Polynomial r(a.ring_ ? a.ring_ : b.ring_);
    std::map<Exp, K, GrevlexDesc> acc;
    for (auto& ta : a.terms_)
      for (auto& tb : b.terms_) {
        Exp e = exp_add(ta.e, tb.e);
        auto [it, fresh] = acc.try_emplace(std::move(e), K(0));
        it->second += ta.c * tb.c;
      }
    for (auto& [e, c] : acc)
      if (!c.is_zero()) r.terms_.push_back({e, c});
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const K& c) const {
    Polynomial r(ring_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({t.e, t.c * c});
    return r;
  }
  Polynomial mono_mul(const Exp& e, const K& c) const {
    Polynomial r(ring_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({exp_add(t.e, e), t.c * c});
    return r;
  }

  Polynomial pow(int64_t k) const {
    if (k < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial r = constant(ring_, K(1));
    Polynomial base = *this;
    while (k > 0) {
      if (k & 1) r = r * base;
      base = (k >>= 1) ? base * base : base;
    }
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].e != b.terms_[i].e || !(a.terms_[i].c == b.terms_[i].c)) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  std::string to_string() const;

  static Polynomial parse(RingPtr ring, std::string_view text);

private:
  void check_ring(const Polynomial& o) const {
    if (ring_ && o.ring_ && ring_->n() != o.ring_->n())
      throw std::logic_error("polynomial ring mismatch");
  }
  static std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool sub) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    GrevlexDesc gt;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && gt(a[i].e, b[j].e))) {
        out.push_back(a[i++]);
      } else if (i == a.size() || gt(b[j].e, a[i].e)) {
        out.push_back({b[j].e, sub ? -b[j].c : b[j].c});
        ++j;
      } else {
        K c = sub ? a[i].c - b[j].c : a[i].c + b[j].c;
        if (!c.is_zero()) out.push_back({a[i].e, c});
        ++i;
        ++j;
      }
    }
    return out;
  }

  RingPtr ring_;
  std::vector<Term> terms_;  // grevlex descending, no zero coefficients
};

// Substitutes params[i] for variable i of f; exponents must be nonnegative.
// The result lives in the params' ring.
template <class K>
Polynomial<K> substitute_parameterization(const Polynomial<K>& f,
                                          const std::vector<Polynomial<K>>& params) {
  if (static_cast<int>(params.size()) != f.ring()->n())
    throw std::invalid_argument("parameterization arity mismatch");
  RingPtr target = params.empty() ? f.ring() : params.front().ring();
  Polynomial<K> out = Polynomial<K>::zero(target);
  // memoized variable powers
  std::vector<std::vector<Polynomial<K>>> powers(params.size());
  auto power = [&](size_t i, int32_t e) -> const Polynomial<K>& {
    auto& tab = powers[i];
    if (tab.empty()) tab.push_back(Polynomial<K>::constant(target, K(1)));
    while (static_cast<int32_t>(tab.size()) <= e) tab.push_back(tab.back() * params[i]);
    return tab[e];
  };
  for (auto& t : f.terms()) {
    if (!exp_nonneg(t.e)) throw std::invalid_argument("cannot substitute into Laurent term");
    Polynomial<K> m = Polynomial<K>::constant(target, t.c);
    for (size_t i = 0; i < params.size(); ++i)
      if (t.e[i] != 0) m = m * power(i, t.e[i]);
    out += m;
  }
  return out;
}

template <class K>
std::string Polynomial<K>::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& t : terms_) {
    K c = t.c;
    std::string cs = c.to_string();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) s += "-";
      first = false;
    } else {
      s += neg ? " - " : " + ";
    }
    if (neg) cs = cs.substr(1);
    std::string mono = ring_ ? exp_to_string(t.e, *ring_) : std::string();
    if (mono.empty()) {
      s += cs;
    } else if (cs == "1") {
      s += mono;
    } else {
      s += cs + "*" + mono;
    }
  }
  return s;
}

template <class K>
Polynomial<K> Polynomial<K>::parse(RingPtr ring, std::string_view text) {
  // sum of terms; term = [sign] factor ('*' factor)*;
  // factor = rational literal | var ['^' int]
  Polynomial<K> out = Polynomial<K>::zero(ring);
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto parse_int = [&]() -> int64_t {
    skip_ws();
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    if (i >= text.size() || text[i] < '0' || text[i] > '9')
      throw std::invalid_argument("expected integer in polynomial: " + std::string(text));
    int64_t v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') v = v * 10 + (text[i++] - '0');
    return neg ? -v : v;
  };
  skip_ws();
  bool any = false;
  while (i < text.size()) {
    skip_ws();
    bool neg = false;
    while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') neg = !neg;
      ++i;
      skip_ws();
    }
    if (i >= text.size()) {
      if (any) throw std::invalid_argument("dangling sign in polynomial: " + std::string(text));
      break;
    }
    K coef(neg ? -1 : 1);
    Exp e(ring->n(), 0);
    bool expect_factor = true;
    while (expect_factor) {
      skip_ws();
      if (i < text.size() && ((text[i] >= '0' && text[i] <= '9'))) {
        // rational literal: digits [/ digits]
        size_t start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i < text.size() && text[i] == '/') {
          ++i;
          while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        }
        coef *= K::from_string(text.substr(start, i - start));
      } else {
        size_t start = i;
        while (i < text.size() &&
               ((text[i] >= 'a' && text[i] <= 'z') || (text[i] >= 'A' && text[i] <= 'Z') ||
                (text[i] >= '0' && text[i] <= '9' && i > start) || text[i] == '_'))
          ++i;
        if (i == start)
          throw std::invalid_argument("unexpected character in polynomial: " + std::string(text));
        int vi = ring->var_index(text.substr(start, i - start));
        if (vi < 0)
          throw std::invalid_argument("unknown variable '" + std::string(text.substr(start, i - start)) +
                                      "' in polynomial: " + std::string(text));
        int64_t ex = 1;
        skip_ws();
        if (i < text.size() && text[i] == '^') {
          ++i;
          ex = parse_int();
        }
        e[vi] += static_cast<int32_t>(ex);
      }
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        expect_factor = true;
      } else {
        expect_factor = false;
      }
    }
    out += Polynomial<K>::monomial(ring, e, coef);
    any = true;
    skip_ws();
  }
  return out;
}

}  // namespace lcoh
