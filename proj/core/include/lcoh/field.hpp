#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lcoh {

// Exact rational scalar. Thin value wrapper over GMP so the rest of the
// engine never sees mpq_class directly.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long n, long d) : v_(n, d) { canonicalize(); }
  explicit Rational(const mpq_class& q) : v_(q) { canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  static Rational from_string(std::string_view s);
  static std::string field_name() { return "q"; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  Rational inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  std::string to_string() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

private:
  void canonicalize() { v_.canonicalize(); }
  mpq_class v_;
};

// Prime field scalar with a process-global modulus: one scenario runs one
// field per process, so the modulus is configured once up front (tests use
// FpModulusGuard to switch temporarily).
class Fp {
public:
  Fp() : v_(0) {}
  Fp(long n) {
    const int64_t p = modulus();
    int64_t r = n % p;
    if (r < 0) r += p;
    v_ = static_cast<uint32_t>(r);
  }

  static void set_modulus(uint32_t p);  // validates primality
  static uint32_t modulus_or_zero() { return mod_; }
  static uint32_t modulus() {
    if (mod_ == 0) throw std::logic_error("Fp modulus not set");
    return mod_;
  }
  static Fp from_string(std::string_view s);
  static std::string field_name() { return "fp:" + std::to_string(modulus()); }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp operator-() const { return raw(v_ == 0 ? 0 : mod_ - v_); }
  Fp& operator+=(Fp o) {
    uint32_t s = v_ + o.v_;
    if (s >= mod_) s -= mod_;
    v_ = s;
    return *this;
  }
  Fp& operator-=(Fp o) {
    v_ = (v_ >= o.v_) ? v_ - o.v_ : v_ + mod_ - o.v_;
    return *this;
  }
  Fp& operator*=(Fp o) {
    v_ = static_cast<uint32_t>((uint64_t(v_) * o.v_) % mod_);
    return *this;
  }
  Fp& operator/=(Fp o) { return *this *= o.inv(); }
  friend Fp operator+(Fp a, Fp b) { return a += b; }
  friend Fp operator-(Fp a, Fp b) { return a -= b; }
  friend Fp operator*(Fp a, Fp b) { return a *= b; }
  friend Fp operator/(Fp a, Fp b) { return a /= b; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  Fp inv() const;
  std::string to_string() const { return std::to_string(v_); }
  uint32_t value() const { return v_; }

private:
  static Fp raw(uint32_t v) {
    Fp x;
    x.v_ = v;
    return x;
  }
  static uint32_t mod_;
  uint32_t v_;
};

struct FpModulusGuard {
  explicit FpModulusGuard(uint32_t p) : prev_(Fp::modulus_or_zero()) { Fp::set_modulus(p); }
  ~FpModulusGuard() {
    if (prev_ != 0) Fp::set_modulus(prev_);
  }
  uint32_t prev_;
};

constexpr uint32_t kDefaultPrime = 32003;

// Runtime field selector carried by scenarios; templated code is
// instantiated for both scalar types and dispatched on this.
struct FieldSpec {
  enum class Kind { Q, FP } kind = Kind::Q;
  uint32_t p = 0;
  std::string name() const { return kind == Kind::Q ? "q" : "fp:" + std::to_string(p); }
  static FieldSpec rationals() { return {Kind::Q, 0}; }
  static FieldSpec prime(uint32_t p) { return {Kind::FP, p}; }
};

// Maps a rational with p-free denominator into F_p (used by the cross-field
// consistency checks).
Fp reduce_mod_p(const Rational& q);

}  // namespace lcoh
