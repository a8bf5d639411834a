#include "lcoh/field.hpp"

namespace lcoh {

uint32_t Fp::mod_ = 0;

namespace {
bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}
}  // namespace

void Fp::set_modulus(uint32_t p) {
  if (p < 2 || p >= (1u << 31) || !is_prime_u32(p))
    throw std::invalid_argument("Fp modulus must be a prime below 2^31, got " + std::to_string(p));
  mod_ = p;
}

Fp Fp::inv() const {
  if (v_ == 0) throw std::domain_error("inverse of zero in Fp");
  // extended Euclid on (v, p)
  int64_t a = v_, b = mod_, x0 = 1, x1 = 0;
  while (b != 0) {
    int64_t q = a / b;
    int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw std::domain_error("non-invertible element in Fp");
  if (x0 < 0) x0 += mod_;
  return raw(static_cast<uint32_t>(x0));
}

Rational Rational::from_string(std::string_view s) {
  mpq_class q;
  if (q.set_str(std::string(s), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + std::string(s));
  q.canonicalize();
  return Rational(q);
}

Fp Fp::from_string(std::string_view s) {
  // accepts "a" or "a/b" with the same surface syntax as Q
  auto slash = s.find('/');
  auto parse_int = [](std::string_view t) {
    if (t.empty()) throw std::invalid_argument("empty integer literal");
    size_t i = 0;
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
      neg = t[0] == '-';
      i = 1;
    }
    if (i == t.size()) throw std::invalid_argument("bad integer literal");
    int64_t v = 0;
    const int64_t p = Fp::modulus();
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("bad integer literal");
      v = (v * 10 + (t[i] - '0')) % p;
    }
    return neg ? -v : v;
  };
  if (slash == std::string_view::npos) return Fp(parse_int(s));
  Fp num(parse_int(s.substr(0, slash)));
  Fp den(parse_int(s.substr(slash + 1)));
  return num / den;
}

Fp reduce_mod_p(const Rational& q) {
  const uint32_t p = Fp::modulus();
  mpz_class num = q.num(), den = q.den();
  mpz_class pz(p);
  mpz_class dm = den % pz;
  if (dm == 0) throw std::domain_error("denominator divisible by p");
  mpz_class nm = num % pz;
  long n = nm.get_si();
  long d = dm.get_si();
  return Fp(n) / Fp(d);
}

}  // namespace lcoh
