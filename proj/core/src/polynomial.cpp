#include "lcoh/polynomial.hpp"

namespace lcoh {

std::string exp_to_string(const Exp& e, const Ring& ring) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += ring.vars[i];
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

namespace {
void gen_monomials(int n, int64_t d, Exp& cur, int pos, std::vector<Exp>& out) {
  if (pos == n - 1) {
    cur[pos] = static_cast<int32_t>(d);
    out.push_back(cur);
    return;
  }
  for (int64_t e = d; e >= 0; --e) {
    cur[pos] = static_cast<int32_t>(e);
    gen_monomials(n, d - e, cur, pos + 1, out);
  }
  cur[pos] = 0;
}
}  // namespace

const std::vector<Exp>& monomial_basis(int n, int64_t d) {
  static std::mutex mu;
  static std::map<std::pair<int, int64_t>, std::vector<Exp>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Exp> out;
  if (d >= 0) {
    out.reserve(static_cast<size_t>(monomial_basis_size(n, d)));
    Exp cur(n, 0);
    gen_monomials(n, d, cur, 0, out);
    std::sort(out.begin(), out.end(), GrevlexDesc{});
  }
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace lcoh
