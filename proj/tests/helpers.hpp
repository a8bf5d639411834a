#pragma once

#include "lcoh/polynomial.hpp"

#include <memory>
#include <string>
#include <vector>

namespace testutil {

inline std::shared_ptr<const lcoh::Ring> ring(std::vector<std::string> vars) {
  return std::make_shared<lcoh::Ring>(std::move(vars));
}

inline std::shared_ptr<const lcoh::Ring> ring2() { return ring({"x", "y"}); }
inline std::shared_ptr<const lcoh::Ring> ring3() { return ring({"x", "y", "z"}); }
inline std::shared_ptr<const lcoh::Ring> ring4() { return ring({"x", "y", "z", "w"}); }

template <typename K>
lcoh::Polynomial<K> P(const std::shared_ptr<const lcoh::Ring>& r, const std::string& s) {
  return lcoh::Polynomial<K>::parse(r, s);
}

}  // namespace testutil
