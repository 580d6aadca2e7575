#include "jscc/gf256.hpp"

#include <stdexcept>

namespace jscc::gf256 {

namespace {

Tables build() {
  Tables t;
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100u) x ^= kPrimitivePoly;
  }
  for (std::size_t i = 255; i < t.exp.size(); ++i) t.exp[i] = t.exp[i - 255];
  t.log[0] = -1;
  return t;
}

}  // namespace

const Tables& tables() {
  static const Tables t = build();
  return t;
}

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256::inv: zero has no inverse");
  return tables().exp[static_cast<std::size_t>(255 - tables().log[a])];
}

}  // namespace jscc::gf256
