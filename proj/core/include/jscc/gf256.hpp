#pragma once

#include <array>
#include <cstdint>

namespace jscc::gf256 {

/// Field polynomial x^8 + x^4 + x^3 + x^2 + 1; alpha = 0x02 is primitive.
inline constexpr unsigned kPrimitivePoly = 0x11D;

struct Tables {
  std::array<std::uint8_t, 512> exp{};  // doubled so exp[a + b] needs no reduction
  std::array<int, 256> log{};           // log[0] is unused
};

const Tables& tables();

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const Tables& t = tables();
  return t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
}

/// Throws std::domain_error for a == 0.
std::uint8_t inv(std::uint8_t a);

inline std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

/// alpha^e for any integer e (negative exponents allowed).
inline std::uint8_t alpha_pow(int e) {
  e %= 255;
  if (e < 0) e += 255;
  return tables().exp[static_cast<std::size_t>(e)];
}

inline int log(std::uint8_t a) { return tables().log[a]; }

}  // namespace jscc::gf256
