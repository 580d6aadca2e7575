#include "jscc/rs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "jscc/gf256.hpp"

namespace jscc::rs {

namespace gf = jscc::gf256;

namespace {

// Polynomials are stored lowest degree first.
using Poly = std::vector<std::uint8_t>;

std::uint8_t eval(const Poly& p, std::uint8_t x) {
  std::uint8_t acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = gf::add(gf::mul(acc, x), p[i]);
  return acc;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= gf::mul(a[i], b[j]);
  return out;
}

// Generator polynomial prod_{i=1}^{nsym} (x + alpha^i), highest degree first
// and monic, in the form used by the LFSR encoder.
const std::vector<std::uint8_t>& generator(int nsym) {
  static const auto table = [] {
    std::vector<std::vector<std::uint8_t>> gens(256);
    Poly g{1};
    gens[0] = {1};
    for (int i = 1; i <= 255; ++i) {
      g = mul(g, Poly{gf::alpha_pow(i), 1});
      gens[static_cast<std::size_t>(i)] = std::vector<std::uint8_t>(g.rbegin(), g.rend());
    }
    return gens;
  }();
  return table[static_cast<std::size_t>(nsym)];
}

// S_j = r(alpha^j), j = 1..nsym, with r_0 the coefficient of x^(n-1).
std::vector<std::uint8_t> syndromes(std::span<const std::uint8_t> r, int nsym) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(nsym));
  for (int j = 1; j <= nsym; ++j) {
    const std::uint8_t a = gf::alpha_pow(j);
    std::uint8_t acc = 0;
    for (std::uint8_t v : r) acc = gf::add(gf::mul(acc, a), v);
    s[static_cast<std::size_t>(j - 1)] = acc;
  }
  return s;
}

bool all_zero(std::span<const std::uint8_t> v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

}  // namespace

void RsSpec::validate() const {
  if (k < 1 || k > n || n > 255)
    throw std::invalid_argument("RsSpec(" + std::to_string(n) + ", " + std::to_string(k) +
                                "): need 1 <= k <= n <= 255");
}

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data, const RsSpec& spec) {
  spec.validate();
  if (data.size() != static_cast<std::size_t>(spec.k))
    throw std::invalid_argument("rs::encode: expected " + std::to_string(spec.k) + " data symbols, got " +
                                std::to_string(data.size()));
  const int nsym = spec.parity();
  std::vector<std::uint8_t> out(data.begin(), data.end());
  out.resize(static_cast<std::size_t>(spec.n), 0);
  if (nsym == 0) return out;
  const auto& g = generator(nsym);  // g[0] == 1
  std::vector<std::uint8_t> reg(static_cast<std::size_t>(nsym), 0);
  for (std::uint8_t d : data) {
    const std::uint8_t feedback = gf::add(d, reg[0]);
    for (int i = 0; i < nsym - 1; ++i)
      reg[static_cast<std::size_t>(i)] =
          gf::add(reg[static_cast<std::size_t>(i + 1)], gf::mul(feedback, g[static_cast<std::size_t>(i + 1)]));
    reg[static_cast<std::size_t>(nsym - 1)] = gf::mul(feedback, g[static_cast<std::size_t>(nsym)]);
  }
  std::copy(reg.begin(), reg.end(), out.begin() + spec.k);
  return out;
}

DecodeResult decode(std::span<const std::uint8_t> received, std::span<const int> erasures,
                    const RsSpec& spec) {
  spec.validate();
  if (received.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("rs::decode: expected " + std::to_string(spec.n) + " symbols, got " +
                                std::to_string(received.size()));
  DecodeResult res;
  res.codeword.assign(received.begin(), received.end());

  std::vector<int> erased(erasures.begin(), erasures.end());
  std::sort(erased.begin(), erased.end());
  erased.erase(std::unique(erased.begin(), erased.end()), erased.end());
  for (int pos : erased)
    if (pos < 0 || pos >= spec.n) throw std::invalid_argument("rs::decode: erasure position out of range");

  const int nsym = spec.parity();
  const int f = static_cast<int>(erased.size());
  if (f > nsym) return res;
  if (nsym == 0) {
    res.ok = f == 0;
    return res;
  }

  const auto synd = syndromes(res.codeword, nsym);
  if (all_zero(synd)) {
    res.ok = true;
    return res;
  }

  // Locator of position i is alpha^(n-1-i).
  auto locator_exp = [&](int pos) { return spec.n - 1 - pos; };

  Poly gamma{1};
  for (int pos : erased) gamma = mul(gamma, Poly{1, gf::alpha_pow(locator_exp(pos))});

  // Berlekamp–Massey seeded with the erasure locator.
  Poly lambda = gamma;
  Poly prev = gamma;
  int len = f;
  for (int r = f + 1; r <= nsym; ++r) {
    std::uint8_t delta = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      const int idx = r - static_cast<int>(j);
      if (idx < 1) break;
      delta ^= gf::mul(lambda[j], synd[static_cast<std::size_t>(idx - 1)]);
    }
    prev.insert(prev.begin(), 0);  // x * B
    if (delta == 0) continue;
    Poly next = lambda;
    if (next.size() < prev.size()) next.resize(prev.size(), 0);
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] ^= gf::mul(delta, prev[j]);
    if (2 * len <= r + f - 1) {
      const std::uint8_t dinv = gf::inv(delta);
      prev.assign(lambda.size(), 0);
      for (std::size_t j = 0; j < lambda.size(); ++j) prev[j] = gf::mul(dinv, lambda[j]);
      len = r + f - len;
    }
    lambda = std::move(next);
  }
  trim(lambda);
  const int degree = static_cast<int>(lambda.size()) - 1;
  if (degree != len || 2 * (degree - f) + f > nsym) return res;

  // Chien search restricted to the (possibly shortened) code positions.
  std::vector<int> positions;
  for (int pos = 0; pos < spec.n; ++pos)
    if (eval(lambda, gf::alpha_pow(-locator_exp(pos))) == 0) positions.push_back(pos);
  if (static_cast<int>(positions.size()) != degree) return res;

  // Forney: e = Omega(X^-1) / Lambda'(X^-1) for first consecutive root alpha^1.
  Poly omega = mul(Poly(synd.begin(), synd.end()), lambda);
  omega.resize(static_cast<std::size_t>(nsym));
  Poly dlambda(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
  for (std::size_t j = 1; j < lambda.size(); j += 2) dlambda[j - 1] = lambda[j];

  std::vector<std::uint8_t> fixed = res.codeword;
  for (int pos : positions) {
    const std::uint8_t xinv = gf::alpha_pow(-locator_exp(pos));
    const std::uint8_t den = eval(dlambda, xinv);
    if (den == 0) return res;
    fixed[static_cast<std::size_t>(pos)] ^= gf::div(eval(omega, xinv), den);
  }
  if (!all_zero(syndromes(fixed, nsym))) return res;

  res.corrected = 0;
  for (std::size_t i = 0; i < fixed.size(); ++i) res.corrected += fixed[i] != res.codeword[i];
  res.codeword = std::move(fixed);
  res.ok = true;
  return res;
}

}  // namespace jscc::rs
