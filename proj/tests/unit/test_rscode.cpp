#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "jscc/gf256.hpp"
#include "jscc/rs.hpp"

using namespace jscc;

namespace {

// Shift-and-add multiplication reduced by x^8 + x^4 + x^3 + x^2 + 1.
std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  unsigned r = 0, x = a;
  for (int i = 0; i < 8; ++i) {
    if (b & (1u << i)) r ^= x;
    x <<= 1;
    if (x & 0x100u) x ^= 0x11Du;
  }
  return static_cast<std::uint8_t>(r);
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = static_cast<std::uint8_t>(rng());
  return v;
}

// Corrupts `e` positions with nonzero error values and marks `f` further
// positions as erasures (their contents are also scrambled).
std::vector<int> corrupt(std::vector<std::uint8_t>& word, int e, int f, std::mt19937_64& rng) {
  std::vector<int> pos(word.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::shuffle(pos.begin(), pos.end(), rng);
  for (int i = 0; i < e; ++i) word[static_cast<std::size_t>(pos[i])] ^= static_cast<std::uint8_t>(1 + rng() % 255);
  std::vector<int> erasures(pos.begin() + e, pos.begin() + e + f);
  for (int p : erasures) word[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(rng());
  return erasures;
}

}  // namespace

TEST_SUITE("rscode") {
  TEST_CASE("field arithmetic matches shift-and-add multiplication") {
    for (unsigned a = 0; a < 256; ++a)
      for (unsigned b = 0; b < 256; ++b)
        REQUIRE(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) ==
                slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)));
  }

  TEST_CASE("field axioms") {
    for (unsigned a = 1; a < 256; ++a) {
      const auto x = static_cast<std::uint8_t>(a);
      REQUIRE(gf256::mul(x, gf256::inv(x)) == 1);
      REQUIRE(gf256::div(x, x) == 1);
    }
    CHECK_THROWS_AS(gf256::inv(0), std::domain_error);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100000; ++t) {
      const auto a = static_cast<std::uint8_t>(rng()), b = static_cast<std::uint8_t>(rng()),
                 c = static_cast<std::uint8_t>(rng());
      REQUIRE(gf256::mul(a, gf256::add(b, c)) == gf256::add(gf256::mul(a, b), gf256::mul(a, c)));
      REQUIRE(gf256::mul(a, gf256::mul(b, c)) == gf256::mul(gf256::mul(a, b), c));
    }
    // alpha = 2 generates the multiplicative group.
    std::vector<bool> seen(256, false);
    for (int e = 0; e < 255; ++e) seen[gf256::alpha_pow(e)] = true;
    CHECK(std::count(seen.begin() + 1, seen.end(), true) == 255);
    CHECK(gf256::alpha_pow(-1) == gf256::inv(2));
    CHECK(gf256::alpha_pow(255) == 1);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS((rs::RsSpec{10, 11}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((rs::RsSpec{256, 200}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((rs::RsSpec{5, 0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((rs::RsSpec{255, 223}.validate()));
    CHECK_THROWS(rs::encode(std::vector<std::uint8_t>(9), rs::RsSpec{18, 10}));
    CHECK(rs::RsSpec{18, 10}.error_capacity() == 4);
  }

  TEST_CASE("zero parity is the identity and zero data gives the zero codeword") {
    std::mt19937_64 rng(2);
    const auto d = random_bytes(12, rng);
    CHECK(rs::encode(d, {12, 12}) == d);
    CHECK(rs::encode(std::vector<std::uint8_t>(10, 0), {18, 10}) == std::vector<std::uint8_t>(18, 0));
  }

  TEST_CASE("RS(3,2) parity by hand") {
    // g(x) = x + alpha, so the codeword d0 x^2 + d1 x + p vanishes at alpha.
    for (unsigned d0 : {0u, 1u, 7u, 200u})
      for (unsigned d1 : {0u, 3u, 99u, 255u}) {
        const std::vector<std::uint8_t> d{static_cast<std::uint8_t>(d0), static_cast<std::uint8_t>(d1)};
        const auto cw = rs::encode(d, {3, 2});
        CHECK(cw[2] == (slow_mul(d[0], 4) ^ slow_mul(d[1], 2)));
      }
  }

  TEST_CASE("codewords vanish at every generator root") {
    std::mt19937_64 rng(3);
    for (const rs::RsSpec spec : {rs::RsSpec{18, 10}, rs::RsSpec{33, 25}, rs::RsSpec{255, 223}}) {
      const auto cw = rs::encode(random_bytes(static_cast<std::size_t>(spec.k), rng), spec);
      for (int j = 1; j <= spec.parity(); ++j) {
        std::uint8_t acc = 0;
        for (auto c : cw) acc = gf256::add(slow_mul(acc, gf256::alpha_pow(j)), c);
        REQUIRE(acc == 0);
      }
    }
  }

  TEST_CASE("decode of clean words and linearity") {
    std::mt19937_64 rng(4);
    const rs::RsSpec spec{18, 10};
    for (int t = 0; t < 10000; ++t) {
      const auto a = random_bytes(10, rng), b = random_bytes(10, rng);
      const auto ca = rs::encode(a, spec);
      const auto r = rs::decode(ca, spec);
      REQUIRE(r.ok);
      REQUIRE(r.corrected == 0);
      REQUIRE(std::equal(a.begin(), a.end(), r.data(spec).begin()));
      if (t < 100) {
        std::vector<std::uint8_t> s(10);
        for (int i = 0; i < 10; ++i) s[i] = a[i] ^ b[i];
        const auto cb = rs::encode(b, spec), cs = rs::encode(s, spec);
        for (int i = 0; i < 18; ++i) REQUIRE(cs[i] == (ca[i] ^ cb[i]));
      }
    }
  }

  TEST_CASE("RS(18,10) corrects up to four errors") {
    std::mt19937_64 rng(5);
    const rs::RsSpec spec{18, 10};
    for (int t = 0; t < 5000; ++t) {
      const auto d = random_bytes(10, rng);
      auto w = rs::encode(d, spec);
      const int e = static_cast<int>(rng() % 5);
      corrupt(w, e, 0, rng);
      const auto r = rs::decode(w, spec);
      REQUIRE(r.ok);
      REQUIRE(r.corrected == e);
      REQUIRE(std::equal(d.begin(), d.end(), r.data(spec).begin()));
    }
  }

  TEST_CASE("errors and erasures within 2e + f <= n - k") {
    std::mt19937_64 rng(6);
    for (const rs::RsSpec spec : {rs::RsSpec{18, 10}, rs::RsSpec{14, 10}, rs::RsSpec{33, 25}, rs::RsSpec{31, 25},
                                  rs::RsSpec{40, 20}, rs::RsSpec{255, 223}, rs::RsSpec{255, 1}, rs::RsSpec{2, 1}}) {
      const int r = spec.parity();
      for (int t = 0; t < 1000; ++t) {
        const int f = static_cast<int>(rng() % (r + 1));
        const int e = static_cast<int>(rng() % ((r - f) / 2 + 1));
        const auto d = random_bytes(static_cast<std::size_t>(spec.k), rng);
        auto w = rs::encode(d, spec);
        const auto er = corrupt(w, e, f, rng);
        const auto res = rs::decode(w, er, spec);
        REQUIRE(res.ok);
        REQUIRE(std::equal(d.begin(), d.end(), res.data(spec).begin()));
      }
    }
  }

  TEST_CASE("n - k erasures alone") {
    std::mt19937_64 rng(7);
    const rs::RsSpec spec{18, 10};
    const auto d = random_bytes(10, rng);
    auto w = rs::encode(d, spec);
    const auto er = corrupt(w, 0, 8, rng);
    const auto res = rs::decode(w, er, spec);
    REQUIRE(res.ok);
    CHECK(std::equal(d.begin(), d.end(), res.data(spec).begin()));
    const auto too_many = corrupt(w, 0, 9, rng);
    CHECK_FALSE(rs::decode(w, too_many, spec).ok);
  }

  TEST_CASE("beyond the bound the decoder fails or returns a different codeword") {
    std::mt19937_64 rng(8);
    const rs::RsSpec spec{18, 10};
    int failures = 0;
    for (int t = 0; t < 3000; ++t) {
      const auto d = random_bytes(10, rng);
      const auto cw = rs::encode(d, spec);
      auto w = cw;
      corrupt(w, 5, 0, rng);
      const auto res = rs::decode(w, spec);
      if (!res.ok) {
        ++failures;
        REQUIRE(res.codeword == w);
      } else {
        REQUIRE(res.codeword != cw);
        REQUIRE(rs::encode(res.data(spec), spec) == res.codeword);
      }
    }
    CHECK(failures > 2900);
  }

  TEST_CASE("product code: RS(3,2) both ways by hand") {
    const std::vector<std::uint8_t> d{11, 22, 33, 44};
    const auto g = rs::product_encode(d, {3, 2}, {3, 2});
    REQUIRE(g.rows() == 3);
    REQUIRE(g.cols() == 3);
    CHECK(g.data() == d);
    auto par = [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(slow_mul(a, 4) ^ slow_mul(b, 2)); };
    CHECK(g.at(2, 0) == par(11, 33));
    CHECK(g.at(2, 1) == par(22, 44));
    CHECK(g.at(0, 2) == par(11, 22));
    CHECK(g.at(1, 2) == par(33, 44));
    CHECK(g.at(2, 2) == par(g.at(2, 0), g.at(2, 1)));
    CHECK(g.at(2, 2) == par(g.at(0, 2), g.at(1, 2)));
  }

  TEST_CASE("product code: parity-of-parity consistency and zero parity") {
    std::mt19937_64 rng(9);
    const auto d = random_bytes(250, rng);
    const auto g = rs::product_encode(d, {18, 10}, {31, 25});
    // Column-encoding the row-parity columns must reproduce the corner.
    const auto rp = g.row_parity();
    std::vector<std::uint8_t> corner;
    for (int c = 0; c < 8; ++c) {
      std::vector<std::uint8_t> col;
      for (int r = 0; r < 25; ++r) col.push_back(rp[static_cast<std::size_t>(r * 8 + c)]);
      const auto enc = rs::encode(col, {31, 25});
      for (int r = 25; r < 31; ++r) REQUIRE(enc[static_cast<std::size_t>(r)] == g.at(r, 10 + c));
    }
    CHECK(g.col_parity().size() == 60);
    CHECK(g.corner_parity().size() == 48);
    CHECK(rs::product_encode(d, {10, 10}, {25, 25}).symbols == d);
    CHECK_THROWS(rs::product_encode(std::vector<std::uint8_t>(249), {18, 10}, {31, 25}));
  }

  TEST_CASE("product decode") {
    std::mt19937_64 rng(10);
    const auto d = random_bytes(250, rng);
    const rs::RsSpec row{14, 10}, col{29, 25};
    const auto g = rs::product_encode(d, row, col);

    const auto clean = rs::product_decode(g.symbols, row, col);
    CHECK(clean.recovered());
    CHECK(clean.data == d);
    CHECK(std::all_of(clean.row_ok.begin(), clean.row_ok.end(), [](bool b) { return b; }));

    // Three rows wrecked beyond the row code, one row with a correctable error.
    auto w = g.symbols;
    for (int r : {0, 7, 20})
      for (int c = 0; c < 14; ++c) w[static_cast<std::size_t>(r * 14 + c)] ^= static_cast<std::uint8_t>(1 + c);
    w[5 * 14 + 3] ^= 0x5A;
    const auto res = rs::product_decode(w, row, col);
    CHECK_FALSE(res.row_ok[0]);
    CHECK(res.row_ok[5]);
    CHECK(res.recovered());
    CHECK(res.data == d);

    auto junk = random_bytes(g.symbols.size(), rng);
    const auto bad = rs::product_decode(junk, row, col);
    CHECK_FALSE(bad.recovered());
    CHECK(std::none_of(bad.col_ok.begin(), bad.col_ok.end(), [](bool b) { return b; }));
    CHECK_THROWS(rs::product_decode(std::vector<std::uint8_t>(10), row, col));
  }
}
