#include <doctest.h>

#include <cmath>
#include <random>
#include <bit>
#include <limits>
#include <set>

#include "jscc/channel.hpp"

using namespace jscc;
using channel::cplx;

namespace {

// Exact square-MQAM symbol error: independent per-axis PAM errors.
double exact_square_qam_ser(int b, double gamma) {
  const double m = std::ldexp(1.0, b);
  const double axis = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * channel::q_function(std::sqrt(3.0 * gamma / (m - 1.0)));
  return 1.0 - (1.0 - axis) * (1.0 - axis);
}

double simulated_ser(int b, double gamma, std::size_t n, std::uint64_t seed) {
  const channel::QamConstellation qam(b);
  std::mt19937_64 rng(seed ^ 0xABCDEFULL);
  std::vector<unsigned> labels(n);
  std::vector<cplx> sym(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<unsigned>(rng() % qam.size());
    sym[i] = qam.point(labels[i]);
  }
  const auto res = channel::awgn_mqam_transmit(sym, qam, gamma, seed);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) errors += res.decisions[i] != labels[i];
  return static_cast<double>(errors) / static_cast<double>(n);
}

}  // namespace

TEST_SUITE("channelmodels") {
  TEST_CASE("bsc extremes and determinism") {
    std::vector<std::uint8_t> bits(1000);
    std::mt19937_64 rng(1);
    for (auto& b : bits) b = rng() & 1;
    CHECK(channel::bsc_transmit(bits, 0.0, 5) == bits);
    const auto inv = channel::bsc_transmit(bits, 1.0, 5);
    for (std::size_t i = 0; i < bits.size(); ++i) REQUIRE(inv[i] == (bits[i] ^ 1));
    CHECK(channel::bsc_transmit(bits, 0.3, 9) == channel::bsc_transmit(bits, 0.3, 9));
    CHECK(channel::bsc_transmit(bits, 0.3, 9) != channel::bsc_transmit(bits, 0.3, 10));
    CHECK_THROWS(channel::bsc_transmit(bits, 1.5, 1));
  }

  TEST_CASE("bsc flip count over a million bits") {
    const std::vector<std::uint8_t> zeros(1000000, 0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const auto out = channel::bsc_transmit(zeros, 0.001, seed);
      const double flips = static_cast<double>(std::count(out.begin(), out.end(), 1));
      CHECK(std::abs(flips - 1000.0) <= 3.0 * std::sqrt(1e6 * 0.001 * 0.999));
    }
    // Flip positions are uniform: the first and second halves see similar counts.
    const auto out = channel::bsc_transmit(zeros, 0.01, 4);
    const double a = static_cast<double>(std::count(out.begin(), out.begin() + 500000, 1));
    const double b = static_cast<double>(std::count(out.begin() + 500000, out.end(), 1));
    CHECK(std::abs(a - b) <= 3.0 * std::sqrt(a + b));
  }

  TEST_CASE("bsc packet loss") {
    CHECK(channel::packet_loss_bsc({0.0, 2000}) == 0.0);
    CHECK(channel::packet_loss_bsc({0.001, 2000}) == doctest::Approx(1.0 - std::pow(0.999, 2000)).epsilon(1e-12));
    CHECK(channel::packet_loss_bsc({0.001, 2000}) == doctest::Approx(0.8648).epsilon(1e-4));
    CHECK(channel::packet_loss_bsc({0.123, 1}) == doctest::Approx(0.123).epsilon(1e-14));
    CHECK(channel::packet_loss_bsc({1e-12, 10}) == doctest::Approx(1e-11).epsilon(1e-6));
    double prev = 0.0;
    for (double p = 1e-5; p < 0.5; p *= 2.0) {
      const double s = channel::packet_loss_bsc({p, 100});
      CHECK(s >= prev);
      CHECK(channel::packet_loss_bsc({p, 101}) >= s);
      if (s < 0.999) {
        CHECK(s > prev);
        CHECK(channel::packet_loss_bsc({p, 101}) > s);
      }
      prev = s;
    }
    CHECK_THROWS((channel::packet_loss_bsc({0.1, 0})));
  }

  TEST_CASE("bsc packet loss against simulation") {
    std::mt19937_64 rng(11);
    std::vector<std::uint8_t> packet(2000);
    const int n = 20000;
    int lost = 0;
    for (int i = 0; i < n; ++i) lost += channel::bsc_apply(packet, 0.001, rng) > 0;
    const double s = channel::packet_loss_bsc({0.001, 2000});
    CHECK(std::abs(lost / double(n) - s) <= 3.0 * std::sqrt(s * (1 - s) / n));
  }

  TEST_CASE("Q function and MQAM symbol error") {
    CHECK(channel::q_function(0.0) == doctest::Approx(0.5));
    CHECK(channel::q_function(3.1623) == doctest::Approx(7.8e-4).epsilon(0.01));
    for (double g : {0.5, 1.0, 10.0, 31.6})
      CHECK(channel::mqam_symbol_error(2, g) == doctest::Approx(2.0 * channel::q_function(std::sqrt(g))).epsilon(1e-14));
    CHECK(channel::mqam_symbol_error(2, 10.0) == doctest::Approx(1.565e-3).epsilon(2e-3));
    CHECK(channel::mqam_symbol_error(4, 1e6) < 1e-100);
    CHECK(channel::mqam_symbol_error(6, 0.0) <= 1.0);
    CHECK(channel::mqam_symbol_error(2, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS(channel::mqam_symbol_error(3, 10.0));
  }

  TEST_CASE("AWGN packet loss") {
    const double pe = channel::mqam_symbol_error(2, 10.0);
    CHECK(channel::packet_loss_awgn({2, 10.0, 80}) == doctest::Approx(1.0 - std::pow(1.0 - pe, 40)).epsilon(1e-12));
    CHECK(channel::packet_loss_awgn({2, 10.0, 80}) == doctest::Approx(0.0607).epsilon(2e-3));
    CHECK(channel::packet_loss_awgn({4, 5.0, 4}) == doctest::Approx(channel::mqam_symbol_error(4, 5.0)));
    CHECK(channel::packet_loss_awgn({2, std::numeric_limits<double>::infinity(), 80}) == 0.0);
    CHECK_THROWS((channel::packet_loss_awgn({4, 10.0, 6})));
  }

  TEST_CASE("constellation geometry") {
    for (int b : {2, 4, 6, 8}) {
      const channel::QamConstellation qam(b);
      double energy = 0.0;
      for (unsigned l = 0; l < qam.size(); ++l) {
        energy += std::norm(qam.point(l));
        REQUIRE(qam.decide(qam.point(l)) == l);
      }
      CHECK(energy / static_cast<double>(qam.size()) == doctest::Approx(1.0).epsilon(1e-12));
      // Gray mapping: nearest neighbours differ in exactly one bit.
      double dmin = 1e9;
      for (unsigned a = 0; a < qam.size(); ++a)
        for (unsigned c = a + 1; c < qam.size(); ++c) dmin = std::min(dmin, std::abs(qam.point(a) - qam.point(c)));
      for (unsigned a = 0; a < qam.size(); ++a)
        for (unsigned c = a + 1; c < qam.size(); ++c)
          if (std::abs(std::abs(qam.point(a) - qam.point(c)) - dmin) < 1e-9)
            REQUIRE(std::popcount(a ^ c) == 1);
    }
    CHECK_THROWS(channel::QamConstellation(3));
  }

  TEST_CASE("map and demap roundtrip with zero padding") {
    const channel::QamConstellation qam(4);
    std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
    const auto pts = qam.map(bits);
    CHECK(pts.size() == 3);
    auto back = qam.demap(pts);
    CHECK(back.size() == 12);
    CHECK(std::equal(bits.begin(), bits.end(), back.begin()));
    CHECK(back[10] == 0);
    CHECK(back[11] == 0);
  }

  TEST_CASE("noise power and noiseless decisions") {
    std::vector<cplx> zeros(200000);
    std::mt19937_64 rng(3);
    channel::add_awgn(zeros, 0.1, rng);
    double p = 0.0;
    for (auto z : zeros) p += std::norm(z);
    CHECK(p / zeros.size() == doctest::Approx(0.1).epsilon(0.01));

    const channel::QamConstellation qam(6);
    std::vector<cplx> sym;
    for (unsigned l = 0; l < qam.size(); ++l) sym.push_back(qam.point(l));
    const auto res = channel::awgn_mqam_transmit(sym, qam, std::numeric_limits<double>::infinity(), 1);
    for (unsigned l = 0; l < qam.size(); ++l) REQUIRE(res.decisions[l] == l);
  }

  TEST_CASE("QPSK simulation agrees with the closed form") {
    const double sim = simulated_ser(2, 10.0, 1000000, 21);
    const double pe = channel::mqam_symbol_error(2, 10.0);
    CHECK(std::abs(sim - pe) <= 3.0 * std::sqrt(pe * (1 - pe) / 1e6));
  }

  TEST_CASE("16-QAM simulation agrees with the exact square-QAM error") {
    // The closed form drops the squared per-axis term, which at these SNRs
    // exceeds the Monte-Carlo resolution; the exact expression does not.
    for (double db : {7.0, 10.0, 13.0}) {
      const double g = channel::db_to_linear(db);
      const double sim = simulated_ser(4, g, 1000000, 31);
      const double exact = exact_square_qam_ser(4, g);
      CHECK(std::abs(sim - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / 1e6));
      const double approx = channel::mqam_symbol_error(4, g);
      const double axis = 1.5 * channel::q_function(std::sqrt(g / 5.0));
      CHECK(approx - exact == doctest::Approx(axis * axis).epsilon(1e-9));
    }
  }

  TEST_CASE("substream seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 100; ++t)
      for (std::uint64_t salt = 0; salt < 4; ++salt) seen.insert(channel::substream_seed(42, t, salt));
    CHECK(seen.size() == 400);
    CHECK(channel::substream_seed(42, 3, 0) == (42ull ^ 3ull));
  }
}
