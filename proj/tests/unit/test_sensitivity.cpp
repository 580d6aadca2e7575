#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jscc/sensitivity.hpp"
#include "test_support.hpp"

using namespace jscc;

namespace {

struct Fixture {
  GrayImage img = test::test_image();
  spiht::TaggedBitstream stream = spiht::encode_image(img, spiht::budget_for(256, 256, 0.5));
  double clean = mse(spiht::reconstruct(spiht::decode(stream, stream.size())), img);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

const std::array<double, spiht::kGroupCount>& mean_by_kind() {
  static const auto m = sensitivity::bes_scan(fixture().stream, fixture().img, {13, 0, 1}).mean_by_kind();
  return m;
}

}  // namespace

TEST_SUITE("sensitivity") {
  TEST_CASE("single flip matches an independent decode") {
    const auto& f = fixture();
    for (std::size_t i : {0u, 17u, 5000u, 20000u, 32767u}) {
      auto copy = f.stream;
      copy.bits[i] ^= 1u;
      const double expected = mse(spiht::reconstruct(spiht::decode(copy, copy.size())), f.img) - f.clean;
      CHECK(sensitivity::bit_flip_mse_increase(f.stream, f.img, i) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sensitivity::bit_flip_mse_increase(f.stream, f.img, f.stream.size()), std::out_of_range);
  }

  TEST_CASE("flipping the last refinement bit moves one coefficient by one bit-plane step") {
    const auto& f = fixture();
    std::size_t last = f.stream.size();
    while (last-- > 0 && f.stream.tags[last] != spiht::BitKind::Refinement) {
    }
    REQUIRE(last < f.stream.size());
    auto flipped = f.stream;
    flipped.bits[last] ^= 1u;
    const auto a = spiht::decode(f.stream, f.stream.size());
    const auto b = spiht::decode(flipped, flipped.size());
    int changed = 0;
    double step = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      if (a.coeffs[i] != b.coeffs[i]) {
        ++changed;
        step = std::abs(a.coeffs[i] - b.coeffs[i]);
      }
    CHECK(changed == 1);
    CHECK(std::exp2(std::round(std::log2(step))) == step);
    const double inc = sensitivity::bit_flip_mse_increase(f.stream, f.img, last);
    CHECK(std::abs(inc) <= step * step);
  }

  TEST_CASE("scan is independent of the thread count and leaves the stream intact") {
    const auto& f = fixture();
    const auto before = f.stream.bits;
    sensitivity::BesOptions serial{101, 3, 1}, parallel{101, 3, 3};
    const auto a = sensitivity::bes_scan(f.stream, f.img, serial);
    const auto b = sensitivity::bes_scan(f.stream, f.img, parallel);
    CHECK(a.index == b.index);
    CHECK(a.mse_increase == b.mse_increase);
    CHECK(a.size() == (f.stream.size() - 3 + 100) / 101);
    CHECK(a.index.front() == 3);
    CHECK(f.stream.bits == before);
    std::ostringstream csv;
    sensitivity::write_bes_csv(csv, a);
    CHECK(csv.str().rfind("index,tag,mse_increase\n3,", 0) == 0);
  }

  TEST_CASE("mean sensitivity by bit type") {
    const auto& m = mean_by_kind();
    const double sig = m[0], sign = m[1], set = m[2], ref = m[3];
    MESSAGE("mean MSE increase: significance " << sig << ", sign " << sign << ", set " << set << ", refinement "
                                               << ref);
    CHECK(sig > sign);
    CHECK(ref < sign);
    CHECK(ref < set);
  }

  // Ordering significance > sign > set > refinement. Sign bits would outrank
  // set bits if offspring tests were filed under significance; with every
  // set-partitioning test tagged SET they do not, and significance and set
  // bits come out close.
  TEST_CASE("significance, sign, set, refinement ordering" * doctest::should_fail()) {
    const auto& m = mean_by_kind();
    CHECK(m[0] > m[1]);
    CHECK(m[1] > m[2]);
    CHECK(m[2] > m[3]);
  }

  TEST_CASE("clamp and carry keeps the telescoping sum") {
    CHECK(sensitivity::clamp_increments({100, 80, 85, 60}) == std::vector<double>{20, 0, 20});
    CHECK(sensitivity::clamp_increments({100, 90, 95}) == std::vector<double>{5, 0});
    CHECK(sensitivity::clamp_increments({50, 50}) == std::vector<double>{0});
    CHECK(sensitivity::clamp_increments({42}).empty());
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> d(1 + rng() % 20);
      d[0] = 1000.0;
      for (std::size_t i = 1; i < d.size(); ++i) d[i] = std::max(0.0, d[i - 1] - 100.0 + static_cast<double>(rng() % 130));
      const auto delta = sensitivity::clamp_increments(d);
      double sum = 0.0;
      for (double x : delta) {
        REQUIRE(x >= 0.0);
        sum += x;
      }
      if (d.back() <= d.front()) CHECK(d.front() - sum == doctest::Approx(d.back()).epsilon(1e-12));
    }
  }

  TEST_CASE("packet profile of the test image") {
    const auto& f = fixture();
    const auto g = spiht::regroup(f.stream);
    const auto p = sensitivity::profile_packets(g, f.img, 2000);
    CHECK(p.packet_count() == 17);
    CHECK(sensitivity::packet_count(g, 2000) == 17);
    CHECK(p.d0 == doctest::Approx(mse(GrayImage(256, 256, 128), f.img)));
    CHECK(p.final_mse == doctest::Approx(f.clean));
    double sum = 0.0;
    for (double d : p.delta_d) {
      CHECK(d >= 0.0);
      sum += d;
    }
    CHECK(std::abs(p.d0 - sum - p.final_mse) < 1e-9);

    const auto one = sensitivity::profile_packets(g, f.img, 40000);
    REQUIRE(one.packet_count() == 1);
    CHECK(one.delta_d[0] == doctest::Approx(one.d0 - f.clean));
  }

  TEST_CASE("prefix for a bit count fills groups in order") {
    spiht::GroupedBitstream g;
    g.groups[0].resize(5);
    g.groups[1].resize(3);
    g.groups[2].resize(10);
    g.groups[3].resize(2);
    CHECK(sensitivity::prefix_for_bits(g, 0) == spiht::GroupPrefix{0, 0, 0, 0});
    CHECK(sensitivity::prefix_for_bits(g, 7) == spiht::GroupPrefix{5, 2, 0, 0});
    CHECK(sensitivity::prefix_for_bits(g, 19) == spiht::GroupPrefix{5, 3, 10, 1});
    CHECK(sensitivity::prefix_for_bits(g, 1000) == spiht::GroupPrefix{5, 3, 10, 2});
    CHECK(sensitivity::packet_count(g, 7) == 3);
    CHECK_THROWS(sensitivity::packet_count(g, 0));
  }
}
