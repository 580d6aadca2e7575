#include "jscc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jscc::channel {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt) {
  // The salt is spread with the splitmix64 increment so salted streams do not
  // collide with neighbouring trial indices.
  return seed ^ trial ^ (salt * 0x9E3779B97F4A7C15ull);
}

void BscSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("BscSpec: p must lie in [0, 1]");
  if (m < 1) throw std::invalid_argument("BscSpec: m must be >= 1");
}

std::size_t bsc_apply(std::span<std::uint8_t> bits, double p, std::mt19937_64& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc: p must lie in [0, 1]");
  if (p == 0.0 || bits.empty()) return 0;
  if (p == 1.0) {
    for (auto& b : bits) b ^= 1u;
    return bits.size();
  }
  // Gaps between flips are geometric, which is exact for i.i.d. flips.
  std::geometric_distribution<std::size_t> gap(p);
  std::size_t flips = 0;
  for (std::size_t pos = gap(rng); pos < bits.size(); pos += gap(rng) + 1) {
    bits[pos] ^= 1u;
    ++flips;
  }
  return flips;
}

std::vector<std::uint8_t> bsc_transmit(std::span<const std::uint8_t> bits, double p, std::uint64_t seed) {
  std::vector<std::uint8_t> out(bits.begin(), bits.end());
  std::mt19937_64 rng(seed);
  bsc_apply(out, p, rng);
  return out;
}

double packet_loss_bsc(const BscSpec& spec) {
  spec.validate();
  if (spec.p == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(spec.m) * std::log1p(-spec.p));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double mqam_symbol_error(int b, double gamma_s) {
  if (b < 2 || b % 2 != 0) throw std::invalid_argument("mqam_symbol_error: b must be even and >= 2");
  if (!(gamma_s >= 0.0)) throw std::invalid_argument("mqam_symbol_error: gamma_s must be >= 0");
  if (std::isinf(gamma_s)) return 0.0;
  const double m = std::ldexp(1.0, b);
  const double pe = 4.0 * (1.0 - std::ldexp(1.0, -b / 2)) * q_function(std::sqrt(3.0 * gamma_s / (m - 1.0)));
  return std::min(pe, 1.0);
}

void MqamSpec::validate() const {
  if (b < 2 || b % 2 != 0) throw std::invalid_argument("MqamSpec: b must be even and >= 2");
  if (length_bits < b || length_bits % b != 0)
    throw std::invalid_argument("MqamSpec: packet length must be a positive multiple of b");
  if (!(gamma_s >= 0.0)) throw std::invalid_argument("MqamSpec: gamma_s must be >= 0");
}

double packet_loss_awgn(const MqamSpec& spec) {
  spec.validate();
  const double pe = mqam_symbol_error(spec.b, spec.gamma_s);
  if (pe >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(spec.length_bits / spec.b) * std::log1p(-pe));
}

QamConstellation::QamConstellation(int bits_per_symbol)
    : bits_(bits_per_symbol), axis_bits_(bits_per_symbol / 2), levels_(1 << (bits_per_symbol / 2)) {
  if (bits_ < 2 || bits_ % 2 != 0 || bits_ > 16)
    throw std::invalid_argument("QamConstellation: bits per symbol must be even in [2, 16]");
  const double m = std::ldexp(1.0, bits_);
  scale_ = std::sqrt(3.0 / (2.0 * (m - 1.0)));
  gray_of_level_.resize(static_cast<std::size_t>(levels_));
  std::vector<int> level_of_label(static_cast<std::size_t>(levels_));
  for (int lv = 0; lv < levels_; ++lv) {
    const unsigned gray = static_cast<unsigned>(lv) ^ (static_cast<unsigned>(lv) >> 1);
    gray_of_level_[static_cast<std::size_t>(lv)] = gray;
    level_of_label[gray] = lv;
  }
  points_.resize(static_cast<std::size_t>(m));
  for (unsigned label = 0; label < points_.size(); ++label) {
    const unsigned i_label = label >> axis_bits_;
    const unsigned q_label = label & static_cast<unsigned>(levels_ - 1);
    const double i_amp = 2.0 * level_of_label[i_label] - (levels_ - 1);
    const double q_amp = 2.0 * level_of_label[q_label] - (levels_ - 1);
    points_[label] = cplx(i_amp * scale_, q_amp * scale_);
  }
}

int QamConstellation::level_index(double v) const {
  const double pos = (v / scale_ + (levels_ - 1)) / 2.0;
  const long lv = std::lround(pos);
  return static_cast<int>(std::clamp<long>(lv, 0, levels_ - 1));
}

unsigned QamConstellation::decide(cplx sample) const {
  const unsigned i_label = gray_of_level_[static_cast<std::size_t>(level_index(sample.real()))];
  const unsigned q_label = gray_of_level_[static_cast<std::size_t>(level_index(sample.imag()))];
  return (i_label << axis_bits_) | q_label;
}

std::vector<cplx> QamConstellation::map(std::span<const std::uint8_t> bits) const {
  const std::size_t b = static_cast<std::size_t>(bits_);
  std::vector<cplx> out((bits.size() + b - 1) / b);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (std::size_t i = 0; i < b; ++i) {
      const std::size_t idx = s * b + i;
      label = (label << 1) | (idx < bits.size() ? (bits[idx] & 1u) : 0u);
    }
    out[s] = points_[label];
  }
  return out;
}

std::vector<std::uint8_t> QamConstellation::demap(std::span<const cplx> samples) const {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size() * static_cast<std::size_t>(bits_));
  for (const cplx& s : samples) {
    const unsigned label = decide(s);
    for (int i = bits_ - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((label >> i) & 1u));
  }
  return out;
}

void add_awgn(std::span<cplx> samples, double variance, std::mt19937_64& rng) {
  if (!(variance >= 0.0)) throw std::invalid_argument("add_awgn: variance must be >= 0");
  if (variance == 0.0) return;
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  for (auto& s : samples) {
    const double re = n(rng);
    const double im = n(rng);
    s += cplx(re, im);
  }
}

AwgnResult awgn_mqam_transmit(std::span<const cplx> symbols, const QamConstellation& qam, double gamma_s,
                              std::uint64_t seed) {
  if (!(gamma_s > 0.0)) throw std::invalid_argument("awgn_mqam_transmit: gamma_s must be > 0");
  AwgnResult out;
  out.samples.assign(symbols.begin(), symbols.end());
  if (!std::isinf(gamma_s)) {
    std::mt19937_64 rng(seed);
    add_awgn(out.samples, 1.0 / gamma_s, rng);
  }
  out.decisions.reserve(out.samples.size());
  for (const cplx& s : out.samples) out.decisions.push_back(qam.decide(s));
  return out;
}

}  // namespace jscc::channel
