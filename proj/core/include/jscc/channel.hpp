#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace jscc::channel {

using cplx = std::complex<double>;

/// All stochastic components draw from std::mt19937_64. Trial t of a run
/// seeded with s uses the substream seeded with s ^ t; `salt` separates
/// independent uses within one trial.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt = 0);

struct BscSpec {
  double p = 0.0;  // bit-flip probability
  int m = 1;       // bits per packet

  void validate() const;
};

/// Flips every bit independently with probability p.
std::vector<std::uint8_t> bsc_transmit(std::span<const std::uint8_t> bits, double p, std::uint64_t seed);
/// In-place variant drawing from a caller-owned engine; returns the flip count.
std::size_t bsc_apply(std::span<std::uint8_t> bits, double p, std::mt19937_64& rng);

/// 1 - (1 - p)^m.
double packet_loss_bsc(const BscSpec& spec);

/// Gaussian tail Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

/// Square-MQAM symbol error approximation 4 (1 - 2^(-b/2)) Q(sqrt(3 gamma / (2^b - 1))),
/// clipped to 1. b must be even and >= 2.
double mqam_symbol_error(int b, double gamma_s);

struct MqamSpec {
  int b = 2;             // bits per symbol, even
  double gamma_s = 1.0;  // SNR per symbol, linear
  int length_bits = 2;   // packet length L; L / b symbols per packet

  void validate() const;
};

/// Packet LOSS probability 1 - (1 - P_e)^(L / b), the complement of the
/// correct-packet probability, so it is interchangeable with packet_loss_bsc.
double packet_loss_awgn(const MqamSpec& spec);

/// Gray-mapped square constellation with unit average energy. The first b/2
/// bits of a symbol select the in-phase level, the rest the quadrature level.
class QamConstellation {
 public:
  explicit QamConstellation(int bits_per_symbol);

  int bits_per_symbol() const { return bits_; }
  std::size_t size() const { return points_.size(); }
  /// Point for the symbol label (label bits MSB first).
  cplx point(unsigned label) const { return points_[label]; }
  /// Minimum-distance decision, returns the label.
  unsigned decide(cplx sample) const;

  /// Maps a bit sequence (padded with zeros to a whole symbol) to points.
  std::vector<cplx> map(std::span<const std::uint8_t> bits) const;
  /// Hard decisions back to bits; output length = samples * b.
  std::vector<std::uint8_t> demap(std::span<const cplx> samples) const;

 private:
  int level_index(double v) const;

  int bits_;
  int axis_bits_;
  int levels_;
  double scale_;
  std::vector<cplx> points_;
  std::vector<unsigned> gray_of_level_;  // level index -> axis label
};

struct AwgnResult {
  std::vector<cplx> samples;
  std::vector<unsigned> decisions;
};

/// Adds circular Gaussian noise with E|n|^2 = 1 / gamma_s (unit symbol energy)
/// and makes minimum-distance decisions. gamma_s = +inf means no noise.
AwgnResult awgn_mqam_transmit(std::span<const cplx> symbols, const QamConstellation& qam, double gamma_s,
                              std::uint64_t seed);

/// Adds circular Gaussian noise of total variance `variance` per sample.
void add_awgn(std::span<cplx> samples, double variance, std::mt19937_64& rng);

}  // namespace jscc::channel
