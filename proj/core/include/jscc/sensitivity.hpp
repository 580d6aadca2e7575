#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "jscc/image.hpp"
#include "jscc/spiht.hpp"

namespace jscc::sensitivity {

/// Empirical bit-error sensitivity: the MSE increase caused by flipping a
/// single coded bit. Only every `stride`-th bit is probed for stride > 1.
struct BesProfile {
  std::vector<std::size_t> index;
  std::vector<spiht::BitKind> tags;
  std::vector<double> mse_increase;  // may dip slightly below 0 through rounding and clipping
  double clean_mse = 0.0;

  std::size_t size() const { return index.size(); }
  /// Mean MSE increase per bit type; NaN for types that were not probed.
  std::array<double, spiht::kGroupCount> mean_by_kind() const;
};

struct BesOptions {
  std::size_t stride = 1;
  std::size_t first = 0;
  unsigned threads = 1;
};

/// MSE increase from flipping bit `index` of the full stream.
/// Throws std::out_of_range for index >= stream.size().
double bit_flip_mse_increase(const spiht::TaggedBitstream& stream, const GrayImage& reference,
                             std::size_t index);

/// Flips each probed bit, decodes the full stream and restores the bit.
/// The result does not depend on `threads`.
BesProfile bes_scan(const spiht::TaggedBitstream& stream, const GrayImage& reference,
                    const BesOptions& opts = {});

void write_bes_csv(std::ostream& out, const BesProfile& profile);

/// Expected-distortion data for the layered model: D_0 and the per-packet
/// decrease Delta D_i, all in intensity^2 units.
struct DistortionProfile {
  double d0 = 0.0;
  std::vector<double> delta_d;
  double final_mse = 0.0;  // MSE with every packet received
  std::size_t packet_bits = 0;

  std::size_t packet_count() const { return delta_d.size(); }
};

/// Per-group bit counts covered by the first `bits` bits of the grouped stream
/// in transmission order.
spiht::GroupPrefix prefix_for_bits(const spiht::GroupedBitstream& g, std::size_t bits);

/// Number of packet_len-bit packets covering the grouped stream.
std::size_t packet_count(const spiht::GroupedBitstream& g, std::size_t packet_len);

/// Decodes every packet prefix. Negative raw increments are clamped to 0 and
/// carried into the following packets so that D_0 - sum(Delta D) equals the
/// all-packets MSE.
DistortionProfile profile_packets(const spiht::GroupedBitstream& g, const GrayImage& reference,
                                  std::size_t packet_len);

/// Applies the clamp-and-carry rule to raw per-packet MSE values D_0..D_l.
std::vector<double> clamp_increments(const std::vector<double>& distortions);

}  // namespace jscc::sensitivity
