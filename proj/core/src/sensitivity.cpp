#include "jscc/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace jscc::sensitivity {

std::array<double, spiht::kGroupCount> BesProfile::mean_by_kind() const {
  std::array<double, spiht::kGroupCount> sum{};
  std::array<std::size_t, spiht::kGroupCount> count{};
  for (std::size_t i = 0; i < size(); ++i) {
    const auto k = static_cast<std::size_t>(tags[i]);
    sum[k] += mse_increase[i];
    ++count[k];
  }
  std::array<double, spiht::kGroupCount> mean{};
  for (std::size_t k = 0; k < spiht::kGroupCount; ++k)
    mean[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : std::numeric_limits<double>::quiet_NaN();
  return mean;
}

namespace {

double decode_mse(const spiht::StreamInfo& info, std::span<const std::uint8_t> bits, const GrayImage& ref) {
  return mse(spiht::reconstruct(spiht::decode(info, bits)), ref);
}

}  // namespace

double bit_flip_mse_increase(const spiht::TaggedBitstream& stream, const GrayImage& reference, std::size_t index) {
  if (index >= stream.size()) throw std::out_of_range("bit_flip_mse_increase: bit index out of range");
  const double clean = decode_mse(stream.info, stream.bits, reference);
  std::vector<std::uint8_t> bits = stream.bits;
  bits[index] ^= 1u;
  return decode_mse(stream.info, bits, reference) - clean;
}

BesProfile bes_scan(const spiht::TaggedBitstream& stream, const GrayImage& reference, const BesOptions& opts) {
  if (opts.stride == 0) throw std::invalid_argument("bes_scan: stride must be >= 1");
  BesProfile prof;
  prof.clean_mse = decode_mse(stream.info, stream.bits, reference);
  for (std::size_t i = opts.first; i < stream.size(); i += opts.stride) {
    prof.index.push_back(i);
    prof.tags.push_back(stream.tags[i]);
  }
  prof.mse_increase.assign(prof.index.size(), 0.0);

  // Each worker owns a private copy of the stream and a strided share of the
  // probes; results land at fixed slots.
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(prof.size())));
  auto work = [&](unsigned w) {
    std::vector<std::uint8_t> bits = stream.bits;
    for (std::size_t j = w; j < prof.size(); j += workers) {
      const std::size_t i = prof.index[j];
      bits[i] ^= 1u;
      prof.mse_increase[j] = decode_mse(stream.info, bits, reference) - prof.clean_mse;
      bits[i] ^= 1u;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return prof;
}

void write_bes_csv(std::ostream& out, const BesProfile& profile) {
  out << "index,tag,mse_increase\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    out << profile.index[i] << ',' << spiht::to_string(profile.tags[i]) << ',' << profile.mse_increase[i] << '\n';
}

spiht::GroupPrefix prefix_for_bits(const spiht::GroupedBitstream& g, std::size_t bits) {
  spiht::GroupPrefix p{};
  for (std::size_t k = 0; k < spiht::kGroupCount; ++k) {
    p[k] = std::min(bits, g.groups[k].size());
    bits -= p[k];
  }
  return p;
}

std::size_t packet_count(const spiht::GroupedBitstream& g, std::size_t packet_len) {
  if (packet_len == 0) throw std::invalid_argument("packet_count: packet length must be > 0");
  return (g.total_bits() + packet_len - 1) / packet_len;
}

std::vector<double> clamp_increments(const std::vector<double>& distortions) {
  if (distortions.empty()) return {};
  std::vector<double> delta(distortions.size() - 1, 0.0);
  double carry = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double v = distortions[i] - distortions[i + 1] + carry;
    if (v < 0.0) {
      carry = v;
    } else {
      delta[i] = v;
      carry = 0.0;
    }
  }
  // A deficit left at the end is taken back from the latest positive entries.
  for (std::size_t i = delta.size(); carry < 0.0 && i-- > 0;) {
    const double take = std::min(delta[i], -carry);
    delta[i] -= take;
    carry += take;
  }
  return delta;
}

DistortionProfile profile_packets(const spiht::GroupedBitstream& g, const GrayImage& reference,
                                  std::size_t packet_len) {
  const std::size_t packets = packet_count(g, packet_len);
  std::vector<double> dist;
  dist.reserve(packets + 1);
  for (std::size_t i = 0; i <= packets; ++i) {
    const auto prefix = prefix_for_bits(g, i * packet_len);
    dist.push_back(mse(spiht::reconstruct(spiht::decode_grouped(g, prefix)), reference));
  }
  DistortionProfile prof;
  prof.d0 = dist.front();
  prof.final_mse = dist.back();
  prof.delta_d = clamp_increments(dist);
  prof.packet_bits = packet_len;
  return prof;
}

}  // namespace jscc::sensitivity
