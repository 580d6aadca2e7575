#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jscc/image.hpp"
#include "jscc/ofdm.hpp"
#include "jscc/rateopt.hpp"
#include "jscc/sensitivity.hpp"
#include "jscc/spiht.hpp"

namespace jscc::pipeline {

enum class ChannelKind { Bsc, Awgn };
enum class Protection { Eep, Uep };
enum class PaprMethod { None, MuLaw, ALaw, Interleave };

std::string to_string(ChannelKind k);
std::string to_string(Protection p);
std::string to_string(PaprMethod m);
ChannelKind channel_from_string(const std::string& s);
Protection protection_from_string(const std::string& s);
PaprMethod papr_from_string(const std::string& s);

struct ExperimentConfig {
  std::string image_path;
  double bpp = 0.5;
  int levels = kDefaultLevels;

  // Packet geometry: packet_bits = block_rows * block_symbols * 8.
  std::size_t packet_bits = 2000;
  int block_rows = 25;     // k1
  int block_symbols = 10;  // k2

  ChannelKind channel = ChannelKind::Bsc;
  double ber = 1e-3;    // BSC crossover probability
  int qam_bits = 2;     // AWGN: bits per MQAM symbol
  double snr_db = 10.0; // AWGN: SNR per symbol; +inf for a noiseless link

  Protection protection = Protection::Uep;
  int eep_row_parity = 8;
  int budget_per_packet = 450;  // average symbols per packet available to UEP
  std::vector<int> row_parity_levels{0, 2, 4, 6, 8};
  std::vector<int> col_parity_levels{0, 2, 4, 6, 8};

  PaprMethod papr = PaprMethod::None;
  double mu = 2.0;
  double a = 87.6;
  int interleavers = 16;
  double papr_threshold_db = 6.0;
  int subcarriers = 64;

  int trials = 50;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
  std::size_t source_symbols_per_packet() const {
    return static_cast<std::size_t>(block_rows) * static_cast<std::size_t>(block_symbols);
  }
  /// Bits carried by one OFDM subcarrier: QPSK for BSC mode, the MQAM order for AWGN.
  int phy_bits() const { return channel == ChannelKind::Awgn ? qam_bits : 2; }
  ofdm::OfdmConfig ofdm() const;
};

/// key = value lines describing the configuration, in a fixed order.
void describe(std::ostream& out, const ExperimentConfig& cfg);

/// Everything upstream of channel coding; shared by every trial and mode.
struct SourcePlan {
  GrayImage image;
  spiht::GroupedBitstream stream;
  GrayImage clean;
  double clean_mse = 0.0;
  sensitivity::DistortionProfile profile;
  std::vector<std::size_t> packet_group;  // group of each packet's first bit
};

SourcePlan prepare_source(const GrayImage& image, const ExperimentConfig& cfg);

/// Per-layer protection; a layer is the run of packets that start in one group.
struct ProtectionPlan {
  rateopt::LayerSpec layers;
  std::vector<std::size_t> layer_group;
  rateopt::RateVector rates;
  std::vector<rateopt::ProtectionLevel> packet_level;

  std::int64_t total_symbols() const { return rates.total_cost; }
};

/// Symbols of one protected packet: (k1 + col_parity)(k2 + row_parity).
std::int64_t packet_symbols(const ExperimentConfig& cfg, int row_parity, int col_parity);

/// Candidate grid (row level x col level), zero protection first.
rateopt::LayerSpec make_layers(const SourcePlan& src, const ExperimentConfig& cfg);

/// Symbol (byte) error probability seen by the RS decoder.
double symbol_error_probability(const ExperimentConfig& cfg);

/// Q for one layer: row failures are losses of rate S_row for the column code,
/// Q = layer_success(k1 + c, k1, S_row).
rateopt::SuccessModel success_model(const ExperimentConfig& cfg);

/// Fixed RS(k2 + eep_row_parity, k2) rows, no column code, on every packet.
ProtectionPlan run_eep_baseline(const SourcePlan& src, const ExperimentConfig& cfg);
ProtectionPlan plan_uep(const SourcePlan& src, const ExperimentConfig& cfg);
ProtectionPlan plan_protection(const SourcePlan& src, const ExperimentConfig& cfg);

struct TrialResult {
  double mse = 0.0;
  double psnr_db = 0.0;
  std::size_t delivered_packets = 0;  // packets before the first FEC failure
  std::size_t channel_bit_errors = 0;
  std::size_t frames = 0;
  double max_papr_db = 0.0;
  double mean_papr_db = 0.0;
  GrayImage received;
};

struct SymbolAccounting {
  std::size_t coded_bits = 0;       // SPIHT output
  std::size_t packet_pad_bits = 0;  // zero fill of the final packet
  std::int64_t source_symbols = 0;
  std::int64_t parity_symbols = 0;
  std::int64_t fec_symbols = 0;         // source + parity
  std::size_t phy_pad_bits = 0;         // fill of the final OFDM frame
  std::size_t side_info_bits = 0;       // stream header + interleaver ids
  std::size_t transmitted_bits = 0;     // 8 * fec_symbols + side info
};

struct ExperimentReport {
  ExperimentConfig config;
  std::array<std::size_t, spiht::kGroupCount> group_bits{};
  std::size_t packets = 0;
  double clean_mse = 0.0;
  double clean_psnr_db = 0.0;
  ProtectionPlan plan;
  SymbolAccounting symbols;
  std::vector<TrialResult> trials;

  double mean_mse = 0.0;
  double psnr_of_mean_mse_db = 0.0;
  double mean_psnr_db = 0.0;
  double max_papr_db = 0.0;
  double mean_papr_db = 0.0;
  std::size_t frames = 0;
};

/// Protects, transmits and decodes the source once with trial index `trial`.
TrialResult run_trial(const SourcePlan& src, const ProtectionPlan& plan, const ExperimentConfig& cfg,
                      std::size_t trial);

ExperimentReport run_transmit_chain(const SourcePlan& src, const ExperimentConfig& cfg);
ExperimentReport run_transmit_chain(const ExperimentConfig& cfg);

/// UEP plan under the configured channel with one row per group.
struct GroupProtection {
  std::size_t group = 0;
  std::size_t packets = 0;
  int row_parity = 0;
  int col_parity = 0;
  std::int64_t parity_per_packet = 0;
  double delta_d_per_bit = 0.0;
};
struct ProtectionPattern {
  ProtectionPlan plan;
  std::vector<GroupProtection> rows;
};
ProtectionPattern protection_pattern(const SourcePlan& src, const ExperimentConfig& cfg);
void write_protection_csv(std::ostream& out, const ProtectionPattern& r);

void write_report_csv(std::ostream& out, const ExperimentReport& r);
/// Human-readable table: MSE, PSNR, transmitted symbols and bits, frames, max and mean PAPR.
void write_report_table(std::ostream& out, const std::vector<ExperimentReport>& rows);

}  // namespace jscc::pipeline
