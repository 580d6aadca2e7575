#include "jscc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jscc/channel.hpp"
#include "jscc/rs.hpp"

namespace jscc::pipeline {

namespace {

constexpr std::uint64_t kSaltChannel = 1;

std::string fmt(double v, int digits = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

void append_bits(std::vector<std::uint8_t>& bits, std::span<const std::uint8_t> bytes) {
  for (std::uint8_t b : bytes)
    for (int k = 7; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((b >> k) & 1u));
}

}  // namespace

std::string to_string(ChannelKind k) { return k == ChannelKind::Bsc ? "bsc" : "awgn"; }
std::string to_string(Protection p) { return p == Protection::Eep ? "eep" : "uep"; }
std::string to_string(PaprMethod m) {
  switch (m) {
    case PaprMethod::None: return "none";
    case PaprMethod::MuLaw: return "compound";
    case PaprMethod::ALaw: return "a-law";
    case PaprMethod::Interleave: return "interleave";
  }
  return "?";
}

ChannelKind channel_from_string(const std::string& s) {
  if (s == "bsc") return ChannelKind::Bsc;
  if (s == "awgn") return ChannelKind::Awgn;
  throw std::invalid_argument("unknown channel '" + s + "' (bsc, awgn)");
}

Protection protection_from_string(const std::string& s) {
  if (s == "eep") return Protection::Eep;
  if (s == "uep") return Protection::Uep;
  throw std::invalid_argument("unknown protection '" + s + "' (eep, uep)");
}

PaprMethod papr_from_string(const std::string& s) {
  if (s == "none") return PaprMethod::None;
  if (s == "compound" || s == "mu-law" || s == "mulaw") return PaprMethod::MuLaw;
  if (s == "a-law" || s == "alaw") return PaprMethod::ALaw;
  if (s == "interleave" || s == "interleaving") return PaprMethod::Interleave;
  throw std::invalid_argument("unknown PAPR method '" + s + "' (none, compound, a-law, interleave)");
}

void ExperimentConfig::validate() const {
  if (!(bpp > 0.0)) throw std::invalid_argument("config: bpp must be positive");
  if (block_rows < 1 || block_symbols < 1) throw std::invalid_argument("config: block geometry must be positive");
  if (packet_bits != source_symbols_per_packet() * 8)
    throw std::invalid_argument("config: packet_bits must equal 8 * block_rows * block_symbols");
  if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument("config: ber must lie in [0, 1]");
  if (qam_bits < 2 || qam_bits % 2 != 0) throw std::invalid_argument("config: qam_bits must be even and >= 2");
  if (std::isnan(snr_db)) throw std::invalid_argument("config: snr_db is NaN");
  if (eep_row_parity < 0) throw std::invalid_argument("config: eep_row_parity must be >= 0");
  if (budget_per_packet < static_cast<int>(source_symbols_per_packet()))
    throw std::invalid_argument("config: budget_per_packet is below the unprotected packet size");
  auto check_levels = [](const std::vector<int>& v, const char* what) {
    if (v.empty() || std::find(v.begin(), v.end(), 0) == v.end())
      throw std::invalid_argument(std::string("config: ") + what + " must include 0");
    for (int x : v)
      if (x < 0) throw std::invalid_argument(std::string("config: negative ") + what);
  };
  check_levels(row_parity_levels, "row parity levels");
  check_levels(col_parity_levels, "column parity levels");
  if (block_symbols + std::max(eep_row_parity, *std::max_element(row_parity_levels.begin(), row_parity_levels.end())) > 255 ||
      block_rows + *std::max_element(col_parity_levels.begin(), col_parity_levels.end()) > 255)
    throw std::invalid_argument("config: code length exceeds 255");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  ofdm().validate();
}

ofdm::OfdmConfig ExperimentConfig::ofdm() const {
  ofdm::OfdmConfig o;
  o.n_subcarriers = subcarriers;
  o.bits_per_symbol = phy_bits();
  o.papr_threshold_db = papr_threshold_db;
  o.interleaver_count = papr == PaprMethod::Interleave ? interleavers : 1;
  if (papr == PaprMethod::MuLaw) o.compander.kind = ofdm::CompanderKind::MuLaw;
  if (papr == PaprMethod::ALaw) o.compander.kind = ofdm::CompanderKind::ALaw;
  o.compander.mu = mu;
  o.compander.a = a;
  return o;
}

void describe(std::ostream& out, const ExperimentConfig& c) {
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  out << "image=" << c.image_path << '\n'
      << "bpp=" << fmt(c.bpp, 4) << '\n'
      << "levels=" << c.levels << '\n'
      << "packet_bits=" << c.packet_bits << '\n'
      << "block_rows=" << c.block_rows << '\n'
      << "block_symbols=" << c.block_symbols << '\n'
      << "channel=" << to_string(c.channel) << '\n'
      << "ber=" << fmt(c.ber, 9) << '\n'
      << "qam_bits=" << c.qam_bits << '\n'
      << "snr_db=" << fmt(c.snr_db, 4) << '\n'
      << "protection=" << to_string(c.protection) << '\n'
      << "eep_row_parity=" << c.eep_row_parity << '\n'
      << "budget_per_packet=" << c.budget_per_packet << '\n'
      << "row_parity_levels=" << list(c.row_parity_levels) << '\n'
      << "col_parity_levels=" << list(c.col_parity_levels) << '\n'
      << "papr=" << to_string(c.papr) << '\n'
      << "mu=" << fmt(c.mu, 4) << '\n'
      << "a=" << fmt(c.a, 4) << '\n'
      << "interleavers=" << c.interleavers << '\n'
      << "papr_threshold_db=" << fmt(c.papr_threshold_db, 4) << '\n'
      << "subcarriers=" << c.subcarriers << '\n'
      << "trials=" << c.trials << '\n'
      << "seed=" << c.seed << '\n';
}

SourcePlan prepare_source(const GrayImage& image, const ExperimentConfig& cfg) {
  cfg.validate();
  SourcePlan s;
  s.image = image;
  const auto budget = spiht::budget_for(image.width, image.height, cfg.bpp);
  s.stream = spiht::regroup(spiht::encode_image(image, budget, cfg.levels));
  s.clean = spiht::reconstruct(spiht::decode_grouped(s.stream));
  s.clean_mse = mse(s.clean, image);
  s.profile = sensitivity::profile_packets(s.stream, image, cfg.packet_bits);

  const auto lengths = s.stream.lengths();
  const std::size_t packets = s.profile.packet_count();
  for (std::size_t i = 0; i < packets; ++i) {
    std::size_t start = i * cfg.packet_bits, g = 0;
    while (g + 1 < spiht::kGroupCount && start >= lengths[g]) start -= lengths[g++];
    s.packet_group.push_back(g);
  }
  return s;
}

std::int64_t packet_symbols(const ExperimentConfig& cfg, int row_parity, int col_parity) {
  return static_cast<std::int64_t>(cfg.block_rows + col_parity) * (cfg.block_symbols + row_parity);
}

rateopt::LayerSpec make_layers(const SourcePlan& src, const ExperimentConfig& cfg) {
  rateopt::LayerSpec spec;
  for (std::size_t i = 0; i < src.packet_group.size(); ++i) {
    if (i == 0 || src.packet_group[i] != src.packet_group[i - 1]) spec.layers.push_back({i, 0, {}});
    ++spec.layers.back().packet_count;
  }
  for (auto& layer : spec.layers)
    for (int r : cfg.row_parity_levels)
      for (int c : cfg.col_parity_levels)
        layer.candidates.push_back(
            {r, c, static_cast<std::int64_t>(layer.packet_count) * packet_symbols(cfg, r, c)});
  // Zero protection first.
  for (auto& layer : spec.layers)
    std::stable_sort(layer.candidates.begin(), layer.candidates.end(), [](const auto& a, const auto& b) {
      return (a.row_parity == 0 && a.col_parity == 0) > (b.row_parity == 0 && b.col_parity == 0);
    });
  return spec;
}

double symbol_error_probability(const ExperimentConfig& cfg) {
  if (cfg.channel == ChannelKind::Bsc) return -std::expm1(8.0 * std::log1p(-cfg.ber));
  if (std::isinf(cfg.snr_db) && cfg.snr_db > 0) return 0.0;
  const double pe = channel::mqam_symbol_error(cfg.qam_bits, channel::db_to_linear(cfg.snr_db));
  return -std::expm1(8.0 / cfg.qam_bits * std::log1p(-pe));
}

rateopt::SuccessModel success_model(const ExperimentConfig& cfg) {
  const double ps = symbol_error_probability(cfg);
  const int k1 = cfg.block_rows, k2 = cfg.block_symbols;
  return [ps, k1, k2](std::size_t, const rateopt::ProtectionLevel& lv) {
    // Row of k2 + r symbols fails when more than floor(r / 2) are in error.
    const int n = k2 + lv.row_parity, t = lv.row_parity / 2;
    double ok = 0.0;
    for (int e = 0; e <= t; ++e) {
      double c = 1.0;
      for (int i = 1; i <= e; ++i) c = c * (n - e + i) / i;
      ok += c * std::pow(ps, e) * std::pow(1.0 - ps, n - e);
    }
    const double row_loss = std::clamp(1.0 - ok, 0.0, 1.0);
    return rateopt::layer_success(k1 + lv.col_parity, k1, row_loss);
  };
}

namespace {

ProtectionPlan finish_plan(rateopt::LayerSpec layers, rateopt::RateVector rates, const SourcePlan& src) {
  ProtectionPlan p;
  for (const auto& l : layers.layers) {
    p.layer_group.push_back(src.packet_group[l.first_packet]);
    for (std::size_t i = 0; i < l.packet_count; ++i)
      p.packet_level.push_back(rates.levels[p.layer_group.size() - 1]);
  }
  p.layers = std::move(layers);
  p.rates = std::move(rates);
  return p;
}

}  // namespace

ProtectionPlan run_eep_baseline(const SourcePlan& src, const ExperimentConfig& cfg) {
  rateopt::LayerSpec layers = make_layers(src, cfg);
  rateopt::RateVector r;
  for (auto& l : layers.layers) {
    l.candidates = {{cfg.eep_row_parity, 0,
                     static_cast<std::int64_t>(l.packet_count) * packet_symbols(cfg, cfg.eep_row_parity, 0)}};
    r.choice.push_back(0);
  }
  const rateopt::Problem fixed(src.profile, layers, success_model(cfg));
  r = fixed.make_vector(r.choice);
  r.converged = true;
  return finish_plan(std::move(layers), std::move(r), src);
}

ProtectionPlan plan_uep(const SourcePlan& src, const ExperimentConfig& cfg) {
  rateopt::LayerSpec layers = make_layers(src, cfg);
  const auto budget = static_cast<std::int64_t>(cfg.budget_per_packet) *
                      static_cast<std::int64_t>(src.profile.packet_count());
  rateopt::RateVector r = rateopt::optimize(src.profile, layers, success_model(cfg), budget);
  return finish_plan(std::move(layers), std::move(r), src);
}

ProtectionPlan plan_protection(const SourcePlan& src, const ExperimentConfig& cfg) {
  return cfg.protection == Protection::Eep ? run_eep_baseline(src, cfg) : plan_uep(src, cfg);
}

namespace {

struct PhyOutput {
  std::vector<std::uint8_t> bits;
  std::size_t frames = 0;
  std::size_t pad_bits = 0;
  std::size_t bit_errors = 0;
  double max_papr = 0.0;
  double mean_papr = 0.0;
};

// Maps bits onto OFDM frames, applies the PAPR method and the channel, and
// returns the receiver's hard-decision bits.
PhyOutput transmit_bits(std::span<const std::uint8_t> bits, const ExperimentConfig& cfg, std::uint64_t seed) {
  const ofdm::OfdmConfig oc = cfg.ofdm();
  const ofdm::InterleaverBank bank(oc);
  const channel::QamConstellation qam(oc.bits_per_symbol);
  const std::size_t per_frame = static_cast<std::size_t>(oc.n_subcarriers) * oc.bits_per_symbol;

  PhyOutput out;
  out.frames = (bits.size() + per_frame - 1) / per_frame;
  out.pad_bits = out.frames * per_frame - bits.size();
  std::vector<std::uint8_t> padded(bits.begin(), bits.end());
  padded.resize(out.frames * per_frame, 0);
  ofdm::scramble(padded);

  std::mt19937_64 rng(channel::substream_seed(seed, 0, kSaltChannel));
  const bool awgn = cfg.channel == ChannelKind::Awgn && !(std::isinf(cfg.snr_db) && cfg.snr_db > 0);
  const double variance =
      awgn ? 1.0 / (static_cast<double>(oc.n_subcarriers) * channel::db_to_linear(cfg.snr_db)) : 0.0;

  out.bits.reserve(padded.size());
  double papr_sum = 0.0;
  for (std::size_t f = 0; f < out.frames; ++f) {
    const auto symbols = qam.map(std::span<const std::uint8_t>(padded).subspan(f * per_frame, per_frame));
    ofdm::OfdmFrame frame = ofdm::select_interleaver(symbols, oc, bank);
    out.max_papr = std::max(out.max_papr, frame.papr_db);
    papr_sum += frame.papr_db;
    if (awgn) channel::add_awgn(frame.time, variance, rng);
    const auto rx = ofdm::demodulate(frame.time, oc, bank, frame.interleaver_id, frame.scale);
    const auto rx_bits = qam.demap(rx);
    out.bits.insert(out.bits.end(), rx_bits.begin(), rx_bits.end());
  }
  out.mean_papr = out.frames ? papr_sum / static_cast<double>(out.frames) : 0.0;
  ofdm::scramble(out.bits);
  out.bits.resize(bits.size());
  // BSC mode abstracts the link as independent bit flips after detection.
  if (cfg.channel == ChannelKind::Bsc) out.bit_errors = channel::bsc_apply(out.bits, cfg.ber, rng);
  if (awgn)
    for (std::size_t i = 0; i < bits.size(); ++i) out.bit_errors += out.bits[i] != bits[i];
  return out;
}

}  // namespace

TrialResult run_trial(const SourcePlan& src, const ProtectionPlan& plan, const ExperimentConfig& cfg,
                      std::size_t trial) {
  const std::size_t packets = src.profile.packet_count();
  const std::vector<std::uint8_t> source = src.stream.concatenated();
  const std::size_t k_bytes = cfg.source_symbols_per_packet();

  // Channel coding, packet by packet.
  std::vector<std::uint8_t> tx_bits;
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < packets; ++i) {
    std::vector<std::uint8_t> pbits(cfg.packet_bits, 0);
    const std::size_t begin = i * cfg.packet_bits;
    const std::size_t end = std::min(source.size(), begin + cfg.packet_bits);
    std::copy(source.begin() + static_cast<std::ptrdiff_t>(begin), source.begin() + static_cast<std::ptrdiff_t>(end),
              pbits.begin());
    const auto& lv = plan.packet_level[i];
    const rs::PacketGrid grid =
        rs::product_encode(bits_to_bytes(pbits), {cfg.block_symbols + lv.row_parity, cfg.block_symbols},
                           {cfg.block_rows + lv.col_parity, cfg.block_rows});
    offsets.push_back(tx_bits.size());
    append_bits(tx_bits, grid.symbols);
  }
  offsets.push_back(tx_bits.size());

  const PhyOutput phy = transmit_bits(tx_bits, cfg, channel::substream_seed(cfg.seed, trial, 0));

  // FEC decoding; everything from the first failed packet on is discarded.
  std::vector<std::uint8_t> rx_source;
  std::size_t delivered = 0;
  for (; delivered < packets; ++delivered) {
    const auto& lv = plan.packet_level[delivered];
    const auto bytes = bits_to_bytes(std::span<const std::uint8_t>(phy.bits).subspan(
        offsets[delivered], offsets[delivered + 1] - offsets[delivered]));
    const auto res = rs::product_decode(bytes, {cfg.block_symbols + lv.row_parity, cfg.block_symbols},
                                        {cfg.block_rows + lv.col_parity, cfg.block_rows});
    if (!res.recovered()) break;
    if (res.data.size() != k_bytes) throw std::logic_error("run_trial: unexpected packet size");
    append_bits(rx_source, res.data);
  }
  rx_source.resize(std::min(rx_source.size(), source.size()));

  spiht::GroupedBitstream rx = src.stream;
  std::size_t pos = 0;
  for (auto& g : rx.groups)
    for (auto& b : g) b = pos < rx_source.size() ? rx_source[pos++] : 0;
  const auto prefix = sensitivity::prefix_for_bits(rx, rx_source.size());

  TrialResult t;
  t.received = spiht::reconstruct(spiht::decode_grouped(rx, prefix));
  t.mse = mse(t.received, src.image);
  t.psnr_db = psnr(t.mse);
  t.delivered_packets = delivered;
  t.channel_bit_errors = phy.bit_errors;
  t.frames = phy.frames;
  t.max_papr_db = phy.max_papr;
  t.mean_papr_db = phy.mean_papr;
  return t;
}

ExperimentReport run_transmit_chain(const SourcePlan& src, const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport r;
  r.config = cfg;
  r.group_bits = src.stream.lengths();
  r.packets = src.profile.packet_count();
  r.clean_mse = src.clean_mse;
  r.clean_psnr_db = psnr(src.clean_mse);
  r.plan = plan_protection(src, cfg);

  r.trials.resize(static_cast<std::size_t>(cfg.trials));
  {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), r.trials.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < r.trials.size(); t += workers) r.trials[t] = run_trial(src, r.plan, cfg, t);
      });
  }

  double mse_sum = 0.0, psnr_sum = 0.0, papr_sum = 0.0;
  for (const auto& t : r.trials) {
    mse_sum += t.mse;
    psnr_sum += t.psnr_db;
    papr_sum += t.mean_papr_db;
    r.max_papr_db = std::max(r.max_papr_db, t.max_papr_db);
  }
  const double n = static_cast<double>(r.trials.size());
  r.mean_mse = mse_sum / n;
  r.psnr_of_mean_mse_db = psnr(r.mean_mse);
  r.mean_psnr_db = psnr_sum / n;
  r.mean_papr_db = papr_sum / n;
  r.frames = r.trials.front().frames;

  SymbolAccounting& s = r.symbols;
  s.coded_bits = src.stream.total_bits();
  s.packet_pad_bits = r.packets * cfg.packet_bits - s.coded_bits;
  s.source_symbols = static_cast<std::int64_t>(r.packets * cfg.source_symbols_per_packet());
  s.fec_symbols = r.plan.total_symbols();
  s.parity_symbols = s.fec_symbols - s.source_symbols;
  const std::size_t per_frame = static_cast<std::size_t>(cfg.subcarriers) * cfg.phy_bits();
  s.phy_pad_bits = r.frames * per_frame - static_cast<std::size_t>(s.fec_symbols) * 8;
  s.side_info_bits = spiht::kHeaderBits + r.frames * static_cast<std::size_t>(cfg.ofdm().side_info_bits());
  s.transmitted_bits = static_cast<std::size_t>(s.fec_symbols) * 8 + s.side_info_bits;
  return r;
}

ExperimentReport run_transmit_chain(const ExperimentConfig& cfg) {
  return run_transmit_chain(prepare_source(read_pgm(cfg.image_path), cfg), cfg);
}

ProtectionPattern protection_pattern(const SourcePlan& src, const ExperimentConfig& cfg) {
  ProtectionPattern out;
  out.plan = plan_uep(src, cfg);
  for (std::size_t j = 0; j < out.plan.layers.layers.size(); ++j) {
    const auto& l = out.plan.layers.layers[j];
    const auto& lv = out.plan.rates.levels[j];
    GroupProtection row;
    row.group = out.plan.layer_group[j];
    row.packets = l.packet_count;
    row.row_parity = lv.row_parity;
    row.col_parity = lv.col_parity;
    row.parity_per_packet = packet_symbols(cfg, lv.row_parity, lv.col_parity) -
                            static_cast<std::int64_t>(cfg.source_symbols_per_packet());
    double dd = 0.0;
    for (std::size_t i = 0; i < l.packet_count; ++i) dd += src.profile.delta_d[l.first_packet + i];
    row.delta_d_per_bit = dd / static_cast<double>(l.packet_count * cfg.packet_bits);
    out.rows.push_back(row);
  }
  return out;
}

void write_protection_csv(std::ostream& out, const ProtectionPattern& r) {
  out << "group,packets,row_parity,col_parity,parity_per_packet,delta_d_per_bit\n";
  for (const auto& row : r.rows)
    out << spiht::to_string(static_cast<spiht::BitKind>(row.group)) << ',' << row.packets << ','
        << row.row_parity << ',' << row.col_parity << ',' << row.parity_per_packet << ','
        << fmt(row.delta_d_per_bit, 9) << '\n';
}

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "# jscc transmit report\n";
  std::ostringstream cfg;
  describe(cfg, r.config);
  std::string line;
  std::istringstream lines(cfg.str());
  while (std::getline(lines, line)) out << "# " << line << '\n';
  out << "# groups=" << r.group_bits[0] << ',' << r.group_bits[1] << ',' << r.group_bits[2] << ','
      << r.group_bits[3] << " packets=" << r.packets << '\n';
  out << "# rates=";
  for (std::size_t j = 0; j < r.plan.rates.levels.size(); ++j)
    out << (j ? ";" : "") << spiht::to_string(static_cast<spiht::BitKind>(r.plan.layer_group[j])) << ':'
        << r.plan.rates.levels[j].row_parity << '/' << r.plan.rates.levels[j].col_parity;
  out << '\n';
  const auto& s = r.symbols;
  out << "# symbols source=" << s.source_symbols << " parity=" << s.parity_symbols << " fec=" << s.fec_symbols
      << " side_info_bits=" << s.side_info_bits << " transmitted_bits=" << s.transmitted_bits
      << " coded_bits=" << s.coded_bits << " packet_pad_bits=" << s.packet_pad_bits
      << " phy_pad_bits=" << s.phy_pad_bits << '\n';
  out << "trial,mse,psnr_db,delivered_packets,channel_bit_errors,frames,max_papr_db,mean_papr_db\n";
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto& x = r.trials[t];
    out << t << ',' << fmt(x.mse) << ',' << fmt(x.psnr_db) << ',' << x.delivered_packets << ','
        << x.channel_bit_errors << ',' << x.frames << ',' << fmt(x.max_papr_db) << ',' << fmt(x.mean_papr_db)
        << '\n';
  }
  out << "mean," << fmt(r.mean_mse) << ',' << fmt(r.psnr_of_mean_mse_db) << ",,," << r.frames << ','
      << fmt(r.max_papr_db) << ',' << fmt(r.mean_papr_db) << '\n';
  out << "# mean_psnr_db=" << fmt(r.mean_psnr_db) << " clean_mse=" << fmt(r.clean_mse)
      << " clean_psnr_db=" << fmt(r.clean_psnr_db) << '\n';
}

void write_report_table(std::ostream& out, const std::vector<ExperimentReport>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s %12s %10s %12s %12s %8s %10s %10s\n", "system", "MSE", "PSNR dB",
                "tx symbols", "tx bits", "frames", "max PAPR", "PAPR av");
  out << buf;
  for (const auto& r : rows) {
    const std::string name = to_string(r.config.protection) + "/" + to_string(r.config.papr) + "/" +
                             to_string(r.config.channel) + " " +
                             (r.config.channel == ChannelKind::Bsc ? "p=" + fmt(r.config.ber, 4)
                                                                   : fmt(r.config.snr_db, 1) + "dB");
    std::snprintf(buf, sizeof buf, "%-28s %12.4f %10.4f %12lld %12zu %8zu %10.4f %10.4f\n", name.c_str(),
                  r.mean_mse, r.psnr_of_mean_mse_db, static_cast<long long>(r.symbols.fec_symbols),
                  r.symbols.transmitted_bits, r.frames, r.max_papr_db, r.mean_papr_db);
    out << buf;
  }
}

}  // namespace jscc::pipeline
