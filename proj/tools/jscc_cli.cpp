// jscc: command-line front end for the image-over-OFDM laboratory.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "jscc/ofdm.hpp"
#include "jscc/pipeline.hpp"
#include "jscc/rateopt.hpp"
#include "jscc/sensitivity.hpp"
#include "jscc/spiht.hpp"

using namespace jscc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Names {
  std::string channel = "bsc";
  std::string protection = "uep";
  std::string papr = "none";
};

// Options shared by every experiment subcommand. Each subcommand also takes
// --config FILE with the same keys as flat `key = value` lines.
void add_experiment_options(CLI::App* app, pipeline::ExperimentConfig& c, Names& n) {
  app->set_config("--config", "", "Read options from a key = value file");
  app->add_option("--image,image", c.image_path, "8-bit binary PGM (P5) input");
  app->add_option("--bpp", c.bpp, "Source rate in bits per pixel");
  app->add_option("--levels", c.levels, "Wavelet decomposition levels");
  app->add_option("--packet-bits", c.packet_bits, "Packet length in bits");
  app->add_option("--block-rows", c.block_rows, "Source rows per packet (k1)");
  app->add_option("--block-symbols", c.block_symbols, "Source symbols per row (k2)");
  app->add_option("--channel", n.channel, "bsc or awgn")->check(CLI::IsMember({"bsc", "awgn"}));
  app->add_option("--ber", c.ber, "BSC crossover probability");
  app->add_option("--qam-bits", c.qam_bits, "AWGN: bits per MQAM symbol");
  app->add_option("--snr-db", c.snr_db, "AWGN: SNR per symbol in dB");
  app->add_option("--protection", n.protection, "eep or uep")->check(CLI::IsMember({"eep", "uep"}));
  app->add_option("--eep-row-parity", c.eep_row_parity, "Row parity symbols for EEP");
  app->add_option("--budget", c.budget_per_packet, "UEP budget in symbols per packet");
  app->add_option("--row-levels", c.row_parity_levels, "Candidate row parities")->delimiter(',');
  app->add_option("--col-levels", c.col_parity_levels, "Candidate column parities")->delimiter(',');
  app->add_option("--papr", n.papr, "none, compound, a-law or interleave")
      ->check(CLI::IsMember({"none", "compound", "a-law", "interleave"}));
  app->add_option("--mu", c.mu, "mu-law parameter");
  app->add_option("--a", c.a, "A-law parameter");
  app->add_option("--k", c.interleavers, "Interleaver bank size");
  app->add_option("--papr-threshold", c.papr_threshold_db, "Selective interleaving threshold in dB");
  app->add_option("--subcarriers", c.subcarriers, "OFDM subcarriers (power of two)");
  app->add_option("--trials", c.trials, "Independent channel realizations");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--threads", c.threads, "Worker threads for trials");
}

void resolve(pipeline::ExperimentConfig& c, const Names& n) {
  c.channel = pipeline::channel_from_string(n.channel);
  c.protection = pipeline::protection_from_string(n.protection);
  c.papr = pipeline::papr_from_string(n.papr);
  c.validate();
  if (c.image_path.empty()) throw CLI::ValidationError("image", "an input image is required");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  return file;
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
  std::vector<double> t;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) t.push_back(lo + i * step);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive image transmission over a simulated OFDM link"};
  app.require_subcommand(1);

  pipeline::ExperimentConfig cfg;
  Names names;
  std::string out_path;

  // encode
  std::string stream_path = "stream.spg";
  auto* encode = app.add_subcommand("encode", "Compress an image into a grouped SPIHT stream");
  encode->add_option("image", cfg.image_path, "Input PGM")->required();
  encode->add_option("--bpp", cfg.bpp, "Bits per pixel");
  encode->add_option("--levels", cfg.levels, "Wavelet levels");
  encode->add_option("-o,--output", stream_path, "Grouped stream file");

  // bes
  sensitivity::BesOptions bes_opts;
  auto* bes = app.add_subcommand("bes", "Bit-error sensitivity of every coded bit");
  bes->add_option("image", cfg.image_path, "Input PGM")->required();
  bes->add_option("--bpp", cfg.bpp, "Bits per pixel");
  bes->add_option("--levels", cfg.levels, "Wavelet levels");
  bes->add_option("--stride", bes_opts.stride, "Probe every n-th bit");
  bes->add_option("--threads", bes_opts.threads, "Worker threads");
  bes->add_option("-o,--output", out_path, "CSV output (default stdout)");

  // optimize, transmit, report share the experiment options.
  auto* optimize = app.add_subcommand("optimize", "Optimized per-group protection for the configured channel");
  add_experiment_options(optimize, cfg, names);
  optimize->add_option("-o,--output", out_path, "Rate vector CSV (default stdout)");

  std::string image_out;
  auto* transmit = app.add_subcommand("transmit", "Run the full chain and write a report");
  add_experiment_options(transmit, cfg, names);
  transmit->add_option("-o,--output", out_path, "Report CSV (default stdout)");
  transmit->add_option("--save-image", image_out, "Write the last trial's received image as PGM");

  std::vector<std::string> report_papr{"compound", "interleave"};
  auto* report = app.add_subcommand("report", "EEP and UEP side by side for each PAPR method, as a table");
  add_experiment_options(report, cfg, names);
  report->add_option("--methods", report_papr, "PAPR methods to tabulate")->delimiter(',');
  report->add_option("-o,--output", out_path, "Table output (default stdout)");

  // ccdf
  std::string method = "interleave";
  std::size_t frames = 10000;
  double t_lo = 4.0, t_hi = 12.0, t_step = 0.25;
  auto* ccdf = app.add_subcommand("ccdf", "PAPR CCDF of random QPSK frames");
  ccdf->set_config("--config", "", "Read options from a key = value file");
  ccdf->add_option("--method", method, "none, compound, a-law or interleave")
      ->check(CLI::IsMember({"none", "compound", "a-law", "interleave"}));
  ccdf->add_option("--k", cfg.interleavers, "Interleaver bank size");
  ccdf->add_option("--frames", frames, "Number of frames");
  ccdf->add_option("--subcarriers", cfg.subcarriers, "OFDM subcarriers");
  ccdf->add_option("--mu", cfg.mu, "mu-law parameter");
  ccdf->add_option("--a", cfg.a, "A-law parameter");
  ccdf->add_option("--papr-threshold", cfg.papr_threshold_db, "Selective interleaving threshold in dB");
  ccdf->add_option("--seed", cfg.seed, "Seed");
  ccdf->add_option("--from", t_lo, "Lowest threshold in dB");
  ccdf->add_option("--to", t_hi, "Highest threshold in dB");
  ccdf->add_option("--step", t_step, "Threshold step in dB")->check(CLI::PositiveNumber);
  ccdf->add_option("-o,--output", out_path, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    std::ofstream file;
    if (*encode) {
      const GrayImage img = read_pgm(cfg.image_path);
      const auto budget = spiht::budget_for(img.width, img.height, cfg.bpp);
      const auto g = spiht::regroup(spiht::encode_image(img, budget, cfg.levels));
      spiht::write_grouped(stream_path, g);
      const auto len = g.lengths();
      for (std::size_t k = 0; k < spiht::kGroupCount; ++k)
        std::cout << spiht::to_string(static_cast<spiht::BitKind>(k)) << ' ' << len[k] << '\n';
      std::cout << "total " << g.total_bits() << " header " << spiht::kHeaderBits << '\n';
    } else if (*bes) {
      const GrayImage img = read_pgm(cfg.image_path);
      const auto stream =
          spiht::encode_image(img, spiht::budget_for(img.width, img.height, cfg.bpp), cfg.levels);
      const auto prof = sensitivity::bes_scan(stream, img, bes_opts);
      sensitivity::write_bes_csv(open_out(out_path, file), prof);
      const auto mean = prof.mean_by_kind();
      for (std::size_t k = 0; k < spiht::kGroupCount; ++k)
        std::cerr << "mean " << spiht::to_string(static_cast<spiht::BitKind>(k)) << ' ' << mean[k] << '\n';
    } else if (*optimize) {
      resolve(cfg, names);
      const auto src = pipeline::prepare_source(read_pgm(cfg.image_path), cfg);
      const auto plan = pipeline::plan_protection(src, cfg);
      rateopt::write_rate_csv(open_out(out_path, file), plan.rates);
      for (std::size_t j = 0; j < plan.layer_group.size(); ++j)
        std::cerr << "layer " << j << ' ' << spiht::to_string(static_cast<spiht::BitKind>(plan.layer_group[j]))
                  << " packets " << plan.layers.layers[j].packet_count << '\n';
      std::cerr << "total " << plan.rates.total_cost << " expected_mse " << plan.rates.expected_distortion << '\n';
    } else if (*transmit) {
      resolve(cfg, names);
      const auto src = pipeline::prepare_source(read_pgm(cfg.image_path), cfg);
      const auto rep = pipeline::run_transmit_chain(src, cfg);
      pipeline::write_report_csv(open_out(out_path, file), rep);
      if (!image_out.empty()) write_pgm(image_out, rep.trials.back().received);
      pipeline::write_report_table(std::cerr, {rep});
    } else if (*report) {
      resolve(cfg, names);
      const auto src = pipeline::prepare_source(read_pgm(cfg.image_path), cfg);
      std::vector<pipeline::ExperimentReport> rows;
      for (const auto& m : report_papr) {
        for (auto p : {pipeline::Protection::Eep, pipeline::Protection::Uep}) {
          pipeline::ExperimentConfig c = cfg;
          c.papr = pipeline::papr_from_string(m);
          c.protection = p;
          rows.push_back(pipeline::run_transmit_chain(src, c));
        }
      }
      pipeline::write_report_table(open_out(out_path, file), rows);
    } else if (*ccdf) {
      pipeline::ExperimentConfig c = cfg;
      c.papr = pipeline::papr_from_string(method);
      ofdm::OfdmConfig oc = c.ofdm();
      oc.validate();
      const auto papr = ofdm::random_frame_papr(oc, frames, cfg.seed);
      const auto thresholds = threshold_grid(t_lo, t_hi, t_step);
      std::string label = method;
      if (c.papr == pipeline::PaprMethod::Interleave) label += "-k" + std::to_string(oc.interleaver_count);
      ofdm::write_ccdf_csv(open_out(out_path, file), thresholds, ofdm::ccdf(papr, thresholds), label);
      const double mean = std::accumulate(papr.begin(), papr.end(), 0.0) / static_cast<double>(papr.size());
      std::cerr << "frames " << papr.size() << " mean_papr_db " << mean << '\n';
    }
  } catch (const CLI::Error& e) {
    std::cerr << "jscc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "jscc: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "jscc: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
