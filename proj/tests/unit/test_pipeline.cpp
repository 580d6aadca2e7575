#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "jscc/channel.hpp"
#include "jscc/pipeline.hpp"
#include "test_support.hpp"

using namespace jscc;
using namespace jscc::pipeline;

namespace {

const SourcePlan& camera_source() {
  static const SourcePlan src = [] {
    ExperimentConfig cfg;
    return prepare_source(test::test_image(), cfg);
  }();
  return src;
}

ExperimentConfig quick(double ber, Protection prot, int trials = 3) {
  ExperimentConfig cfg;
  cfg.ber = ber;
  cfg.protection = prot;
  cfg.trials = trials;
  return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("source plan on the reference image") {
    const auto& src = camera_source();
    CHECK(src.stream.total_bits() == 32768);
    CHECK(src.profile.packet_count() == 17);
    CHECK(src.packet_group.size() == 17);
    for (std::size_t i = 1; i < src.packet_group.size(); ++i) CHECK(src.packet_group[i] >= src.packet_group[i - 1]);
    CHECK(src.clean_mse == doctest::Approx(src.profile.final_mse));
    CHECK(psnr(src.clean_mse) > 30.0);
    double sum = 0.0;
    for (double d : src.profile.delta_d) {
      CHECK(d >= -1e-9);
      sum += d;
    }
    CHECK(src.profile.d0 - sum == doctest::Approx(src.clean_mse).epsilon(1e-6));
  }

  TEST_CASE("eep plan and noiseless delivery") {
    const auto& src = camera_source();
    auto cfg = quick(0.0, Protection::Eep, 2);
    const auto plan = run_eep_baseline(src, cfg);
    for (const auto& l : plan.packet_level) {
      CHECK(l.row_parity == 8);
      CHECK(l.col_parity == 0);
    }
    CHECK(plan.total_symbols() == 17 * 450);
    const auto rep = run_transmit_chain(src, cfg);
    CHECK(rep.symbols.fec_symbols == 7650);
    for (const auto& t : rep.trials) {
      CHECK(t.mse == doctest::Approx(src.clean_mse));
      CHECK(t.delivered_packets == 17);
      CHECK(t.channel_bit_errors == 0);
    }
    CHECK(rep.psnr_of_mean_mse_db == doctest::Approx(psnr(src.clean_mse)));
  }

  TEST_CASE("noiseless channel needs no parity") {
    const auto& src = camera_source();
    const auto plan = plan_uep(src, quick(0.0, Protection::Uep));
    for (const auto& l : plan.packet_level) {
      CHECK(l.row_parity == 0);
      CHECK(l.col_parity == 0);
    }
    CHECK(plan.total_symbols() == 17 * 250);
  }

  TEST_CASE("uep plan respects the budget and layer structure") {
    const auto& src = camera_source();
    for (double p : {1e-3, 5e-3, 1e-2}) {
      const auto cfg = quick(p, Protection::Uep);
      const auto plan = plan_uep(src, cfg);
      CHECK(plan.total_symbols() <= 450 * 17);
      plan.layers.validate(17);
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < plan.packet_level.size(); ++i) {
        const auto& l = plan.packet_level[i];
        sum += packet_symbols(cfg, l.row_parity, l.col_parity);
      }
      CHECK(sum == plan.total_symbols());
      for (std::size_t j = 0; j < plan.layers.layers.size(); ++j) {
        const auto& layer = plan.layers.layers[j];
        for (std::size_t i = layer.first_packet; i < layer.first_packet + layer.packet_count; ++i)
          CHECK(src.packet_group[i] == plan.layer_group[j]);
      }
    }
  }

  TEST_CASE("symbol accounting ties out") {
    const auto& src = camera_source();
    for (auto papr : {PaprMethod::None, PaprMethod::Interleave}) {
      auto cfg = quick(1e-3, Protection::Uep, 1);
      cfg.papr = papr;
      const auto rep = run_transmit_chain(src, cfg);
      const auto& s = rep.symbols;
      CHECK(s.coded_bits == 32768);
      CHECK(s.coded_bits + s.packet_pad_bits == rep.packets * cfg.packet_bits);
      CHECK(s.source_symbols == static_cast<std::int64_t>(rep.packets * 250));
      CHECK(s.fec_symbols == s.source_symbols + s.parity_symbols);
      CHECK(s.fec_symbols == rep.plan.total_symbols());
      CHECK(s.transmitted_bits == static_cast<std::size_t>(8 * s.fec_symbols) + s.side_info_bits);
      const std::size_t bits_per_frame = 64 * 2;
      CHECK(rep.frames * bits_per_frame == static_cast<std::size_t>(8 * s.fec_symbols) + s.phy_pad_bits);
      CHECK(s.phy_pad_bits < bits_per_frame);
      const std::size_t id_bits = papr == PaprMethod::Interleave ? 4 : 0;
      CHECK(s.side_info_bits == 140 + rep.frames * id_bits);
    }
  }

  TEST_CASE("every PAPR method is transparent on a noiseless link") {
    const auto& src = camera_source();
    for (auto papr : {PaprMethod::None, PaprMethod::MuLaw, PaprMethod::ALaw, PaprMethod::Interleave}) {
      auto cfg = quick(0.0, Protection::Uep, 1);
      cfg.papr = papr;
      const auto rep = run_transmit_chain(src, cfg);
      CHECK(rep.trials[0].mse == doctest::Approx(src.clean_mse));
      CHECK(rep.trials[0].channel_bit_errors == 0);
    }
    for (int b : {2, 4, 6}) {
      auto cfg = quick(0.0, Protection::Uep, 1);
      cfg.channel = ChannelKind::Awgn;
      cfg.qam_bits = b;
      cfg.snr_db = std::numeric_limits<double>::infinity();
      const auto rep = run_transmit_chain(src, cfg);
      CHECK(rep.trials[0].mse == doctest::Approx(src.clean_mse));
      CHECK(rep.trials[0].delivered_packets == 17);
    }
  }

  TEST_CASE("runs are reproducible for a seed") {
    const auto& src = camera_source();
    auto cfg = quick(1e-2, Protection::Eep, 4);
    auto text = [&](const ExperimentConfig& c) {
      std::ostringstream out;
      write_report_csv(out, run_transmit_chain(src, c));
      return out.str();
    };
    const auto a = text(cfg);
    CHECK(a == text(cfg));
    cfg.threads = 3;
    CHECK(a == text(cfg));
    cfg.seed = 2;
    CHECK(a != text(cfg));
  }

  TEST_CASE("report statistics are consistent") {
    const auto& src = camera_source();
    const auto rep = run_transmit_chain(src, quick(1e-2, Protection::Eep, 5));
    double m = 0.0, p = 0.0;
    for (const auto& t : rep.trials) {
      CHECK(t.psnr_db == doctest::Approx(psnr(t.mse)));
      CHECK(t.mse == doctest::Approx(jscc::mse(t.received, src.image)));
      m += t.mse;
      p += t.psnr_db;
    }
    CHECK(rep.mean_mse == doctest::Approx(m / 5));
    CHECK(rep.mean_psnr_db == doctest::Approx(p / 5));
    CHECK(rep.psnr_of_mean_mse_db == doctest::Approx(psnr(rep.mean_mse)));
  }

  TEST_CASE("symbol error probability") {
    auto cfg = quick(1e-3, Protection::Uep);
    CHECK(symbol_error_probability(cfg) == doctest::Approx(1.0 - std::pow(1.0 - 1e-3, 8)));
    cfg.channel = ChannelKind::Awgn;
    cfg.qam_bits = 4;
    cfg.snr_db = 13.0;
    const double pe = channel::mqam_symbol_error(4, channel::db_to_linear(13.0));
    CHECK(symbol_error_probability(cfg) == doctest::Approx(1.0 - std::pow(1.0 - pe, 2.0)));
  }

  TEST_CASE("group plan") {
    const auto& src = camera_source();
    const auto r = protection_pattern(src, quick(1e-3, Protection::Uep));
    CHECK(!r.rows.empty());
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      CHECK(r.rows[i].group > r.rows[i - 1].group);
      CHECK(r.rows[i].parity_per_packet <= r.rows[i - 1].parity_per_packet);
    }
    std::ostringstream out;
    write_protection_csv(out, r);
    CHECK(out.str().find('\n') != std::string::npos);
  }

  TEST_CASE("configuration validation") {
    auto bad = [](auto mutate) {
      ExperimentConfig c;
      mutate(c);
      return c;
    };
    CHECK_NOTHROW(ExperimentConfig{}.validate());
    CHECK_THROWS(bad([](auto& c) { c.bpp = 0; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.packet_bits = 1999; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.ber = 1.5; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.qam_bits = 3; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.budget_per_packet = 100; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.row_parity_levels = {2, 4}; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.trials = 0; }).validate());
    CHECK_THROWS(bad([](auto& c) { c.subcarriers = 60; }).validate());
    CHECK(papr_from_string(to_string(PaprMethod::MuLaw)) == PaprMethod::MuLaw);
    CHECK(channel_from_string("awgn") == ChannelKind::Awgn);
    CHECK_THROWS(channel_from_string("pigeon"));
    CHECK_THROWS(protection_from_string("some"));
  }
}
