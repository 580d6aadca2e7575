#include "jscc/ofdm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>

#include "jscc/channel.hpp"

namespace jscc::ofdm {

namespace {

// Planning is not thread-safe in FFTW; plans are created once per size and
// then run through the new-array execute calls, which are.
struct Plans {
  fftw_plan forward;
  fftw_plan backward;
};

const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  Plans p{fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED),
          fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED)};
  return cache.emplace(n, p).first->second;
}

std::vector<cplx> run(std::span<const cplx> in, bool forward) {
  if (in.empty()) throw std::invalid_argument("dft: empty input");
  const int n = static_cast<int>(in.size());
  const Plans& p = plans_for(n);
  std::vector<cplx> src(in.begin(), in.end()), out(in.size());
  fftw_execute_dft(forward ? p.forward : p.backward, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void Compander::validate() const {
  if (kind == CompanderKind::MuLaw && !(mu > 0.0)) throw std::invalid_argument("compander: mu must be > 0");
  if (kind == CompanderKind::ALaw && !(a >= 1.0)) throw std::invalid_argument("compander: A must be >= 1");
}

std::string to_string(CompanderKind k) {
  switch (k) {
    case CompanderKind::None: return "none";
    case CompanderKind::MuLaw: return "mu-law";
    case CompanderKind::ALaw: return "a-law";
  }
  return "?";
}

CompanderKind compander_from_string(const std::string& s) {
  if (s == "none") return CompanderKind::None;
  if (s == "mu-law" || s == "mulaw" || s == "mu") return CompanderKind::MuLaw;
  if (s == "a-law" || s == "alaw" || s == "a") return CompanderKind::ALaw;
  throw std::invalid_argument("unknown compander '" + s + "'");
}

void OfdmConfig::validate() const {
  if (!power_of_two(n_subcarriers)) throw std::invalid_argument("ofdm: subcarrier count must be a power of two");
  if (bits_per_symbol < 2 || bits_per_symbol % 2 != 0)
    throw std::invalid_argument("ofdm: bits per symbol must be even and >= 2");
  if (interleaver_count < 1) throw std::invalid_argument("ofdm: interleaver count must be >= 1");
  if (std::isnan(papr_threshold_db)) throw std::invalid_argument("ofdm: PAPR threshold is NaN");
  compander.validate();
}

int OfdmConfig::side_info_bits() const {
  int bits = 0;
  while ((1 << bits) < interleaver_count) ++bits;
  return bits;
}

std::vector<cplx> idft(std::span<const cplx> freq) {
  std::vector<cplx> x = run(freq, false);
  const double inv = 1.0 / static_cast<double>(freq.size());
  for (auto& v : x) v *= inv;
  return x;
}

std::vector<cplx> dft(std::span<const cplx> time) { return run(time, true); }

double papr_db(std::span<const cplx> samples) {
  if (samples.empty()) throw std::invalid_argument("papr: empty frame");
  double peak = 0.0, sum = 0.0;
  for (const cplx& s : samples) {
    const double p = std::norm(s);
    peak = std::max(peak, p);
    sum += p;
  }
  if (sum == 0.0) throw std::invalid_argument("papr: all-zero frame");
  return 10.0 * std::log10(peak * static_cast<double>(samples.size()) / sum);
}

double component_peak(std::span<const cplx> samples) {
  double v = 0.0;
  for (const cplx& s : samples) v = std::max({v, std::abs(s.real()), std::abs(s.imag())});
  return v;
}

double compand_value(double x, const Compander& c, double v) {
  if (c.kind == CompanderKind::None || x == 0.0 || v <= 0.0) return x;
  const double r = std::abs(x) / v;
  double y = 0.0;
  if (c.kind == CompanderKind::MuLaw) {
    y = std::log1p(c.mu * r) / std::log1p(c.mu);
  } else {
    const double d = 1.0 + std::log(c.a);
    y = r < 1.0 / c.a ? c.a * r / d : (1.0 + std::log(c.a * r)) / d;
  }
  return std::copysign(v * y, x);
}

double expand_value(double y, const Compander& c, double v) {
  if (c.kind == CompanderKind::None || y == 0.0 || v <= 0.0) return y;
  const double r = std::abs(y) / v;
  double x = 0.0;
  if (c.kind == CompanderKind::MuLaw) {
    x = std::expm1(r * std::log1p(c.mu)) / c.mu;
  } else {
    const double d = 1.0 + std::log(c.a);
    x = r < 1.0 / d ? r * d / c.a : std::exp(r * d - 1.0) / c.a;
  }
  return std::copysign(v * x, y);
}

std::vector<cplx> compand(std::span<const cplx> samples, const Compander& c, double v) {
  std::vector<cplx> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = {compand_value(samples[i].real(), c, v), compand_value(samples[i].imag(), c, v)};
  return out;
}

std::vector<cplx> expand(std::span<const cplx> samples, const Compander& c, double v) {
  std::vector<cplx> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = {expand_value(samples[i].real(), c, v), expand_value(samples[i].imag(), c, v)};
  return out;
}

InterleaverBank::InterleaverBank(int n, int count, std::uint64_t seed) : n_(n) {
  if (n < 1 || count < 1) throw std::invalid_argument("InterleaverBank: need n >= 1 and count >= 1");
  perms_.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    auto& p = perms_[static_cast<std::size_t>(k)];
    p.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    if (k == 0) continue;
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(p[static_cast<std::size_t>(i)], p[j]);
    }
  }
}

InterleaverBank::InterleaverBank(const OfdmConfig& cfg)
    : InterleaverBank(cfg.n_subcarriers, cfg.interleaver_count, cfg.interleaver_seed) {}

const std::vector<int>& InterleaverBank::permutation(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("interleaver id " + std::to_string(id) + " out of range");
  return perms_[static_cast<std::size_t>(id)];
}

std::vector<cplx> InterleaverBank::interleave(std::span<const cplx> in, int id) const {
  const auto& p = permutation(id);
  if (in.size() != p.size()) throw std::invalid_argument("interleave: length mismatch");
  std::vector<cplx> out(in.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = in[static_cast<std::size_t>(p[i])];
  return out;
}

std::vector<cplx> InterleaverBank::deinterleave(std::span<const cplx> in, int id) const {
  const auto& p = permutation(id);
  if (in.size() != p.size()) throw std::invalid_argument("deinterleave: length mismatch");
  std::vector<cplx> out(in.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = in[i];
  return out;
}

OfdmFrame modulate(std::span<const cplx> symbols, const OfdmConfig& cfg, const InterleaverBank& bank, int id) {
  if (symbols.size() != static_cast<std::size_t>(cfg.n_subcarriers))
    throw std::invalid_argument("modulate: expected " + std::to_string(cfg.n_subcarriers) + " symbols, got " +
                                std::to_string(symbols.size()));
  OfdmFrame f;
  f.interleaver_id = id;
  f.freq = bank.interleave(symbols, id);
  f.time = idft(f.freq);
  if (cfg.compander.kind != CompanderKind::None) {
    f.scale = component_peak(f.time);
    f.time = compand(f.time, cfg.compander, f.scale);
  }
  f.papr_db = papr_db(f.time);
  return f;
}

OfdmFrame select_interleaver(std::span<const cplx> symbols, const OfdmConfig& cfg, const InterleaverBank& bank) {
  OfdmFrame best = modulate(symbols, cfg, bank, 0);
  if (best.papr_db <= cfg.papr_threshold_db) return best;
  for (int k = 1; k < bank.size(); ++k) {
    OfdmFrame f = modulate(symbols, cfg, bank, k);
    if (f.papr_db < best.papr_db) best = std::move(f);
  }
  return best;
}

std::vector<cplx> demodulate(std::span<const cplx> time, const OfdmConfig& cfg, const InterleaverBank& bank,
                             int interleaver_id, double scale) {
  if (time.size() != static_cast<std::size_t>(cfg.n_subcarriers))
    throw std::invalid_argument("demodulate: wrong frame length");
  if (interleaver_id < 0 || interleaver_id >= bank.size())
    throw std::invalid_argument("demodulate: invalid interleaver id " + std::to_string(interleaver_id));
  std::vector<cplx> x(time.begin(), time.end());
  if (cfg.compander.kind != CompanderKind::None) x = expand(x, cfg.compander, scale);
  return bank.deinterleave(dft(x), interleaver_id);
}

void scramble(std::span<std::uint8_t> bits, std::uint8_t state) {
  unsigned reg = state & 0x7Fu;
  if (reg == 0) throw std::invalid_argument("scramble: state must be nonzero");
  for (auto& b : bits) {
    const unsigned fb = ((reg >> 6) ^ (reg >> 3)) & 1u;
    reg = ((reg << 1) | fb) & 0x7Fu;
    b = static_cast<std::uint8_t>((b ^ fb) & 1u);
  }
}

std::vector<double> ccdf(std::span<const double> papr, std::span<const double> thresholds_db) {
  if (papr.empty()) throw std::invalid_argument("ccdf: no samples");
  std::vector<double> sorted(papr.begin(), papr.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(thresholds_db.size());
  for (double t : thresholds_db) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.push_back(static_cast<double>(above) / static_cast<double>(sorted.size()));
  }
  return out;
}

std::vector<double> random_frame_papr(const OfdmConfig& cfg, std::size_t frames, std::uint64_t seed) {
  cfg.validate();
  const channel::QamConstellation qam(cfg.bits_per_symbol);
  const InterleaverBank bank(cfg);
  std::mt19937_64 rng(seed);
  std::vector<cplx> symbols(static_cast<std::size_t>(cfg.n_subcarriers));
  std::vector<double> out;
  out.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    for (auto& s : symbols) s = qam.point(static_cast<unsigned>(rng() % qam.size()));
    out.push_back(select_interleaver(symbols, cfg, bank).papr_db);
  }
  return out;
}

void write_ccdf_csv(std::ostream& out, std::span<const double> thresholds_db, std::span<const double> probability,
                    const std::string& label, bool header) {
  if (thresholds_db.size() != probability.size()) throw std::invalid_argument("write_ccdf_csv: length mismatch");
  if (header) out << "threshold_db,probability,method_label\n";
  for (std::size_t i = 0; i < thresholds_db.size(); ++i)
    out << thresholds_db[i] << ',' << probability[i] << ',' << label << '\n';
}

}  // namespace jscc::ofdm
