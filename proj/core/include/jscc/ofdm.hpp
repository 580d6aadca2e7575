#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace jscc::ofdm {

using cplx = std::complex<double>;

enum class CompanderKind { None, MuLaw, ALaw };

struct Compander {
  CompanderKind kind = CompanderKind::None;
  double mu = 2.0;
  double a = 87.6;

  void validate() const;
};

std::string to_string(CompanderKind k);
CompanderKind compander_from_string(const std::string& s);

struct OfdmConfig {
  int n_subcarriers = 64;
  int bits_per_symbol = 2;
  double papr_threshold_db = 6.0;
  Compander compander;
  int interleaver_count = 1;
  std::uint64_t interleaver_seed = 0x5EEDF00DULL;

  void validate() const;
  /// ceil(log2 K) bits of interleaver id per frame.
  int side_info_bits() const;
};

struct OfdmFrame {
  std::vector<cplx> freq;  // subcarrier symbols after interleaving
  std::vector<cplx> time;  // transmitted samples (companded if enabled)
  double papr_db = 0.0;
  int interleaver_id = 0;
  double scale = 0.0;  // compander normalization V, carried as side info
};

/// x[t] = (1/N) sum_n S_n exp(j 2 pi n t / N).
std::vector<cplx> idft(std::span<const cplx> freq);
/// S_n = sum_t x[t] exp(-j 2 pi n t / N); exact inverse of idft.
std::vector<cplx> dft(std::span<const cplx> time);

/// 10 log10(max |x|^2 / mean |x|^2). Throws on an empty or all-zero frame.
double papr_db(std::span<const cplx> samples);

/// Largest real or imaginary magnitude, the normalization for per-component companding.
double component_peak(std::span<const cplx> samples);

/// Applied to the real and imaginary parts independently with normalization v.
std::vector<cplx> compand(std::span<const cplx> samples, const Compander& c, double v);
std::vector<cplx> expand(std::span<const cplx> samples, const Compander& c, double v);
double compand_value(double x, const Compander& c, double v);
double expand_value(double y, const Compander& c, double v);

/// Permutation 0 is the identity; permutation k > 0 is a Fisher-Yates shuffle
/// driven by mt19937_64 seeded with seed + k.
class InterleaverBank {
 public:
  InterleaverBank(int n, int count, std::uint64_t seed);
  explicit InterleaverBank(const OfdmConfig& cfg);

  int size() const { return static_cast<int>(perms_.size()); }
  int length() const { return n_; }
  const std::vector<int>& permutation(int id) const;

  /// out[i] = in[perm[i]].
  std::vector<cplx> interleave(std::span<const cplx> in, int id) const;
  std::vector<cplx> deinterleave(std::span<const cplx> in, int id) const;

 private:
  int n_;
  std::vector<std::vector<int>> perms_;
};

/// Modulates one frame with the given interleaver and the configured compander.
OfdmFrame modulate(std::span<const cplx> symbols, const OfdmConfig& cfg, const InterleaverBank& bank, int id = 0);
inline OfdmFrame modulate(std::span<const cplx> symbols, const OfdmConfig& cfg) {
  return modulate(symbols, cfg, InterleaverBank(static_cast<int>(symbols.size()), 1, 0), 0);
}

/// Returns the identity frame if its PAPR does not exceed the threshold,
/// otherwise the lowest-PAPR frame over the bank (ties to the lower id).
OfdmFrame select_interleaver(std::span<const cplx> symbols, const OfdmConfig& cfg, const InterleaverBank& bank);

/// Receiver: expand, DFT, de-interleave. Throws on an invalid id.
std::vector<cplx> demodulate(std::span<const cplx> time, const OfdmConfig& cfg, const InterleaverBank& bank,
                             int interleaver_id, double scale);

/// XORs the bits with the x^7 + x^4 + 1 whitening sequence started from `state`
/// (the 802.11 data scrambler). Applying it twice restores the input.
void scramble(std::span<std::uint8_t> bits, std::uint8_t state = 0x7F);

/// Fraction of samples strictly above each threshold.
std::vector<double> ccdf(std::span<const double> papr, std::span<const double> thresholds_db);

/// PAPR of `frames` random uniformly distributed constellation frames.
std::vector<double> random_frame_papr(const OfdmConfig& cfg, std::size_t frames, std::uint64_t seed);

void write_ccdf_csv(std::ostream& out, std::span<const double> thresholds_db, std::span<const double> probability,
                    const std::string& label, bool header = true);

}  // namespace jscc::ofdm
