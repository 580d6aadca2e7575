#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace jscc::rs {

/// Systematic (n, k) Reed–Solomon code over GF(2^8). Codes with n < 255 are
/// shortened codes. Generator roots are alpha^1 .. alpha^(n-k).
struct RsSpec {
  int n = 0;
  int k = 0;

  int parity() const { return n - k; }
  /// Correctable symbol errors when no erasures are flagged.
  int error_capacity() const { return (n - k) / 2; }
  /// Throws std::invalid_argument unless 1 <= k <= n <= 255.
  void validate() const;

  friend bool operator==(const RsSpec&, const RsSpec&) = default;
};

/// Returns the n-symbol codeword: data followed by n-k parity symbols.
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data, const RsSpec& spec);

struct DecodeResult {
  bool ok = false;
  /// Corrected codeword on success, otherwise the received word unchanged.
  std::vector<std::uint8_t> codeword;
  int corrected = 0;  // symbols changed, erasures included

  std::span<const std::uint8_t> data(const RsSpec& spec) const {
    return std::span<const std::uint8_t>(codeword).first(static_cast<std::size_t>(spec.k));
  }
};

/// Errors-and-erasures decoding. Succeeds whenever 2e + f <= n - k; beyond
/// that it reports failure or may miscorrect to another codeword.
DecodeResult decode(std::span<const std::uint8_t> received, std::span<const int> erasures,
                    const RsSpec& spec);

inline DecodeResult decode(std::span<const std::uint8_t> received, const RsSpec& spec) {
  return decode(received, {}, spec);
}

/// Two-dimensional product code. Data occupies the top-left k1 x k2 block of
/// an n1 x n2 array; column code C1 = RsSpec(n1, k1) appends parity rows and
/// row code C2 = RsSpec(n2, k2) appends parity columns (including the
/// parity-on-parity corner).
struct PacketGrid {
  RsSpec row_spec;                // (n2, k2)
  RsSpec col_spec;                // (n1, k1)
  std::vector<std::uint8_t> symbols;  // n1 x n2, row-major

  int rows() const { return col_spec.n; }
  int cols() const { return row_spec.n; }
  std::uint8_t at(int r, int c) const { return symbols[static_cast<std::size_t>(r) * cols() + c]; }

  /// Sub-block extractors, all row-major.
  std::vector<std::uint8_t> data() const;           // k1 x k2
  std::vector<std::uint8_t> row_parity() const;     // k1 x (n2 - k2)
  std::vector<std::uint8_t> col_parity() const;     // (n1 - k1) x k2
  std::vector<std::uint8_t> corner_parity() const;  // (n1 - k1) x (n2 - k2)
};

/// Columns are encoded first with C1, then every one of the n1 rows with C2.
PacketGrid product_encode(std::span<const std::uint8_t> data, const RsSpec& row_spec,
                          const RsSpec& col_spec);

struct ProductDecodeResult {
  std::vector<std::uint8_t> data;  // k1 x k2, best effort where columns failed
  std::vector<bool> row_ok;        // n1 flags from the row pass
  std::vector<bool> col_ok;        // k2 flags from the column pass

  bool recovered() const;
};

/// One row pass, then one column pass over the k2 data columns with rows that
/// failed flagged as erasures.
ProductDecodeResult product_decode(std::span<const std::uint8_t> received, const RsSpec& row_spec,
                                   const RsSpec& col_spec);

}  // namespace jscc::rs
