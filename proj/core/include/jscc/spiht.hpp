#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jscc/image.hpp"
#include "jscc/wavelet.hpp"

namespace jscc::spiht {

/// The four SPIHT bit types, in decreasing error-sensitivity order. The
/// numeric value is the group index of the regrouped stream.
enum class BitKind : std::uint8_t {
  Significance = 0,  // LIP pixel tests
  Sign = 1,
  Set = 2,           // LIS set tests, including the offspring tests of a significant type-A set
  Refinement = 3,
};

inline constexpr std::size_t kGroupCount = 4;
std::string_view to_string(BitKind kind);

/// Side information carried outside the four groups: max bit-plane (8 bits),
/// decomposition levels (4 bits) and four group lengths (32 bits each).
inline constexpr std::size_t kHeaderBits = 8 + 4 + 4 * 32;

/// Geometry and top bit-plane shared by encoder and decoder.
struct StreamInfo {
  int width = 0;
  int height = 0;
  int levels = 0;
  int max_bitplane = 0;

  friend bool operator==(const StreamInfo&, const StreamInfo&) = default;
};

/// SPIHT output in emission order, every bit labelled with its type.
struct TaggedBitstream {
  StreamInfo info;
  std::vector<std::uint8_t> bits;  // one bit per element, 0 or 1
  std::vector<BitKind> tags;

  std::size_t size() const { return bits.size(); }
};

/// Stream split into groups ordered significance, sign, set, refinement.
struct GroupedBitstream {
  StreamInfo info;
  std::array<std::vector<std::uint8_t>, kGroupCount> groups;

  std::array<std::size_t, kGroupCount> lengths() const;
  std::size_t total_bits() const;
  /// Groups concatenated in transmission order.
  std::vector<std::uint8_t> concatenated() const;

  friend bool operator==(const GroupedBitstream&, const GroupedBitstream&) = default;
};

using GroupPrefix = std::array<std::size_t, kGroupCount>;

/// Encodes integer-rounded coefficients of `pyr`, stopping after exactly
/// `budget` coded bits or after bit-plane 0, whichever comes first.
/// Throws std::invalid_argument if budget < kHeaderBits.
TaggedBitstream encode(const WaveletPyramid& pyr, std::size_t budget);

/// Bit provider for the decoder. Returns nullopt once the provider cannot
/// supply a bit of the requested kind; decoding stops there.
class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual std::optional<std::uint8_t> next(BitKind kind) = 0;
};

/// Runs the SPIHT decoder against an arbitrary source. Total: any bit
/// sequence yields a valid pyramid.
WaveletPyramid decode(const StreamInfo& info, BitSource& source);

/// Decodes the first `prefix_len` bits of the ungrouped stream.
WaveletPyramid decode(const TaggedBitstream& stream, std::size_t prefix_len);
WaveletPyramid decode(const StreamInfo& info, std::span<const std::uint8_t> bits);

GroupedBitstream regroup(const TaggedBitstream& stream);

/// Replays the decoder pulling each bit from its type's group; stops at the
/// first request that hits an exhausted group prefix.
WaveletPyramid decode_grouped(const GroupedBitstream& g, const GroupPrefix& prefix);
WaveletPyramid decode_grouped(const GroupedBitstream& g);

/// Grouped stream file: "SPG1", width and height (u16 big-endian), the
/// 140-bit side-info header padded to 18 bytes, then each group padded to
/// whole bytes. Bits are packed MSB first.
void write_grouped(std::ostream& out, const GroupedBitstream& g);
GroupedBitstream read_grouped(std::istream& in);
void write_grouped(const std::filesystem::path& path, const GroupedBitstream& g);
GroupedBitstream read_grouped(const std::filesystem::path& path);

// Image-level helpers. Samples are level-shifted by -128 before the transform.
inline constexpr double kLevelShift = 128.0;

std::size_t budget_for(int width, int height, double bpp);
TaggedBitstream encode_image(const GrayImage& img, std::size_t budget, int levels = kDefaultLevels);
GrayImage reconstruct(const WaveletPyramid& pyr);

}  // namespace jscc::spiht
