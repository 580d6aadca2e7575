#include "jscc/spiht.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace jscc::spiht {

std::string_view to_string(BitKind kind) {
  switch (kind) {
    case BitKind::Significance: return "significance";
    case BitKind::Sign: return "sign";
    case BitKind::Set: return "set";
    case BitKind::Refinement: return "refinement";
  }
  return "?";
}

namespace {

using Node = std::uint32_t;
constexpr Node kNoNode = 0xFFFFFFFFu;

// Spatial orientation trees over a Mallat pyramid. In the LL band the 2x2
// groups are split so that the top-left member has no offspring and the other
// three point into the matching detail band of the coarsest level.
class Trees {
 public:
  Trees(int width, int height, int levels)
      : w_(width), h_(height), llw_(width >> levels), llh_(height >> levels) {}

  int width() const { return w_; }
  int height() const { return h_; }
  std::size_t count() const { return static_cast<std::size_t>(w_) * h_; }
  Node node(int x, int y) const { return static_cast<Node>(y * w_ + x); }

  // Top-left node of the 2x2 offspring block, or kNoNode for leaves.
  Node offspring(Node n) const {
    const int x = static_cast<int>(n) % w_;
    const int y = static_cast<int>(n) / w_;
    if (x < llw_ && y < llh_) {
      const int dx = x & 1;
      const int dy = y & 1;
      if (dx == 0 && dy == 0) return kNoNode;
      return node((x & ~1) + dx * llw_, (y & ~1) + dy * llh_);
    }
    if (2 * x >= w_ || 2 * y >= h_) return kNoNode;
    return node(2 * x, 2 * y);
  }

  template <typename F>
  void for_each_child(Node first, F&& f) const {
    f(first);
    f(first + 1);
    f(first + static_cast<Node>(w_));
    f(first + static_cast<Node>(w_) + 1);
  }

  bool has_grandchildren(Node n) const {
    const Node o = offspring(n);
    return o != kNoNode && offspring(o) != kNoNode;
  }

  std::vector<Node> roots() const {
    std::vector<Node> out;
    for (int y = 0; y < llh_; ++y)
      for (int x = 0; x < llw_; ++x) out.push_back(node(x, y));
    return out;
  }

 private:
  int w_, h_, llw_, llh_;
};

enum class SetType : std::uint8_t { A, B };

struct LisEntry {
  Node node;
  SetType type;
};

void check_info(const StreamInfo& info) {
  check_dyadic(info.width, info.height, info.levels);
  if ((info.width >> info.levels) % 2 != 0 || (info.height >> info.levels) % 2 != 0)
    throw std::invalid_argument("spiht: lowpass band dimensions must be even");
  if (info.max_bitplane < 0 || info.max_bitplane > 30)
    throw std::invalid_argument("spiht: max bit-plane out of range");
}

class Encoder {
 public:
  Encoder(const WaveletPyramid& pyr, std::size_t budget)
      : trees_(pyr.width, pyr.height, pyr.levels), budget_(budget) {
    const std::size_t n = trees_.count();
    mag_.resize(n);
    neg_.resize(n);
    std::uint32_t peak = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long long q = std::llround(pyr.coeffs[i]);
      mag_[i] = static_cast<std::uint32_t>(q < 0 ? -q : q);
      neg_[i] = q < 0;
      peak = std::max(peak, mag_[i]);
    }
    // Descendant maxima, children always have larger indices than parents.
    max_d_.assign(n, 0);
    max_l_.assign(n, 0);
    for (std::size_t i = n; i-- > 0;) {
      const Node o = trees_.offspring(static_cast<Node>(i));
      if (o == kNoNode) continue;
      std::uint32_t d = 0, l = 0;
      trees_.for_each_child(o, [&](Node c) {
        d = std::max({d, mag_[c], max_d_[c]});
        l = std::max(l, max_d_[c]);
      });
      max_d_[i] = d;
      max_l_[i] = l;
    }
    out_.info = StreamInfo{pyr.width, pyr.height, pyr.levels, peak == 0 ? 0 : static_cast<int>(std::bit_width(peak)) - 1};
    out_.bits.reserve(budget);
    out_.tags.reserve(budget);
  }

  TaggedBitstream run() {
    std::vector<Node> lip = trees_.roots();
    std::vector<LisEntry> lis;
    for (Node r : lip)
      if (trees_.offspring(r) != kNoNode) lis.push_back({r, SetType::A});
    std::vector<Node> lsp;

    for (int plane = out_.info.max_bitplane; plane >= 0; --plane) {
      const std::uint32_t thr = 1u << plane;
      const std::size_t refine_count = lsp.size();

      std::size_t keep = 0;
      for (std::size_t i = 0; i < lip.size(); ++i) {
        const Node p = lip[i];
        const bool sig = mag_[p] >= thr;
        if (!emit(sig, BitKind::Significance)) return finish();
        if (sig) {
          if (!emit(neg_[p], BitKind::Sign)) return finish();
          lsp.push_back(p);
        } else {
          lip[keep++] = p;
        }
      }
      lip.resize(keep);

      std::vector<LisEntry> next_lis;
      for (std::size_t i = 0; i < lis.size(); ++i) {
        const LisEntry e = lis[i];
        const Node o = trees_.offspring(e.node);
        if (e.type == SetType::A) {
          const bool sig = max_d_[e.node] >= thr;
          if (!emit(sig, BitKind::Set)) return finish();
          if (!sig) {
            next_lis.push_back(e);
            continue;
          }
          bool ok = true;
          trees_.for_each_child(o, [&](Node c) {
            if (!ok) return;
            const bool csig = mag_[c] >= thr;
            if (!emit(csig, BitKind::Set)) { ok = false; return; }
            if (csig) {
              if (!emit(neg_[c], BitKind::Sign)) { ok = false; return; }
              lsp.push_back(c);
            } else {
              lip.push_back(c);
            }
          });
          if (!ok) return finish();
          if (trees_.has_grandchildren(e.node)) lis.push_back({e.node, SetType::B});
        } else {
          const bool sig = max_l_[e.node] >= thr;
          if (!emit(sig, BitKind::Set)) return finish();
          if (!sig) {
            next_lis.push_back(e);
            continue;
          }
          trees_.for_each_child(o, [&](Node c) { lis.push_back({c, SetType::A}); });
        }
      }
      lis = std::move(next_lis);

      for (std::size_t i = 0; i < refine_count; ++i) {
        const Node p = lsp[i];
        if (!emit((mag_[p] >> plane) & 1u, BitKind::Refinement)) return finish();
      }
    }
    return finish();
  }

 private:
  bool emit(bool bit, BitKind kind) {
    if (out_.bits.size() >= budget_) return false;
    out_.bits.push_back(bit ? 1 : 0);
    out_.tags.push_back(kind);
    return true;
  }

  TaggedBitstream finish() { return std::move(out_); }

  Trees trees_;
  std::size_t budget_;
  std::vector<std::uint32_t> mag_;
  std::vector<bool> neg_;
  std::vector<std::uint32_t> max_d_;
  std::vector<std::uint32_t> max_l_;
  TaggedBitstream out_;
};

// Per-coefficient decoder state: known magnitude bits down to `plane`.
struct Coefficient {
  std::uint32_t mag = 0;
  std::int16_t plane = -1;  // -1: not yet significant
  bool negative = false;
};

class Decoder {
 public:
  Decoder(const StreamInfo& info, BitSource& src)
      : info_(info), trees_(info.width, info.height, info.levels), src_(src), coef_(trees_.count()) {}

  WaveletPyramid run() {
    std::vector<Node> lip = trees_.roots();
    std::vector<LisEntry> lis;
    for (Node r : lip)
      if (trees_.offspring(r) != kNoNode) lis.push_back({r, SetType::A});
    std::vector<Node> lsp;

    for (int plane = info_.max_bitplane; plane >= 0; --plane) {
      if (!sorting_and_refinement(plane, lip, lis, lsp)) break;
    }
    return output();
  }

 private:
  bool sorting_and_refinement(int plane, std::vector<Node>& lip, std::vector<LisEntry>& lis,
                              std::vector<Node>& lsp) {
    const std::size_t refine_count = lsp.size();

    std::size_t keep = 0;
    for (std::size_t i = 0; i < lip.size(); ++i) {
      const Node p = lip[i];
      const auto sig = src_.next(BitKind::Significance);
      if (!sig) return false;
      if (*sig) {
        lsp.push_back(p);
        if (!became_significant(p, plane)) return false;
      } else {
        lip[keep++] = p;
      }
    }
    lip.resize(keep);

    std::vector<LisEntry> next_lis;
    for (std::size_t i = 0; i < lis.size(); ++i) {
      const LisEntry e = lis[i];
      const Node o = trees_.offspring(e.node);
      const auto sig = src_.next(BitKind::Set);
      if (!sig) return false;
      if (!*sig) {
        next_lis.push_back(e);
        continue;
      }
      if (e.type == SetType::A) {
        bool ok = true;
        trees_.for_each_child(o, [&](Node c) {
          if (!ok) return;
          const auto csig = src_.next(BitKind::Set);
          if (!csig) { ok = false; return; }
          if (*csig) {
            lsp.push_back(c);
            ok = became_significant(c, plane);
          } else {
            lip.push_back(c);
          }
        });
        if (!ok) return false;
        if (trees_.has_grandchildren(e.node)) lis.push_back({e.node, SetType::B});
      } else {
        trees_.for_each_child(o, [&](Node c) { lis.push_back({c, SetType::A}); });
      }
    }
    lis = std::move(next_lis);

    for (std::size_t i = 0; i < refine_count; ++i) {
      const auto bit = src_.next(BitKind::Refinement);
      if (!bit) return false;
      Coefficient& c = coef_[lsp[i]];
      if (*bit) c.mag |= 1u << plane;
      c.plane = static_cast<std::int16_t>(plane);
    }
    return true;
  }

  // Significance was decoded; the sign bit comes next. The coefficient is
  // committed only once its sign is known.
  bool became_significant(Node p, int plane) {
    const auto sign = src_.next(BitKind::Sign);
    if (!sign) return false;
    Coefficient& c = coef_[p];
    c.mag = 1u << plane;
    c.plane = static_cast<std::int16_t>(plane);
    c.negative = *sign != 0;
    return true;
  }

  WaveletPyramid output() const {
    WaveletPyramid pyr(info_.width, info_.height, info_.levels);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      const Coefficient& c = coef_[i];
      if (c.plane < 0) continue;
      const double half = c.plane > 0 ? static_cast<double>(1u << (c.plane - 1)) : 0.0;
      const double v = static_cast<double>(c.mag) + half;
      pyr.coeffs[i] = c.negative ? -v : v;
    }
    return pyr;
  }

  StreamInfo info_;
  Trees trees_;
  BitSource& src_;
  std::vector<Coefficient> coef_;
};

class SequentialSource final : public BitSource {
 public:
  explicit SequentialSource(std::span<const std::uint8_t> bits) : bits_(bits) {}
  std::optional<std::uint8_t> next(BitKind) override {
    if (pos_ >= bits_.size()) return std::nullopt;
    return bits_[pos_++];
  }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

class GroupedSource final : public BitSource {
 public:
  GroupedSource(const GroupedBitstream& g, const GroupPrefix& prefix) : g_(g), limit_(prefix) {}
  std::optional<std::uint8_t> next(BitKind kind) override {
    const auto k = static_cast<std::size_t>(kind);
    if (pos_[k] >= limit_[k]) return std::nullopt;
    return g_.groups[k][pos_[k]++];
  }

 private:
  const GroupedBitstream& g_;
  GroupPrefix limit_;
  GroupPrefix pos_{};
};

}  // namespace

std::array<std::size_t, kGroupCount> GroupedBitstream::lengths() const {
  std::array<std::size_t, kGroupCount> out{};
  for (std::size_t k = 0; k < kGroupCount; ++k) out[k] = groups[k].size();
  return out;
}

std::size_t GroupedBitstream::total_bits() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

std::vector<std::uint8_t> GroupedBitstream::concatenated() const {
  std::vector<std::uint8_t> out;
  out.reserve(total_bits());
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

TaggedBitstream encode(const WaveletPyramid& pyr, std::size_t budget) {
  if (budget < kHeaderBits)
    throw std::invalid_argument("spiht::encode: budget of " + std::to_string(budget) +
                                " bits is smaller than the " + std::to_string(kHeaderBits) +
                                "-bit header");
  if (pyr.coeffs.size() != static_cast<std::size_t>(pyr.width) * pyr.height)
    throw std::invalid_argument("spiht::encode: malformed pyramid");
  check_info(StreamInfo{pyr.width, pyr.height, pyr.levels, 0});
  for (double c : pyr.coeffs)
    if (!std::isfinite(c) || std::abs(c) >= 2147483647.0)
      throw std::invalid_argument("spiht::encode: coefficient out of range");
  return Encoder(pyr, budget).run();
}

WaveletPyramid decode(const StreamInfo& info, BitSource& source) {
  check_info(info);
  return Decoder(info, source).run();
}

WaveletPyramid decode(const StreamInfo& info, std::span<const std::uint8_t> bits) {
  SequentialSource src(bits);
  return decode(info, src);
}

WaveletPyramid decode(const TaggedBitstream& stream, std::size_t prefix_len) {
  if (prefix_len > stream.bits.size())
    throw std::invalid_argument("spiht::decode: prefix longer than stream");
  return decode(stream.info, std::span<const std::uint8_t>(stream.bits.data(), prefix_len));
}

GroupedBitstream regroup(const TaggedBitstream& stream) {
  if (stream.tags.size() != stream.bits.size())
    throw std::invalid_argument("spiht::regroup: tags and bits differ in length");
  GroupedBitstream g;
  g.info = stream.info;
  for (std::size_t i = 0; i < stream.bits.size(); ++i)
    g.groups[static_cast<std::size_t>(stream.tags[i])].push_back(stream.bits[i]);
  return g;
}

WaveletPyramid decode_grouped(const GroupedBitstream& g, const GroupPrefix& prefix) {
  GroupPrefix limit{};
  for (std::size_t k = 0; k < kGroupCount; ++k) limit[k] = std::min(prefix[k], g.groups[k].size());
  GroupedSource src(g, limit);
  return decode(g.info, src);
}

WaveletPyramid decode_grouped(const GroupedBitstream& g) { return decode_grouped(g, g.lengths()); }

namespace {

class BitWriter {
 public:
  void put(std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) bit((value >> i) & 1u);
  }
  void bit(unsigned b) {
    if (fill_ == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
    fill_ = (fill_ + 1) % 8;
  }
  void align() { fill_ = 0; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t get(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | bit();
    return v;
  }
  unsigned bit() {
    if (pos_ / 8 >= bytes_.size()) throw std::runtime_error("read_grouped: truncated stream");
    const unsigned b = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }
  void align() { pos_ = (pos_ + 7) / 8 * 8; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'S', 'P', 'G', '1'};

}  // namespace

void write_grouped(std::ostream& out, const GroupedBitstream& g) {
  check_info(g.info);
  if (g.info.width > 0xFFFF || g.info.height > 0xFFFF)
    throw std::invalid_argument("write_grouped: image too large for 16-bit dimensions");
  BitWriter w;
  for (char c : kMagic) w.put(static_cast<unsigned char>(c), 8);
  w.put(static_cast<std::uint64_t>(g.info.width), 16);
  w.put(static_cast<std::uint64_t>(g.info.height), 16);
  w.put(static_cast<std::uint64_t>(g.info.max_bitplane), 8);
  w.put(static_cast<std::uint64_t>(g.info.levels), 4);
  for (const auto& grp : g.groups) {
    if (grp.size() > 0xFFFFFFFFull) throw std::invalid_argument("write_grouped: group too long");
    w.put(grp.size(), 32);
  }
  w.align();
  for (const auto& grp : g.groups) {
    for (std::uint8_t b : grp) w.bit(b);
    w.align();
  }
  out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw std::runtime_error("write_grouped: write failed");
}

GroupedBitstream read_grouped(std::istream& in) {
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  BitReader r(bytes);
  for (char c : kMagic)
    if (r.get(8) != static_cast<unsigned char>(c)) throw std::runtime_error("read_grouped: bad magic");
  GroupedBitstream g;
  g.info.width = static_cast<int>(r.get(16));
  g.info.height = static_cast<int>(r.get(16));
  g.info.max_bitplane = static_cast<int>(r.get(8));
  g.info.levels = static_cast<int>(r.get(4));
  try {
    check_info(g.info);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("read_grouped: ") + e.what());
  }
  std::array<std::size_t, kGroupCount> len{};
  for (auto& l : len) l = r.get(32);
  r.align();
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    if (len[k] > bytes.size() * 8) throw std::runtime_error("read_grouped: group length exceeds file");
    g.groups[k].resize(len[k]);
    for (auto& b : g.groups[k]) b = static_cast<std::uint8_t>(r.bit());
    r.align();
  }
  return g;
}

void write_grouped(const std::filesystem::path& path, const GroupedBitstream& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_grouped: cannot open " + path.string());
  write_grouped(out, g);
}

GroupedBitstream read_grouped(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_grouped: cannot open " + path.string());
  return read_grouped(in);
}

std::size_t budget_for(int width, int height, double bpp) {
  if (!(bpp > 0.0)) throw std::invalid_argument("budget_for: bpp must be positive");
  return static_cast<std::size_t>(std::llround(bpp * width * height));
}

TaggedBitstream encode_image(const GrayImage& img, std::size_t budget, int levels) {
  return encode(forward_dwt97(RealImage::from_gray(img, -kLevelShift), levels), budget);
}

GrayImage reconstruct(const WaveletPyramid& pyr) { return inverse_dwt97(pyr).to_gray(kLevelShift); }

}  // namespace jscc::spiht
