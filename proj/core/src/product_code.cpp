#include "jscc/rs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace jscc::rs {

namespace {

std::vector<std::uint8_t> block(const PacketGrid& g, int r0, int r1, int c0, int c1) {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>((r1 - r0) * (c1 - c0)));
  for (int r = r0; r < r1; ++r)
    for (int c = c0; c < c1; ++c) out.push_back(g.at(r, c));
  return out;
}

}  // namespace

std::vector<std::uint8_t> PacketGrid::data() const { return block(*this, 0, col_spec.k, 0, row_spec.k); }
std::vector<std::uint8_t> PacketGrid::row_parity() const { return block(*this, 0, col_spec.k, row_spec.k, cols()); }
std::vector<std::uint8_t> PacketGrid::col_parity() const { return block(*this, col_spec.k, rows(), 0, row_spec.k); }
std::vector<std::uint8_t> PacketGrid::corner_parity() const {
  return block(*this, col_spec.k, rows(), row_spec.k, cols());
}

bool ProductDecodeResult::recovered() const {
  return std::all_of(col_ok.begin(), col_ok.end(), [](bool b) { return b; });
}

PacketGrid product_encode(std::span<const std::uint8_t> data, const RsSpec& row_spec, const RsSpec& col_spec) {
  row_spec.validate();
  col_spec.validate();
  const int k1 = col_spec.k, k2 = row_spec.k, n1 = col_spec.n, n2 = row_spec.n;
  if (data.size() != static_cast<std::size_t>(k1) * k2)
    throw std::invalid_argument("product_encode: expected " + std::to_string(k1) + "x" + std::to_string(k2) +
                                " data symbols, got " + std::to_string(data.size()));
  PacketGrid g{row_spec, col_spec, std::vector<std::uint8_t>(static_cast<std::size_t>(n1) * n2, 0)};
  std::vector<std::uint8_t> column(static_cast<std::size_t>(k1));
  for (int c = 0; c < k2; ++c) {
    for (int r = 0; r < k1; ++r) column[static_cast<std::size_t>(r)] = data[static_cast<std::size_t>(r) * k2 + c];
    const auto code = encode(column, col_spec);
    for (int r = 0; r < n1; ++r) g.symbols[static_cast<std::size_t>(r) * n2 + c] = code[static_cast<std::size_t>(r)];
  }
  for (int r = 0; r < n1; ++r) {
    const auto row = std::span<const std::uint8_t>(g.symbols).subspan(static_cast<std::size_t>(r) * n2,
                                                                      static_cast<std::size_t>(k2));
    const auto code = encode(row, row_spec);
    std::copy(code.begin(), code.end(), g.symbols.begin() + static_cast<std::ptrdiff_t>(r) * n2);
  }
  return g;
}

ProductDecodeResult product_decode(std::span<const std::uint8_t> received, const RsSpec& row_spec,
                                   const RsSpec& col_spec) {
  row_spec.validate();
  col_spec.validate();
  const int k1 = col_spec.k, k2 = row_spec.k, n1 = col_spec.n, n2 = row_spec.n;
  if (received.size() != static_cast<std::size_t>(n1) * n2)
    throw std::invalid_argument("product_decode: expected " + std::to_string(n1) + "x" + std::to_string(n2) +
                                " symbols, got " + std::to_string(received.size()));

  ProductDecodeResult res;
  res.row_ok.assign(static_cast<std::size_t>(n1), false);
  res.col_ok.assign(static_cast<std::size_t>(k2), false);

  // Row pass: keep the k2 information columns of every row.
  std::vector<std::uint8_t> work(static_cast<std::size_t>(n1) * k2);
  std::vector<int> failed_rows;
  for (int r = 0; r < n1; ++r) {
    const auto row = received.subspan(static_cast<std::size_t>(r) * n2, static_cast<std::size_t>(n2));
    const DecodeResult d = decode(row, row_spec);
    res.row_ok[static_cast<std::size_t>(r)] = d.ok;
    if (!d.ok) failed_rows.push_back(r);
    const auto info = d.data(row_spec);
    std::copy(info.begin(), info.end(), work.begin() + static_cast<std::ptrdiff_t>(r) * k2);
  }

  // Column pass with failed rows as erasures.
  res.data.assign(static_cast<std::size_t>(k1) * k2, 0);
  std::vector<std::uint8_t> column(static_cast<std::size_t>(n1));
  for (int c = 0; c < k2; ++c) {
    for (int r = 0; r < n1; ++r) column[static_cast<std::size_t>(r)] = work[static_cast<std::size_t>(r) * k2 + c];
    const DecodeResult d = decode(column, failed_rows, col_spec);
    res.col_ok[static_cast<std::size_t>(c)] = d.ok;
    for (int r = 0; r < k1; ++r)
      res.data[static_cast<std::size_t>(r) * k2 + c] = d.codeword[static_cast<std::size_t>(r)];
  }
  return res;
}

}  // namespace jscc::rs
