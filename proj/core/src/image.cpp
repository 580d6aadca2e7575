#include "jscc/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace jscc {

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw std::invalid_argument("GrayImage: negative dimensions");
}

GrayImage::GrayImage(int w, int h, std::vector<std::uint8_t> data)
    : width(w), height(h), samples(std::move(data)) {
  if (w < 0 || h < 0 || samples.size() != static_cast<std::size_t>(w) * h)
    throw std::invalid_argument("GrayImage: sample count does not match dimensions");
}

RealImage::RealImage(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
  if (w < 0 || h < 0) throw std::invalid_argument("RealImage: negative dimensions");
}

RealImage RealImage::from_gray(const GrayImage& img, double offset) {
  RealImage out(img.width, img.height);
  std::transform(img.samples.begin(), img.samples.end(), out.data.begin(),
                 [offset](std::uint8_t v) { return static_cast<double>(v) + offset; });
  return out;
}

GrayImage RealImage::to_gray(double offset) const {
  GrayImage out(width, height);
  std::transform(data.begin(), data.end(), out.samples.begin(), [offset](double v) {
    const double r = std::nearbyint(v + offset);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
  });
  return out;
}

double mse(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("mse: image dimensions differ");
  if (a.samples.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.samples.size());
}

double psnr(double mse_value) {
  if (std::isnan(mse_value) || mse_value < 0.0) throw std::invalid_argument("psnr: negative mse");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeakValue * kPeakValue / mse_value);
}

namespace {

// Next whitespace-delimited token of a PNM header, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_positive(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error(std::string("read_pgm: bad ") + what + " '" + tok + "'");
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
  if (next_token(in) != "P5") throw std::runtime_error("read_pgm: not a binary PGM (P5): " + path.string());
  const int w = parse_positive(next_token(in), "width");
  const int h = parse_positive(next_token(in), "height");
  const int maxval = parse_positive(next_token(in), "maxval");
  if (maxval != 255) throw std::runtime_error("read_pgm: only maxval 255 is supported");
  // next_token consumed exactly one whitespace byte after maxval.
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size()))
    throw std::runtime_error("read_pgm: truncated pixel data in " + path.string());
  return GrayImage(w, h, std::move(data));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

}  // namespace jscc
