#include "jscc/wavelet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jscc {

namespace {

// Daubechies–Sweldens factorization of the CDF 9/7 pair.
constexpr double kAlpha = -1.586134342059924;
constexpr double kBeta = -0.052980118572961;
constexpr double kGamma = 0.882911075530934;
constexpr double kDelta = 0.443506852043971;
constexpr double kK = 1.230174104914001;  // lowpass DC gain of the unscaled lifting
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLowScale = kSqrt2 / kK;
constexpr double kHighScale = kK / kSqrt2;

// x[i] += c * (x[i-1] + x[i+1]) over indices i = first, first+2, ...
// with whole-sample symmetric extension at both ends.
void lift(double* x, std::size_t n, std::size_t first, double c) {
  const auto last = n - 1;
  for (std::size_t i = first; i < n; i += 2) {
    const double left = i == 0 ? x[1] : x[i - 1];
    const double right = i == last ? x[last - 1] : x[i + 1];
    x[i] += c * (left + right);
  }
}

}  // namespace

WaveletPyramid::WaveletPyramid(int w, int h, int lv)
    : width(w), height(h), levels(lv), coeffs(static_cast<std::size_t>(w) * h, 0.0) {
  check_dyadic(w, h, lv);
}

void check_dyadic(int width, int height, int levels) {
  if (levels < 1 || levels > 16) throw std::invalid_argument("wavelet: levels must be in [1, 16]");
  const int unit = 1 << levels;
  if (width <= 0 || height <= 0 || width % unit != 0 || height % unit != 0)
    throw std::invalid_argument("wavelet: " + std::to_string(width) + "x" + std::to_string(height) +
                                " is not divisible by 2^" + std::to_string(levels));
}

namespace dwt97 {

void analyze(double* x, std::size_t n, std::ptrdiff_t stride, double* scratch) {
  for (std::size_t i = 0; i < n; ++i) scratch[i] = x[static_cast<std::ptrdiff_t>(i) * stride];
  lift(scratch, n, 1, kAlpha);
  lift(scratch, n, 0, kBeta);
  lift(scratch, n, 1, kGamma);
  lift(scratch, n, 0, kDelta);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    x[static_cast<std::ptrdiff_t>(i) * stride] = scratch[2 * i] * kLowScale;
    x[static_cast<std::ptrdiff_t>(half + i) * stride] = scratch[2 * i + 1] * kHighScale;
  }
}

void synthesize(double* x, std::size_t n, std::ptrdiff_t stride, double* scratch) {
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    scratch[2 * i] = x[static_cast<std::ptrdiff_t>(i) * stride] / kLowScale;
    scratch[2 * i + 1] = x[static_cast<std::ptrdiff_t>(half + i) * stride] / kHighScale;
  }
  lift(scratch, n, 0, -kDelta);
  lift(scratch, n, 1, -kGamma);
  lift(scratch, n, 0, -kBeta);
  lift(scratch, n, 1, -kAlpha);
  for (std::size_t i = 0; i < n; ++i) x[static_cast<std::ptrdiff_t>(i) * stride] = scratch[i];
}

}  // namespace dwt97

WaveletPyramid forward_dwt97(const RealImage& img, int levels) {
  WaveletPyramid pyr(img.width, img.height, levels);
  pyr.coeffs = img.data;
  std::vector<double> scratch(static_cast<std::size_t>(std::max(img.width, img.height)));
  int w = img.width;
  int h = img.height;
  for (int lv = 0; lv < levels; ++lv) {
    for (int y = 0; y < h; ++y)
      dwt97::analyze(&pyr.at(0, y), static_cast<std::size_t>(w), 1, scratch.data());
    for (int x = 0; x < w; ++x)
      dwt97::analyze(&pyr.at(x, 0), static_cast<std::size_t>(h), pyr.width, scratch.data());
    w /= 2;
    h /= 2;
  }
  return pyr;
}

WaveletPyramid forward_dwt97(const GrayImage& img, int levels) {
  return forward_dwt97(RealImage::from_gray(img), levels);
}

RealImage inverse_dwt97(const WaveletPyramid& pyr) {
  check_dyadic(pyr.width, pyr.height, pyr.levels);
  if (pyr.coeffs.size() != static_cast<std::size_t>(pyr.width) * pyr.height)
    throw std::invalid_argument("inverse_dwt97: coefficient count does not match dimensions");
  WaveletPyramid work = pyr;
  std::vector<double> scratch(static_cast<std::size_t>(std::max(pyr.width, pyr.height)));
  for (int lv = pyr.levels - 1; lv >= 0; --lv) {
    const int w = pyr.width >> lv;
    const int h = pyr.height >> lv;
    for (int x = 0; x < w; ++x)
      dwt97::synthesize(&work.at(x, 0), static_cast<std::size_t>(h), work.width, scratch.data());
    for (int y = 0; y < h; ++y)
      dwt97::synthesize(&work.at(0, y), static_cast<std::size_t>(w), 1, scratch.data());
  }
  RealImage out(pyr.width, pyr.height);
  out.data = std::move(work.coeffs);
  return out;
}

}  // namespace jscc
