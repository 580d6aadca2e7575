#pragma once

#include "jscc/image.hpp"

namespace jscc {

/// Multi-level 2-D wavelet decomposition in Mallat layout: the coarsest
/// lowpass band sits in the top-left (width >> levels) x (height >> levels)
/// corner, detail bands of level L occupy the quadrants of the
/// (width >> (L-1)) x (height >> (L-1)) region.
struct WaveletPyramid {
  int width = 0;
  int height = 0;
  int levels = 0;
  std::vector<double> coeffs;

  WaveletPyramid() = default;
  WaveletPyramid(int w, int h, int lv);

  double at(int x, int y) const { return coeffs[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return coeffs[static_cast<std::size_t>(y) * width + x]; }

  int ll_width() const { return width >> levels; }
  int ll_height() const { return height >> levels; }
};

inline constexpr int kDefaultLevels = 5;

/// Throws std::invalid_argument unless both dimensions are positive multiples
/// of 2^levels and levels >= 1.
void check_dyadic(int width, int height, int levels);

/// CDF 9/7 analysis, symmetric whole-sample extension. The lowpass filter has
/// DC gain sqrt(2) and the highpass Nyquist gain sqrt(2), so the transform is
/// close to energy preserving.
WaveletPyramid forward_dwt97(const RealImage& img, int levels = kDefaultLevels);
WaveletPyramid forward_dwt97(const GrayImage& img, int levels = kDefaultLevels);

RealImage inverse_dwt97(const WaveletPyramid& pyr);

namespace dwt97 {

// One analysis / synthesis step on a strided 1-D signal of even length >= 2.
// `scratch` must hold `n` doubles.
void analyze(double* x, std::size_t n, std::ptrdiff_t stride, double* scratch);
void synthesize(double* x, std::size_t n, std::ptrdiff_t stride, double* scratch);

}  // namespace dwt97

}  // namespace jscc
