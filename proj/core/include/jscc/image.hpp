#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace jscc {

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);
  GrayImage(int w, int h, std::vector<std::uint8_t> data);

  std::size_t size() const { return samples.size(); }
  std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Real-valued plane with the same row-major layout as GrayImage.
struct RealImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(int w, int h, double fill = 0.0);

  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

  static RealImage from_gray(const GrayImage& img, double offset = 0.0);
  /// Adds `offset`, rounds to nearest and clips into [0, 255].
  GrayImage to_gray(double offset = 0.0) const;
};

/// Peak intensity for 8-bit images.
inline constexpr double kPeakValue = 255.0;

double mse(const GrayImage& a, const GrayImage& b);

/// 10*log10(255^2 / mse). Returns +infinity for mse == 0.
double psnr(double mse);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace jscc
