#pragma once

#include <limits>
#include <span>

#include "vidmark/clip.hpp"
#include "vidmark/spread_spectrum.hpp"

namespace vidmark {

inline constexpr double kInfiniteDb = std::numeric_limits<double>::infinity();

struct QualityReport {
  double psnr_db = kInfiniteDb;
  double mssim = 1.0;
  double tpsnr_db = kInfiniteDb;
};

// 10 log10(1 / MSE) over every RGB sample; +inf for identical clips.
double psnr(const VideoClip& a, const VideoClip& b);

// Mean SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, L = 1, valid windows only, averaged over windows then frames.
double mssim(const VideoClip& a, const VideoClip& b);

// PSNR between the consecutive-frame differences of the two clips. A
// temporal-consistency proxy; not comparable to learned metrics.
double tpsnr(const VideoClip& a, const VideoClip& b);

QualityReport quality(const VideoClip& reference, const VideoClip& test);

double bit_accuracy(const Message& sent, const Message& decoded);

namespace kernels {
struct SsimWindow {
  int size = 11;
  double sigma = 1.5;
};
// Mean SSIM of one plane pair (row-major h x w).
double ssim_plane(std::span<const double> a, std::span<const double> b, int height, int width,
                  const SsimWindow& window = {});
// Frames in parallel; returns the mean over frames.
double ssim_volume(const Volume& a, const Volume& b, const SsimWindow& window = {});
}  // namespace kernels

}  // namespace vidmark
