#include "vidmark/metrics.hpp"

#include <cmath>

#include "vidmark/error.hpp"

namespace vidmark {

namespace {

void require_same_shape(const VideoClip& a, const VideoClip& b) {
  if (a.shape() != b.shape()) {
    throw Error(Errc::DimensionMismatch, to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
}

double mse_to_db(double mse) { return mse > 0.0 ? 10.0 * std::log10(1.0 / mse) : kInfiniteDb; }

}  // namespace

double psnr(const VideoClip& a, const VideoClip& b) {
  require_same_shape(a, b);
  const VideoClip ra = convert_colorspace(a, ColorSpace::RGB);
  const VideoClip rb = convert_colorspace(b, ColorSpace::RGB);
  const auto sa = ra.samples();
  const auto sb = rb.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  return mse_to_db(sum / static_cast<double>(sa.size()));
}

double mssim(const VideoClip& a, const VideoClip& b) {
  require_same_shape(a, b);
  const kernels::SsimWindow window;
  if (a.height() < window.size || a.width() < window.size) {
    throw Error(Errc::FrameTooSmall, "MSSIM needs frames of at least 11x11");
  }
  return kernels::ssim_volume(luma(a), luma(b), window);
}

double tpsnr(const VideoClip& a, const VideoClip& b) {
  require_same_shape(a, b);
  if (a.frames() < 2) return kInfiniteDb;
  const VideoClip ra = convert_colorspace(a, ColorSpace::RGB);
  const VideoClip rb = convert_colorspace(b, ColorSpace::RGB);
  double sum = 0.0;
  std::size_t count = 0;
  for (int t = 0; t + 1 < a.frames(); ++t) {
    const auto a0 = ra.frame(t), a1 = ra.frame(t + 1);
    const auto b0 = rb.frame(t), b1 = rb.frame(t + 1);
    for (std::size_t i = 0; i < a0.size(); ++i) {
      const double d = (a1[i] - a0[i]) - (b1[i] - b0[i]);
      sum += d * d;
    }
    count += a0.size();
  }
  return mse_to_db(sum / static_cast<double>(count));
}

QualityReport quality(const VideoClip& reference, const VideoClip& test) {
  return {psnr(reference, test), mssim(reference, test), tpsnr(reference, test)};
}

double bit_accuracy(const Message& sent, const Message& decoded) {
  if (sent.size() != decoded.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(sent.size()) + " vs " + std::to_string(decoded.size()) + " bits");
  }
  if (sent.size() == 0) throw Error(Errc::LengthMismatch, "empty messages");
  int same = 0;
  for (int i = 0; i < sent.size(); ++i) same += sent.bits[i] == decoded.bits[i];
  return static_cast<double>(same) / sent.size();
}

}  // namespace vidmark
