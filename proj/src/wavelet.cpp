#include "vidmark/wavelet.hpp"

#include <algorithm>

#include "vidmark/error.hpp"

namespace vidmark {

BandCode BandCode::parse(std::string_view code) {
  if (code.size() != 3) throw Error(Errc::BadBandCode, "band code must have 3 letters: '" + std::string(code) + "'");
  auto pass = [&](char c) {
    if (c == 'L' || c == 'l') return false;
    if (c == 'H' || c == 'h') return true;
    throw Error(Errc::BadBandCode, "band code letters must be L or H: '" + std::string(code) + "'");
  };
  return {pass(code[0]), pass(code[1]), pass(code[2])};
}

std::string BandCode::str() const {
  return {t_high ? 'H' : 'L', v_high ? 'H' : 'L', h_high ? 'H' : 'L'};
}

std::array<BandCode, 6> embedding_bands() {
  std::array<BandCode, 6> out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = BandCode::parse(kEmbeddingBandNames[i]);
  return out;
}

int padded_extent(int n, int levels) {
  const int block = 1 << levels;
  return (n + block - 1) / block * block;
}

BandRegion band_region(int frames, int height, int width, int level, BandCode code) {
  const int nt = frames >> level, ny = height >> level, nx = width >> level;
  return {code.t_high ? nt : 0, code.v_high ? ny : 0, code.h_high ? nx : 0, nt, ny, nx};
}

WaveletPyramid::WaveletPyramid(Volume coefficients, int levels, int frames, int height, int width)
    : coeffs_(std::move(coefficients)),
      levels_(levels),
      orig_frames_(frames),
      orig_height_(height),
      orig_width_(width) {}

bool WaveletPyramid::padded() const {
  return orig_frames_ != frames() || orig_height_ != height() || orig_width_ != width();
}

BandRegion WaveletPyramid::region(int level, BandCode code) const {
  if (level < 1 || level > levels_) {
    throw Error(Errc::BadBandCode, "level " + std::to_string(level) + " outside [1, " + std::to_string(levels_) + "]");
  }
  if (code == BandCode{} && level < levels_) {
    throw Error(Errc::BadBandCode, "LLL of level " + std::to_string(level) + " is decomposed further");
  }
  return band_region(frames(), height(), width(), level, code);
}

SubbandView WaveletPyramid::band(int level, BandCode code) { return SubbandView(coeffs_, region(level, code)); }

Volume pad_edge(const Volume& in, int frames, int height, int width) {
  Volume out(frames, height, width);
  for (int t = 0; t < frames; ++t) {
    const int st = std::min(t, in.frames() - 1);
    for (int y = 0; y < height; ++y) {
      const int sy = std::min(y, in.height() - 1);
      for (int x = 0; x < width; ++x) out(t, y, x) = in(st, sy, std::min(x, in.width() - 1));
    }
  }
  return out;
}

Volume crop_volume(const Volume& in, int frames, int height, int width) {
  Volume out(frames, height, width);
  for (int t = 0; t < frames; ++t)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out(t, y, x) = in(t, y, x);
  return out;
}

WaveletPyramid dwt3_forward(const Volume& signal, int levels) {
  if (levels < 1) throw Error(Errc::BadShape, "levels must be >= 1");
  const int block = 1 << levels;
  if (signal.frames() < block || signal.height() < block || signal.width() < block) {
    throw Error(Errc::BadShape, "every axis must be >= " + std::to_string(block) + " for " + std::to_string(levels) +
                                    " levels");
  }
  const int pt = padded_extent(signal.frames(), levels);
  const int py = padded_extent(signal.height(), levels);
  const int px = padded_extent(signal.width(), levels);
  Volume coeffs = (pt == signal.frames() && py == signal.height() && px == signal.width())
                      ? signal
                      : pad_edge(signal, pt, py, px);
  for (int level = 0; level < levels; ++level) {
    kernels::haar_analysis_level(coeffs, pt >> level, py >> level, px >> level);
  }
  return WaveletPyramid(std::move(coeffs), levels, signal.frames(), signal.height(), signal.width());
}

Volume dwt3_inverse(const WaveletPyramid& pyramid) {
  Volume out = pyramid.coefficients();
  for (int level = pyramid.levels() - 1; level >= 0; --level) {
    kernels::haar_synthesis_level(out, pyramid.frames() >> level, pyramid.height() >> level,
                                  pyramid.width() >> level);
  }
  if (!pyramid.padded()) return out;
  return crop_volume(out, pyramid.original_frames(), pyramid.original_height(), pyramid.original_width());
}

}  // namespace vidmark
