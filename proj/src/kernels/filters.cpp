// OpenMP kernels for the blur and JPEG-proxy attacks.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "vidmark/distortion.hpp"

namespace vidmark {

namespace {

// Half-sample symmetric extension: x[-1] = x[0], x[n] = x[n-1].
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

constexpr std::array<int, 64> kLumaTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,  14, 13, 16, 24, 40,  57,
    69, 56, 14, 17, 22,  29,  51,  87,  80, 62, 18, 22, 37,  56,  68,  109, 103, 77, 24, 35, 55,  64,
    81, 104, 113, 92, 49, 64, 78,  87,  103, 121, 120, 101, 72, 92, 95,  98,  112, 100, 103, 99};

constexpr std::array<int, 64> kChromaTable = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99, 24, 26, 56, 99, 99, 99,
    99, 99, 47, 66, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

std::array<double, 64> scaled_table(const std::array<int, 64>& base, int quality) {
  const double scale = jpeg_quant_scale(quality);
  std::array<double, 64> out{};
  for (int i = 0; i < 64; ++i) {
    out[i] = std::clamp(std::floor((base[i] * scale + 50.0) / 100.0), 1.0, 255.0);
  }
  return out;
}

// Orthonormal 8-point DCT-II basis: basis[u][x].
const std::array<std::array<double, 8>, 8>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, 8>, 8> b{};
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) b[u][x] = cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
    return b;
  }();
  return basis;
}

void quantize_block(std::array<double, 64>& block, const std::array<double, 64>& table) {
  const auto& b = dct_basis();
  std::array<double, 64> tmp{};
  // rows
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += b[u][x] * block[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  // columns
  std::array<double, 64> coef{};
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += b[v][y] * tmp[y * 8 + u];
      coef[v * 8 + u] = std::round(s / table[v * 8 + u]) * table[v * 8 + u];
    }
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += b[v][y] * coef[v * 8 + u];
      tmp[y * 8 + u] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += b[u][x] * tmp[y * 8 + u];
      block[y * 8 + x] = s;
    }
}

}  // namespace

namespace kernels {

VideoClip gaussian_blur3d(const VideoClip& clip, std::span<const double> temporal, std::span<const double> spatial) {
  const int nt = clip.frames(), ny = clip.height(), nx = clip.width();
  const int ht = static_cast<int>(temporal.size()) / 2;
  const int hs = static_cast<int>(spatial.size()) / 2;
  const auto src = clip.samples();
  std::vector<double> a(src.size()), b(src.size());
  auto at = [&](int t, int y, int x) { return ((static_cast<std::size_t>(t) * ny + y) * nx + x) * 3; };

  // horizontal
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        double acc[3] = {0, 0, 0};
        for (int k = -hs; k <= hs; ++k) {
          const std::size_t s = at(t, y, reflect_index(x + k, nx));
          const double w = spatial[k + hs];
          for (int c = 0; c < 3; ++c) acc[c] += w * src[s + c];
        }
        const std::size_t d = at(t, y, x);
        for (int c = 0; c < 3; ++c) a[d + c] = acc[c];
      }
  // vertical
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y) {
      const std::size_t d = at(t, y, 0);
      for (std::size_t i = 0; i < static_cast<std::size_t>(nx) * 3; ++i) b[d + i] = 0.0;
      for (int k = -hs; k <= hs; ++k) {
        const std::size_t s = at(t, reflect_index(y + k, ny), 0);
        const double w = spatial[k + hs];
        for (std::size_t i = 0; i < static_cast<std::size_t>(nx) * 3; ++i) b[d + i] += w * a[s + i];
      }
    }
  // temporal
  VideoClip out(clip.shape(), clip.colorspace(), clip.frame_rate());
  auto dst = out.samples();
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y) {
      const std::size_t d = at(t, y, 0);
      for (int k = -ht; k <= ht; ++k) {
        const std::size_t s = at(reflect_index(t + k, nt), y, 0);
        const double w = temporal[k + ht];
        for (std::size_t i = 0; i < static_cast<std::size_t>(nx) * 3; ++i) dst[d + i] += w * b[s + i];
      }
    }
  return out;
}

VideoClip jpeg_roundtrip(const VideoClip& clip, int quality) {
  const auto luma_table = scaled_table(kLumaTable, quality);
  const auto chroma_table = scaled_table(kChromaTable, quality);
  VideoClip yuv = convert_colorspace(clip, ColorSpace::YUV);
  const int ny = yuv.height(), nx = yuv.width();
  const int by = (ny + 7) / 8, bx = (nx + 7) / 8;
  auto samples = yuv.samples();

#pragma omp parallel for collapse(3) schedule(static)
  for (int t = 0; t < yuv.frames(); ++t)
    for (int c = 0; c < 3; ++c)
      for (int block = 0; block < by * bx; ++block) {
        const int y0 = (block / bx) * 8, x0 = (block % bx) * 8;
        std::array<double, 64> buf{};
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            const int sy = std::min(y0 + y, ny - 1), sx = std::min(x0 + x, nx - 1);
            buf[y * 8 + x] = samples[yuv.index(t, sy, sx, c)] * 255.0 - 128.0;
          }
        quantize_block(buf, c == 0 ? luma_table : chroma_table);
        for (int y = 0; y < 8 && y0 + y < ny; ++y)
          for (int x = 0; x < 8 && x0 + x < nx; ++x) {
            samples[yuv.index(t, y0 + y, x0 + x, c)] = (buf[y * 8 + x] + 128.0) / 255.0;
          }
      }
  return convert_colorspace(yuv, clip.colorspace());
}

}  // namespace kernels
}  // namespace vidmark
