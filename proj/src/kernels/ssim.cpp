// Separable Gaussian-window SSIM, OpenMP-parallel over frames.

#include <cmath>
#include <vector>

#include "vidmark/distortion.hpp"
#include "vidmark/metrics.hpp"

namespace vidmark::kernels {

namespace {
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
}  // namespace

double ssim_plane(std::span<const double> a, std::span<const double> b, int height, int width,
                  const SsimWindow& window) {
  const auto g = gaussian_kernel(window.sigma, window.size);
  const int k = window.size;
  const int oh = height - k + 1, ow = width - k + 1;
  // Horizontal pass on the five moment images, then vertical.
  const std::size_t hsize = static_cast<std::size_t>(height) * ow;
  std::vector<double> hx(hsize), hy(hsize), hxx(hsize), hyy(hsize), hxy(hsize);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < ow; ++x) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < k; ++i) {
        const std::size_t s = static_cast<std::size_t>(y) * width + x + i;
        const double va = a[s], vb = b[s], w = g[i];
        sx += w * va;
        sy += w * vb;
        sxx += w * va * va;
        syy += w * vb * vb;
        sxy += w * va * vb;
      }
      const std::size_t d = static_cast<std::size_t>(y) * ow + x;
      hx[d] = sx;
      hy[d] = sy;
      hxx[d] = sxx;
      hyy[d] = syy;
      hxy[d] = sxy;
    }
  double total = 0.0;
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (int i = 0; i < k; ++i) {
        const std::size_t s = static_cast<std::size_t>(y + i) * ow + x;
        const double w = g[i];
        mx += w * hx[s];
        my += w * hy[s];
        mxx += w * hxx[s];
        myy += w * hyy[s];
        mxy += w * hxy[s];
      }
      const double vx = mxx - mx * mx, vy = myy - my * my, cov = mxy - mx * my;
      total += ((2 * mx * my + kC1) * (2 * cov + kC2)) / ((mx * mx + my * my + kC1) * (vx + vy + kC2));
    }
  return total / (static_cast<double>(oh) * ow);
}

double ssim_volume(const Volume& a, const Volume& b, const SsimWindow& window) {
  const std::size_t plane = static_cast<std::size_t>(a.height()) * a.width();
  std::vector<double> per_frame(a.frames());
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < a.frames(); ++t) {
    per_frame[t] = ssim_plane(a.data().subspan(t * plane, plane), b.data().subspan(t * plane, plane), a.height(),
                              a.width(), window);
  }
  double sum = 0.0;
  for (double v : per_frame) sum += v;
  return sum / a.frames();
}

}  // namespace vidmark::kernels
