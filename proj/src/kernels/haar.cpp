// OpenMP Haar kernels. Each axis pass writes into a scratch buffer laid out
// like the source so inner loops always run over contiguous x.

#include <numbers>
#include <vector>

#include "vidmark/wavelet.hpp"

namespace vidmark::kernels {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Low-corner copy helpers; scratch is dense nt x ny x nx.
void copy_in(const Volume& v, std::vector<double>& s, int nt, int ny, int nx) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y) {
      const double* src = v.data().data() + v.index(t, y, 0);
      double* dst = s.data() + (static_cast<std::size_t>(t) * ny + y) * nx;
      for (int x = 0; x < nx; ++x) dst[x] = src[x];
    }
}

void analysis_t(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = nt / 2;
  const std::size_t plane = static_cast<std::size_t>(ny) * nx;
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < half; ++i)
    for (int y = 0; y < ny; ++y) {
      const double* a = s.data() + (2 * i) * plane + static_cast<std::size_t>(y) * nx;
      const double* b = a + plane;
      double* lo = &v(i, y, 0);
      double* hi = &v(half + i, y, 0);
      for (int x = 0; x < nx; ++x) {
        lo[x] = (a[x] + b[x]) * kInvSqrt2;
        hi[x] = (a[x] - b[x]) * kInvSqrt2;
      }
    }
}

void analysis_v(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = ny / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < half; ++i) {
      const double* a = s.data() + (static_cast<std::size_t>(t) * ny + 2 * i) * nx;
      const double* b = a + nx;
      double* lo = &v(t, i, 0);
      double* hi = &v(t, half + i, 0);
      for (int x = 0; x < nx; ++x) {
        lo[x] = (a[x] + b[x]) * kInvSqrt2;
        hi[x] = (a[x] - b[x]) * kInvSqrt2;
      }
    }
}

void analysis_h(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = nx / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y) {
      const double* a = s.data() + (static_cast<std::size_t>(t) * ny + y) * nx;
      double* row = &v(t, y, 0);
      for (int i = 0; i < half; ++i) {
        row[i] = (a[2 * i] + a[2 * i + 1]) * kInvSqrt2;
        row[half + i] = (a[2 * i] - a[2 * i + 1]) * kInvSqrt2;
      }
    }
}

void synthesis_t(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = nt / 2;
  const std::size_t plane = static_cast<std::size_t>(ny) * nx;
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < half; ++i)
    for (int y = 0; y < ny; ++y) {
      const double* lo = s.data() + i * plane + static_cast<std::size_t>(y) * nx;
      const double* hi = s.data() + (half + i) * plane + static_cast<std::size_t>(y) * nx;
      double* a = &v(2 * i, y, 0);
      double* b = &v(2 * i + 1, y, 0);
      for (int x = 0; x < nx; ++x) {
        a[x] = (lo[x] + hi[x]) * kInvSqrt2;
        b[x] = (lo[x] - hi[x]) * kInvSqrt2;
      }
    }
}

void synthesis_v(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = ny / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < half; ++i) {
      const double* lo = s.data() + (static_cast<std::size_t>(t) * ny + i) * nx;
      const double* hi = s.data() + (static_cast<std::size_t>(t) * ny + half + i) * nx;
      double* a = &v(t, 2 * i, 0);
      double* b = &v(t, 2 * i + 1, 0);
      for (int x = 0; x < nx; ++x) {
        a[x] = (lo[x] + hi[x]) * kInvSqrt2;
        b[x] = (lo[x] - hi[x]) * kInvSqrt2;
      }
    }
}

void synthesis_h(const std::vector<double>& s, Volume& v, int nt, int ny, int nx) {
  const int half = nx / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < nt; ++t)
    for (int y = 0; y < ny; ++y) {
      const double* a = s.data() + (static_cast<std::size_t>(t) * ny + y) * nx;
      double* row = &v(t, y, 0);
      for (int i = 0; i < half; ++i) {
        row[2 * i] = (a[i] + a[half + i]) * kInvSqrt2;
        row[2 * i + 1] = (a[i] - a[half + i]) * kInvSqrt2;
      }
    }
}

}  // namespace

void haar_analysis_level(Volume& v, int nt, int ny, int nx) {
  std::vector<double> scratch(static_cast<std::size_t>(nt) * ny * nx);
  copy_in(v, scratch, nt, ny, nx);
  analysis_t(scratch, v, nt, ny, nx);
  copy_in(v, scratch, nt, ny, nx);
  analysis_v(scratch, v, nt, ny, nx);
  copy_in(v, scratch, nt, ny, nx);
  analysis_h(scratch, v, nt, ny, nx);
}

void haar_synthesis_level(Volume& v, int nt, int ny, int nx) {
  std::vector<double> scratch(static_cast<std::size_t>(nt) * ny * nx);
  copy_in(v, scratch, nt, ny, nx);
  synthesis_h(scratch, v, nt, ny, nx);
  copy_in(v, scratch, nt, ny, nx);
  synthesis_v(scratch, v, nt, ny, nx);
  copy_in(v, scratch, nt, ny, nx);
  synthesis_t(scratch, v, nt, ny, nx);
}

}  // namespace vidmark::kernels
