// Serial reference vs OpenMP kernels on one clip size. Prints best-of-N wall
// time for each and the max abs difference between their outputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "vidmark/distortion.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/reference.hpp"
#include "vidmark/synth.hpp"
#include "vidmark/wavelet.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace vidmark;

namespace {

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void line(const char* name, double serial, double parallel, double diff) {
  std::printf("%-8s %10.2f %10.2f %8.2fx %12.3g\n", name, serial, parallel, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vidmark kernel benchmark"};
  int frames = 16, height = 128, width = 128, reps = 3, threads = 0;
  std::string only;
  app.add_option("-t,--frames", frames)->capture_default_str();
  app.add_option("--height", height)->capture_default_str();
  app.add_option("--width", width)->capture_default_str();
  app.add_option("-r,--reps", reps)->capture_default_str();
  app.add_option("--threads", threads, "0 = OpenMP default")->capture_default_str();
  app.add_option("--only", only, "dwt, blur, jpeg or ssim");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  const int workers = omp_get_max_threads();
#else
  const int workers = 1;
#endif
  const VideoClip clip = synth_clip({frames, height, width}, 42);
  const Volume y = luma(clip);
  std::printf("clip %dx%dx%d, %d thread(s), best of %d\n", frames, height, width, workers, reps);
  std::printf("%-8s %10s %10s %9s %12s\n", "kernel", "serial_ms", "omp_ms", "speedup", "max_diff");

  if (only.empty() || only == "dwt") {
    WaveletPyramid a, b;
    const double s = best_ms(reps, [&] { a = reference::dwt3_forward(y); });
    const double p = best_ms(reps, [&] { b = dwt3_forward(y); });
    line("dwt3", s, p, max_diff(a.coefficients().data(), b.coefficients().data()));
    Volume ia, ib;
    const double si = best_ms(reps, [&] { ia = reference::dwt3_inverse(a); });
    const double pi = best_ms(reps, [&] { ib = dwt3_inverse(b); });
    line("idwt3", si, pi, max_diff(ia.data(), ib.data()));
  }
  if (only.empty() || only == "blur") {
    const auto spatial = gaussian_kernel(2.0, 5);
    const auto temporal = gaussian_kernel(2.0, 3);
    VideoClip a, b;
    const double s = best_ms(reps, [&] { a = reference::gaussian_blur3d(clip, temporal, spatial); });
    const double p = best_ms(reps, [&] { b = kernels::gaussian_blur3d(clip, temporal, spatial); });
    line("blur3d", s, p, max_diff(a.samples(), b.samples()));
  }
  if (only.empty() || only == "jpeg") {
    VideoClip a, b;
    const double s = best_ms(reps, [&] { a = reference::jpeg_roundtrip(clip, 50); });
    const double p = best_ms(reps, [&] { b = kernels::jpeg_roundtrip(clip, 50); });
    line("jpeg", s, p, max_diff(a.samples(), b.samples()));
  }
  if (only.empty() || only == "ssim") {
    const VideoClip noisy = apply(clip, parse_distortion("noise:0.02", 1));
    const Volume yn = luma(noisy);
    double a = 0, b = 0;
    const double s = best_ms(reps, [&] { a = reference::ssim_volume(y, yn); });
    const double p = best_ms(reps, [&] { b = kernels::ssim_volume(y, yn); });
    line("ssim", s, p, std::fabs(a - b));
  }
  return 0;
}
