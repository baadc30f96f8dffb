#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "vidmark/clip.hpp"
#include "vidmark/rng.hpp"

namespace testing {

inline vidmark::Volume random_volume(int t, int h, int w, std::uint64_t seed) {
  vidmark::Volume v(t, h, w);
  vidmark::Rng rng(seed);
  for (double& x : v.data()) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline vidmark::VideoClip random_clip(vidmark::ClipShape shape, std::uint64_t seed) {
  vidmark::VideoClip c(shape);
  vidmark::Rng rng(seed);
  for (double& x : c.samples()) x = rng.uniform();
  return c;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("vidmark-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace testing
