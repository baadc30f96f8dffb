#include "vidmark/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vidmark/error.hpp"
#include "vidmark/rng.hpp"

namespace vidmark {

SynthScene::SynthScene(int height, int width, std::uint64_t seed, const SynthParams& params)
    : height_(height), width_(width), seed_(seed), params_(params) {
  validate_shape({1, height, width});
  Rng rng(derive_seed(seed, 0x5C3E));

  const double tint = rng.uniform(0.0, 360.0);
  const Rgb base = hsv_to_rgb({tint, rng.uniform(0.1, 0.4), rng.uniform(0.35, 0.6)});
  base_[0] = base.r;
  base_[1] = base.g;
  base_[2] = base.b;
  for (int c = 0; c < 3; ++c) {
    grad_x_[c] = rng.uniform(-0.15, 0.15) / width;
    grad_y_[c] = rng.uniform(-0.15, 0.15) / height;
  }

  const double pan_angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double pan_speed = rng.uniform(0.0, params.max_pan);
  const double pan_x = pan_speed * std::cos(pan_angle);
  const double pan_y = pan_speed * std::sin(pan_angle);

  const double log_lo = std::log(params.min_freq), log_hi = std::log(params.max_freq);
  double power = 0.0;
  for (int i = 0; i < params.components; ++i) {
    Wave w{};
    const double f = std::exp(rng.uniform(log_lo, log_hi));
    const double theta = rng.uniform(0.0, std::numbers::pi);
    w.kx = 2.0 * std::numbers::pi * f * std::cos(theta);
    w.ky = 2.0 * std::numbers::pi * f * std::sin(theta);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    w.vx = pan_x;
    w.vy = pan_y;
    if (rng.bernoulli(params.drift_fraction)) {
      w.vx += rng.uniform(-1.0, 1.0);
      w.vy += rng.uniform(-1.0, 1.0);
    }
    w.amp = std::pow(f, -params.spectral_slope);
    const double sat = rng.uniform(0.0, 0.5);
    const Rgb tone = hsv_to_rgb({rng.uniform(0.0, 360.0), sat, 1.0});
    const double norm = rgb_luma(tone.r, tone.g, tone.b);
    w.rgb[0] = tone.r / norm;
    w.rgb[1] = tone.g / norm;
    w.rgb[2] = tone.b / norm;
    power += 0.5 * w.amp * w.amp;
    waves_.push_back(w);
  }
  const double scale = power > 0.0 ? params.contrast / std::sqrt(power) : 0.0;
  for (auto& w : waves_) w.amp *= scale;
}

void SynthScene::render(int t, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(height_) * width_ * 3) {
    throw Error(Errc::InvalidArgument, "render: output span has the wrong size");
  }
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      double* px = out.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
      for (int c = 0; c < 3; ++c) px[c] = base_[c] + grad_x_[c] * (x - width_ / 2) + grad_y_[c] * (y - height_ / 2);
    }

  // sin(kx x + ky y + p) = sin(kx x) cos(ky y + p) + cos(kx x) sin(ky y + p),
  // so each wave costs one table pass per row and column.
  std::vector<double> sx(width_), cx(width_), sy(height_), cy(height_);
  for (const Wave& w : waves_) {
    const double p = w.phase - w.kx * w.vx * t - w.ky * w.vy * t;
    for (int x = 0; x < width_; ++x) {
      sx[x] = std::sin(w.kx * x);
      cx[x] = std::cos(w.kx * x);
    }
    for (int y = 0; y < height_; ++y) {
      sy[y] = std::sin(w.ky * y + p);
      cy[y] = std::cos(w.ky * y + p);
    }
    const double r = w.amp * w.rgb[0], g = w.amp * w.rgb[1], b = w.amp * w.rgb[2];
    for (int y = 0; y < height_; ++y) {
      double* row = out.data() + static_cast<std::size_t>(y) * width_ * 3;
      for (int x = 0; x < width_; ++x) {
        const double s = sx[x] * cy[y] + cx[x] * sy[y];
        row[3 * x] += r * s;
        row[3 * x + 1] += g * s;
        row[3 * x + 2] += b * s;
      }
    }
  }

  if (params_.sensor_noise > 0.0) {
    Rng noise(derive_seed(seed_, 0x4E01, static_cast<std::uint64_t>(t)));
    for (double& v : out) v += params_.sensor_noise * noise.normal();
  }
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
}

VideoClip SynthScene::clip(int frames, double frame_rate) const {
  VideoClip out({frames, height_, width_}, ColorSpace::RGB, frame_rate);
  for (int t = 0; t < frames; ++t) render(t, out.frame(t));
  return out;
}

VideoClip synth_clip(const ClipShape& shape, std::uint64_t seed, const SynthParams& params) {
  validate_shape(shape);
  return SynthScene(shape.height, shape.width, seed, params).clip(shape.frames);
}

std::vector<VideoClip> synth_corpus(int count, const ClipShape& shape, std::uint64_t seed, const SynthParams& params) {
  std::vector<VideoClip> clips;
  clips.reserve(count);
  for (int i = 0; i < count; ++i) clips.push_back(synth_clip(shape, derive_seed(seed, 0xC0, i), params));
  return clips;
}

}  // namespace vidmark
