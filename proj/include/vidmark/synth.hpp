#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vidmark/clip.hpp"

namespace vidmark {

// Procedural "natural-looking" content: a static colour gradient under a
// sum of oriented sinusoids with log-uniform frequencies, panned by a global
// camera velocity, with a few components drifting on their own and a little
// temporally independent sensor noise. Slope 0 gives equal energy per octave,
// which is roughly what camera footage looks like.
struct SynthParams {
  int components = 32;
  double min_freq = 1.0 / 96.0;  // cycles per pixel
  double max_freq = 0.30;
  double contrast = 0.22;        // rms of the texture term
  double spectral_slope = 0.0;   // component amplitude ~ f^-slope
  double max_pan = 0.5;          // pixels per frame
  double drift_fraction = 0.05;  // components with their own motion
  double sensor_noise = 0.004;
};

class SynthScene {
 public:
  SynthScene(int height, int width, std::uint64_t seed, const SynthParams& params = {});

  int height() const { return height_; }
  int width() const { return width_; }

  // Writes frame t as interleaved RGB into out (height * width * 3 samples).
  void render(int t, std::span<double> out) const;
  VideoClip clip(int frames, double frame_rate = 25.0) const;

 private:
  struct Wave {
    double kx, ky;  // radians per pixel
    double phase;
    double vx, vy;  // pixels per frame
    double amp;
    double rgb[3];
  };

  int height_, width_;
  std::uint64_t seed_;
  SynthParams params_;
  std::vector<Wave> waves_;
  double base_[3];
  double grad_x_[3], grad_y_[3];
};

VideoClip synth_clip(const ClipShape& shape, std::uint64_t seed, const SynthParams& params = {});
std::vector<VideoClip> synth_corpus(int count, const ClipShape& shape, std::uint64_t seed,
                                    const SynthParams& params = {});

}  // namespace vidmark
