#pragma once

#include <array>
#include <string>
#include <string_view>

#include "vidmark/clip.hpp"

namespace vidmark {

// Which filter (low/high) was applied along (temporal, vertical, horizontal).
struct BandCode {
  bool t_high = false;
  bool v_high = false;
  bool h_high = false;

  static BandCode parse(std::string_view code);  // "LLH" etc.; throws BadBandCode
  std::string str() const;
  int ordinal() const { return (t_high ? 4 : 0) | (v_high ? 2 : 0) | (h_high ? 1 : 0); }
  bool operator==(const BandCode&) const = default;
};

// The six mixed bands that carry the watermark; LLL is recursed and HHH is
// left alone.
inline constexpr std::array<std::string_view, 6> kEmbeddingBandNames = {"LLH", "LHL", "LHH", "HLL", "HLH", "HHL"};
std::array<BandCode, 6> embedding_bands();

// Offsets and extents of one sub-band inside the Mallat-ordered coefficient
// volume.
struct BandRegion {
  int t0 = 0, y0 = 0, x0 = 0;
  int frames = 0, height = 0, width = 0;
  std::size_t size() const { return static_cast<std::size_t>(frames) * height * width; }
};

class WaveletPyramid;

// Mutable window onto one sub-band. Writes land in the pyramid and are seen
// by dwt3_inverse.
class SubbandView {
 public:
  SubbandView(Volume& coefficients, BandRegion region) : coeffs_(&coefficients), region_(region) {}

  const BandRegion& region() const { return region_; }
  int frames() const { return region_.frames; }
  int height() const { return region_.height; }
  int width() const { return region_.width; }
  std::size_t size() const { return region_.size(); }

  double& operator()(int t, int y, int x) {
    return (*coeffs_)(region_.t0 + t, region_.y0 + y, region_.x0 + x);
  }
  double operator()(int t, int y, int x) const {
    return (*coeffs_)(region_.t0 + t, region_.y0 + y, region_.x0 + x);
  }
  // Position in the pyramid's flat coefficient array.
  std::size_t flat_index(int t, int y, int x) const {
    return coeffs_->index(region_.t0 + t, region_.y0 + y, region_.x0 + x);
  }

 private:
  Volume* coeffs_;
  BandRegion region_;
};

// Multi-level separable 3D Haar decomposition stored in place (Mallat
// layout): at level k the working cube is the low corner of extent
// N / 2^(k-1) per axis, its low half holds L and its high half H.
class WaveletPyramid {
 public:
  WaveletPyramid() = default;
  WaveletPyramid(Volume coefficients, int levels, int frames, int height, int width);

  int levels() const { return levels_; }
  // Shape of the transformed (possibly padded) volume.
  int frames() const { return coeffs_.frames(); }
  int height() const { return coeffs_.height(); }
  int width() const { return coeffs_.width(); }
  // Shape before edge padding; dwt3_inverse crops back to this.
  int original_frames() const { return orig_frames_; }
  int original_height() const { return orig_height_; }
  int original_width() const { return orig_width_; }
  bool padded() const;

  Volume& coefficients() { return coeffs_; }
  const Volume& coefficients() const { return coeffs_; }

  BandRegion region(int level, BandCode code) const;
  SubbandView band(int level, BandCode code);
  SubbandView band(int level, std::string_view code) { return band(level, BandCode::parse(code)); }

 private:
  Volume coeffs_;
  int levels_ = 0;
  int orig_frames_ = 0, orig_height_ = 0, orig_width_ = 0;
};

// Band extents at a level for a padded shape (used for capacity planning
// without running a transform).
BandRegion band_region(int frames, int height, int width, int level, BandCode code);
// Smallest multiple of 2^levels that is >= n.
int padded_extent(int n, int levels);

Volume pad_edge(const Volume& in, int frames, int height, int width);
Volume crop_volume(const Volume& in, int frames, int height, int width);

// Orthonormal Haar analysis along t, then v, then h at each level. Axes not
// divisible by 2^levels are padded by edge replication. Throws BadShape if an
// axis is shorter than 2^levels.
WaveletPyramid dwt3_forward(const Volume& signal, int levels = 3);
Volume dwt3_inverse(const WaveletPyramid& pyramid);

namespace kernels {
// One analysis/synthesis level over the low corner [0,nt) x [0,ny) x [0,nx),
// OpenMP-parallel over independent lines.
void haar_analysis_level(Volume& v, int nt, int ny, int nx);
void haar_synthesis_level(Volume& v, int nt, int ny, int nx);
}  // namespace kernels

}  // namespace vidmark
