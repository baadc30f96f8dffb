#pragma once

// Straightforward single-threaded versions of the parallel kernels. They are
// slower and written for clarity; tests check the kernels against them and
// the bench tool times both.

#include <span>

#include "vidmark/clip.hpp"
#include "vidmark/wavelet.hpp"

namespace vidmark::reference {

WaveletPyramid dwt3_forward(const Volume& signal, int levels = 3);
Volume dwt3_inverse(const WaveletPyramid& pyramid);

// Direct (non-separable) 3D convolution with symmetric boundaries.
VideoClip gaussian_blur3d(const VideoClip& clip, std::span<const double> temporal, std::span<const double> spatial);

// Direct 2D DCT per block.
VideoClip jpeg_roundtrip(const VideoClip& clip, int quality);

// Explicit per-window sums.
double ssim_plane(std::span<const double> a, std::span<const double> b, int height, int width);
double ssim_volume(const Volume& a, const Volume& b);

}  // namespace vidmark::reference
