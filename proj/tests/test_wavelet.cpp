#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "vidmark/error.hpp"
#include "vidmark/reference.hpp"
#include "vidmark/wavelet.hpp"

using namespace vidmark;

TEST_CASE("haar round trip is exact to rounding") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Volume v = testing::random_volume(16, 32, 24, seed);
    const Volume back = dwt3_inverse(dwt3_forward(v));
    CHECK(testing::max_abs_diff(v.data(), back.data()) <= 1e-12);
  }
}

TEST_CASE("forward transform matches the dense Kronecker product") {
  const auto m = oracle::dense_dwt3(8, 8, 8, 3);
  for (std::uint64_t seed = 100; seed < 103; ++seed) {
    const Volume v = testing::random_volume(8, 8, 8, seed);
    const WaveletPyramid p = dwt3_forward(v);
    std::vector<double> expect(512, 0.0);
    for (int i = 0; i < 512; ++i)
      for (int j = 0; j < 512; ++j) expect[i] += m[i * 512 + j] * v.data()[j];
    CHECK(testing::max_abs_diff(expect, p.coefficients().data()) <= 1e-12);
  }
}

TEST_CASE("transform preserves energy") {
  const Volume v = testing::random_volume(8, 16, 16, 9);
  const WaveletPyramid p = dwt3_forward(v);
  double a = 0, b = 0;
  for (double x : v.data()) a += x * x;
  for (double x : p.coefficients().data()) b += x * x;
  CHECK(b == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const Volume v = testing::random_volume(16, 40, 56, 4);
  const WaveletPyramid fast = dwt3_forward(v);
  const WaveletPyramid slow = reference::dwt3_forward(v);
  CHECK(testing::max_abs_diff(fast.coefficients().data(), slow.coefficients().data()) == 0.0);
  CHECK(testing::max_abs_diff(dwt3_inverse(fast).data(), reference::dwt3_inverse(slow).data()) <= 1e-15);
}

TEST_CASE("constant input puts all energy in the coarsest LLL") {
  Volume v(8, 16, 16, 0.5);
  WaveletPyramid p = dwt3_forward(v);
  const BandRegion lll = p.region(3, BandCode{});
  CHECK(lll.frames == 1);
  CHECK(lll.height == 2);
  double outside = 0.0;
  for (int t = 0; t < p.frames(); ++t)
    for (int y = 0; y < p.height(); ++y)
      for (int x = 0; x < p.width(); ++x)
        if (t >= lll.frames || y >= lll.height || x >= lll.width) outside = std::max(outside, std::fabs(p.coefficients()(t, y, x)));
  CHECK(outside <= 1e-14);
  // Each level scales a constant by 2^(3/2).
  CHECK(p.coefficients()(0, 0, 0) == doctest::Approx(0.5 * std::pow(2.0, 4.5)));
}

TEST_CASE("band codes and regions") {
  CHECK(BandCode::parse("LLH").h_high);
  CHECK_FALSE(BandCode::parse("LLH").t_high);
  CHECK(BandCode::parse("HLH").str() == "HLH");
  CHECK_THROWS_AS(BandCode::parse("LXH"), Error);
  CHECK_THROWS_AS(BandCode::parse("LL"), Error);

  const BandRegion r = band_region(8, 128, 128, 2, BandCode::parse("HLH"));
  CHECK(r.t0 == 2);
  CHECK(r.y0 == 0);
  CHECK(r.x0 == 32);
  CHECK(r.size() == 2u * 32 * 32);

  WaveletPyramid p = dwt3_forward(Volume(8, 16, 16));
  CHECK_THROWS_AS(p.region(1, BandCode{}), Error);
  CHECK_THROWS_AS(p.region(4, BandCode::parse("LLH")), Error);
  CHECK_NOTHROW(p.region(3, BandCode{}));
}

TEST_CASE("odd sizes are edge padded and cropped back") {
  CHECK(padded_extent(7, 3) == 8);
  CHECK(padded_extent(17, 3) == 24);
  const Volume v = testing::random_volume(9, 19, 13, 2);
  const WaveletPyramid p = dwt3_forward(v);
  CHECK(p.padded());
  CHECK(p.frames() == 16);
  CHECK(p.height() == 24);
  CHECK(p.width() == 16);
  const Volume back = dwt3_inverse(p);
  REQUIRE(back.same_shape(v));
  CHECK(testing::max_abs_diff(v.data(), back.data()) <= 1e-12);
}

TEST_CASE("single impulse spreads evenly over the eight level-1 bands") {
  Volume v(8, 8, 8);
  v(0, 0, 0) = 1.0;
  WaveletPyramid p = dwt3_forward(v, 1);
  const double expect = std::pow(1.0 / std::sqrt(2.0), 3);
  for (int code = 0; code < 8; ++code) {
    const BandCode b{(code & 4) != 0, (code & 2) != 0, (code & 1) != 0};
    SubbandView band = p.band(1, b);
    int nonzero = 0;
    for (int t = 0; t < band.frames(); ++t)
      for (int y = 0; y < band.height(); ++y)
        for (int x = 0; x < band.width(); ++x)
          if (band(t, y, x) != 0.0) {
            ++nonzero;
            CHECK(std::fabs(band(t, y, x)) == doctest::Approx(expect));
          }
    CHECK(nonzero == 1);
  }
}

TEST_CASE("zero pyramid inverts to zero and random pyramids round trip") {
  WaveletPyramid zero(Volume(8, 16, 16), 3, 8, 16, 16);
  const Volume flat = dwt3_inverse(zero);
  for (double x : flat.data()) CHECK(x == 0.0);
  const Volume c = testing::random_volume(8, 16, 16, 12);
  const WaveletPyramid p(c, 3, 8, 16, 16);
  CHECK(testing::max_abs_diff(dwt3_forward(dwt3_inverse(p)).coefficients().data(), c.data()) <= 1e-9);
}

TEST_CASE("level-1 layout of an 8x128x128 clip") {
  WaveletPyramid p = dwt3_forward(Volume(8, 128, 128), 3);
  for (int code = 1; code < 8; ++code) {
    const BandRegion r = p.region(1, BandCode{(code & 4) != 0, (code & 2) != 0, (code & 1) != 0});
    CHECK(r.frames == 4);
    CHECK(r.height == 64);
    CHECK(r.width == 64);
  }
  const auto bands = embedding_bands();
  for (const auto& b : bands) {
    CHECK_FALSE(b == BandCode{});
    CHECK_FALSE(b == BandCode::parse("HHH"));
  }
}

TEST_CASE("dense oracle on 8x16x16 and basis vectors under the inverse") {
  const int n = 8 * 16 * 16;
  const auto m = oracle::dense_dwt3(8, 16, 16, 3);
  const Volume v = testing::random_volume(8, 16, 16, 5);
  const WaveletPyramid p = dwt3_forward(v);
  std::vector<double> expect(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) expect[i] += m[static_cast<std::size_t>(i) * n + j] * v.data()[j];
  CHECK(testing::max_abs_diff(expect, p.coefficients().data()) <= 1e-9);

  // Orthonormal: the inverse of a unit coefficient is the matching row of M.
  WaveletPyramid unit(Volume(8, 16, 16), 3, 8, 16, 16);
  SubbandView llh = unit.band(2, "LLH");
  llh(1, 2, 3) = 1.0;
  const std::size_t k = llh.flat_index(1, 2, 3);
  const Volume back = dwt3_inverse(unit);
  double err = 0.0;
  for (int j = 0; j < n; ++j) err = std::max(err, std::fabs(back.data()[j] - m[k * n + j]));
  CHECK(err <= 1e-12);
}
