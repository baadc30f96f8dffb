#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "vidmark/error.hpp"
#include "vidmark/video_io.hpp"

using namespace vidmark;

TEST_CASE("colour conversions invert") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Rgb p{rng.uniform(), rng.uniform(), rng.uniform()};
    const Rgb q = yuv_to_rgb(rgb_to_yuv(p));
    CHECK(q.r == doctest::Approx(p.r).epsilon(1e-12));
    CHECK(q.b == doctest::Approx(p.b).epsilon(1e-12));
    const Rgb h = hsv_to_rgb(rgb_to_hsv(p));
    CHECK(h.g == doctest::Approx(p.g).epsilon(1e-12));
    CHECK(rgb_to_yuv(p).y == doctest::Approx(rgb_luma(p.r, p.g, p.b)));
  }
}

TEST_CASE("luma deltas land on the luma channel only") {
  VideoClip c = testing::random_clip({2, 8, 8}, 3);
  const Volume before = luma(c);
  Volume delta(2, 8, 8, 0.01);
  add_to_luma(c, delta, 2.0);
  const Volume after = luma(c);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(after.data()[i] - before.data()[i] == doctest::Approx(0.02));
  const VideoClip yuv = convert_colorspace(c, ColorSpace::YUV);
  const VideoClip back = convert_colorspace(yuv, ColorSpace::RGB);
  CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 1e-12);
}

TEST_CASE("temporal tiling pads the tail and untiles exactly") {
  const VideoClip c = testing::random_clip({19, 8, 8}, 1);
  const auto ranges = segment_ranges(19, {8});
  REQUIRE(ranges.size() == 3);
  CHECK(ranges[2].first == 16);
  CHECK(ranges[2].count == 3);
  const auto tiles = tile_temporal(c, {8});
  CHECK(tiles[2].frames() == 8);
  const auto last = tiles[2].frame(7), src = c.frame(18);
  CHECK(std::equal(last.begin(), last.end(), src.begin()));
  const VideoClip back = untile_temporal(tiles, 19);
  CHECK(testing::max_abs_diff(back.samples(), c.samples()) == 0.0);
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(VideoClip({0, 8, 8}), Error);
  CHECK_THROWS_AS(VideoClip({2, 4, 8}), Error);
  CHECK_NOTHROW(VideoClip({1, 8, 8}));
}

TEST_CASE("raw planar round trip is lossless") {
  testing::TempDir dir("raw");
  VideoClip c = testing::random_clip({3, 10, 12}, 5);
  c.set_frame_rate(30.0);
  const auto path = dir.path / "clip.raw";
  save_clip(c, path, VideoFormat::RawPlanar);
  CHECK(std::filesystem::exists(raw_sidecar_path(path)));
  const VideoClip back = load_clip(path);
  REQUIRE(back.shape() == c.shape());
  CHECK(back.frame_rate() == 30.0);
  CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 1e-7);
}

TEST_CASE("y4m round trip quantizes to 8 bits") {
  testing::TempDir dir("y4m");
  const VideoClip c = testing::random_clip({3, 10, 12}, 6);
  const auto path = dir.path / "clip.y4m";
  save_clip(c, path, VideoFormat::Y4M);
  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("YUV4MPEG2 W12 H10", 0) == 0);
  const VideoClip back = convert_colorspace(load_clip(path), ColorSpace::RGB);
  REQUIRE(back.shape() == c.shape());
  // One code of rounding in each YUV plane, propagated through the inverse matrix.
  CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 4.0 / 255.0);

  IoOptions opt;
  opt.y4m_chroma = Y4mChroma::C420;
  save_clip(c, dir.path / "c420.y4m", VideoFormat::Y4M, opt);
  CHECK(load_clip(dir.path / "c420.y4m").shape() == c.shape());
}

TEST_CASE("frame directories round trip in ppm and png") {
  testing::TempDir dir("frames");
  const VideoClip c = testing::random_clip({2, 9, 11}, 7);
  for (const char* ext : {"ppm", "png"}) {
    IoOptions opt;
    opt.frame_extension = ext;
    const auto path = dir.path / ext;
    save_clip(c, path, VideoFormat::FrameDir, opt);
    const VideoClip back = load_clip(path);
    REQUIRE(back.shape() == c.shape());
    CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 0.5 / 255.0 + 1e-12);
  }
}

TEST_CASE("corrupt inputs raise typed errors") {
  testing::TempDir dir("bad");
  std::ofstream(dir.path / "bad.y4m") << "NOTY4M W4 H4\n";
  CHECK_THROWS_AS(load_clip(dir.path / "bad.y4m"), Error);
  CHECK_THROWS_AS(load_clip(dir.path / "missing.raw"), Error);
  CHECK_THROWS_AS(parse_video_format("avi"), Error);
}

TEST_CASE("gray and white map to neutral chroma and full luma") {
  const Yuv g = rgb_to_yuv({0.5, 0.5, 0.5});
  CHECK(g.y == doctest::Approx(0.5));
  CHECK(g.u == doctest::Approx(g.v));
  CHECK(rgb_to_yuv({1, 1, 1}).y == doctest::Approx(1.0));
  const VideoClip c = testing::random_clip({2, 8, 8}, 44);
  const VideoClip back = convert_colorspace(convert_colorspace(c, ColorSpace::YUV), ColorSpace::RGB);
  CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 1e-6);
}

TEST_CASE("segment boundaries for common lengths") {
  const VideoClip c8 = testing::random_clip({8, 8, 8}, 1);
  const auto one = tile_temporal(c8, {8});
  REQUIRE(one.size() == 1);
  CHECK(testing::max_abs_diff(one[0].samples(), c8.samples()) == 0.0);
  const auto two = segment_ranges(16, {8});
  REQUIRE(two.size() == 2);
  CHECK(two[1].first == 8);
  CHECK(two[1].count == 8);
  const VideoClip c13 = testing::random_clip({13, 8, 8}, 2);
  const auto tiles = tile_temporal(c13, {8});
  REQUIRE(tiles.size() == 2);
  for (int t = 0; t < 8; ++t) {
    const int src = std::min(8 + t, 12);
    const auto a = tiles[1].frame(t), b = c13.frame(src);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK(testing::max_abs_diff(untile_temporal(tiles, 13).samples(), c13.samples()) == 0.0);
}

TEST_CASE("constant ppm sequence loads as 128/255") {
  testing::TempDir dir("ppm");
  const auto frames = dir.path / "seq";
  std::filesystem::create_directories(frames);
  for (int t = 0; t < 8; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.ppm", t);
    std::ofstream out(frames / name, std::ios::binary);
    out << "P6\n16 16\n255\n" << std::string(16 * 16 * 3, static_cast<char>(128));
  }
  const VideoClip c = load_clip(frames);
  CHECK(c.shape() == ClipShape{8, 16, 16});
  for (double s : c.samples()) CHECK(s == 128.0 / 255.0);
}

TEST_CASE("y4m header dimensions and quantized round trips") {
  testing::TempDir dir("y4m2");
  {
    std::ofstream out(dir.path / "h.y4m", std::ios::binary);
    out << "YUV4MPEG2 W128 H128 F25:1 Ip A1:1 C444\n";
    for (int t = 0; t < 8; ++t) out << "FRAME\n" << std::string(128 * 128 * 3, static_cast<char>(100));
  }
  CHECK(load_clip(dir.path / "h.y4m").shape() == ClipShape{8, 128, 128});

  for (double v : {0.0, 1.0}) {
    const VideoClip c = VideoClip::filled({2, 8, 8}, v);
    for (auto fmt : {VideoFormat::Y4M, VideoFormat::FrameDir, VideoFormat::RawPlanar}) {
      const auto path = dir.path / ("const" + std::to_string(static_cast<int>(fmt)) + (fmt == VideoFormat::Y4M ? ".y4m" : fmt == VideoFormat::RawPlanar ? ".raw" : ""));
      save_clip(c, path, fmt);
      const VideoClip back = convert_colorspace(load_clip(path), ColorSpace::RGB);
      CHECK(testing::max_abs_diff(back.samples(), c.samples()) <= 1e-9);
    }
  }

  // Samples already on 8-bit codes survive save/load bit for bit.
  VideoClip yuv = convert_colorspace(testing::random_clip({3, 10, 12}, 9), ColorSpace::YUV);
  for (double& s : yuv.samples()) s = quantize8(s) / 255.0;
  save_clip(yuv, dir.path / "q.y4m", VideoFormat::Y4M);
  const VideoClip q = load_clip(dir.path / "q.y4m");
  CHECK(q.colorspace() == ColorSpace::YUV);
  CHECK(testing::max_abs_diff(q.samples(), yuv.samples()) == 0.0);

  // Arbitrary samples: within half a code of the stored YUV values.
  const VideoClip raw = convert_colorspace(testing::random_clip({3, 10, 12}, 10), ColorSpace::YUV);
  save_clip(raw, dir.path / "r.y4m", VideoFormat::Y4M);
  CHECK(testing::max_abs_diff(load_clip(dir.path / "r.y4m").samples(), raw.samples()) <= 1.0 / 510.0 + 1e-12);
}
