#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "vidmark/error.hpp"
#include "vidmark/eval.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/spread_spectrum.hpp"
#include "vidmark/report.hpp"

using namespace vidmark;
using nlohmann::json;

namespace {

ReportRow sample_row() {
  ReportRow r;
  r.method = "dwt3ss:psnr=37";
  r.alpha = 0.0461234;
  r.payload = 96;
  r.distortion = "GaussianNoise";
  r.strength = 0.04;
  r.clip = "dir/a,b \"c\".y4m";
  r.seed = 18446744073709551615ull;
  r.bit_acc = 0.9895833333;
  r.psnr = 37.01;
  r.mssim = 0.991;
  r.tpsnr = std::numeric_limits<double>::infinity();
  r.det_score = 0.75;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

EvalConfig tiny_config(const std::filesystem::path& dir) {
  EvalConfig cfg;
  cfg.synthetic = SyntheticCorpus{2, {8, 64, 64}, 3};
  cfg.payload = {24};
  cfg.distortions = {parse_distortion("identity"), parse_distortion("noise:0.04"), parse_distortion("h264:22")};
  cfg.codec.command = "no-such-encoder-xyz {in} {out}";
  cfg.csv_path = (dir / "out.csv").string();
  cfg.seed = 4;
  return cfg;
}

}  // namespace

TEST_CASE("csv rows round trip with quoting, infinity and skips") {
  ReportRow skipped = sample_row();
  skipped.bit_acc.reset();
  skipped.det_score.reset();
  const std::string text = to_csv({sample_row(), skipped});
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("SKIPPED") != std::string::npos);
  CHECK(text.find(",inf,") != std::string::npos);
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].clip == sample_row().clip);
  CHECK(rows[0].seed == sample_row().seed);
  CHECK(*rows[0].bit_acc == doctest::Approx(0.9895833333));
  CHECK(std::isinf(rows[0].tpsnr));
  CHECK(rows[1].skipped());
  CHECK(to_csv(rows) == text);
  CHECK_THROWS_AS(parse_csv("a,b,c\n1,2,3\n"), Error);
}

TEST_CASE("json rows round trip") {
  ReportRow r = sample_row();
  r.extra = {{"iou", 0.9}};
  const ReportRow back = row_from_json(to_json(r));
  CHECK(back.key() == r.key());
  CHECK(std::isinf(back.tpsnr));
  CHECK(back.extra["iou"] == 0.9);
  EvalReport report;
  report.command = "matrix";
  report.rows = {r, r};
  const EvalReport again = report_from_json(to_json(report));
  CHECK(again.rows.size() == 2);
  CHECK(again.command == "matrix");
}

TEST_CASE("aggregates and histograms") {
  EvalReport report;
  for (double acc : {1.0, 0.9, 0.8}) {
    ReportRow r = sample_row();
    r.bit_acc = acc;
    report.rows.push_back(r);
  }
  ReportRow s = sample_row();
  s.distortion = "ExternalCodec";
  s.bit_acc.reset();
  report.rows.push_back(s);
  const auto aggs = report.aggregates();
  REQUIRE(aggs.size() == 2);
  const Aggregate& noise = aggs[0].distortion == "GaussianNoise" ? aggs[0] : aggs[1];
  const Aggregate& codec = aggs[0].distortion == "GaussianNoise" ? aggs[1] : aggs[0];
  CHECK(noise.n == 3);
  CHECK(noise.mean == doctest::Approx(0.9));
  CHECK(noise.std == doctest::Approx(0.1));
  CHECK(codec.skipped == 1);
  const auto h = histogram({0.0, 0.5, 1.0, 1.0});
  CHECK(h.size() == 20u);
  CHECK(h[0] == 1);
  CHECK(h[10] == 1);
  CHECK(h[19] == 2);
}

TEST_CASE("config parsing") {
  const EvalConfig cfg = EvalConfig::from_json(json{{"payload", {32, 64}}, {"distortions", {"noise:0.02"}}, {"csv", "x.csv"}});
  CHECK(cfg.payload.size() == 2);
  CHECK(cfg.distortions.front().strength() == 0.02);
  CHECK(cfg.csv_path == "x.csv");
  const EvalConfig back = EvalConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  auto code_of = [](const json& j) {
    try {
      EvalConfig::from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  CHECK(code_of(json{{"mystery", 1}}) == Errc::ConfigInvalid);
  CHECK(code_of(json{{"repeats", "many"}}) == Errc::ConfigInvalid);
  CHECK(code_of(json{{"distortions", {"warp:2"}}}) == Errc::ConfigInvalid);
  CHECK(code_of(json{{"alpha", {-1.0}}}) == Errc::ConfigInvalid);
}

TEST_CASE("tuned alpha lands on the psnr target") {
  const auto clips = load_corpus(EvalConfig{});
  REQUIRE(clips.size() == 20);
  CHECK(clips[3].id == "synth-0003");
  KeySpec spec;
  spec.seed = 2;
  spec.payload = 96;
  const AlphaFit fit = tune_alpha(clips[0].clip, Message::random(96, 1), spec, {8}, 37.0);
  CHECK(std::fabs(fit.psnr - 37.0) <= 0.25);
  CHECK(fit.alpha > 0.0);
}

TEST_CASE("tuned psnr matches the measured psnr in either colour space") {
  KeySpec spec;
  spec.seed = 2;
  spec.payload = 96;
  const Message msg = Message::random(96, 1);
  const VideoClip rgb = testing::random_clip({16, 128, 128}, 9);
  for (const VideoClip& cover : {rgb, convert_colorspace(rgb, ColorSpace::YUV)}) {
    const AlphaFit fit = tune_alpha(cover, msg, spec, {8}, 37.0);
    const VideoClip wm = embed_segments(cover, msg, spec, fit.alpha, {8});
    CHECK(psnr(cover, wm) == doctest::Approx(fit.psnr).epsilon(1e-9));
    CHECK(std::fabs(psnr(cover, wm) - 37.0) <= 0.25);
  }
}

TEST_CASE("matrix runs are deterministic, skip missing codecs and resume") {
  testing::TempDir dir("matrix");
  EvalConfig cfg = tiny_config(dir.path);
  const EvalReport first = run_matrix(cfg);
  CHECK(first.rows.size() == 6);
  int skipped = 0;
  for (const auto& r : first.rows) skipped += r.skipped();
  CHECK(skipped == 2);
  CHECK(first.flags["codec"].get<std::string>().rfind("unavailable", 0) == 0);
  const std::string csv = slurp(cfg.csv_path);
  CHECK_FALSE(std::filesystem::exists(cfg.csv_path + ".partial"));

  run_matrix(cfg);
  CHECK(slurp(cfg.csv_path) == csv);

  // An interrupted run: header, two finished rows and a torn line.
  {
    std::ofstream p(cfg.csv_path + ".partial");
    p << json{{"command", "matrix"}, {"config", cfg.to_json()}}.dump() << '\n';
    p << to_json(first.rows[0]).dump() << '\n' << to_json(first.rows[1]).dump() << '\n';
    p << "{\"method\": \"dwt3";
  }
  std::filesystem::remove(cfg.csv_path);
  run_matrix(cfg);
  CHECK(slurp(cfg.csv_path) == csv);

  {
    std::ofstream p(cfg.csv_path + ".partial");
    p << json{{"command", "alpha"}, {"config", cfg.to_json()}}.dump() << '\n';
  }
  CHECK_THROWS_AS(run_matrix(cfg), Error);
  std::filesystem::remove(cfg.csv_path + ".partial");

  cfg.codec_strict = true;
  try {
    run_matrix(cfg);
    FAIL("expected CodecUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CodecUnavailable);
  }
}

TEST_CASE("json output mirrors csv rows") {
  testing::TempDir dir("json");
  EvalConfig cfg = tiny_config(dir.path);
  cfg.csv_path.clear();
  cfg.json_path = (dir.path / "out.json").string();
  cfg.distortions = {parse_distortion("identity")};
  run_matrix(cfg);
  const EvalReport loaded = load_report(cfg.json_path);
  CHECK(loaded.command == "matrix");
  CHECK(loaded.rows.size() == 2);
  CHECK(loaded.config["payload"][0] == 24);
}

TEST_CASE("corpus errors") {
  EvalConfig cfg;
  cfg.synthetic.reset();
  cfg.corpus = {"/nonexistent/dir/*.y4m"};
  CHECK_THROWS_AS(load_corpus(cfg), Error);
  EvalConfig fixed;
  fixed.chip_len = 128;
  CHECK_THROWS_AS(key_for(fixed, 97, 128, 128), Error);
  CHECK(key_for(EvalConfig{}, 200, 128, 128).chip_len == 61);
}
