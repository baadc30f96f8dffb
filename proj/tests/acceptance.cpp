// Acceptance runner: one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "vidmark/detector.hpp"
#include "vidmark/distortion.hpp"
#include "vidmark/eval.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/report.hpp"
#include "vidmark/spread_spectrum.hpp"
#include "vidmark/synth.hpp"
#include "vidmark/wavelet.hpp"

using namespace vidmark;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o, double seconds) {
  const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
  if (o.verdict == Verdict::Fail) ++failures;
  std::printf("criterion %2d %-28s %s  %s  [%.1f s]\n", id, name, tag, o.detail.c_str(), seconds);
  std::fflush(stdout);
}

void run(int id, const char* name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {Verdict::Fail, std::string("exception: ") + e.what()};
  }
  report(id, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

// Mean bit accuracy per distortion kind over non-skipped rows.
std::map<std::string, double> by_kind(const EvalReport& r, const std::string& method = "") {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& row : r.rows) {
    if (row.skipped() || (!method.empty() && row.method != method)) continue;
    acc[row.distortion].first += *row.bit_acc;
    acc[row.distortion].second++;
  }
  std::map<std::string, double> out;
  for (const auto& [k, v] : acc) out[k] = v.first / v.second;
  return out;
}

// The synthetic operating point shared by criteria 3 to 9.
EvalConfig operating_point() {
  EvalConfig cfg;
  cfg.synthetic = SyntheticCorpus{20, {8, 128, 128}, 1};
  cfg.payload = {96};
  cfg.chip_len = 128;
  cfg.psnr_targets = {37.0};
  cfg.seed = 2024;
  cfg.codec = CodecConfig::from_environment();
  return cfg;
}

bool have_codec() { return codec_available(CodecConfig::from_environment()); }

// The four-distortion panel. Without an encoder the codec slot is filled by
// the deterministic JPEG proxy.
std::vector<DistortionSpec> panel() {
  std::vector<DistortionSpec> p = panel_distortions();
  if (!have_codec()) {
    for (auto& d : p)
      if (std::holds_alternative<attack::ExternalCodec>(d.attack)) d = parse_distortion("jpeg:50");
  }
  return p;
}

std::string panel_note() { return have_codec() ? "panel h264/crop/drop/noise" : "panel jpeg50(no encoder)/crop/drop/noise"; }

double panel_mean(const std::map<std::string, double>& kinds) {
  double s = 0;
  for (const auto& [k, v] : kinds) s += v;
  return s / kinds.size();
}

double auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0;
  for (double p : pos)
    for (double n : neg) wins += p > n ? 1.0 : p == n ? 0.5 : 0.0;
  return wins / (static_cast<double>(pos.size()) * neg.size());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  std::printf("vidmark acceptance run\n");

  run(1, "perfect reconstruction", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const std::array<int, 3> lengths{8, 12, 16};
    double worst = 0.0;
    Rng shapes(1);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int t = lengths[shapes.below(3)];
      const int h = 8 + static_cast<int>(shapes.below(57));
      const int w = 8 + static_cast<int>(shapes.below(57));
      const Volume v = testing::random_volume(t, h, w, seed + 1);
      worst = std::max(worst, testing::max_abs_diff(v.data(), dwt3_inverse(dwt3_forward(v)).data()));
    }
    const double secs = elapsed_since(t0);
    return verdict(worst <= 1e-9 && secs < 10.0, fmt("max error %.3g over 100 clips (<= 1e-9), %.2f s (< 10 s)", worst, secs));
  });

  run(2, "dense oracle equivalence", [] {
    const auto m = oracle::dense_dwt3(8, 8, 8, 3);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Volume v = testing::random_volume(8, 8, 8, 500 + seed);
      const WaveletPyramid p = dwt3_forward(v);
      const auto got = p.coefficients().data();
      for (int i = 0; i < 512; ++i) {
        double e = 0;
        for (int j = 0; j < 512; ++j) e += m[i * 512 + j] * v.data()[j];
        worst = std::max(worst, std::fabs(e - got[i]));
      }
    }
    return verdict(worst <= 1e-9, fmt("max error %.3g over 10 cases (<= 1e-9)", worst));
  });

  // Criteria 3 and 4 share one timed run; 5 and 6 a second one.
  EvalReport clean_noise;
  double clean_noise_secs = 0.0;
  {
    EvalConfig cfg = operating_point();
    cfg.distortions = {parse_distortion("identity"), parse_distortion("noise:0.04")};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      clean_noise = run_matrix(cfg);
    } catch (const std::exception& e) {
      std::printf("operating-point run failed: %s\n", e.what());
    }
    clean_noise_secs = elapsed_since(t0);
  }
  const auto cn = by_kind(clean_noise);

  run(3, "clean round trip", [&] {
    if (!cn.count("Identity")) return Outcome{Verdict::Fail, "no identity rows"};
    double lo = 1e9, hi = -1e9;
    for (const auto& r : clean_noise.rows) {
      lo = std::min(lo, r.psnr);
      hi = std::max(hi, r.psnr);
    }
    const bool psnr_ok = lo >= 36.5 && hi <= 37.5;
    const double acc = cn.at("Identity");
    return verdict(acc >= 0.995 && psnr_ok && clean_noise_secs < 120.0,
                   fmt("identity accuracy %.4f (>= 0.995), PSNR %.2f..%.2f dB (37 +/- 0.5), 20 clips, %.1f s with criterion 4 (< 120 s)",
                       acc, lo, hi, clean_noise_secs));
  });

  run(4, "noise robustness", [&] {
    if (!cn.count("GaussianNoise")) return Outcome{Verdict::Fail, "no noise rows"};
    const double acc = cn.at("GaussianNoise");
    return verdict(acc >= 0.95 && clean_noise_secs < 120.0,
                   fmt("noise 0.04 accuracy %.4f (>= 0.95), %.1f s (< 120 s)", acc, clean_noise_secs));
  });

  EvalReport attacks;
  {
    EvalConfig cfg = operating_point();
    cfg.distortions = {parse_distortion("blur:2"), parse_distortion("crop:0.4"), parse_distortion("drop:0.5"),
                       parse_distortion("swap:0.5")};
    try {
      attacks = run_matrix(cfg);
    } catch (const std::exception& e) {
      std::printf("attack run failed: %s\n", e.what());
    }
  }
  const auto at = by_kind(attacks);

  run(5, "blur robustness", [&] {
    const double acc = at.at("GaussianBlur3D");
    return verdict(acc >= 0.88, fmt("blur sigma 2 accuracy %.4f (>= 0.88)", acc));
  });

  run(6, "weakness ordering", [&] {
    const double crop = at.at("Crop"), drop = at.at("FrameDrop"), swap = at.at("FrameSwap");
    const double noise = cn.at("GaussianNoise");
    const double g1 = (noise - crop) * 100.0, g2 = (swap - drop) * 100.0;
    return verdict(g1 >= 5.0 && g2 >= 5.0,
                   fmt("crop %.4f vs noise %.4f (gap %.1f pts), drop %.4f vs swap %.4f (gap %.1f pts), both >= 5", crop,
                       noise, g1, drop, swap, g2));
  });

  run(7, "trade-off monotonicity", [] {
    EvalConfig cfg = operating_point();
    cfg.psnr_targets = {36.0, 36.75, 37.5, 38.25, 39.0};
    cfg.distortions = panel();
    const EvalReport r = sweep_alpha(cfg);
    std::vector<std::pair<double, double>> curve;  // (mean psnr, panel mean accuracy)
    for (double target : cfg.psnr_targets) {
      const std::string method = fmt("dwt3ss:psnr=%g", target);
      double psnr_sum = 0;
      int n = 0;
      for (const auto& row : r.rows)
        if (row.method == method) {
          psnr_sum += row.psnr;
          ++n;
        }
      curve.push_back({psnr_sum / n, panel_mean(by_kind(r, method))});
    }
    std::sort(curve.begin(), curve.end());
    int inversions = 0;
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      const double rise = (curve[i].second - curve[i - 1].second) * 100.0;
      if (rise > 0) {
        ++inversions;
        worst = std::max(worst, rise);
      }
    }
    std::string pts;
    for (const auto& [p, a] : curve) pts += fmt(" %.2fdB:%.4f", p, a);
    return verdict(curve.front().first < 36.5 && curve.back().first > 38.5 &&
                       (inversions == 0 || (inversions == 1 && worst <= 0.5)),
                   fmt("%s;%s; inversions %d (max %.2f pts)", panel_note().c_str(), pts.c_str(), inversions, worst));
  });

  run(8, "payload trade-off", [] {
    EvalConfig cfg = operating_point();
    cfg.synthetic->count = 100;
    cfg.payload = {64, 128};
    cfg.distortions = panel();
    const EvalReport r = sweep_payload(cfg);
    double worst_psnr = 0.0;
    std::map<int, std::map<std::string, std::pair<double, int>>> acc;
    for (const auto& row : r.rows) {
      worst_psnr = std::max(worst_psnr, std::fabs(row.psnr - 37.0));
      if (row.skipped()) continue;
      acc[row.payload][row.distortion].first += *row.bit_acc;
      acc[row.payload][row.distortion].second++;
    }
    auto mean = [&](int m) {
      double s = 0;
      for (const auto& [k, v] : acc[m]) s += v.first / v.second;
      return s / acc[m].size();
    };
    const double a64 = mean(64), a128 = mean(128);
    const double gap = (a64 - a128) * 100.0;
    return verdict(gap >= 2.0 && worst_psnr <= 0.25,
                   fmt("%s; m=64 %.4f vs m=128 %.4f (gap %.2f pts >= 2, 100 clips), max |PSNR-37| %.3f dB (<= 0.25)",
                       panel_note().c_str(), a64, a128, gap, worst_psnr));
  });

  run(9, "detector separation", [] {
    KeySpec spec;
    spec.seed = 7;
    spec.payload = 96;
    spec.chip_len = 128;
    const WatermarkKey key = gen_key(spec, 8, 128, 128);
    const NullModel null = calibrate_null(key, synth_corpus(40, {8, 128, 128}, 0x9A11));
    const auto covers = synth_corpus(100, {8, 128, 128}, 0x9B22);
    std::vector<double> pos, neg, pos_n, neg_n;
    for (int i = 0; i < 100; ++i) {
      const VideoClip& c = covers[i];
      const Message msg = Message::random(96, i);
      const VideoClip wm = embed(c, msg, key, 0.046);
      pos.push_back(extract(wm, key, &null).detection);
      neg.push_back(extract(c, key, &null).detection);
      const auto noisy = [&](const VideoClip& v) { return apply(v, parse_distortion("noise:0.04", 1000 + i)); };
      pos_n.push_back(extract(noisy(wm), key, &null).detection);
      neg_n.push_back(extract(noisy(c), key, &null).detection);
    }
    const double a0 = auc(pos, neg), a1 = auc(pos_n, neg_n);
    return verdict(a0 >= 0.99 && a1 >= 0.9, fmt("AUC clean %.4f (>= 0.99), noise 0.04 %.4f (>= 0.9), 100+100 windows", a0, a1));
  });

  run(10, "editing application", [] {
    const auto t0 = std::chrono::steady_clock::now();
    EvalConfig cfg = operating_point();
    cfg.backgrounds = {60, 120, 240};
    cfg.editing_repeats = 5;
    const EvalReport r = run_editing_app(cfg);
    const double secs = elapsed_since(t0);
    std::map<int, std::pair<double, double>> acc;  // length -> (with, without)
    std::map<int, int> n;
    for (const auto& row : r.rows) {
      const int len = static_cast<int>(row.strength);
      if (row.method == "editing/with-detector") {
        acc[len].first += *row.bit_acc;
        n[len]++;
      } else if (row.method == "editing/without-detector") {
        acc[len].second += *row.bit_acc;
      }
    }
    std::vector<double> gaps;
    std::string pts;
    for (int len : cfg.backgrounds) {
      const double w = acc[len].first / n[len], wo = acc[len].second / n[len];
      gaps.push_back((w - wo) * 100.0);
      pts += fmt(" T=%d %.4f/%.4f", len, w, wo);
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) nondecreasing &= gaps[i] >= gaps[i - 1];
    return verdict(gaps.back() >= 10.0 && nondecreasing && secs < 300.0,
                   fmt("with/without:%s; gap at 240 %.1f pts (>= 10), non-decreasing %s, %.1f s (< 300 s)", pts.c_str(),
                       gaps.back(), nondecreasing ? "yes" : "no", secs));
  });

  run(11, "equal-probability sampling", [] {
    const auto pool = default_attack_pool();
    std::vector<int> counts(pool.size(), 0);
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const DistortionSpec d = sample_random(pool, s);
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (d.kind() == pool[i].kind() && d.strength() == pool[i].strength()) counts[i]++;
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
    // Upper 1% point of chi-square with 9 degrees of freedom.
    return verdict(pool.size() == 10 && chi2 < 21.666, fmt("chi-square %.2f over 10k draws, 9 dof (p > 0.01 iff < 21.67)", chi2));
  });

  run(12, "metric oracles", [] {
    const VideoClip a = VideoClip::filled({4, 32, 32}, 0.5);
    VideoClip b = a;
    for (double& s : b.samples()) s += 1.0 / 255.0;
    const double p = psnr(a, b);
    const VideoClip r = testing::random_clip({3, 32, 32}, 12);
    const double self = mssim(r, r);
    double worst_psnr = 0, worst_ssim = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const VideoClip x = synth_clip({2, 32, 40}, 70 + seed);
      const VideoClip y = apply(x, parse_distortion("noise:0.03", seed));
      worst_psnr = std::max(worst_psnr, std::fabs(psnr(x, y) - oracle::psnr(x, y)));
      const Volume lx = luma(x), ly = luma(y);
      double expect = 0;
      for (int t = 0; t < 2; ++t) {
        const std::size_t plane = 32 * 40;
        std::vector<double> px(lx.data().begin() + t * plane, lx.data().begin() + (t + 1) * plane);
        std::vector<double> py(ly.data().begin() + t * plane, ly.data().begin() + (t + 1) * plane);
        expect += oracle::ssim_plane(px, py, 32, 40) / 2;
      }
      worst_ssim = std::max(worst_ssim, std::fabs(mssim(x, y) - expect));
    }
    const bool ok = std::fabs(p - 48.1308036) <= 1e-6 && std::fabs(self - 1.0) <= 1e-9 && worst_psnr <= 1e-9 &&
                    worst_ssim <= 1e-9;
    return verdict(ok, fmt("offset PSNR %.7f dB, MSSIM(x,x) %.12f, oracle gaps psnr %.2g mssim %.2g", p, self,
                           worst_psnr, worst_ssim));
  });

  run(13, "external H.264 (CRF 22)", [] {
    if (!have_codec()) return Outcome{Verdict::Skip, "no H.264 encoder on PATH (set VIDMARK_CODEC_CMD to enable)"};
    EvalConfig cfg = operating_point();
    cfg.distortions = {parse_distortion("h264:22")};
    cfg.codec_strict = true;
    const EvalReport r = run_matrix(cfg);
    const auto k = by_kind(r);
    if (!k.count("ExternalCodec")) return Outcome{Verdict::Fail, "codec cell produced no accuracy"};
    return Outcome{Verdict::Pass, fmt("accuracy %.4f over %zu clips (reported only)", k.at("ExternalCodec"), r.rows.size())};
  });

  run(14, "determinism", [] {
    testing::TempDir dir("determinism");
    EvalConfig cfg;
    cfg.synthetic = SyntheticCorpus{2, {8, 64, 64}, 9};
    cfg.payload = {24};
    cfg.repeats = 2;
    cfg.seed = 99;
    cfg.distortions = {parse_distortion("noise:0.04"), parse_distortion("drop:0.5"), parse_distortion("crop:0.4"),
                       parse_distortion("h264:22")};
    cfg.lengths = {8, 13};
    cfg.resolutions = {{64, 64}};
    cfg.backgrounds = {60};
    cfg.editing_repeats = 1;
    cfg.null_windows = 20;
    std::vector<std::string> mismatched;
    const std::map<std::string, std::function<void(const EvalConfig&)>> commands = {
        {"matrix", [](const EvalConfig& c) { run_matrix(c); }},
        {"alpha", [](const EvalConfig& c) { sweep_alpha(c); }},
        {"payload", [](const EvalConfig& c) { sweep_payload(c); }},
        {"dims", [](const EvalConfig& c) { sweep_dimensions(c); }},
        {"editing", [](const EvalConfig& c) { run_editing_app(c); }},
    };
    for (const auto& [name, fn] : commands) {
      EvalConfig c = cfg;
      c.csv_path = (dir.path / (name + "-a.csv")).string();
      fn(c);
      c.csv_path = (dir.path / (name + "-b.csv")).string();
      fn(c);
      const std::string a = slurp((dir.path / (name + "-a.csv")).string());
      if (a.empty() || a != slurp(c.csv_path)) mismatched.push_back(name);
    }
    std::string which;
    for (const auto& m : mismatched) which += " " + m;
    return verdict(mismatched.empty(), mismatched.empty() ? "matrix, alpha, payload, dims, editing CSVs byte-identical on re-run"
                                                         : "differs:" + which);
  });

  std::printf("%s: %d criterion failure(s)\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
