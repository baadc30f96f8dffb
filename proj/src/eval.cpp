#include "vidmark/eval.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "vidmark/detector.hpp"
#include "vidmark/error.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/rng.hpp"
#include "vidmark/video_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace vidmark {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_name(const DistortionSpec& d) { return d.kind() + ":" + fmt(d.strength()); }

}  // namespace

// ---------------------------------------------------------------- config

json EvalConfig::to_json() const {
  json dist = json::array();
  for (const auto& d : distortions) dist.push_back(vidmark::to_json(d));
  json res = json::array();
  for (auto [h, w] : resolutions) res.push_back({h, w});
  json j = {{"corpus", corpus},
            {"key_seed", key_seed},
            {"key_path", key_path},
            {"alpha", alpha},
            {"psnr_targets", psnr_targets},
            {"psnr_tolerance", psnr_tolerance},
            {"bisection_iterations", bisection_iterations},
            {"payload", payload},
            {"chip_len", chip_len},
            {"distortions", dist},
            {"repeats", repeats},
            {"seed", seed},
            {"tile", {{"segment_len", tile.segment_len}}},
            {"lengths", lengths},
            {"resolutions", res},
            {"backgrounds", backgrounds},
            {"background_size", {background_size.first, background_size.second}},
            {"editing_repeats", editing_repeats},
            {"null_windows", null_windows},
            {"window_len", window_len},
            {"stride", stride},
            {"threshold", threshold},
            {"csv", csv_path},
            {"json", json_path},
            {"timing", timing},
            {"threads", threads},
            {"codec", {{"command", codec.command}, {"strict", codec_strict}}}};
  if (synthetic) {
    j["synthetic"] = {{"count", synthetic->count},
                      {"frames", synthetic->shape.frames},
                      {"height", synthetic->shape.height},
                      {"width", synthetic->shape.width},
                      {"seed", synthetic->seed}};
  } else {
    j["synthetic"] = nullptr;
  }
  return j;
}

EvalConfig EvalConfig::from_json(const json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known = {
      "corpus",   "synthetic",    "key_seed",  "key_path", "alpha",       "psnr_targets",    "psnr_tolerance",
      "bisection_iterations",     "payload",   "chip_len", "distortions", "repeats",         "seed",
      "tile",     "lengths",      "resolutions", "backgrounds", "background_size", "editing_repeats",
      "null_windows", "window_len", "stride",  "threshold", "csv",        "json",            "timing",
      "threads",  "codec"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) config_error("unknown config key '" + k + "'");
  }
  EvalConfig c;
  try {
    auto num_list = [](const json& v) {
      return v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    };
    auto int_list = [](const json& v) {
      return v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
    };
    if (j.contains("corpus")) {
      const auto& v = j.at("corpus");
      c.corpus = v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
    }
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      if (s.is_null()) {
        c.synthetic.reset();
      } else {
        SyntheticCorpus sc;
        sc.count = s.value("count", sc.count);
        sc.shape.frames = s.value("frames", sc.shape.frames);
        sc.shape.height = s.value("height", sc.shape.height);
        sc.shape.width = s.value("width", sc.shape.width);
        sc.seed = s.value("seed", sc.seed);
        c.synthetic = sc;
      }
    }
    c.key_seed = j.value("key_seed", c.key_seed);
    c.key_path = j.value("key_path", c.key_path);
    if (j.contains("alpha")) c.alpha = num_list(j.at("alpha"));
    if (j.contains("psnr_targets")) c.psnr_targets = num_list(j.at("psnr_targets"));
    c.psnr_tolerance = j.value("psnr_tolerance", c.psnr_tolerance);
    c.bisection_iterations = j.value("bisection_iterations", c.bisection_iterations);
    if (j.contains("payload")) c.payload = int_list(j.at("payload"));
    c.chip_len = j.value("chip_len", c.chip_len);
    if (j.contains("distortions")) {
      for (const auto& d : j.at("distortions")) {
        c.distortions.push_back(d.is_string() ? parse_distortion(d.get<std::string>()) : distortion_from_json(d));
      }
    }
    c.repeats = j.value("repeats", c.repeats);
    c.seed = j.value("seed", c.seed);
    if (j.contains("tile")) c.tile.segment_len = j.at("tile").value("segment_len", c.tile.segment_len);
    if (j.contains("lengths")) c.lengths = int_list(j.at("lengths"));
    if (j.contains("resolutions")) {
      c.resolutions.clear();
      for (const auto& r : j.at("resolutions")) {
        if (!r.is_array() || r.size() != 2) config_error("resolutions entries must be [height, width]");
        c.resolutions.emplace_back(r[0].get<int>(), r[1].get<int>());
      }
    }
    if (j.contains("backgrounds")) c.backgrounds = int_list(j.at("backgrounds"));
    if (j.contains("background_size")) {
      const auto& r = j.at("background_size");
      if (!r.is_array() || r.size() != 2) config_error("background_size must be [height, width]");
      c.background_size = {r[0].get<int>(), r[1].get<int>()};
    }
    c.editing_repeats = j.value("editing_repeats", c.editing_repeats);
    c.null_windows = j.value("null_windows", c.null_windows);
    c.window_len = j.value("window_len", c.window_len);
    c.stride = j.value("stride", c.stride);
    c.threshold = j.value("threshold", c.threshold);
    c.csv_path = j.value("csv", c.csv_path);
    c.json_path = j.value("json", c.json_path);
    c.timing = j.value("timing", c.timing);
    c.threads = j.value("threads", c.threads);
    if (j.contains("codec")) {
      c.codec.command = j.at("codec").value("command", c.codec.command);
      c.codec_strict = j.at("codec").value("strict", c.codec_strict);
    }
  } catch (const json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    config_error(e.what());
  }
  c.validate();
  return c;
}

void EvalConfig::validate() const {
  if (corpus.empty() && !synthetic) config_error("no corpus: give clip paths or a synthetic corpus");
  if (synthetic) {
    if (synthetic->count < 1) config_error("synthetic.count must be >= 1");
    try {
      validate_shape(synthetic->shape);
    } catch (const Error& e) {
      config_error(std::string("synthetic shape: ") + e.what());
    }
  }
  if (alpha.empty() && psnr_targets.empty()) config_error("need alpha values or psnr_targets");
  for (double a : alpha)
    if (!(a >= 0.0) || !std::isfinite(a)) config_error("alpha must be finite and >= 0");
  if (!(psnr_tolerance > 0.0)) config_error("psnr_tolerance must be > 0");
  if (bisection_iterations < 1) config_error("bisection_iterations must be >= 1");
  if (payload.empty()) config_error("payload list is empty");
  for (int m : payload)
    if (m < 1) config_error("payload must be >= 1");
  if (chip_len < 0) config_error("chip_len must be >= 0");
  if (repeats < 1) config_error("repeats must be >= 1");
  if (tile.segment_len < 2) config_error("tile.segment_len must be >= 2");
  if (lengths.empty()) config_error("lengths list is empty");
  for (int t : lengths)
    if (t < 1) config_error("lengths must be >= 1");
  if (resolutions.empty()) config_error("resolutions list is empty");
  for (auto [h, w] : resolutions)
    if (h < VideoClip::kMinSide || w < VideoClip::kMinSide) config_error("resolution below 8x8");
  if (backgrounds.empty()) config_error("backgrounds list is empty");
  for (int t : backgrounds)
    if (t < std::max(kInsertFrames, window_len)) config_error("background length shorter than the inserted run");
  if (background_size.first < kMinBackgroundHeight || background_size.second < kMinBackgroundWidth) {
    config_error("background_size below 240x462");
  }
  if (editing_repeats < 1) config_error("editing_repeats must be >= 1");
  if (null_windows < kMinNullSamples) config_error("null_windows must be >= 20");
  if (window_len < 2 || stride < 1) config_error("window_len must be >= 2 and stride >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) config_error("threshold must lie in [0, 1]");
  if (threads < 0) config_error("threads must be >= 0");
  for (const auto& d : distortions) {
    try {
      vidmark::validate(d);
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
}

EvalConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config " + path.string());
  try {
    return EvalConfig::from_json(json::parse(in));
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
}

std::vector<DistortionSpec> matrix_distortions() {
  std::vector<DistortionSpec> out;
  for (const char* s : {"identity", "h264:22", "average:3", "drop:0.5", "swap:0.5", "blur:2", "noise:0.04", "crop:0.4",
                        "hue:1"}) {
    out.push_back(parse_distortion(s));
  }
  return out;
}

std::vector<DistortionSpec> panel_distortions() {
  std::vector<DistortionSpec> out;
  for (const char* s : {"h264:22", "crop:0.5", "drop:0.5", "noise:0.04"}) out.push_back(parse_distortion(s));
  return out;
}

// ---------------------------------------------------------------- corpus

namespace {

std::vector<fs::path> expand(const std::string& pattern) {
  const fs::path p(pattern);
  const std::string name = p.filename().string();
  if (name.find_first_of("*?[") == std::string::npos) return {p};
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<CorpusClip> load_corpus(const EvalConfig& cfg) {
  std::vector<CorpusClip> out;
  if (!cfg.corpus.empty()) {
    for (const auto& pattern : cfg.corpus) {
      for (const auto& path : expand(pattern)) {
        if (!fs::exists(path)) continue;
        if (path.extension() == ".json" && fs::exists(fs::path(path).replace_extension(""))) continue;
        out.push_back({path.stem().string(), convert_colorspace(load_clip(path), ColorSpace::RGB)});
      }
    }
  } else if (cfg.synthetic) {
    for (int i = 0; i < cfg.synthetic->count; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "synth-%04d", i);
      out.push_back({id, synth_clip(cfg.synthetic->shape, derive_seed(cfg.synthetic->seed, 0xC0, i))});
    }
  }
  if (out.empty()) throw Error(Errc::CorpusEmpty, "corpus matched no clips");
  return out;
}

VideoClip resample_clip(const VideoClip& clip, int frames, int height, int width) {
  validate_shape({frames, height, width});
  VideoClip out({frames, height, width}, clip.colorspace(), clip.frame_rate());
  const double sy = static_cast<double>(clip.height()) / height;
  const double sx = static_cast<double>(clip.width()) / width;
  for (int t = 0; t < frames; ++t) {
    const int src_t = t % clip.frames();
    for (int y = 0; y < height; ++y) {
      const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, clip.height() - 1.0);
      const int y0 = static_cast<int>(fy);
      const int y1 = std::min(y0 + 1, clip.height() - 1);
      const double wy = fy - y0;
      for (int x = 0; x < width; ++x) {
        const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, clip.width() - 1.0);
        const int x0 = static_cast<int>(fx);
        const int x1 = std::min(x0 + 1, clip.width() - 1);
        const double wx = fx - x0;
        for (int c = 0; c < 3; ++c) {
          const double top = (1 - wx) * clip.at(src_t, y0, x0, c) + wx * clip.at(src_t, y0, x1, c);
          const double bottom = (1 - wx) * clip.at(src_t, y1, x0, c) + wx * clip.at(src_t, y1, x1, c);
          out.at(t, y, x, c) = (1 - wy) * top + wy * bottom;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- strength

AlphaFit tune_alpha(const VideoClip& cover, const Message& msg, const KeySpec& spec, const TileLayout& layout,
                    double target_db, double tolerance, int max_iterations) {
  // R does not depend on alpha, so build it once and only rescale.
  EmbedOptions raw;
  raw.clamp = false;
  const VideoClip unit = embed_segments(cover, msg, spec, 1.0, layout, raw);
  // Clamp where embed clamps (the clip's own colour space), measure where
  // psnr() measures (RGB).
  const auto c = cover.samples();
  const auto u = unit.samples();
  const bool yuv = cover.colorspace() == ColorSpace::YUV;
  const auto rgb = [yuv](double a, double b, double d) { return yuv ? yuv_to_rgb({a, b, d}) : Rgb{a, b, d}; };
  auto psnr_at = [&](double alpha) {
    double sse = 0.0;
    for (std::size_t i = 0; i < c.size(); i += 3) {
      double v[3];
      for (int k = 0; k < 3; ++k) v[k] = std::clamp(c[i + k] + alpha * (u[i + k] - c[i + k]), 0.0, 1.0);
      const Rgb x = rgb(c[i], c[i + 1], c[i + 2]);
      const Rgb y = rgb(v[0], v[1], v[2]);
      sse += (y.r - x.r) * (y.r - x.r) + (y.g - x.g) * (y.g - x.g) + (y.b - x.b) * (y.b - x.b);
    }
    return sse > 0.0 ? 10.0 * std::log10(static_cast<double>(c.size()) / sse) : kInfiniteDb;
  };

  double lo = std::log(1e-5), hi = std::log(4.0);
  AlphaFit fit;
  for (fit.iterations = 1; fit.iterations <= max_iterations; ++fit.iterations) {
    const double mid = 0.5 * (lo + hi);
    fit.alpha = std::exp(mid);
    fit.psnr = psnr_at(fit.alpha);
    if (std::fabs(fit.psnr - target_db) <= tolerance) break;
    (fit.psnr > target_db ? lo : hi) = mid;
  }
  fit.iterations = std::min(fit.iterations, max_iterations);
  return fit;
}

KeySpec key_for(const EvalConfig& cfg, int payload, int height, int width) {
  KeySpec spec;
  if (!cfg.key_path.empty()) spec = load_key(cfg.key_path);
  else spec.seed = cfg.key_seed;
  spec.payload = payload;
  const std::size_t slots =
      embedding_slot_count(cfg.tile.segment_len, height, width, spec.level, spec.levels, static_cast<int>(spec.bands.size()));
  spec.chip_len = cfg.chip_len > 0 ? cfg.chip_len : static_cast<int>(slots / static_cast<std::size_t>(payload));
  if (spec.chip_len < 1 || static_cast<std::size_t>(spec.chip_len) * payload > slots) {
    throw Error(Errc::PayloadTooLarge, "payload " + std::to_string(payload) + " x chip_len " +
                                           std::to_string(std::max(spec.chip_len, 1)) + " exceeds " +
                                           std::to_string(slots) + " slots");
  }
  return spec;
}

// ---------------------------------------------------------------- runner

namespace {

struct OpPoint {
  std::string label;
  std::optional<double> alpha;
  std::optional<double> target;
};

std::vector<OpPoint> operating_points(const EvalConfig& cfg) {
  std::vector<OpPoint> out;
  if (!cfg.alpha.empty()) {
    for (double a : cfg.alpha) out.push_back({"alpha=" + fmt(a), a, std::nullopt});
  } else {
    for (double t : cfg.psnr_targets) out.push_back({"psnr=" + fmt(t), std::nullopt, t});
  }
  return out;
}

double pick_alpha(const EvalConfig& cfg, const OpPoint& op, const VideoClip& cover, const Message& msg,
                  const KeySpec& spec) {
  if (op.alpha) return *op.alpha;
  return tune_alpha(cover, msg, spec, cfg.tile, *op.target, cfg.psnr_tolerance, cfg.bisection_iterations).alpha;
}

Message clip_message(const EvalConfig& cfg, int clip_index, int payload) {
  return Message::random(payload, derive_seed(cfg.seed, 0x11, clip_index, payload));
}

std::uint64_t cell_seed(const EvalConfig& cfg, const DistortionSpec& d, int clip_index, int repeat) {
  return derive_seed(cfg.seed, fnv1a(cell_name(d)), clip_index, repeat);
}

// Collects rows, resumes from and appends to the partial file.
class RowStore {
 public:
  RowStore(const EvalConfig& cfg, const std::string& command) {
    const std::string base = !cfg.csv_path.empty() ? cfg.csv_path : cfg.json_path;
    if (base.empty()) return;
    partial_ = base + ".partial";
    const json header = {{"command", command}, {"config", cfg.to_json()}};
    if (fs::exists(partial_)) {
      std::ifstream in(partial_);
      std::string line;
      if (std::getline(in, line)) {
        json first;
        try {
          first = json::parse(line);
        } catch (const json::exception&) {
        }
        if (first != header) {
          throw Error(Errc::ConfigInvalid, partial_ + " belongs to a different run; delete it to start over");
        }
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          try {
            ReportRow r = row_from_json(json::parse(line));
            done_.emplace(r.key(), std::move(r));
          } catch (const std::exception&) {
            break;  // a torn last line from an interrupted write
          }
        }
      }
      in.close();
      // Rewrite so a torn tail does not linger.
      std::ofstream out(partial_, std::ios::trunc);
      out << header.dump() << '\n';
      for (const auto& [k, r] : done_) out << to_json(r).dump() << '\n';
    } else {
      std::ofstream out(partial_, std::ios::trunc);
      if (!out) throw Error(Errc::IoFailure, "cannot write " + partial_);
      out << header.dump() << '\n';
    }
  }

  const ReportRow* find(const std::string& key) const {
    auto it = done_.find(key);
    return it == done_.end() ? nullptr : &it->second;
  }

  void add(const ReportRow& row, const Progress& progress) {
    std::lock_guard lock(mu_);
    if (!partial_.empty()) {
      std::ofstream out(partial_, std::ios::app);
      out << to_json(row).dump() << '\n';
    }
    if (progress) progress(row);
  }

  void finish() const {
    if (!partial_.empty()) {
      std::error_code ec;
      fs::remove(partial_, ec);
    }
  }

 private:
  std::string partial_;
  std::map<std::string, ReportRow> done_;
  std::mutex mu_;
};

// A unit of work yields a fixed, pre-keyed list of rows. When every key is
// already in the store the unit is not run.
struct Unit {
  std::vector<ReportRow> skeleton;  // keys filled in, values pending
  std::function<std::vector<ReportRow>()> run;
};

std::vector<ReportRow> execute(std::vector<Unit>& units, RowStore& store, const Progress& progress, int threads) {
  std::vector<std::vector<ReportRow>> results(units.size());
  std::vector<std::exception_ptr> errors(units.size());
#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#else
  const int workers = 1;
  (void)threads;
#endif
  (void)workers;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::size_t u = 0; u < units.size(); ++u) {
    bool complete = true;
    for (const ReportRow& r : units[u].skeleton) {
      if (const ReportRow* hit = store.find(r.key())) {
        results[u].push_back(*hit);
      } else {
        complete = false;
        break;
      }
    }
    if (complete) continue;
    results[u].clear();
    try {
      results[u] = units[u].run();
      for (const ReportRow& r : results[u]) {
        if (!store.find(r.key())) store.add(r, progress);
      }
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ReportRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

json base_flags(const EvalConfig& cfg) {
  const bool codec = codec_available(cfg.codec);
  return {{"crop", "crop-out: box stays in place, outside set to black"},
          {"frame_drop", "freeze: a dropped frame repeats the nearest earlier retained frame"},
          {"psnr_channels", "RGB, all channels"},
          {"mssim_channels", "luma"},
          {"tpsnr", "PSNR of consecutive-frame differences (not comparable to tLP)"},
          {"codec", codec ? "available" : "unavailable, codec cells SKIPPED"},
          {"timing", cfg.timing}};
}

EvalReport finish(const EvalConfig& cfg, const std::string& command, json flags, std::vector<ReportRow> rows,
                  RowStore& store) {
  EvalReport report;
  report.command = command;
  report.config = cfg.to_json();
  report.flags = std::move(flags);
  report.rows = std::move(rows);
  if (!cfg.csv_path.empty()) emit_report(report, cfg.csv_path, ReportFormat::CSV);
  if (!cfg.json_path.empty()) emit_report(report, cfg.json_path, ReportFormat::JSON);
  store.finish();
  return report;
}

void check_codec(const EvalConfig& cfg, const std::vector<DistortionSpec>& cells) {
  const bool needs = std::any_of(cells.begin(), cells.end(), [](const DistortionSpec& d) {
    return std::holds_alternative<attack::ExternalCodec>(d.attack);
  });
  if (needs && cfg.codec_strict && !codec_available(cfg.codec)) {
    throw Error(Errc::CodecUnavailable, "external encoder not found for: " + cfg.codec.command);
  }
}

struct ClipJob {
  std::string method;
  std::string clip_id;
  int clip_index = 0;
  int payload = 0;
  OpPoint op;
  std::function<VideoClip()> cover;  // loaded lazily inside the worker
  KeySpec spec;
};

Unit make_unit(const EvalConfig& cfg, const ClipJob& job, const std::vector<DistortionSpec>& cells) {
  Unit unit;
  for (const DistortionSpec& d : cells) {
    for (int r = 0; r < cfg.repeats; ++r) {
      ReportRow row;
      row.method = job.method;
      row.payload = job.payload;
      row.distortion = d.kind();
      row.strength = d.strength();
      row.clip = job.clip_id;
      row.seed = cell_seed(cfg, d, job.clip_index, r);
      unit.skeleton.push_back(row);
    }
  }
  unit.run = [&cfg, job, cells, skeleton = unit.skeleton]() {
    const VideoClip cover = job.cover();
    const Message msg = clip_message(cfg, job.clip_index, job.payload);
    const double alpha = pick_alpha(cfg, job.op, cover, msg, job.spec);
    const VideoClip wm = embed_segments(cover, msg, job.spec, alpha, cfg.tile);
    const QualityReport q = quality(cover, wm);
    const bool codec = codec_available(cfg.codec);

    std::vector<ReportRow> rows = skeleton;
    std::size_t k = 0;
    for (const DistortionSpec& d : cells) {
      for (int r = 0; r < cfg.repeats; ++r, ++k) {
        ReportRow& row = rows[k];
        row.alpha = alpha;
        row.psnr = q.psnr_db;
        row.mssim = q.mssim;
        row.tpsnr = q.tpsnr_db;
        const bool external = std::holds_alternative<attack::ExternalCodec>(d.attack);
        if (external && !codec) continue;
        DistortionSpec seeded = d;
        seeded.seed = row.seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const VideoClip attacked = apply(wm, seeded, &cfg.codec);
          const ExtractionResult res = extract_segments(attacked, job.spec, cfg.tile, job.spec.null ? &*job.spec.null : nullptr);
          row.bit_acc = bit_accuracy(msg, res.message);
          row.det_score = res.detection;
        } catch (const Error& e) {
          if (!external || e.code() == Errc::CodecUnavailable) throw;
          row.extra["error"] = e.what();
        }
        if (cfg.timing) {
          row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
      }
    }
    return rows;
  };
  return unit;
}

std::string method_name(const OpPoint& op) { return "dwt3ss:" + op.label; }

EvalReport run_cells(const EvalConfig& cfg, const std::string& command, const std::vector<DistortionSpec>& cells,
                     const Progress& progress) {
  check_codec(cfg, cells);
  RowStore store(cfg, command);
  const std::vector<CorpusClip> corpus = load_corpus(cfg);
  std::vector<Unit> units;
  for (const OpPoint& op : operating_points(cfg)) {
    for (int m : cfg.payload) {
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        ClipJob job;
        job.method = method_name(op);
        job.clip_id = corpus[i].id;
        job.clip_index = static_cast<int>(i);
        job.payload = m;
        job.op = op;
        job.spec = key_for(cfg, m, corpus[i].clip.height(), corpus[i].clip.width());
        const VideoClip* clip = &corpus[i].clip;
        job.cover = [clip] { return *clip; };
        units.push_back(make_unit(cfg, job, cells));
      }
    }
  }
  auto rows = execute(units, store, progress, cfg.threads);
  return finish(cfg, command, base_flags(cfg), std::move(rows), store);
}

}  // namespace

EvalReport run_matrix(const EvalConfig& cfg, const Progress& progress) {
  cfg.validate();
  return run_cells(cfg, "matrix", cfg.distortions.empty() ? matrix_distortions() : cfg.distortions, progress);
}

EvalReport sweep_alpha(const EvalConfig& cfg, const Progress& progress) {
  cfg.validate();
  return run_cells(cfg, "alpha", cfg.distortions.empty() ? panel_distortions() : cfg.distortions, progress);
}

EvalReport sweep_payload(const EvalConfig& cfg, const Progress& progress) {
  cfg.validate();
  EvalConfig c = cfg;
  c.chip_len = 0;  // chip_len = floor(slots / m) for every payload
  if (c.alpha.empty() && c.psnr_targets.empty()) c.psnr_targets = {37.0};
  return run_cells(c, "payload", c.distortions.empty() ? panel_distortions() : c.distortions, progress);
}

EvalReport sweep_dimensions(const EvalConfig& cfg, const Progress& progress) {
  cfg.validate();
  const auto cells = cfg.distortions.empty() ? panel_distortions() : cfg.distortions;
  check_codec(cfg, cells);
  RowStore store(cfg, "dims");

  // File corpora are resampled to every cell's dimensions; synthetic ones are
  // rendered at each size directly.
  std::vector<CorpusClip> sources;
  int count = 0;
  if (!cfg.corpus.empty()) {
    sources = load_corpus(cfg);
    count = static_cast<int>(sources.size());
  } else {
    count = cfg.synthetic->count;
  }

  json padded = json::array();
  std::vector<Unit> units;
  const OpPoint op = operating_points(cfg).front();
  const int m = cfg.payload.front();
  for (auto [h, w] : cfg.resolutions) {
    for (int frames : cfg.lengths) {
      const std::string dims = std::to_string(frames) + "x" + std::to_string(h) + "x" + std::to_string(w);
      const std::string method = method_name(op) + ":" + dims;
      const bool pads = frames % cfg.tile.segment_len != 0 || padded_extent(h, 3) != h || padded_extent(w, 3) != w;
      if (pads) padded.push_back(method);
      const KeySpec spec = key_for(cfg, m, h, w);
      for (int i = 0; i < count; ++i) {
        ClipJob job;
        job.method = method;
        job.clip_index = i;
        job.payload = m;
        job.op = op;
        job.spec = spec;
        if (!sources.empty()) {
          job.clip_id = sources[i].id;
          const VideoClip* src = &sources[i].clip;
          job.cover = [src, frames, h = h, w = w] { return resample_clip(*src, frames, h, w); };
        } else {
          char id[32];
          std::snprintf(id, sizeof id, "synth-%04d", i);
          job.clip_id = id;
          const std::uint64_t seed = derive_seed(cfg.synthetic->seed, 0xC0, i);
          job.cover = [seed, frames, h = h, w = w] { return synth_clip({frames, h, w}, seed); };
        }
        units.push_back(make_unit(cfg, job, cells));
      }
    }
  }
  auto rows = execute(units, store, progress, cfg.threads);
  json flags = base_flags(cfg);
  flags["resampled"] = !cfg.corpus.empty();
  flags["padded_cells"] = padded;
  flags["tile_segment_len"] = cfg.tile.segment_len;
  return finish(cfg, "dims", std::move(flags), std::move(rows), store);
}

// ---------------------------------------------------------------- editing

namespace {

// Renders the background frame by frame and keeps only the patch region, so
// long backgrounds never sit in memory at full size. Equivalent to cropping
// make_editing_scenario's composite to its patch region.
VideoClip patch_track(const SynthScene& background, int frames, const VideoClip& patch, int insert_at,
                      const Region& where) {
  VideoClip track({frames, where.height, where.width});
  std::vector<double> frame(static_cast<std::size_t>(background.height()) * background.width() * 3);
  for (int t = 0; t < frames; ++t) {
    const bool inside = t >= insert_at && t < insert_at + kInsertFrames;
    if (inside) {
      std::copy(patch.frame(t - insert_at).begin(), patch.frame(t - insert_at).end(), track.frame(t).begin());
      continue;
    }
    background.render(t, frame);
    auto dst = track.frame(t);
    for (int y = 0; y < where.height; ++y) {
      const double* src = frame.data() + (static_cast<std::size_t>(where.y0 + y) * background.width() + where.x0) * 3;
      std::copy(src, src + static_cast<std::size_t>(where.width) * 3, dst.begin() + static_cast<std::size_t>(y) * where.width * 3);
    }
  }
  return track;
}

}  // namespace

EvalReport run_editing_app(const EvalConfig& config, const Progress& progress) {
  config.validate();
  EvalConfig cfg = config;
  cfg.tile.segment_len = cfg.window_len;
  RowStore store(config, "editing");
  const int m = cfg.payload.front();
  const OpPoint op = operating_points(cfg).front();
  KeySpec spec = key_for(cfg, m, kPatchSide, kPatchSide);
  const WatermarkKey key = gen_key(spec, cfg.window_len, kPatchSide, kPatchSide);

  NullModel null;
  if (spec.null) {
    null = *spec.null;
  } else {
    const auto clean = synth_corpus(cfg.null_windows, {cfg.window_len, kPatchSide, kPatchSide}, derive_seed(cfg.seed, 0x0A11));
    null = calibrate_null(key, clean);
  }

  std::vector<CorpusClip> sources;
  if (!cfg.corpus.empty()) sources = load_corpus(cfg);

  const int bg_h = cfg.background_size.first;
  const int bg_w = cfg.background_size.second;
  const Region where = editing_patch_region(bg_h, bg_w);
  const TileLayout layout = cfg.tile;

  std::vector<Unit> units;
  for (int frames : cfg.backgrounds) {
    for (int r = 0; r < cfg.editing_repeats; ++r) {
      const std::string clip_id = "bg" + std::to_string(frames) + "-" + std::to_string(r);
      const std::uint64_t seed = derive_seed(cfg.seed, 0xED17, frames, r);
      Unit unit;
      for (const char* method : {"editing/with-detector", "editing/without-detector", "control/with-detector",
                                 "control/without-detector"}) {
        ReportRow row;
        row.method = method;
        row.payload = m;
        row.distortion = "background";
        row.strength = frames;
        row.clip = clip_id;
        row.seed = seed;
        unit.skeleton.push_back(row);
      }
      unit.run = [&, frames, r, seed, skeleton = unit.skeleton]() {
        VideoClip source;
        if (!sources.empty()) {
          source = sources[r % sources.size()].clip;
        } else {
          source = synth_clip({kInsertFrames, kPatchSide, kPatchSide}, derive_seed(seed, 1));
        }
        if (source.frames() < kInsertFrames || source.height() < kPatchSide || source.width() < kPatchSide) {
          throw Error(Errc::BadGeometry, "editing sources must be at least 16x128x128");
        }
        source = source.slice_frames(0, kInsertFrames)
                     .crop((source.width() - kPatchSide) / 2, (source.height() - kPatchSide) / 2, kPatchSide, kPatchSide);
        const Message msg = Message::random(m, derive_seed(seed, 2));
        const double alpha = pick_alpha(cfg, op, source, msg, spec);
        const VideoClip wm = embed_segments(source, msg, spec, alpha, layout);
        const QualityReport q = quality(source, wm);

        const SynthScene background(bg_h, bg_w, derive_seed(seed, 3));
        Rng rng(derive_seed(seed, 4));
        const int insert_at = static_cast<int>(rng.below(static_cast<std::uint64_t>(frames - kInsertFrames + 1)));
        const FrameRun truth{insert_at, kInsertFrames};
        DetectOptions opts;
        opts.window_len = cfg.window_len;
        opts.stride = cfg.stride;

        std::vector<ReportRow> rows = skeleton;
        for (int control = 0; control < 2; ++control) {
          const VideoClip patch = prepare_patch(control ? source : wm, derive_seed(seed, 5));
          const VideoClip track = patch_track(background, frames, patch, insert_at, where);
          const DetectionTrace trace = detect(track, key, null, opts);
          const FrameSelection kept = filter_frames(trace, cfg.threshold);
          const double kept_fraction = static_cast<double>(kept.frames.size()) / frames;
          const FrameRun run = strongest_run(trace, kept);
          for (int with = 0; with < 2; ++with) {
            ReportRow& row = rows[control * 2 + (1 - with)];
            row.alpha = alpha;
            row.psnr = q.psnr_db;
            row.mssim = q.mssim;
            row.tpsnr = q.tpsnr_db;
            row.bit_acc = bit_accuracy(msg, with ? decode_filtered(trace, kept) : decode_all(trace));
            row.det_score = kept_fraction;
            row.extra = {{"insert_at", insert_at},
                         {"kept_frames", kept.frames.size()},
                         {"iou", control ? 0.0 : interval_iou(run, truth)}};
          }
        }
        return rows;
      };
      units.push_back(std::move(unit));
    }
  }
  auto rows = execute(units, store, progress, cfg.threads);
  json flags = base_flags(cfg);
  flags["roi"] = {{"x0", where.x0}, {"y0", where.y0}, {"width", where.width}, {"height", where.height}};
  flags["null"] = {{"mean", null.mean}, {"std", null.stddev}, {"n", null.samples}};
  flags["det_score_column"] = "fraction of frames kept by the detector";
  flags["strength_column"] = "background length in frames";
  return finish(config, "editing", std::move(flags), std::move(rows), store);
}

}  // namespace vidmark
