// vidmark command-line front end.
//
// Exit codes: 0 success, 1 other failure, 2 configuration or usage error,
// 3 external codec unavailable in strict mode.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vidmark/detector.hpp"
#include "vidmark/distortion.hpp"
#include "vidmark/error.hpp"
#include "vidmark/eval.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/rng.hpp"
#include "vidmark/spread_spectrum.hpp"
#include "vidmark/synth.hpp"
#include "vidmark/video_io.hpp"

using namespace vidmark;
using nlohmann::json;

namespace {

struct ClipArgs {
  std::string path;
  std::string format;  // empty: guess from the path
};

VideoClip read_clip(const ClipArgs& a) {
  return a.format.empty() ? load_clip(a.path) : load_clip(a.path, parse_video_format(a.format));
}

void write_clip(const VideoClip& clip, const ClipArgs& a) {
  const VideoFormat f = a.format.empty() ? guess_video_format(a.path) : parse_video_format(a.format);
  save_clip(clip, a.path, f);
}

Region parse_region(const std::string& text) {
  Region r;
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &r.x0, &r.y0, &r.width, &r.height) != 4) {
    throw Error(Errc::InvalidArgument, "region must be x,y,w,h");
  }
  return r;
}

void print_aggregates(const EvalReport& report) {
  std::printf("%-36s %7s %-11s %9s %5s %8s %8s %8s\n", "method", "payload", "distortion", "strength", "n", "mean",
              "std", "psnr");
  for (const Aggregate& a : report.aggregates()) {
    std::printf("%-36s %7d %-11s %9g %5d %8.4f %8.4f %8.2f%s\n", a.method.c_str(), a.payload, a.distortion.c_str(),
                a.strength, a.n, a.mean, a.std, a.mean_psnr, a.skipped ? "  SKIPPED" : "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind 3D-wavelet spread-spectrum video watermarking"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Write a key file");
  KeySpec kspec;
  std::string key_out;
  keygen->add_option("--seed", kspec.seed, "Key seed")->required();
  keygen->add_option("-m,--payload", kspec.payload, "Message bits")->capture_default_str();
  keygen->add_option("--chip-len", kspec.chip_len, "Slots per bit")->capture_default_str();
  keygen->add_option("--level", kspec.level, "Embedding level")->capture_default_str();
  keygen->add_option("-o,--out", key_out, "Key file")->required();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic test clip");
  ClipArgs synth_out;
  std::uint64_t synth_seed = 1;
  int synth_t = 16, synth_h = 128, synth_w = 128;
  synth_cmd->add_option("-o,--out", synth_out.path)->required();
  synth_cmd->add_option("--out-format", synth_out.format);
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();
  synth_cmd->add_option("--frames", synth_t)->capture_default_str();
  synth_cmd->add_option("--height", synth_h)->capture_default_str();
  synth_cmd->add_option("--width", synth_w)->capture_default_str();

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "Embed a message");
  ClipArgs embed_in, embed_out;
  std::string embed_key, embed_msg;
  std::optional<std::uint64_t> embed_msg_seed;
  std::optional<double> embed_alpha, embed_psnr;
  int embed_segment = 8;
  embed_cmd->add_option("-i,--in", embed_in.path)->required();
  embed_cmd->add_option("--in-format", embed_in.format);
  embed_cmd->add_option("-o,--out", embed_out.path)->required();
  embed_cmd->add_option("--out-format", embed_out.format);
  embed_cmd->add_option("-k,--key", embed_key)->required();
  auto* msg_opt = embed_cmd->add_option("--message", embed_msg, "Bits, e.g. 0110...");
  embed_cmd->add_option("--message-seed", embed_msg_seed, "Random message from a seed")->excludes(msg_opt);
  auto* alpha_opt = embed_cmd->add_option("--alpha", embed_alpha, "Strength");
  embed_cmd->add_option("--psnr", embed_psnr, "Target PSNR in dB (bisection on alpha)")->excludes(alpha_opt);
  embed_cmd->add_option("--segment-len", embed_segment)->capture_default_str();

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Decode a message");
  ClipArgs extract_in;
  std::string extract_key, extract_expect;
  int extract_segment = 8;
  bool extract_json = false;
  extract_cmd->add_option("-i,--in", extract_in.path)->required();
  extract_cmd->add_option("--in-format", extract_in.format);
  extract_cmd->add_option("-k,--key", extract_key)->required();
  extract_cmd->add_option("--expect", extract_expect, "Sent message; prints bit accuracy");
  extract_cmd->add_option("--segment-len", extract_segment)->capture_default_str();
  extract_cmd->add_flag("--json", extract_json);

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Apply one distortion");
  ClipArgs attack_in, attack_out;
  std::string attack_spec;
  std::uint64_t attack_seed = 0;
  std::string attack_codec;
  bool attack_lenient = false;
  attack_cmd->add_option("-i,--in", attack_in.path)->required();
  attack_cmd->add_option("--in-format", attack_in.format);
  attack_cmd->add_option("-o,--out", attack_out.path)->required();
  attack_cmd->add_option("--out-format", attack_out.format);
  attack_cmd->add_option("-d,--distortion", attack_spec, "kind[:value], e.g. noise:0.04")->required();
  attack_cmd->add_option("--seed", attack_seed)->capture_default_str();
  attack_cmd->add_option("--codec-cmd", attack_codec, "Encoder round-trip template");
  attack_cmd->add_flag("--lenient", attack_lenient, "Pass the clip through when the codec is missing");

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Per-frame watermark presence");
  ClipArgs detect_in;
  std::string detect_key, detect_roi, detect_out;
  DetectOptions detect_opts;
  double detect_threshold = kFilterThreshold;
  detect_cmd->add_option("-i,--in", detect_in.path)->required();
  detect_cmd->add_option("--in-format", detect_in.format);
  detect_cmd->add_option("-k,--key", detect_key)->required();
  detect_cmd->add_option("--window", detect_opts.window_len)->capture_default_str();
  detect_cmd->add_option("--stride", detect_opts.stride)->capture_default_str();
  detect_cmd->add_option("--roi", detect_roi, "x,y,w,h");
  detect_cmd->add_option("--threshold", detect_threshold)->capture_default_str();
  detect_cmd->add_option("-o,--out", detect_out, "Per-frame CSV (default stdout)");

  // calibrate
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit the null model and store it in the key");
  std::string calib_key;
  std::vector<std::string> calib_clips;
  int calib_synthetic = 0;
  std::uint64_t calib_seed = 0;
  int calib_window = 8, calib_h = 128, calib_w = 128;
  calibrate_cmd->add_option("-k,--key", calib_key)->required();
  calibrate_cmd->add_option("--clips", calib_clips, "Unwatermarked clips");
  calibrate_cmd->add_option("--synthetic", calib_synthetic, "Use N synthetic windows instead");
  calibrate_cmd->add_option("--seed", calib_seed)->capture_default_str();
  calibrate_cmd->add_option("--window", calib_window)->capture_default_str();
  calibrate_cmd->add_option("--height", calib_h)->capture_default_str();
  calibrate_cmd->add_option("--width", calib_w)->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Run an evaluation");
  eval_cmd->require_subcommand(1);
  std::string eval_config, eval_csv, eval_json;
  std::optional<int> eval_repeats, eval_threads, eval_count;
  std::optional<std::uint64_t> eval_seed;
  bool eval_timing = false, eval_fresh = false, eval_strict = false, eval_quiet = false;
  eval_cmd->add_option("-c,--config", eval_config, "JSON config");
  eval_cmd->add_option("--csv", eval_csv);
  eval_cmd->add_option("--json", eval_json);
  eval_cmd->add_option("--repeats", eval_repeats);
  eval_cmd->add_option("--threads", eval_threads);
  eval_cmd->add_option("--seed", eval_seed);
  eval_cmd->add_option("--clips", eval_count, "Synthetic corpus size");
  eval_cmd->add_flag("--timing", eval_timing, "Fill the ms column");
  eval_cmd->add_flag("--fresh", eval_fresh, "Discard a partial run instead of resuming");
  eval_cmd->add_flag("--strict-codec", eval_strict, "Fail when the encoder is missing");
  eval_cmd->add_flag("-q,--quiet", eval_quiet);
  for (const char* name : {"matrix", "alpha", "payload", "dims", "editing"}) eval_cmd->add_subcommand(name);

  // report
  auto* report_cmd = app.add_subcommand("report", "Summarise or convert a report");
  std::string report_in, report_csv, report_json;
  report_cmd->add_option("-i,--in", report_in)->required();
  report_cmd->add_option("--csv", report_csv, "Write rows as CSV");
  report_cmd->add_option("--json", report_json, "Write rows and aggregates as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*keygen) {
      save_key(kspec, key_out);
    } else if (*synth_cmd) {
      write_clip(synth_clip({synth_t, synth_h, synth_w}, synth_seed), synth_out);
    } else if (*embed_cmd) {
      const KeySpec spec = load_key(embed_key);
      const VideoClip cover = read_clip(embed_in);
      const Message msg = !embed_msg.empty() ? Message::parse(embed_msg)
                                             : Message::random(spec.payload, embed_msg_seed.value_or(0));
      const TileLayout layout{embed_segment};
      double alpha = embed_alpha.value_or(0.0);
      if (embed_psnr) alpha = tune_alpha(cover, msg, spec, layout, *embed_psnr).alpha;
      else if (!embed_alpha) throw Error(Errc::ConfigInvalid, "give --alpha or --psnr");
      const VideoClip wm = embed_segments(cover, msg, spec, alpha, layout);
      write_clip(wm, embed_out);
      const QualityReport q = quality(cover, wm);
      std::printf("message %s\nalpha %.6g\npsnr %.3f\nmssim %.5f\n", msg.str().c_str(), alpha, q.psnr_db, q.mssim);
    } else if (*extract_cmd) {
      const KeySpec spec = load_key(extract_key);
      const VideoClip suspect = read_clip(extract_in);
      const ExtractionResult r =
          extract_segments(suspect, spec, TileLayout{extract_segment}, spec.null ? &*spec.null : nullptr);
      std::optional<double> acc;
      if (!extract_expect.empty()) acc = bit_accuracy(Message::parse(extract_expect), r.message);
      if (extract_json) {
        json j = {{"message", r.message.str()}, {"soft", r.soft},           {"band_weights", r.band_weights},
                  {"statistic", r.statistic},  {"detection", r.detection}};
        if (acc) j["bit_accuracy"] = *acc;
        std::cout << j.dump(2) << '\n';
      } else {
        std::printf("message %s\nstatistic %.5f\ndetection %.5f\n", r.message.str().c_str(), r.statistic, r.detection);
        if (acc) std::printf("bit_accuracy %.5f\n", *acc);
      }
    } else if (*attack_cmd) {
      const VideoClip in = read_clip(attack_in);
      CodecConfig codec = CodecConfig::from_environment();
      if (!attack_codec.empty()) codec.command = attack_codec;
      codec.strict = !attack_lenient;
      write_clip(apply(in, parse_distortion(attack_spec, attack_seed), &codec), attack_out);
    } else if (*detect_cmd) {
      const KeySpec spec = load_key(detect_key);
      const VideoClip video = read_clip(detect_in);
      if (!detect_roi.empty()) detect_opts.roi = parse_region(detect_roi);
      const int h = detect_opts.roi ? detect_opts.roi->height : video.height();
      const int w = detect_opts.roi ? detect_opts.roi->width : video.width();
      const WatermarkKey key = gen_key(spec, detect_opts.window_len, h, w);
      const NullModel null = spec.null ? *spec.null : analytic_null(spec.payload);
      const DetectionTrace trace = detect(video, key, null, detect_opts);
      const FrameSelection kept = filter_frames(trace, detect_threshold);
      std::ostringstream csv;
      csv << "frame,score,kept\n";
      std::vector<bool> mask(trace.scores.size(), false);
      for (int t : kept.frames) mask[t] = true;
      for (std::size_t t = 0; t < trace.scores.size(); ++t) {
        csv << t << ',' << trace.scores[t] << ',' << (mask[t] ? 1 : 0) << '\n';
      }
      if (detect_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream(detect_out) << csv.str();
      }
      std::fprintf(stderr, "kept %zu of %zu frames in %zu run(s)\n", kept.frames.size(), trace.scores.size(),
                   kept.runs.size());
      if (!kept.runs.empty()) {
        std::fprintf(stderr, "decoded %s\n", decode_filtered(trace, kept).str().c_str());
      }
    } else if (*calibrate_cmd) {
      KeySpec spec = load_key(calib_key);
      std::vector<VideoClip> clips;
      for (const auto& p : calib_clips) clips.push_back(load_clip(p));
      if (calib_synthetic > 0) {
        auto synth = synth_corpus(calib_synthetic, {calib_window, calib_h, calib_w}, calib_seed);
        clips.insert(clips.end(), synth.begin(), synth.end());
      }
      if (clips.empty()) throw Error(Errc::ConfigInvalid, "give --clips or --synthetic");
      const WatermarkKey key = gen_key(spec, calib_window, clips.front().height(), clips.front().width());
      spec.null = calibrate_null(key, clips);
      save_key(spec, calib_key);
      std::printf("null mean %.6f std %.6f n %d\n", spec.null->mean, spec.null->stddev, spec.null->samples);
    } else if (*eval_cmd) {
      json j = json::object();
      if (!eval_config.empty()) {
        std::ifstream in(eval_config);
        if (!in) throw Error(Errc::ConfigInvalid, "cannot read " + eval_config);
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw Error(Errc::ConfigInvalid, eval_config + ": " + e.what());
        }
      }
      if (!eval_csv.empty()) j["csv"] = eval_csv;
      if (!eval_json.empty()) j["json"] = eval_json;
      if (eval_repeats) j["repeats"] = *eval_repeats;
      if (eval_threads) j["threads"] = *eval_threads;
      if (eval_seed) j["seed"] = *eval_seed;
      if (eval_timing) j["timing"] = true;
      if (eval_count) {
        json s = j.contains("synthetic") && j["synthetic"].is_object() ? j["synthetic"] : json::object();
        s["count"] = *eval_count;
        j["synthetic"] = s;
      }
      if (eval_strict) j["codec"]["strict"] = true;
      EvalConfig cfg = EvalConfig::from_json(j);
      if (!j.contains("codec") || !j["codec"].contains("command")) {
        cfg.codec.command = CodecConfig::from_environment().command;
      }
      if (eval_fresh) {
        const std::string base = !cfg.csv_path.empty() ? cfg.csv_path : cfg.json_path;
        if (!base.empty()) std::filesystem::remove(base + ".partial");
      }
      Progress progress;
      if (!eval_quiet) {
        progress = [](const ReportRow& r) {
          std::fprintf(stderr, "%s %s:%g %s acc=%s\n", r.method.c_str(), r.distortion.c_str(), r.strength,
                       r.clip.c_str(), r.bit_acc ? std::to_string(*r.bit_acc).c_str() : "SKIPPED");
        };
      }
      const std::string which = eval_cmd->get_subcommands().front()->get_name();
      EvalReport report;
      if (which == "matrix") report = run_matrix(cfg, progress);
      else if (which == "alpha") report = sweep_alpha(cfg, progress);
      else if (which == "payload") report = sweep_payload(cfg, progress);
      else if (which == "dims") report = sweep_dimensions(cfg, progress);
      else report = run_editing_app(cfg, progress);
      print_aggregates(report);
    } else if (*report_cmd) {
      const EvalReport report = load_report(report_in);
      if (!report_csv.empty()) emit_report(report, report_csv, ReportFormat::CSV);
      if (!report_json.empty()) emit_report(report, report_json, ReportFormat::JSON);
      print_aggregates(report);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "vidmark: %s\n", e.what());
    switch (e.code()) {
      case Errc::ConfigInvalid:
      case Errc::InvalidArgument:
        return 2;
      case Errc::CodecUnavailable:
        return 3;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vidmark: %s\n", e.what());
    return 1;
  }
  return 0;
}
