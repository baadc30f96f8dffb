#include "vidmark/spread_spectrum.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "vidmark/error.hpp"
#include "vidmark/rng.hpp"

namespace vidmark {

Message Message::random(int m, std::uint64_t seed) {
  if (m < 1) throw Error(Errc::InvalidArgument, "message length must be >= 1");
  Rng rng(derive_seed(seed, 0x6d657373));
  Message msg;
  msg.bits.resize(m);
  for (auto& b : msg.bits) b = static_cast<std::uint8_t>(rng.next() >> 63);
  return msg;
}

Message Message::parse(std::string_view text) {
  Message msg;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(Errc::InvalidArgument, "message must be a 0/1 string");
    msg.bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (msg.bits.empty()) throw Error(Errc::InvalidArgument, "empty message");
  return msg;
}

std::string Message::str() const {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out += b ? '1' : '0';
  return out;
}

std::vector<BandCode> default_embedding_bands() {
  const auto bands = embedding_bands();
  return {bands.begin(), bands.end()};
}

NullModel analytic_null(int m) {
  const double mean = std::sqrt(2.0 / std::numbers::pi);
  return {mean, std::sqrt((1.0 - 2.0 / std::numbers::pi) / std::max(1, m)), 0};
}

nlohmann::json KeySpec::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["m"] = payload;
  j["chip_len"] = chip_len;
  j["level"] = level;
  j["levels"] = levels;
  std::vector<std::string> names;
  for (const auto& b : bands) names.push_back(b.str());
  j["bands"] = names;
  if (null) j["null"] = {{"mean", null->mean}, {"std", null->stddev}, {"n", null->samples}};
  return j;
}

KeySpec KeySpec::from_json(const nlohmann::json& j) {
  KeySpec spec;
  try {
    if (j.value("version", kVersion) != kVersion) throw Error(Errc::ConfigInvalid, "unsupported key version");
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.payload = j.at("m").get<int>();
    spec.chip_len = j.at("chip_len").get<int>();
    spec.level = j.value("level", 2);
    spec.levels = j.value("levels", 3);
    if (j.contains("bands")) {
      spec.bands.clear();
      for (const auto& name : j.at("bands")) spec.bands.push_back(BandCode::parse(name.get<std::string>()));
    }
    if (j.contains("null")) {
      const auto& n = j.at("null");
      spec.null = NullModel{n.at("mean").get<double>(), n.at("std").get<double>(), n.value("n", 0)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("bad key file: ") + e.what());
  }
  if (spec.payload < 1 || spec.chip_len < 1 || spec.level < 1 || spec.level > spec.levels || spec.bands.empty()) {
    throw Error(Errc::ConfigInvalid, "key parameters out of range");
  }
  return spec;
}

KeySpec load_key(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open key " + path);
  try {
    return KeySpec::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ConfigInvalid, std::string("key is not JSON: ") + e.what());
  }
}

void save_key(const KeySpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write key " + path);
  out << spec.to_json().dump(2) << "\n";
}

std::size_t embedding_slot_count(int frames, int height, int width, int level, int levels, int band_count) {
  const int pt = padded_extent(frames, levels);
  const int py = padded_extent(height, levels);
  const int px = padded_extent(width, levels);
  return static_cast<std::size_t>(band_count) * static_cast<std::size_t>(pt >> level) * (py >> level) * (px >> level);
}

int capacity(int frames, int height, int width, int chip_len, int level, int levels) {
  if (chip_len < 1) return 0;
  return static_cast<int>(embedding_slot_count(frames, height, width, level, levels) / chip_len);
}

WatermarkKey::WatermarkKey(KeySpec spec, int frames, int height, int width)
    : spec_(std::move(spec)), frames_(frames), height_(height), width_(width) {
  validate_shape({frames, height, width});
  const int block = 1 << spec_.levels;
  if (frames < block || height < block || width < block) {
    throw Error(Errc::BadShape, "clip too small for a " + std::to_string(spec_.levels) + "-level transform");
  }
  const int pt = padded_extent(frames, spec_.levels);
  const int py = padded_extent(height, spec_.levels);
  const int px = padded_extent(width, spec_.levels);
  const std::size_t total = embedding_slot_count(frames, height, width, spec_.level, spec_.levels, band_count());
  const std::size_t needed = static_cast<std::size_t>(spec_.payload) * spec_.chip_len;
  if (needed > total) {
    throw Error(Errc::PayloadTooLarge, std::to_string(spec_.payload) + " bits x " + std::to_string(spec_.chip_len) +
                                           " chips exceeds " + std::to_string(total) + " slots");
  }

  // Shuffle each band's coefficients, then interleave the bands so that every
  // bit's contiguous block of chip_len slots is spread evenly across them.
  std::vector<std::vector<std::uint32_t>> per_band(spec_.bands.size());
  for (std::size_t b = 0; b < spec_.bands.size(); ++b) {
    if (spec_.bands[b] == BandCode{} && spec_.level < spec_.levels) {
      throw Error(Errc::BadBandCode, "LLL cannot carry chips below the top level");
    }
    const BandRegion r = band_region(pt, py, px, spec_.level, spec_.bands[b]);
    auto& list = per_band[b];
    list.reserve(r.size());
    for (int t = 0; t < r.frames; ++t)
      for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
          const std::size_t flat = (static_cast<std::size_t>(r.t0 + t) * py + (r.y0 + y)) * px + (r.x0 + x);
          list.push_back(static_cast<std::uint32_t>(flat));
        }
    Rng rng(derive_seed(spec_.seed, 0x736c6f74, b));
    rng.shuffle(std::span<std::uint32_t>(list));
  }
  slots_.reserve(needed);
  const std::size_t band_size = per_band.front().size();
  for (std::size_t k = 0; k < band_size && slots_.size() < needed; ++k) {
    for (std::size_t b = 0; b < per_band.size() && slots_.size() < needed; ++b) {
      slots_.push_back({per_band[b][k], static_cast<std::uint8_t>(b)});
    }
  }

  Rng chip_rng(derive_seed(spec_.seed, 0x63686970));
  chips_.resize(needed);
  for (int bit = 0; bit < spec_.payload; ++bit) {
    std::span<std::int8_t> seq(chips_.data() + static_cast<std::size_t>(bit) * spec_.chip_len, spec_.chip_len);
    const int half = spec_.chip_len / 2;
    const std::int8_t odd_sign = (chip_rng.next() >> 63) ? 1 : -1;
    for (int i = 0; i < spec_.chip_len; ++i) seq[i] = i < half ? 1 : (i < 2 * half ? -1 : odd_sign);
    chip_rng.shuffle(seq);
  }
}

Volume WatermarkKey::residual(const Message& msg, double gain) const {
  if (msg.size() != spec_.payload) {
    throw Error(Errc::PayloadMismatch, "message has " + std::to_string(msg.size()) + " bits, key expects " +
                                           std::to_string(spec_.payload));
  }
  Volume coeffs(padded_extent(frames_, spec_.levels), padded_extent(height_, spec_.levels),
                padded_extent(width_, spec_.levels));
  auto data = coeffs.data();
  for (int bit = 0; bit < spec_.payload; ++bit) {
    const double sign = msg.bits[bit] ? 1.0 : -1.0;
    const auto c = chips(bit);
    const auto s = slots(bit);
    for (int i = 0; i < spec_.chip_len; ++i) data[s[i].index] = gain * sign * c[i];
  }
  return dwt3_inverse(WaveletPyramid(std::move(coeffs), spec_.levels, frames_, height_, width_));
}

WatermarkKey gen_key(const KeySpec& spec, int frames, int height, int width) {
  return WatermarkKey(spec, frames, height, width);
}

WatermarkKey gen_key(std::uint64_t seed, int payload, const ClipShape& shape, int chip_len) {
  KeySpec spec;
  spec.seed = seed;
  spec.payload = payload;
  spec.chip_len = chip_len;
  return WatermarkKey(spec, shape.frames, shape.height, shape.width);
}

VideoClip embed(const VideoClip& cover, const Message& msg, const WatermarkKey& key, double alpha,
                const EmbedOptions& options) {
  if (!key.matches(cover)) {
    throw Error(Errc::KeyClipMismatch, "key built for " + std::to_string(key.frames()) + "x" +
                                           std::to_string(key.height()) + "x" + std::to_string(key.width()) +
                                           ", clip is " + to_string(cover.shape()));
  }
  if (alpha < 0.0 || !std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "alpha must be finite and >= 0");
  const Volume r = key.residual(msg, options.gain);
  VideoClip out = cover;
  add_to_luma(out, r, alpha);
  if (options.clamp) out.clamp();
  return out;
}

void combine_bands(ExtractionResult& result) {
  const std::size_t m = result.per_band_scores.size();
  if (m == 0) return;
  const std::size_t bands = result.per_band_scores.front().size();
  // Under the null each normalized correlation is ~N(0,1); excess energy
  // above 1 estimates the squared per-band signal amplitude. Weights follow
  // the amplitude estimate (maximum-ratio combining).
  std::vector<double> amplitude(bands, 0.0);
  for (std::size_t b = 0; b < bands; ++b) {
    double energy = 0.0;
    for (std::size_t i = 0; i < m; ++i) energy += result.per_band_scores[i][b] * result.per_band_scores[i][b];
    amplitude[b] = std::sqrt(std::max(energy / static_cast<double>(m) - 1.0, 0.0));
  }
  const double total = std::accumulate(amplitude.begin(), amplitude.end(), 0.0);
  result.band_weights.assign(bands, 1.0 / static_cast<double>(bands));
  if (total > 0.0) {
    for (std::size_t b = 0; b < bands; ++b) result.band_weights[b] = amplitude[b] / total;
  }
  double norm = 0.0;
  for (double w : result.band_weights) norm += w * w;
  norm = std::sqrt(norm);

  result.soft.assign(m, 0.0);
  result.message.bits.assign(m, 0);
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t b = 0; b < bands; ++b) s += result.band_weights[b] * result.per_band_scores[i][b];
    result.soft[i] = s;
    result.message.bits[i] = s > 0.0 ? 1 : 0;
    abs_sum += std::fabs(s);
  }
  result.statistic = abs_sum / static_cast<double>(m) / norm;
}

ExtractionResult extract(const VideoClip& suspect, const WatermarkKey& key, const NullModel* null) {
  if (!key.matches(suspect)) {
    throw Error(Errc::KeyClipMismatch, "key built for " + std::to_string(key.frames()) + "x" +
                                           std::to_string(key.height()) + "x" + std::to_string(key.width()) +
                                           ", clip is " + to_string(suspect.shape()));
  }
  const WaveletPyramid pyr = dwt3_forward(luma(suspect), key.spec().levels);
  const auto coeffs = pyr.coefficients().data();

  const int m = key.payload();
  const int bands = key.band_count();
  ExtractionResult result;
  result.per_band_scores.assign(m, std::vector<double>(bands, 0.0));
  std::vector<double> num(bands), den(bands);
  for (int bit = 0; bit < m; ++bit) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    const auto c = key.chips(bit);
    const auto s = key.slots(bit);
    for (int i = 0; i < key.chip_len(); ++i) {
      const double v = coeffs[s[i].index];
      num[s[i].band] += c[i] * v;
      den[s[i].band] += v * v;
    }
    for (int b = 0; b < bands; ++b) {
      result.per_band_scores[bit][b] = den[b] > 0.0 ? num[b] / std::sqrt(den[b]) : 0.0;
    }
  }
  combine_bands(result);
  const NullModel fallback = analytic_null(m);
  result.detection = detection_score(result.statistic, null ? *null : fallback);
  return result;
}

double standardized_statistic(double statistic, const NullModel& null) {
  return (statistic - null.mean) / (null.stddev > 0.0 ? null.stddev : 1.0);
}

double detection_score(double statistic, const NullModel& null) {
  const double z = standardized_statistic(statistic, null);
  return 1.0 / (1.0 + std::exp(-(z - kDetectionOffset)));
}

VideoClip embed_segments(const VideoClip& cover, const Message& msg, const KeySpec& spec, double alpha,
                         const TileLayout& layout, const EmbedOptions& options) {
  const WatermarkKey key = gen_key(spec, layout.segment_len, cover.height(), cover.width());
  std::vector<VideoClip> segments = tile_temporal(cover, layout);
  for (VideoClip& seg : segments) seg = embed(seg, msg, key, alpha, options);
  return untile_temporal(segments, cover.frames());
}

ExtractionResult extract_segments(const VideoClip& suspect, const KeySpec& spec, const TileLayout& layout,
                                  const NullModel* null) {
  const WatermarkKey key = gen_key(spec, layout.segment_len, suspect.height(), suspect.width());
  const std::vector<VideoClip> segments = tile_temporal(suspect, layout);
  ExtractionResult total;
  for (const VideoClip& seg : segments) {
    const ExtractionResult r = extract(seg, key);
    if (total.per_band_scores.empty()) {
      total.per_band_scores = r.per_band_scores;
      continue;
    }
    for (std::size_t i = 0; i < r.per_band_scores.size(); ++i)
      for (std::size_t b = 0; b < r.per_band_scores[i].size(); ++b) total.per_band_scores[i][b] += r.per_band_scores[i][b];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(segments.size()));
  for (auto& row : total.per_band_scores)
    for (double& z : row) z *= scale;
  combine_bands(total);
  const NullModel fallback = analytic_null(spec.payload);
  total.detection = detection_score(total.statistic, null ? *null : fallback);
  return total;
}

}  // namespace vidmark
