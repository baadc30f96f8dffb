#include "vidmark/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "vidmark/error.hpp"

namespace vidmark {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

// Quotes fields holding separators; method names may contain commas.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

// JSON has no infinity; store it as a string.
nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}
double from_jnum(const nlohmann::json& j) { return j.is_string() ? parse_num(j.get<std::string>()) : j.get<double>(); }

}  // namespace

std::string ReportRow::key() const {
  return method + '|' + std::to_string(payload) + '|' + distortion + '|' + num(strength) + '|' + clip + '|' +
         std::to_string(seed);
}

std::vector<int> histogram(const std::vector<double>& values, int buckets) {
  std::vector<int> counts(buckets, 0);
  for (double v : values) {
    const int b = std::clamp(static_cast<int>(std::floor(v * buckets)), 0, buckets - 1);
    ++counts[b];
  }
  return counts;
}

std::vector<Aggregate> EvalReport::aggregates() const {
  std::vector<Aggregate> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<double>> values;
  for (const ReportRow& row : rows) {
    const std::string group = row.method + '|' + std::to_string(row.payload) + '|' + row.distortion + '|' + num(row.strength);
    auto [it, inserted] = index.emplace(group, out.size());
    if (inserted) {
      Aggregate a;
      a.method = row.method;
      a.payload = row.payload;
      a.distortion = row.distortion;
      a.strength = row.strength;
      out.push_back(a);
      values.emplace_back();
    }
    Aggregate& a = out[it->second];
    if (row.skipped()) {
      ++a.skipped;
      continue;
    }
    values[it->second].push_back(*row.bit_acc);
    a.mean_psnr += row.psnr;
    a.mean_mssim += row.mssim;
    a.mean_det += row.det_score.value_or(0.0);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    Aggregate& a = out[i];
    const auto& v = values[i];
    a.n = static_cast<int>(v.size());
    a.histogram = histogram(v);
    if (v.empty()) continue;
    double sum = 0.0;
    for (double x : v) sum += x;
    a.mean = sum / a.n;
    double ss = 0.0;
    for (double x : v) ss += (x - a.mean) * (x - a.mean);
    a.std = a.n > 1 ? std::sqrt(ss / (a.n - 1)) : 0.0;
    a.mean_psnr /= a.n;
    a.mean_mssim /= a.n;
    a.mean_det /= a.n;
  }
  return out;
}

std::string format_csv_row(const ReportRow& r) {
  std::string line = field(r.method) + ',' + num(r.alpha) + ',' + std::to_string(r.payload) + ',' + field(r.distortion) +
                     ',' + num(r.strength) + ',' + field(r.clip) + ',' + std::to_string(r.seed) + ',' +
                     (r.bit_acc ? num(*r.bit_acc) : std::string("SKIPPED")) + ',' + num(r.psnr) + ',' + num(r.mssim) +
                     ',' + num(r.tpsnr) + ',' + (r.det_score ? num(*r.det_score) : std::string()) + ',' +
                     (r.ms ? num(*r.ms) : std::string());
  return line;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kCsvHeader) + '\n';
  for (const ReportRow& r : rows) out += format_csv_row(r) + '\n';
  return out;
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(Errc::CorruptHeader, "CSV header does not match the report columns");
  }
  std::vector<ReportRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw Error(Errc::CorruptHeader, "line " + std::to_string(lineno) + ": expected 13 fields");
    try {
      ReportRow r;
      r.method = f[0];
      r.alpha = parse_num(f[1]);
      r.payload = std::stoi(f[2]);
      r.distortion = f[3];
      r.strength = parse_num(f[4]);
      r.clip = f[5];
      r.seed = std::stoull(f[6]);
      if (f[7] != "SKIPPED") r.bit_acc = parse_num(f[7]);
      r.psnr = parse_num(f[8]);
      r.mssim = parse_num(f[9]);
      r.tpsnr = parse_num(f[10]);
      if (!f[11].empty()) r.det_score = parse_num(f[11]);
      if (!f[12].empty()) r.ms = parse_num(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw Error(Errc::CorruptHeader, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

nlohmann::json to_json(const ReportRow& r) {
  nlohmann::json j = {{"method", r.method},   {"alpha", r.alpha},           {"payload", r.payload},
                      {"distortion", r.distortion}, {"strength", r.strength}, {"clip", r.clip},
                      {"seed", r.seed},       {"psnr", jnum(r.psnr)},       {"mssim", r.mssim},
                      {"tpsnr", jnum(r.tpsnr)}};
  j["bit_acc"] = r.bit_acc ? nlohmann::json(*r.bit_acc) : nlohmann::json("SKIPPED");
  j["det_score"] = r.det_score ? nlohmann::json(*r.det_score) : nlohmann::json(nullptr);
  j["ms"] = r.ms ? nlohmann::json(*r.ms) : nlohmann::json(nullptr);
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

ReportRow row_from_json(const nlohmann::json& j) {
  ReportRow r;
  r.method = j.at("method").get<std::string>();
  r.alpha = j.at("alpha").get<double>();
  r.payload = j.at("payload").get<int>();
  r.distortion = j.at("distortion").get<std::string>();
  r.strength = j.at("strength").get<double>();
  r.clip = j.at("clip").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("bit_acc").is_string()) r.bit_acc = j.at("bit_acc").get<double>();
  r.psnr = from_jnum(j.at("psnr"));
  r.mssim = j.at("mssim").get<double>();
  r.tpsnr = from_jnum(j.at("tpsnr"));
  if (!j.at("det_score").is_null()) r.det_score = j.at("det_score").get<double>();
  if (j.contains("ms") && !j.at("ms").is_null()) r.ms = j.at("ms").get<double>();
  if (j.contains("extra")) r.extra = j.at("extra");
  return r;
}

nlohmann::json to_json(const Aggregate& a) {
  return {{"method", a.method}, {"payload", a.payload},     {"distortion", a.distortion},
          {"strength", a.strength}, {"n", a.n},             {"skipped", a.skipped},
          {"mean", a.mean},     {"std", a.std},             {"mean_psnr", jnum(a.mean_psnr)},
          {"mean_mssim", a.mean_mssim}, {"mean_det", a.mean_det}, {"histogram", a.histogram}};
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& r : report.rows) rows.push_back(to_json(r));
  nlohmann::json aggs = nlohmann::json::array();
  for (const Aggregate& a : report.aggregates()) aggs.push_back(to_json(a));
  return {{"command", report.command}, {"config", report.config}, {"flags", report.flags},
          {"rows", rows},              {"aggregates", aggs}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.command = j.value("command", "");
  if (j.contains("config")) r.config = j.at("config");
  if (j.contains("flags")) r.flags = j.at("flags");
  for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
  return r;
}

void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
  if (format == ReportFormat::CSV) {
    out << to_csv(report.rows);
  } else {
    out << to_json(report).dump(2) << '\n';
  }
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return report_from_json(nlohmann::json::parse(buf.str()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::CorruptHeader, path.string() + ": " + e.what());
    }
  }
  EvalReport r;
  r.rows = parse_csv(buf.str());
  return r;
}

}  // namespace vidmark
