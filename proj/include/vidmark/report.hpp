#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vidmark {

// One (method, distortion cell, clip, seed) measurement. psnr/mssim/tpsnr
// compare cover and watermarked clip; bit_acc and det_score are measured
// after the distortion.
struct ReportRow {
  std::string method;
  double alpha = 0.0;
  int payload = 0;
  std::string distortion;
  double strength = 0.0;
  std::string clip;
  std::uint64_t seed = 0;
  std::optional<double> bit_acc;  // empty when the cell was skipped
  double psnr = 0.0;
  double mssim = 0.0;
  double tpsnr = 0.0;
  std::optional<double> det_score;
  std::optional<double> ms;        // only when timing is enabled
  nlohmann::json extra = nlohmann::json::object();

  bool skipped() const { return !bit_acc.has_value(); }
  // Identity of the work item, used for resuming.
  std::string key() const;
};

inline constexpr const char* kCsvHeader =
    "method,alpha,payload,distortion,strength,clip,seed,bit_acc,psnr,mssim,tpsnr,det_score,ms";
inline constexpr int kHistogramBuckets = 20;

struct Aggregate {
  std::string method;
  int payload = 0;
  std::string distortion;
  double strength = 0.0;
  int n = 0;
  int skipped = 0;
  double mean = 0.0;
  double std = 0.0;
  double mean_psnr = 0.0;
  double mean_mssim = 0.0;
  double mean_det = 0.0;
  std::vector<int> histogram;  // kHistogramBuckets bins of bit accuracy over [0, 1]
};

struct EvalReport {
  std::string command;  // matrix, alpha, payload, dims, editing
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json flags = nlohmann::json::object();
  std::vector<ReportRow> rows;

  std::vector<Aggregate> aggregates() const;
};

std::vector<int> histogram(const std::vector<double>& values, int buckets = kHistogramBuckets);

std::string format_csv_row(const ReportRow& row);
std::string to_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_csv(const std::string& text);

nlohmann::json to_json(const ReportRow& row);
ReportRow row_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Aggregate& agg);
nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

enum class ReportFormat { CSV, JSON };
// Throws IoFailure.
void emit_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format);
EvalReport load_report(const std::filesystem::path& path);

}  // namespace vidmark
