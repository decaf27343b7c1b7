#include "core/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "core/error.h"

namespace tsel {

using nlohmann::json;

std::string separation_bucket(double separation_deg) {
  if (separation_deg < 0.0) return "n/a";
  if (separation_deg < 45.0) return "<45";
  if (separation_deg <= 90.0) return "45-90";
  return ">90";
}

namespace {

struct GroupKey {
  std::string method;
  std::string mask_type;
  bool df_beam;
  bool df_angle;
  std::string bucket;
  std::string f0_pairing;

  bool operator<(const GroupKey& o) const {
    return std::tie(method, mask_type, df_beam, df_angle, bucket, f0_pairing) <
           std::tie(o.method, o.mask_type, o.df_beam, o.df_angle, o.bucket,
                    o.f0_pairing);
  }
};

struct Accumulator {
  long n = 0;
  double sdr_sum = 0.0;
  double si_sdr_sum = 0.0;
  double doa_sum = 0.0;
  long doa_n = 0;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

Summary summarize(const std::vector<BatchReport>& batches) {
  std::map<GroupKey, Accumulator> groups;
  for (const auto& batch : batches) {
    for (const auto& row : batch.rows) {
      if (row.failed) continue;
      const std::string bucket = separation_bucket(row.metrics.angle_separation);
      const std::string pairing =
          row.metrics.f0_pairing.empty() ? "n/a" : row.metrics.f0_pairing;
      const GroupKey base{batch.method, batch.mask_type, batch.df_beam,
                          batch.df_angle, bucket, pairing};
      const GroupKey bucket_all{batch.method, batch.mask_type, batch.df_beam,
                                batch.df_angle, bucket, "all"};
      const GroupKey pairing_all{batch.method, batch.mask_type, batch.df_beam,
                                 batch.df_angle, "all", pairing};
      const GroupKey all{batch.method, batch.mask_type, batch.df_beam,
                         batch.df_angle, "all", "all"};
      for (const auto& key : {base, bucket_all, pairing_all, all}) {
        auto& acc = groups[key];
        acc.n += 1;
        acc.sdr_sum += row.metrics.sdr;
        acc.si_sdr_sum += row.metrics.si_sdr;
        if (row.metrics.doa_error_deg >= 0.0) {
          acc.doa_sum += row.metrics.doa_error_deg;
          acc.doa_n += 1;
        }
      }
    }
  }
  Summary summary;
  for (const auto& [key, acc] : groups) {
    ReportRow r;
    r.method = key.method;
    r.mask_type = key.mask_type;
    r.df_beam = key.df_beam;
    r.df_angle = key.df_angle;
    r.bucket = key.bucket;
    r.f0_pairing = key.f0_pairing;
    r.n = acc.n;
    r.mean_sdr = acc.sdr_sum / static_cast<double>(acc.n);
    r.mean_si_sdr = acc.si_sdr_sum / static_cast<double>(acc.n);
    r.mean_doa_error = acc.doa_n > 0 ? acc.doa_sum / static_cast<double>(acc.doa_n) : -1.0;
    summary.rows.push_back(std::move(r));
  }
  return summary;
}

std::string summary_to_csv(const Summary& summary) {
  std::ostringstream out;
  out << "method,mask_type,df_beam,df_angle,bucket,f0_pairing,n,mean_sdr,"
         "mean_si_sdr,mean_doa_error\n";
  for (const auto& r : summary.rows) {
    out << r.method << ',' << r.mask_type << ',' << (r.df_beam ? "true" : "false")
        << ',' << (r.df_angle ? "true" : "false") << ',' << r.bucket << ','
        << r.f0_pairing << ',' << r.n << ',' << format_double(r.mean_sdr) << ','
        << format_double(r.mean_si_sdr) << ',' << format_double(r.mean_doa_error)
        << '\n';
  }
  return out.str();
}

Summary summary_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(Status::kFormat, "empty CSV");
  Summary summary;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row_in(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(row_in, field, ',')) fields.push_back(field);
    if (fields.size() != 10) fail(Status::kFormat, "CSV row with wrong field count");
    ReportRow r;
    r.method = fields[0];
    r.mask_type = fields[1];
    r.df_beam = fields[2] == "true";
    r.df_angle = fields[3] == "true";
    r.bucket = fields[4];
    r.f0_pairing = fields[5];
    r.n = std::stol(fields[6]);
    r.mean_sdr = std::stod(fields[7]);
    r.mean_si_sdr = std::stod(fields[8]);
    r.mean_doa_error = std::stod(fields[9]);
    summary.rows.push_back(std::move(r));
  }
  return summary;
}

std::string summary_to_json(const Summary& summary) {
  json j = json::array();
  for (const auto& r : summary.rows) {
    json row;
    row["method"] = r.method;
    row["mask_type"] = r.mask_type;
    row["df_beam"] = r.df_beam;
    row["df_angle"] = r.df_angle;
    row["bucket"] = r.bucket;
    row["f0_pairing"] = r.f0_pairing;
    row["n"] = r.n;
    row["mean_sdr"] = r.mean_sdr;
    row["mean_si_sdr"] = r.mean_si_sdr;
    row["mean_doa_error"] = r.mean_doa_error;
    j.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

Summary cmd_report(const std::vector<std::string>& batch_paths,
                   const std::string& csv_path, const std::string& json_path) {
  if (batch_paths.empty()) fail(Status::kInvalidArgument, "need >= 1 batch file");
  std::vector<BatchReport> batches;
  for (const auto& path : batch_paths) {
    try {
      batches.push_back(load_batch(path));
    } catch (const Error& e) {
      fail(e.status() == Status::kIo ? Status::kIo : Status::kFormat,
           "bad batch file " + path + ": " + e.what());
    }
  }
  const Summary summary = summarize(batches);
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::trunc);
    if (!f) fail(Status::kIo, "cannot open for writing: " + csv_path);
    f << summary_to_csv(summary);
    if (!f) fail(Status::kIo, "write failed: " + csv_path);
  }
  if (!json_path.empty()) {
    std::ofstream f(json_path, std::ios::trunc);
    if (!f) fail(Status::kIo, "cannot open for writing: " + json_path);
    f << summary_to_json(summary);
    if (!f) fail(Status::kIo, "write failed: " + json_path);
  }
  return summary;
}

}  // namespace tsel
