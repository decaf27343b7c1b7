#pragma once

#include <string>
#include <vector>

#include "core/pipeline.h"

namespace tsel {

// Closed-open bucket rule: [0,45) -> "<45", [45,90] -> "45-90",
// (90,180] -> ">90"; negative separations (single-source rows) -> "n/a".
std::string separation_bucket(double separation_deg);

struct ReportRow {
  std::string method;
  std::string mask_type;
  bool df_beam = false;
  bool df_angle = false;
  std::string bucket;       // "<45" | "45-90" | ">90" | "n/a" | "all"
  std::string f0_pairing;   // "same" | "different" | "n/a" | "all"
  long n = 0;
  double mean_sdr = 0.0;
  double mean_si_sdr = 0.0;
  double mean_doa_error = 0.0;
};

struct Summary {
  std::vector<ReportRow> rows;
};

// Aggregates the non-failed rows of one or more batches by
// (method, mask_type, df_beam, df_angle, bucket, f0_pairing), including
// "all" marginals. Merged batches combine by weighted means.
Summary summarize(const std::vector<BatchReport>& batches);

std::string summary_to_csv(const Summary& summary);
Summary summary_from_csv(const std::string& text);
std::string summary_to_json(const Summary& summary);

// Reads batch JSON files, writes the CSV and JSON summaries.
Summary cmd_report(const std::vector<std::string>& batch_paths,
                   const std::string& csv_path, const std::string& json_path);

}  // namespace tsel
