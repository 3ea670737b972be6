// Copyright (c) 2026 The tinyasr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "tinyasr/harness.hpp"

namespace tinyasr {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ops_json(const EditOps& ops) {
  return {{"substitutions", ops.substitutions},
          {"insertions", ops.insertions},
          {"deletions", ops.deletions},
          {"hits", ops.hits},
          {"ref_len", ops.ref_len}};
}

std::string_view metric_name(SweepMetric m) {
  return m == SweepMetric::kWer ? "wer" : "cer";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw HarnessError(HarnessErrc::kIo, "cannot write " + path.string());
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string report_to_json(const EvalReport& report) {
  const bool words = has_word_boundaries(report.meta.language);
  ordered_json j;
  j["meta"] = {{"model_id", report.meta.model_id},
               {"config_hash", report.meta.config_hash},
               {"language", std::string(language_code(report.meta.language))},
               {"normalization_version", report.meta.normalization_version}};
  ordered_json corpus;
  if (words && report.corpus.wer) corpus["wer"] = report.corpus.wer->value;
  corpus["cer"] = report.corpus.cer.value;
  corpus["excluded_count"] = report.corpus.excluded_count;
  corpus["failed_count"] = report.corpus.failed_count;
  j["corpus"] = std::move(corpus);

  ordered_json samples = ordered_json::array();
  for (const SampleResult& r : report.per_sample) {
    ordered_json s;
    s["id"] = r.id;
    s["audio"] = r.audio;
    s["status"] = r.failed ? "failed" : "ok";
    if (r.failed) {
      s["error"] = r.error;
      s["norm_ref"] = r.norm_ref;
    } else {
      s["raw_hyp"] = r.raw_hyp;
      s["norm_ref"] = r.norm_ref;
      s["norm_hyp"] = r.norm_hyp;
      if (words && r.word_ops) s["word_ops"] = ops_json(*r.word_ops);
      s["char_ops"] = ops_json(r.char_ops);
    }
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  const bool words = has_word_boundaries(report.meta.language);
  std::ostringstream out;
  out << "id,status";
  if (words) out << ",word_sub,word_ins,word_del,word_hits,word_ref_len";
  out << ",char_sub,char_ins,char_del,char_hits,char_ref_len,norm_ref,norm_hyp\n";
  for (const SampleResult& r : report.per_sample) {
    out << r.id << ',' << (r.failed ? "failed" : "ok");
    auto ops = [&](const std::optional<EditOps>& o) {
      if (!o || r.failed) {
        out << ",,,,,";
      } else {
        out << ',' << o->substitutions << ',' << o->insertions << ',' << o->deletions
            << ',' << o->hits << ',' << o->ref_len;
      }
    };
    if (words) ops(r.word_ops);
    ops(r.char_ops);
    out << ',' << csv_field(r.norm_ref) << ',' << csv_field(r.norm_hyp) << '\n';
  }
  return out.str();
}

std::string grid_to_json(const SweepGrid& grid) {
  ordered_json j;
  j["language"] = std::string(language_code(grid.language));
  j["metric"] = std::string(metric_name(grid.metric));
  j["gains_db"] = grid.gains_db;
  j["snrs_db"] = grid.snrs_db;
  j["clean"] = grid.clean.value;
  auto values = [](const std::vector<ErrorRate>& v) {
    ordered_json a = ordered_json::array();
    for (const ErrorRate& e : v) a.push_back(e.value);
    return a;
  };
  j["gain_only"] = values(grid.gain_only);
  j["snr_only"] = values(grid.snr_only);
  ordered_json cells = ordered_json::array();
  for (const auto& row : grid.cells) cells.push_back(values(row));
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

std::string grid_to_csv(const SweepGrid& grid) {
  std::string out = "gain_db,snr_db,error_percent\n";
  auto row = [&](const std::string& g, const std::string& s, const ErrorRate& e) {
    out += g + ',' + s + ',' + format_number(e.value) + '\n';
  };
  if (!grid.cells.empty()) {
    for (std::size_t g = 0; g < grid.gains_db.size(); ++g) {
      for (std::size_t s = 0; s < grid.snrs_db.size(); ++s) {
        row(format_number(grid.gains_db[g]), format_number(grid.snrs_db[s]),
            grid.cells[g][s]);
      }
    }
    return out;
  }
  row("", "", grid.clean);
  for (std::size_t g = 0; g < grid.gains_db.size(); ++g) {
    row(format_number(grid.gains_db[g]), "", grid.gain_only[g]);
  }
  for (std::size_t s = 0; s < grid.snrs_db.size(); ++s) {
    row("", format_number(grid.snrs_db[s]), grid.snr_only[s]);
  }
  return out;
}

void emit_report(const EvalReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  write_text(format == ReportFormat::kJson ? report_to_json(report) : report_to_csv(report),
             path);
}

void emit_report(const SweepGrid& grid, ReportFormat format,
                 const std::filesystem::path& path) {
  write_text(format == ReportFormat::kJson ? grid_to_json(grid) : grid_to_csv(grid), path);
}

}  // namespace tinyasr
