// Copyright 2026 The skymr Authors.
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

#include "skymr/metering/report.hpp"

#include <sstream>

#include "skymr/common/error.hpp"

namespace skymr::metering {
namespace {

using nlohmann::json;

json counters_json(const PhaseCounters& c, const WorkModel& model) {
  json j = json::object();
  for (std::size_t i = 0; i < kCounterCount; ++i) j[std::string(to_string(static_cast<Counter>(i)))] = c.counts[i];
  j["work_units"] = c.work_units(model);
  j["wall_seconds"] = c.wallSeconds;
  return j;
}

PhaseCounters counters_from_json(const json& j) {
  PhaseCounters c;
  for (std::size_t i = 0; i < kCounterCount; ++i)
    c.counts[i] = j.value(std::string(to_string(static_cast<Counter>(i))), std::uint64_t{0});
  c.wallSeconds = j.value("wall_seconds", 0.0);
  return c;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

void csv_counters(std::ostream& os, const PhaseCounters& c, const WorkModel& model) {
  os << c[Counter::kDiskRead] << ',' << c[Counter::kDiskWrite] << ',' << c[Counter::kNetLocal] << ','
     << c[Counter::kNetRemote] << ',' << fmt(c.work_units(model)) << ',' << fmt(c.wallSeconds);
}

}  // namespace

void RunReport::refresh_amdahl() {
  amdahl = job_amdahl_report(meter, workModel, AmdahlOptions{watts, wallSeconds});
}

json to_json(const RunReport& r) {
  json doc;
  doc["run_id"] = r.runId;
  doc["command"] = r.command;
  doc["config"] = r.config;
  doc["wall_seconds"] = r.wallSeconds;
  doc["work_model"] = {
      {"per_checksum_byte", r.workModel.perChecksumByte},
      {"per_codec_byte", r.workModel.perCodecByte},
      {"per_lane_byte", r.workModel.perLaneByte},
      {"per_key_comparison", r.workModel.perKeyComparison},
      {"per_distance_evaluation", r.workModel.perDistanceEvaluation},
      {"instr_rate_override_mips", optional_json(r.workModel.instrRateOverrideMips)},
  };
  json phases = json::object();
  for (Phase p : kAllPhases) phases[std::string(to_string(p))] = counters_json(r.meter[p], r.workModel);
  doc["phases"] = phases;
  json classes = json::array();
  for (const auto& row : r.amdahl.rows) {
    classes.push_back({
        {"class", std::string(to_string(row.taskClass))},
        {"work_units", row.workUnits},
        {"wall_seconds", row.counters.wallSeconds},
        {"disk_bytes", row.counters.disk_bytes()},
        {"net_bytes", row.counters.net_bytes()},
        {"instr_rate_mips", row.instrRateMips},
        {"disk_bit_rate", row.diskBitRate},
        {"net_bit_rate", row.netBitRate},
        {"ad", optional_json(row.ad)},
        {"adn", optional_json(row.adn)},
    });
  }
  doc["amdahl"] = classes;
  if (r.amdahl.energy)
    doc["energy"] = {{"watts", r.amdahl.energy->watts},
                     {"wall_seconds", r.amdahl.energy->wallSeconds},
                     {"joules", r.amdahl.energy->joules}};
  else
    doc["energy"] = nullptr;
  doc["details"] = r.details;
  return doc;
}

RunReport run_report_from_json(const json& doc) {
  try {
    RunReport r;
    r.runId = doc.at("run_id").get<std::string>();
    r.command = doc.at("command").get<std::string>();
    r.config = doc.value("config", std::map<std::string, std::string>{});
    r.wallSeconds = doc.value("wall_seconds", 0.0);
    if (const auto& wm = doc.value("work_model", json::object()); !wm.empty()) {
      r.workModel.perChecksumByte = wm.value("per_checksum_byte", r.workModel.perChecksumByte);
      r.workModel.perCodecByte = wm.value("per_codec_byte", r.workModel.perCodecByte);
      r.workModel.perLaneByte = wm.value("per_lane_byte", r.workModel.perLaneByte);
      r.workModel.perKeyComparison = wm.value("per_key_comparison", r.workModel.perKeyComparison);
      r.workModel.perDistanceEvaluation = wm.value("per_distance_evaluation", r.workModel.perDistanceEvaluation);
      if (wm.contains("instr_rate_override_mips") && !wm["instr_rate_override_mips"].is_null())
        r.workModel.instrRateOverrideMips = wm["instr_rate_override_mips"].get<double>();
    }
    for (const auto& [name, value] : doc.at("phases").items()) {
      const auto phase = phase_from_string(name);
      if (!phase) throw Error(ErrorCode::kParseError, "unknown phase '" + name + "' in report");
      r.meter[*phase] = counters_from_json(value);
    }
    if (doc.contains("energy") && !doc["energy"].is_null()) r.watts = doc["energy"].at("watts").get<double>();
    r.details = doc.value("details", json::object());
    r.refresh_amdahl();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed run report: ") + e.what());
  }
}

std::string to_csv(const RunReport& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (Phase p : kAllPhases) {
    os << "phase," << to_string(p) << ',';
    csv_counters(os, r.meter[p], r.workModel);
    os << ",,,,,,\n";
  }
  for (const auto& row : r.amdahl.rows) {
    os << "class," << to_string(row.taskClass) << ',';
    csv_counters(os, row.counters, r.workModel);
    os << ',' << fmt(row.instrRateMips) << ',' << fmt(row.diskBitRate) << ',' << fmt(row.netBitRate) << ','
       << fmt(row.ad) << ',' << fmt(row.adn) << ",\n";
  }
  if (r.amdahl.energy)
    os << "energy,total,,,,,," << fmt(r.amdahl.energy->wallSeconds) << ",,,,,," << fmt(r.amdahl.energy->joules)
       << '\n';
  return os.str();
}

}  // namespace skymr::metering
