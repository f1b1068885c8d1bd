#pragma once

// CSV and JSON exports of a run.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pado/game.hpp"

namespace pado {

inline constexpr const char* kCsvSchemaVersion = "1";

std::vector<std::string> metrics_columns(int num_classes);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       int num_classes);
std::string metrics_csv(const std::vector<MetricsRecord>& records, int num_classes);

/// Column name -> values.
std::map<std::string, std::vector<double>> read_metrics_csv(const std::string& path);

nlohmann::json summary_to_json(const Summary& s);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json run_lock(const SimParams& p);

}  // namespace pado
