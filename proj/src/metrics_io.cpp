#include "pado/metrics_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pado {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<std::string> metrics_columns(int S) {
  std::vector<std::string> cols{"t"};
  for (int s = 1; s <= S; ++s) cols.push_back("Q_mean_s" + std::to_string(s));
  for (int s = 1; s <= S; ++s) cols.push_back("W_mean_s" + std::to_string(s));
  for (const char* c : {"B", "G", "U", "C", "sum_N", "chi", "revenue", "vehicle_cost_mean",
                        "drop_rate", "acceptance_rate", "unit_price", "delay_mean", "tasks"})
    cols.emplace_back(c);
  return cols;
}

std::string metrics_csv(const std::vector<MetricsRecord>& records, int S) {
  std::ostringstream os;
  const auto cols = metrics_columns(S);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : records) {
    os << r.t;
    for (int s = 0; s < S; ++s) os << "," << num(r.Q_mean(s));
    for (int s = 0; s < S; ++s) os << "," << num(r.W_mean(s));
    for (double v : {r.B, r.G, r.U, r.C, r.sum_N, r.chi, r.revenue, r.vehicle_cost_mean,
                     r.drop_rate, r.acceptance_rate, r.unit_price, r.delay_mean})
      os << "," << num(v);
    os << "," << r.tasks << "\n";
  }
  return os.str();
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records,
                       int S) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << metrics_csv(records, S);
}

std::map<std::string, std::vector<double>> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t i = 0; i < names.size() && std::getline(ss, cell, ','); ++i)
      cols[names[i]].push_back(std::stod(cell));
  }
  return cols;
}

nlohmann::json summary_to_json(const Summary& s) {
  return {{"slots", s.slots},
          {"Q_avg", to_vec(s.Q_avg)},
          {"W_avg", to_vec(s.W_avg)},
          {"W_final_quarter", to_vec(s.W_final_quarter)},
          {"W_mid_run", to_vec(s.W_mid_run)},
          {"delay_per_class", to_vec(s.delay_per_class)},
          {"delay_overall", s.delay_overall},
          {"vehicle_cost", s.vehicle_cost},
          {"revenue_total", s.revenue_total},
          {"revenue_avg", s.revenue_avg},
          {"payments_total", s.payments_total},
          {"income_total", s.income_total},
          {"battery_min", s.battery_min},
          {"battery_max", s.battery_max},
          {"battery_final_quarter", s.battery_final_quarter},
          {"grid_total", s.grid_total},
          {"drop_rate", s.drop_rate},
          {"acceptance_rate", s.acceptance_rate},
          {"unit_price", s.unit_price},
          {"converged_fraction", s.converged_fraction},
          {"theta", s.theta},
          {"chi_max", s.chi_max}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json run_lock(const SimParams& p) {
  return {{"csv_schema", kCsvSchemaVersion}, {"seed", p.seed}, {"config", params_to_json(p)}};
}

}  // namespace pado
