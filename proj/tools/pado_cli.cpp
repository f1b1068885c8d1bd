// pado: simulate, sweep and validate.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pado/game.hpp"
#include "pado/metrics_io.hpp"
#include "pado/svg_plot.hpp"
#include "pado/validation.hpp"

namespace fs = std::filesystem;
using namespace pado;

namespace {

constexpr int kExitBreach = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

SimParams resolve(const std::string& config, std::optional<std::uint64_t> seed,
                  const std::string& policy, int slots) {
  SimParams p = config.empty() ? default_params() : load_params(config);
  if (seed) p.seed = *seed;
  if (!policy.empty()) p.policy = policy_from_string(policy);
  if (slots >= 0) p.T_slots = slots;
  validate(p);
  return p;
}

void export_run(const fs::path& dir, const SimParams& p, const MetricsSeries& s) {
  fs::create_directories(dir);
  write_metrics_csv((dir / "metrics.csv").string(), s.records, p.num_classes());
  write_json((dir / "summary.json").string(), summary_to_json(s.summary));
  write_json((dir / "run.lock.json").string(), run_lock(p));
}

void apply_param(SimParams& p, const std::string& name, double v) {
  if (name == "V") p.V = v;
  else if (name == "H") p.H = v;
  else if (name == "rho") p.arrival_prob = v;
  else if (name == "omega_scale") p.omega_scale = v;
  else throw ConfigError("--param", "unknown sweep parameter '" + name + "'");
}

std::string value_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Job {
  std::string policy;
  double value;
  SimParams params;
  fs::path dir;
};

void plot_sweep(const fs::path& out, const std::string& param, const std::vector<Job>& jobs,
                const std::vector<std::string>& policies, const std::vector<double>& values) {
  const bool logx = param == "V" || param == "H" || param == "omega_scale";
  std::vector<PlotSeries> delay, tradeoff, price, revenue;
  for (const auto& pol : policies) {
    PlotSeries d{pol}, t{pol}, pr{pol}, rv{pol};
    t.markers_only = true;
    for (const auto& j : jobs) {
      if (j.policy != pol) continue;
      std::ifstream in(j.dir / "summary.json");
      const auto s = nlohmann::json::parse(in);
      d.x.push_back(j.value), d.y.push_back(s["delay_overall"].get<double>());
      t.x.push_back(s["delay_overall"].get<double>()), t.y.push_back(s["vehicle_cost"].get<double>());
      pr.x.push_back(j.value), pr.y.push_back(s["unit_price"].get<double>());
      rv.x.push_back(j.value), rv.y.push_back(s["revenue_total"].get<double>());
    }
    delay.push_back(d), tradeoff.push_back(t), price.push_back(pr), revenue.push_back(rv);
  }
  write_svg((out / ("delay_vs_" + param + ".svg")).string(),
            {"Average task delay vs " + param, param, "delay (s)", logx, false}, delay);
  write_svg((out / "cost_delay_tradeoff.svg").string(),
            {"Vehicle cost vs delay", "delay (s)", "cost per slot", false, false}, tradeoff);
  write_svg((out / ("price_vs_" + param + ".svg")).string(),
            {"Accepted unit price vs " + param, param, "price per task unit", logx, false}, price);
  write_svg((out / ("revenue_vs_" + param + ".svg")).string(),
            {"Server revenue vs " + param, param, "total revenue", logx, false}, revenue);

  // Battery traces of the first policy with their upper confinement bounds.
  std::vector<PlotSeries> battery, energy;
  for (const auto& j : jobs) {
    if (j.policy != policies.front()) continue;
    const auto csv = read_metrics_csv((j.dir / "metrics.csv").string());
    std::ifstream in(j.dir / "summary.json");
    const double theta = nlohmann::json::parse(in)["theta"].get<double>();
    const auto& p = j.params;
    PlotSeries b{param + "=" + value_tag(j.value), csv.at("t"), csv.at("B")};
    PlotSeries ub{"bound " + value_tag(j.value), csv.at("t"), {}};
    ub.dashed = true;
    for (double chi : csv.at("chi"))
      ub.y.push_back(battery_upper_bound(theta, p.H, chi, p.eta_minus, p.eta_plus, p.c_max));
    battery.push_back(b), battery.push_back(ub);
    if (energy.empty()) {
      energy.push_back({"renewable U", csv.at("t"), csv.at("U")});
      energy.push_back({"grid G", csv.at("t"), csv.at("G")});
      energy.push_back({"server demand", csv.at("t"), csv.at("sum_N")});
      energy.push_back({"charged C", csv.at("t"), csv.at("C")});
    }
  }
  write_svg((out / "battery.svg").string(),
            {"Battery level (" + policies.front() + ")", "slot", "energy (J)", false, false},
            battery);
  write_svg((out / "energy_sources.svg").string(),
            {"Energy sourcing, " + param + "=" + value_tag(values.front()), "slot", "energy (J)",
             false, false},
            energy);
}

int cmd_sweep(const std::string& config, std::optional<std::uint64_t> seed, int slots,
              const std::string& param, const std::vector<double>& values,
              const std::vector<std::string>& policies, const fs::path& out, int jobs_n) {
  std::vector<Job> jobs;
  for (const auto& pol : policies)
    for (double v : values) {
      SimParams p = resolve(config, seed, pol, slots);
      apply_param(p, param, v);
      validate(p);
      jobs.push_back({pol, v, p, out / (pol + "_" + param + "=" + value_tag(v))});
    }

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) {
      try {
        export_run(jobs[k].dir, jobs[k].params, run_horizon(jobs[k].params));
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs_n, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  nlohmann::json index = nlohmann::json::array();
  for (const auto& j : jobs) {
    std::ifstream in(j.dir / "summary.json");
    index.push_back({{"policy", j.policy},
                     {"param", param},
                     {"value", j.value},
                     {"dir", j.dir.filename().string()},
                     {"summary", nlohmann::json::parse(in)}});
  }
  write_json((out / "sweep.json").string(), index);
  plot_sweep(out, param, jobs, policies, values);
  std::cout << "wrote " << jobs.size() << " runs to " << out.string() << "\n";
  return 0;
}

int cmd_validate(const std::string& config, const std::string& suite, int n,
                 const std::string& json_path, std::uint64_t seed) {
  const SimParams p = resolve(config, std::nullopt, "", -1);
  if (n == 0) std::cerr << "warning: --n 0, the oracle suites are vacuous\n";
  std::vector<SuiteReport> reports;
  const bool all = suite == "all";
  if (all || suite == "p2") reports.push_back(validate_p2(p, n, seed));
  if (all || suite == "grid") reports.push_back(validate_grid_purchase(p, n, seed));
  if (all || suite == "server") reports.push_back(validate_server(p, n, seed));
  if (all || suite == "battery") reports.push_back(validate_battery(p));
  if (reports.empty()) throw ConfigError("--suite", "unknown suite '" + suite + "'");

  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.instances
              << " instances, " << r.failures << " failures, worst gap " << r.worst << "\n";
    for (const auto& note : r.notes) std::cout << "  " << note << "\n";
    ok = ok && r.passed();
    j.push_back(r.to_json());
  }
  if (!json_path.empty()) write_json(json_path, j);
  return ok ? 0 : kExitBreach;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PADO vehicular offloading simulator"};
  app.require_subcommand(1);

  std::string config, out = "out", policy, param = "V", suite = "all", json_path;
  std::optional<std::uint64_t> seed;
  int slots = -1, n = 100, jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<double> values;
  std::vector<std::string> policies{"pado"};
  std::uint64_t vseed = 12345;

  auto* sim = app.add_subcommand("simulate", "Run one simulation and export its metrics");
  sim->add_option("-c,--config", config, "Config file (JSON); default preset if omitted");
  sim->add_option("--seed", seed, "Override the seed");
  sim->add_option("--policy", policy, "pado | le | dro | tdo");
  sim->add_option("--slots", slots, "Override T_slots");
  sim->add_option("-o,--out", out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Run one simulation per parameter value and policy");
  sweep->add_option("-c,--config", config, "Config file (JSON)");
  sweep->add_option("--seed", seed, "Override the seed");
  sweep->add_option("--slots", slots, "Override T_slots");
  sweep->add_option("--param", param, "V | H | rho | omega_scale")
      ->check(CLI::IsMember({"V", "H", "rho", "omega_scale"}));
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',')->required();
  sweep->add_option("--policy", policies, "Comma-separated policies")->delimiter(',');
  sweep->add_option("-o,--out", out, "Output directory");
  sweep->add_option("-j,--jobs", jobs, "Worker threads");

  auto* val = app.add_subcommand("validate", "Compare the policies with brute-force oracles");
  val->add_option("-c,--config", config, "Config file (JSON)");
  val->add_option("--suite", suite, "p2 | grid | server | battery | all")
      ->check(CLI::IsMember({"p2", "grid", "server", "battery", "all"}));
  val->add_option("--n", n, "Fuzzed instances per suite")->check(CLI::NonNegativeNumber);
  val->add_option("--seed", vseed, "Fuzzing seed");
  val->add_option("--json", json_path, "Write a JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const SimParams p = resolve(config, seed, policy, slots);
      const auto series = run_horizon(p);
      export_run(out, p, series);
      std::cout << "wrote " << series.records.size() << " slots to " << out << "\n";
      return 0;
    }
    if (*sweep) return cmd_sweep(config, seed, slots, param, values, policies, out, jobs);
    if (*val) return cmd_validate(config, suite, n, json_path, vseed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << "\n";
    return kExitFault;
  }
  return 0;
}
