// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pado/game.hpp"
#include "pado/metrics_io.hpp"
#include "pado/oracle.hpp"
#include "pado/validation.hpp"

using namespace pado;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("CRITERION %d %s: %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const std::string& line) {
  std::printf("  %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string vec(const Eigen::VectorXd& v, double scale = 1.0) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt("%.4g", v(i) * scale);
  return s + "]";
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

SimParams base() { return default_params(); }

SimParams with_policy(SimParams p, PolicyKind k) {
  p.policy = k;
  return p;
}

// 1. Battery confinement for every slot and ordering of the stable level in H.
void battery_confinement() {
  constexpr double kHs[] = {200.0, 2000.0, 20000.0};
  bool ok = true;
  std::vector<double> level;
  std::string detail;
  for (double H : kHs) {
    auto p = base();
    p.H = H;
    p.T_slots = 10000;
    Timer tm;
    const auto r = run_horizon(p);
    const double secs = tm.seconds();
    std::vector<double> B, chi;
    for (const auto& m : r.records) B.push_back(m.B), chi.push_back(m.chi);
    const auto viol = battery_bound_check(B, chi, r.summary.theta, p);
    level.push_back(r.summary.battery_final_quarter);
    info("H=" + fmt("%g", H) + ": violations " + std::to_string(viol.size()) +
         ", final-quarter B " + fmt("%.4g", r.summary.battery_final_quarter) + " J, runtime " +
         fmt("%.2f", secs) + " s");
    ok = ok && viol.empty() && secs < 10.0;
  }
  const bool ordered = level[0] < level[1] && level[1] < level[2];
  detail = std::string("bounds hold every slot: ") + (ok ? "yes" : "no") +
           ", final-quarter level strictly increasing in H: " + (ordered ? "yes" : "no");
  report(1, ok && ordered, detail);
}

// 2. Time-averaged delay queues within 1.05 Gamma; virtual queues not growing.
void delay_guarantee() {
  auto p = base();
  p.V = 1e8;
  p.arrival_prob = 0.6;
  p.T_slots = 10000;
  const auto r = run_horizon(p);
  const auto& s = r.summary;
  bool ok = true;
  for (int c = 0; c < p.num_classes(); ++c) {
    ok = ok && s.Q_avg(c) <= 1.05 * p.gamma(c);
    ok = ok && s.W_final_quarter(c) <= 1.05 * s.W_mid_run(c);
  }
  info("Q_avg ms " + vec(s.Q_avg, 1e3) + " vs Gamma ms " + vec(p.gamma, 1e3));
  info("W mid-run " + vec(s.W_mid_run) + ", final quarter " + vec(s.W_final_quarter));
  report(2, ok, "Q_avg <= 1.05 Gamma and W final quarter <= 1.05 mid-run for all classes");
}

// 3. Closed-form split and frequency vs. the grid oracle.
void closed_form_optimality() {
  Timer tm;
  const auto r = validate_p2(base(), 1000, 301);
  const double secs = tm.seconds();
  for (const auto& n : r.notes) info(n);
  auto alt = base();
  alt.p2_energy_term = P2EnergyTerm::AlphaVariant;
  const auto ra = validate_p2(alt, 1000, 301);
  info("alpha-weighted energy term (informational): " + std::to_string(ra.failures) +
       " failures");
  report(3, r.passed() && secs < 30.0,
         std::to_string(r.instances - r.failures) + "/" + std::to_string(r.instances) +
             " within grid slack, worst excess " + fmt("%.3g", r.worst) +
             " of drop cost, runtime " + fmt("%.2f", secs) + " s");
}

// 4. Grid purchase equals the exact argmin.
void grid_purchase_optimality() {
  Timer tm;
  const auto r = validate_grid_purchase(base(), 1000, 401);
  const double secs = tm.seconds();
  report(4, r.passed() && secs < 5.0,
         std::to_string(r.instances - r.failures) + "/" + std::to_string(r.instances) +
             " exact, runtime " + fmt("%.3f", secs) + " s");
}

// 5. Dual ascent vs. the exhaustive leader oracle.
void offer_vs_oracle() {
  Timer tm;
  const auto r = validate_server(base(), 200, 501, 1e-3, 0.95);
  const double secs = tm.seconds();
  for (const auto& n : r.notes) info(n);
  report(5, r.passed() && secs < 120.0,
         std::to_string(r.instances - r.failures) + "/" + std::to_string(r.instances) +
             " within 1e-3, worst " + fmt("%.3g", r.worst) + ", terminated " +
             fmt("%.1f", 100.0 * r.extra) + "%, runtime " + fmt("%.1f", secs) + " s");
}

// 6. Cost/delay direction in V and convergence of the policies at large V.
void v_tradeoff() {
  const double Vs[] = {1e8, 1e9, 1e10, 1e11};
  constexpr double kNoise = 0.02;
  bool ok = true;
  std::vector<double> cost_at_max;
  for (auto k : {PolicyKind::PADO, PolicyKind::LE, PolicyKind::TDO}) {
    std::vector<double> cost, delay;
    for (double V : Vs) {
      auto p = with_policy(base(), k);
      p.V = V;
      const auto s = run_horizon(p).summary;
      cost.push_back(s.vehicle_cost);
      delay.push_back(s.delay_overall);
    }
    cost_at_max.push_back(cost.back());
    std::string line = to_string(k) + " cost";
    for (double c : cost) line += " " + fmt("%.4g", c);
    line += " | delay ms";
    for (double d : delay) line += " " + fmt("%.4g", d * 1e3);
    info(line);
    if (k == PolicyKind::TDO) continue;
    bool mono = true;
    for (std::size_t i = 1; i < cost.size(); ++i) {
      mono = mono && cost[i] <= cost[i - 1] * (1 + kNoise);
      mono = mono && delay[i] >= delay[i - 1] * (1 - kNoise);
    }
    info(to_string(k) + " monotone within 2%: " + (mono ? "yes" : "no"));
    ok = ok && mono;
  }
  const auto [lo, hi] = std::minmax_element(cost_at_max.begin(), cost_at_max.end());
  const double spread = (*hi - *lo) / *lo;
  info("cost spread at V=1e11: " + fmt("%.1f", 100 * spread) + "%");
  report(6, ok && spread <= 0.10,
         "LE/PADO cost non-increasing and delay non-decreasing in V; costs agree within 10% at V=1e11");
}

// 7. Unit price falls and revenue rises with capacity until saturation.
void capacity_price() {
  const double scales[] = {0.5, 1.0, 2.0, 4.0};
  constexpr double kPlateau = 1e-3;  // relative change counted as flat
  std::vector<double> price, revenue;
  for (double sc : scales) {
    auto p = base();
    p.omega_scale = sc;
    const auto s = run_horizon(p).summary;
    price.push_back(s.unit_price);
    revenue.push_back(s.revenue_total);
    info("omega x" + fmt("%g", sc) + ": unit price " + fmt("%.5g", s.unit_price) +
         ", revenue " + fmt("%.5g", s.revenue_total));
  }
  bool ok = true;
  int plateaus = 0;
  bool saturated = false;
  for (std::size_t i = 1; i < price.size(); ++i) {
    const double dp = (price[i] - price[i - 1]) / price[i - 1];
    const double dr = (revenue[i] - revenue[i - 1]) / std::abs(revenue[i - 1]);
    const bool flat = std::abs(dp) <= kPlateau && std::abs(dr) <= kPlateau;
    if (flat) {
      ++plateaus;
      saturated = true;
    } else {
      ok = ok && !saturated && dp <= 0.0 && dr >= 0.0;
    }
  }
  report(7, ok && plateaus <= 1,
         "price non-increasing, revenue non-decreasing, flat steps " + std::to_string(plateaus));
}

// 8. PADO delay and cost against the baselines at high load, over 10 seeds.
void benchmark_ordering() {
  int wins = 0;
  constexpr int kSeeds = 10;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    auto p = base();
    p.arrival_prob = 0.8;
    p.V = 1e9;
    p.seed = static_cast<std::uint64_t>(seed);
    const auto pado = run_horizon(with_policy(p, PolicyKind::PADO)).summary;
    double best_other = 1e300, le_cost = 0.0;
    for (auto k : {PolicyKind::LE, PolicyKind::DRO, PolicyKind::TDO}) {
      const auto s = run_horizon(with_policy(p, k)).summary;
      best_other = std::min(best_other, s.delay_overall);
      if (k == PolicyKind::LE) le_cost = s.vehicle_cost;
    }
    const bool delay_ok = pado.delay_per_class.maxCoeff() <= best_other;
    const bool cost_ok = pado.vehicle_cost <= le_cost;
    wins += delay_ok && cost_ok;
    info("seed " + std::to_string(seed) + ": PADO class delay ms " +
         vec(pado.delay_per_class, 1e3) + " vs best baseline " + fmt("%.4g", best_other * 1e3) +
         ", cost " + fmt("%.4g", pado.vehicle_cost) + " vs LE " + fmt("%.4g", le_cost));
  }
  report(8, 2 * wins > kSeeds,
         std::to_string(wins) + "/" + std::to_string(kSeeds) + " seeds satisfy both orderings");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Byte-identical reruns and prefix stability.
void determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "pado_acceptance";
  std::filesystem::create_directories(dir);
  bool same = true, prefix = true;
  for (auto k : {PolicyKind::PADO, PolicyKind::LE, PolicyKind::DRO, PolicyKind::TDO}) {
    auto p = with_policy(base(), k);
    p.T_slots = 400;
    const int S = p.num_classes();
    const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string(),
               c = (dir / "c.csv").string();
    write_metrics_csv(a, run_horizon(p).records, S);
    write_metrics_csv(b, run_horizon(p).records, S);
    p.T_slots = 700;
    write_metrics_csv(c, run_horizon(p).records, S);
    const auto sa = slurp(a), sb = slurp(b), sc = slurp(c);
    same = same && !sa.empty() && sa == sb;
    prefix = prefix && sc.size() > sa.size() && sc.compare(0, sa.size(), sa) == 0;
  }
  std::filesystem::remove_all(dir);
  report(9, same && prefix,
         std::string("identical reruns: ") + (same ? "yes" : "no") +
             ", longer horizon keeps prefix: " + (prefix ? "yes" : "no"));
}

}  // namespace

int main() {
  battery_confinement();
  delay_guarantee();
  closed_form_optimality();
  grid_purchase_optimality();
  offer_vs_oracle();
  v_tradeoff();
  capacity_price();
  benchmark_ordering();
  determinism();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures ? 1 : 0;
}
