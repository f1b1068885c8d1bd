#include "pado/validation.hpp"

#include <cmath>

#include "pado/game.hpp"

namespace pado {

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

VehicleState random_state(Rng& rng, const SimParams& p) {
  VehicleState s(p.num_classes());
  for (int c = 0; c < p.num_classes(); ++c) {
    s.Q(c) = uniform(rng, 0.0, 3.0 * p.gamma(p.num_classes() - 1));
    s.W(c) = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : log_uniform(rng, 1e-6, 1.0);
  }
  return s;
}

TaskSpec random_task(Rng& rng, const SimParams& p) {
  Eigen::VectorXd demand(p.num_resources());
  for (int k = 0; k < demand.size(); ++k) demand(k) = uniform(rng, p.demand_min, p.demand_max);
  const double tau = log_uniform(rng, p.gamma(0) * 0.5, deadline_upper(p));
  return make_task(p, uniform(rng, p.task_units_min, p.task_units_max), tau, demand);
}

double random_price(Rng& rng, const SimParams& p) {
  if (uniform(rng, 0.0, 1.0) < 0.25) return kNoOffer;
  return log_uniform(rng, 1e-3 * p.drop_price, 10.0 * p.drop_price);
}

// Lipschitz estimate of the grid error around a grid point: half the largest
// objective change towards a neighbour, summed over the coordinates.
// f_ratio <= 1 skips the frequency coordinate.
double grid_slack(const VehicleState& s, const TaskSpec& task, double psi, const SimParams& p,
                  const P2Solution& at, double step, double f_ratio) {
  const double v0 = p2_objective(s, task, {at.alpha, at.beta}, at.f_local, psi, p);
  const double f_hi = p.f_max(task.cls), f_lo = f_hi * p.f_local_floor_ratio;
  auto change = [&](double a, double b, double f) {
    if (a < -1e-12 || b < -1e-12 || a + b > 1.0 + 1e-12 || f < f_lo * (1 - 1e-12) ||
        f > f_hi * (1 + 1e-12))
      return 0.0;
    const double v = p2_objective(s, task, {std::max(a, 0.0), std::max(b, 0.0)}, f, psi, p);
    return std::isfinite(v) ? std::abs(v - v0) : 0.0;
  };
  double slack = 0.5 * std::max(change(at.alpha - step, at.beta, at.f_local),
                                change(at.alpha + step, at.beta, at.f_local));
  slack += 0.5 * std::max(change(at.alpha, at.beta - step, at.f_local),
                          change(at.alpha, at.beta + step, at.f_local));
  if (f_ratio > 1.0)
    slack += 0.5 * std::max(change(at.alpha, at.beta, at.f_local / f_ratio),
                            change(at.alpha, at.beta, at.f_local * f_ratio));
  return slack;
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
  return {{"suite", name},         {"instances", instances}, {"failures", failures},
          {"worst", worst},        {"tolerance", tolerance}, {"extra", extra},
          {"passed", passed()},    {"notes", notes}};
}

VehicleBid random_bid(Rng& rng, int vehicle, const SimParams& p) {
  const VehicleState s = random_state(rng, p);
  const TaskSpec task = random_task(rng, p);
  const double prior = uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : random_price(rng, p);
  return make_bid(vehicle, s, task, prior, p);
}

SuiteReport validate_p2(const SimParams& base, int n, std::uint64_t seed) {
  SuiteReport r;
  r.name = "p2";
  r.instances = n;
  // Gaps are reported relative to the cost of dropping the whole task; an
  // instance fails when the gap exceeds its grid slack plus rounding.
  r.tolerance = 1e-12;
  Rng rng(seed);
  const P2Grid grid;
  for (int i = 0; i < n; ++i) {
    SimParams p = base;
    p.V = log_uniform(rng, 1e7, 1e11);
    const VehicleState s = random_state(rng, p);
    const TaskSpec task = random_task(rng, p);
    const double psi = random_price(rng, p);
    const double scale = p.V * p.drop_price * task.workload;
    const double f_ratio =
        std::pow(1.0 / p.f_local_floor_ratio, 1.0 / std::max(grid.f_points - 1, 1));

    const auto closed = choose_local_frequency(s, task, psi, p);
    const auto brute = brute_force_p2(s, task, psi, p, grid);
    const double slack = grid_slack(s, task, psi, p, brute, grid.step, f_ratio);
    double excess = (closed.value - brute.value - slack) / scale;

    const double f = log_uniform(rng, p.f_max(task.cls) * p.f_local_floor_ratio, p.f_max(task.cls));
    const Split sp = choose_split(unit_prices(s, task, f, psi, p), p.V, f, task.workload);
    const double at_f = p2_objective(s, task, sp, f, psi, p);
    const auto brute_f = brute_force_split(s, task, psi, f, p, grid.step);
    const double slack_f = grid_slack(s, task, psi, p, brute_f, grid.step, 0.0);
    excess = std::max(excess, (at_f - brute_f.value - slack_f) / scale);

    r.worst = std::max(r.worst, excess);
    if (excess > r.tolerance) {
      ++r.failures;
      if (r.notes.size() < 5)
        r.notes.push_back("instance " + std::to_string(i) + " excess " + std::to_string(excess));
    }
  }
  return r;
}

SuiteReport validate_grid_purchase(const SimParams& base, int n, std::uint64_t seed) {
  SuiteReport r;
  r.name = "grid";
  r.instances = n;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double chi = log_uniform(rng, 0.1 * base.price.low, 10.0 * base.price.high);
    const double H = log_uniform(rng, 1.0, 1e5);
    const double eta_minus = uniform(rng, 1.0, 2.0);
    const double e_max = log_uniform(rng, 0.1 * base.e_max, 10.0 * base.e_max);
    const double theta = perturbation_theta(H, chi * uniform(rng, 1.0, 2.0), eta_minus, e_max);
    const double B = uniform(rng, e_max, 2.0 * theta);
    const double deficit = uniform(rng, 0.0, 1.0) < 0.1 ? 0.0 : log_uniform(rng, 1e-3 * e_max, 1e2 * e_max);

    const double G = grid_purchase(B, theta, H, chi, deficit, e_max, eta_minus);
    // Exact argmin of (B_tilde eta_minus + H chi) G over [max(deficit - E_max, 0), deficit]
    // by enumeration; ties go to the larger purchase.
    const double coef = (B - theta) * eta_minus + H * chi;
    const double lo = std::max(deficit - e_max, 0.0), hi = deficit;
    double best_g = hi, best_v = coef * hi;
    for (int k = 100; k >= 0; --k) {
      const double g = k == 100 ? hi : (k == 0 ? lo : lo + (hi - lo) * k / 100.0);
      if (coef * g < best_v) best_v = coef * g, best_g = g;
    }
    if (G != best_g) {
      ++r.failures;
      if (r.notes.size() < 5) r.notes.push_back("instance " + std::to_string(i));
    }
  }
  return r;
}

SuiteReport validate_server(const SimParams& base, int n, std::uint64_t seed, double tolerance,
                            double min_termination) {
  SuiteReport r;
  r.name = "server";
  r.instances = n;
  r.tolerance = tolerance;
  Rng rng(seed);
  int terminated = 0;
  for (int i = 0; i < n; ++i) {
    SimParams p = base;
    for (int k = 0; k < p.omega.size(); ++k) p.omega(k) = uniform(rng, 0.0, 3.0);
    p.omega_scale = 1.0;
    const int m = 1 + static_cast<int>(uniform(rng, 0.0, 2.0));
    std::vector<VehicleBid> bids;
    for (int v = 0; v < m; ++v) bids.push_back(random_bid(rng, v, p));
    const double theta = perturbation_theta(p.H, p.price.high, p.eta_minus, p.e_max);
    const double B_tilde = uniform(rng, -theta, 0.5 * theta);
    const Eigen::VectorXd nu0 =
        initial_multipliers(p) * uniform(rng, 0.0, 2.0);

    const auto offer = solve_offer(bids, B_tilde, nu0, p);
    if (offer.converged) ++terminated;
    const auto star = brute_force_server(bids, B_tilde, offer.nu, p);
    const double gap = std::abs(offer.phi - star.phi) / std::max(std::abs(star.phi), 1e-300);
    r.worst = std::max(r.worst, gap);
    if (gap > tolerance) {
      ++r.failures;
      if (r.notes.size() < 5)
        r.notes.push_back("instance " + std::to_string(i) + " phi " + std::to_string(offer.phi) +
                          " oracle " + std::to_string(star.phi));
    }
  }
  r.extra = n > 0 ? double(terminated) / n : 1.0;
  if (r.extra < min_termination) {
    ++r.failures;
    r.notes.push_back("termination rate " + std::to_string(r.extra));
  }
  return r;
}

SuiteReport validate_battery(const SimParams& base) {
  SuiteReport r;
  r.name = "battery";
  r.instances = 1;
  const auto series = run_horizon(base);
  std::vector<double> B, chi;
  for (const auto& rec : series.records) B.push_back(rec.B), chi.push_back(rec.chi);
  const auto v = battery_bound_check(B, chi, series.summary.theta, base);
  r.instances = static_cast<int>(B.size());
  r.failures = static_cast<int>(v.size());
  for (std::size_t k = 0; k < std::min<std::size_t>(v.size(), 5); ++k)
    r.notes.push_back("t=" + std::to_string(v[k].t) + " B=" + std::to_string(v[k].B) + " (" +
                      v[k].branch + ")");
  return r;
}

}  // namespace pado
