#include "pado/vehicle_policy.hpp"

#include <cmath>

namespace pado {

double queue_pressure(const VehicleState& s, const TaskSpec& task, const SimParams& p) {
  const int c = task.cls;
  return std::abs(s.Q(c) - p.slot_length) + s.W(c) - p.gamma(c);
}

UnitPrices unit_prices(const VehicleState& s, const TaskSpec& task, double f_local,
                       double psi_off, const SimParams& p) {
  return unit_prices(queue_pressure(s, task, p), f_local, psi_off, p);
}

UnitPrices unit_prices(double pressure, double f_local, double psi_off, const SimParams& p) {
  UnitPrices u;
  u.loc = pressure / (p.V * f_local) + p.kappa * f_local;
  u.off = psi_off;
  u.cld = p.drop_price;
  return u;
}

Split choose_split(const UnitPrices& u, double V, double f_local, double workload) {
  if (!(workload > 0.0)) return {};
  const double c = V * f_local * f_local / workload;
  const auto fraction = [c](double gap) { return std::clamp(c * gap, 0.0, 1.0); };

  const bool local_first = u.loc <= u.off && u.loc <= u.cld;
  if (!local_first) return {0.0, u.off <= u.cld ? 1.0 : 0.0};
  if (u.off <= u.cld) {
    const double a = fraction(u.off - u.loc);
    return {a, 1.0 - a};
  }
  return {fraction(u.cld - u.loc), 0.0};
}

double p2_objective(const VehicleState& s, const TaskSpec& task, const Split& split,
                    double f_local, double psi_off, const SimParams& p) {
  return p2_objective(queue_pressure(s, task, p), task, split, f_local, psi_off, p);
}

double p2_objective(double pressure, const TaskSpec& task, const Split& split, double f_local,
                    double psi_off, const SimParams& p) {
  const double R = task.workload;
  const double x = split.alpha > 0.0 ? split.alpha * R / f_local : 0.0;
  const double energy_fraction =
      p.p2_energy_term == P2EnergyTerm::AlphaVariant ? split.alpha : split.beta;
  const double energy = p.kappa * energy_fraction * f_local * R;
  const double payment = split.beta > 0.0 ? split.beta * R * psi_off : 0.0;
  const double drop = split.dropped() * p.drop_price * R;
  return pressure * x + 0.5 * x * x + p.V * (energy + payment + drop);
}

std::vector<double> frequency_grid(const SimParams& p, int cls, int points) {
  const double hi = p.f_max(cls);
  const double lo = hi * p.f_local_floor_ratio;
  std::vector<double> f(points);
  for (int i = 0; i < points; ++i)
    f[i] = points == 1 ? hi : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
  f.back() = hi;
  return f;
}

namespace {

// Scan the log grid from the top, then golden-section search in log f around
// the best point. `eval(f)` returns (objective, split).
template <typename Eval>
FrequencyChoice minimize_over_frequency(const SimParams& p, int cls, Eval eval) {
  const auto grid = frequency_grid(p, cls);
  const int n = static_cast<int>(grid.size());
  FrequencyChoice best;
  int best_i = n - 1;
  for (int i = n - 1; i >= 0; --i) {
    auto [v, split] = eval(grid[i]);
    if (i == n - 1 || v < best.value) {
      best = {grid[i], split, v};
      best_i = i;
    }
  }

  double a = std::log(grid[std::max(best_i - 1, 0)]);
  double b = std::log(grid[std::min(best_i + 1, n - 1)]);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  auto probe = [&](double lf) {
    const double f = std::exp(lf);
    auto [v, split] = eval(f);
    if (v < best.value) best = {f, split, v};
    return v;
  };
  double v1 = probe(x1), v2 = probe(x2);
  for (int it = 0; it < 40 && b - a > 1e-9; ++it) {
    if (v1 <= v2) {
      b = x2;
      x2 = x1;
      v2 = v1;
      x1 = b - kInvPhi * (b - a);
      v1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + kInvPhi * (b - a);
      v2 = probe(x2);
    }
  }
  return best;
}

}  // namespace

FrequencyChoice choose_local_frequency(const VehicleState& s, const TaskSpec& task,
                                       double psi_off, const SimParams& p) {
  return choose_local_frequency(queue_pressure(s, task, p), task, psi_off, p);
}

FrequencyChoice choose_local_frequency(double pressure, const TaskSpec& task, double psi_off,
                                       const SimParams& p) {
  return minimize_over_frequency(p, task.cls, [&](double f) {
    const Split split = choose_split(unit_prices(pressure, f, psi_off, p), p.V, f, task.workload);
    return std::pair{p2_objective(pressure, task, split, f, psi_off, p), split};
  });
}

FrequencyChoice best_frequency_for_split(const VehicleState& s, const TaskSpec& task,
                                         const Split& split, double psi_off,
                                         const SimParams& p) {
  const double a = queue_pressure(s, task, p);
  return minimize_over_frequency(p, task.cls, [&](double f) {
    return std::pair{p2_objective(a, task, split, f, psi_off, p), split};
  });
}

VehicleBid make_bid(int vehicle, const VehicleState& s, const TaskSpec& task,
                    double prior_psi_off, const SimParams& p) {
  return make_bid(vehicle, queue_pressure(s, task, p), task, prior_psi_off, p);
}

VehicleBid make_bid(int vehicle, double pressure, const TaskSpec& task, double prior_psi_off,
                    const SimParams& p) {
  const auto choice = choose_local_frequency(pressure, task, prior_psi_off, p);
  const auto prices = unit_prices(pressure, choice.f_local, prior_psi_off, p);
  return {vehicle, task, choice.f_local, choice.split, prices.loc, prices.cld, p.V};
}

}  // namespace pado
