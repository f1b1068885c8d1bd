#include "pado/model.hpp"

namespace pado {

int delay_class(double tau, const Eigen::VectorXd& gamma) {
  int cls = 0;
  for (Eigen::Index s = 0; s < gamma.size(); ++s)
    if (gamma(s) <= tau) cls = static_cast<int>(s);
  return cls;
}

double deadline_upper(const SimParams& p) {
  const auto S = p.gamma.size();
  double factor = p.deadline_upper_factor;
  if (factor == 0.0) factor = S >= 2 ? p.gamma(S - 1) / p.gamma(S - 2) : 1.0;
  return p.gamma(S - 1) * factor;
}

TaskSpec make_task(const SimParams& p, double size_units, double deadline,
                   Eigen::VectorXd demand) {
  TaskSpec t;
  t.size_units = size_units;
  t.size_bits = size_units * p.bits_per_unit;
  t.workload = t.size_bits * p.cycles_per_bit;
  t.deadline = deadline;
  t.demand = demand.size() ? std::move(demand) : Eigen::VectorXd::Zero(p.num_resources());
  t.cls = delay_class(deadline, p.gamma);
  return t;
}

std::optional<TaskSpec> generate_task(Rng& rng, const SimParams& p) {
  std::bernoulli_distribution arrives(p.arrival_prob);
  if (!arrives(rng)) return std::nullopt;

  std::uniform_real_distribution<double> size(p.task_units_min, p.task_units_max);
  const double units = p.task_units_min == p.task_units_max ? p.task_units_min : size(rng);

  const double lo = std::log(p.gamma(0));
  const double hi = std::log(deadline_upper(p));
  std::uniform_real_distribution<double> log_tau(lo, hi);
  const double tau = hi > lo ? std::exp(log_tau(rng)) : p.gamma(0);

  Eigen::VectorXd demand(p.num_resources());
  std::uniform_real_distribution<double> dem(p.demand_min, p.demand_max);
  for (Eigen::Index k = 0; k < demand.size(); ++k)
    demand(k) = p.demand_max > p.demand_min ? dem(rng) : p.demand_min;

  return make_task(p, units, tau, std::move(demand));
}

}  // namespace pado
