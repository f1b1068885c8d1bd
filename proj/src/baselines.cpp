#include "pado/baselines.hpp"

namespace pado {

FrequencyChoice le_decide(const VehicleState& s, const TaskSpec& task, const SimParams& p) {
  return best_frequency_for_split(s, task, Split{1.0, 0.0}, kNoOffer, p);
}

DroDecision dro_decide(Rng& rng, const VehicleState& s, const TaskSpec& task,
                       Eigen::VectorXd& capacity_left, const SimParams& p) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DroDecision d;
  double beta = 0.0;
  if (unit(rng) < p.dro_offload_prob) beta = unit(rng);
  d.wants_offload = beta > 0.0;
  d.split = {1.0 - beta, beta};

  if (d.wants_offload) {
    const bool fits = (task.demand.array() <= capacity_left.array()).all();
    const double f_min = task.workload / p.tau_d * (1.0 + 1e-9);
    if (fits && f_min <= p.f_server_max) {
      capacity_left -= task.demand;
      d.accepted = true;
      d.psi_off = p.dro_price_fraction * p.drop_price;
      d.f_server = f_min;
    } else {
      d.split.beta = 0.0;  // share billed at the cloud price
    }
  }
  if (d.split.alpha > 0.0)
    d.f_local = best_frequency_for_split(s, task, d.split, d.psi_off, p).f_local;
  return d;
}

double tdo_pressure(const VehicleState& s, const TaskSpec& task) { return s.Q(task.cls); }

FrequencyChoice tdo_decide(const VehicleState& s, const TaskSpec& task, double psi_off,
                           const SimParams& p) {
  return choose_local_frequency(tdo_pressure(s, task), task, psi_off, p);
}

double update_backlog_bits(double backlog_bits, const TaskSpec* task, const Split& split,
                           double f_local, const SimParams& p) {
  const double served = f_local * p.slot_length / p.cycles_per_bit;
  const double arrival = task ? split.alpha * task->size_bits : 0.0;
  return positive_part(backlog_bits - served) + arrival;
}

}  // namespace pado
