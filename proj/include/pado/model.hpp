#pragma once

// Domain types and the per-slot physics: task arrivals, delay-class binning,
// delay and virtual queue recursions, execution times, CPU energy and battery
// dynamics. The scalar formulas are templates so the oracles can evaluate them
// in extended precision.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "pado/params.hpp"

namespace pado {

using Rng = std::mt19937_64;

/// Raised when a decision would extract more energy than the battery holds.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TaskSpec {
  double size_units = 0.0;
  double size_bits = 0.0;
  double workload = 0.0;  // CPU cycles, size_bits * cycles_per_bit
  double deadline = 0.0;  // seconds
  Eigen::VectorXd demand;  // resource demand, one entry per resource type
  int cls = 0;             // zero-based delay class
};

struct VehicleState {
  Eigen::VectorXd Q;  // delay queues, seconds
  Eigen::VectorXd W;  // virtual queues, seconds
  double backlog_bits = 0.0;  // only used by the backlog-driven baseline
  double cumulative_cost = 0.0;

  explicit VehicleState(int num_classes = 0)
      : Q(Eigen::VectorXd::Zero(num_classes)), W(Eigen::VectorXd::Zero(num_classes)) {}
};

struct ServerState {
  double B = 0.0;      // battery level, J
  double theta = 0.0;  // perturbation, J
  Eigen::VectorXd nu;  // resource multipliers
  double cumulative_revenue = 0.0;

  double B_tilde() const { return B - theta; }
};

/// One slot's joint action. Vehicle vectors are indexed by vehicle; entries of
/// vehicles without a task are zero.
struct SlotDecision {
  Eigen::VectorXd alpha, beta, f_local, f_server, g;
  double G = 0.0;
  double C = 0.0;

  explicit SlotDecision(int m = 0)
      : alpha(Eigen::VectorXd::Zero(m)),
        beta(Eigen::VectorXd::Zero(m)),
        f_local(Eigen::VectorXd::Zero(m)),
        f_server(Eigen::VectorXd::Zero(m)),
        g(Eigen::VectorXd::Zero(m)) {}
};

// ---------------------------------------------------------------------------
// Scalar physics

template <typename Scalar>
Scalar positive_part(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

/// Delay queue of the task's class after one slot. Other classes only drain,
/// which is this function with alpha = 0.
template <typename Scalar>
Scalar update_delay_queue(Scalar Q, Scalar zeta, Scalar alpha, Scalar workload, Scalar f_local) {
  Scalar drained = positive_part(Q - zeta);
  if (alpha <= Scalar(0)) return drained;
  if (!(f_local > Scalar(0)))
    throw std::invalid_argument("update_delay_queue: alpha > 0 needs f_local > 0");
  return drained + alpha * workload / f_local;
}

template <typename Scalar>
Scalar update_virtual_queue(Scalar W, Scalar Q_next, Scalar gamma) {
  return positive_part(W + Q_next - gamma);
}

template <typename Scalar>
struct ExecTimes {
  Scalar local = 0;
  Scalar server = 0;
  Scalar total = 0;
};

/// Local, server and total delay of one task. With alpha = 0 the total is the
/// served share on the server, beta * workload / f_server.
template <typename Scalar>
ExecTimes<Scalar> exec_times(Scalar workload, Scalar alpha, Scalar beta, Scalar f_local,
                             Scalar f_server, Scalar Q_prev) {
  ExecTimes<Scalar> t;
  if (alpha > Scalar(0)) {
    if (!(f_local > Scalar(0)))
      throw std::invalid_argument("exec_times: alpha > 0 needs f_local > 0");
    t.local = alpha * workload / f_local;
  }
  if (beta > Scalar(0)) {
    if (!(f_server > Scalar(0)))
      throw std::invalid_argument("exec_times: beta > 0 needs f_server > 0");
    t.server = beta * workload / f_server;
  }
  t.total = alpha > Scalar(0) ? std::max(Q_prev + t.local, t.server) : t.server;
  return t;
}

/// kappa f^2 * (alpha R / f): the CPU power model is kappa f^2.
template <typename Scalar>
Scalar local_energy(Scalar alpha, Scalar workload, Scalar f_local, Scalar kappa) {
  return kappa * alpha * f_local * workload;
}

template <typename Scalar>
Scalar server_energy(Scalar beta, Scalar workload, Scalar f_server, Scalar kappa) {
  return kappa * beta * f_server * workload;
}

/// Battery level after one slot. `sum_N` is the compute energy drawn by
/// offloaded work, `U` the renewable production, `G` the grid purchase and
/// `C` the energy charged. Throws SimulationFault when the extraction is
/// negative or exceeds the stored energy.
template <typename Scalar>
Scalar update_battery(Scalar B, Scalar U, Scalar sum_N, Scalar G, Scalar C, Scalar eta_plus,
                      Scalar eta_minus) {
  const Scalar deficit = positive_part(sum_N - U);
  const Scalar extracted = eta_minus * (deficit - G);
  const Scalar tol = Scalar(1e-12) * std::max({B, deficit * eta_minus, Scalar(1e-300)});
  if (extracted < -tol || extracted > B + tol)
    throw SimulationFault("battery extraction " + std::to_string(double(extracted)) +
                          " outside [0, " + std::to_string(double(B)) + "]");
  return B - extracted + eta_plus * C;
}

// ---------------------------------------------------------------------------
// Task generation and binning

/// Zero-based class of a task with deadline `tau`: the largest s with
/// gamma(s) <= tau, or 0 when every class deadline exceeds tau.
int delay_class(double tau, const Eigen::VectorXd& gamma);

/// Upper end of the deadline distribution, gamma_S times the configured or
/// geometric-ratio factor.
double deadline_upper(const SimParams& p);

/// Bernoulli(arrival_prob) arrival with a uniform size in task units and a
/// log-uniform deadline.
std::optional<TaskSpec> generate_task(Rng& rng, const SimParams& p);

/// Builds a task directly; the class is derived from the deadline.
TaskSpec make_task(const SimParams& p, double size_units, double deadline,
                   Eigen::VectorXd demand = {});

}  // namespace pado
