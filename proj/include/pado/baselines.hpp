#pragma once

// Comparison policies: local-only execution (LE), dynamic random offloading
// (DRO) and a task-backlog Lyapunov controller (TDO).

#include "pado/vehicle_policy.hpp"

namespace pado {

/// LE: everything runs locally at the frequency minimizing the vehicle
/// objective restricted to alpha = 1.
FrequencyChoice le_decide(const VehicleState& s, const TaskSpec& task, const SimParams& p);

struct DroDecision {
  Split split;               // after the server's admission
  double f_local = 0.0;
  bool wants_offload = false;
  bool accepted = false;     // server had room for the offloaded share
  double psi_off = kNoOffer;  // posted price per cycle when accepted
  double f_server = 0.0;
};

/// DRO: with probability dro_offload_prob a fraction beta ~ U[0,1] is sent to
/// the server, the rest runs locally. The server admits the share while
/// `capacity_left` covers the task's demand (and deducts it); otherwise the
/// share goes to the cloud at the drop price.
DroDecision dro_decide(Rng& rng, const VehicleState& s, const TaskSpec& task,
                       Eigen::VectorXd& capacity_left, const SimParams& p);

/// Queue pressure of the backlog controller: the pending local work of the
/// task's class, without deadline offset or virtual queue.
double tdo_pressure(const VehicleState& s, const TaskSpec& task);

/// TDO: same closed-form split and frequency search, driven by the backlog.
FrequencyChoice tdo_decide(const VehicleState& s, const TaskSpec& task, double psi_off,
                           const SimParams& p);

/// Pending local bits: drained at f_local * zeta / L, fed by the local share.
double update_backlog_bits(double backlog_bits, const TaskSpec* task, const Split& split,
                           double f_local, const SimParams& p);

}  // namespace pado
