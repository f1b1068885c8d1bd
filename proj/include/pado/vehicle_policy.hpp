#pragma once

// Follower side of the slot game: per-cycle unit prices of the three
// execution options, the closed-form local/offload/drop split and the
// pre-allocated local CPU frequency.

#include <limits>
#include <vector>

#include "pado/model.hpp"

namespace pado {

inline constexpr double kNoOffer = std::numeric_limits<double>::infinity();

/// Marginal price per CPU cycle of executing locally, offloading to the
/// server and dropping to the cloud.
struct UnitPrices {
  double loc = 0.0;
  double off = kNoOffer;
  double cld = 0.0;
};

struct Split {
  double alpha = 0.0;
  double beta = 0.0;
  double dropped() const { return std::max(0.0, 1.0 - alpha - beta); }
};

/// Server price per cycle for renting frequency `f_server` at `g` currency
/// per second.
inline double offload_price(double g, double f_server) { return g / f_server; }

/// |Q - zeta| + W - Gamma for the task's class: the coefficient of the local
/// execution time in the drift bound.
double queue_pressure(const VehicleState& s, const TaskSpec& task, const SimParams& p);

/// `psi_off` is the announced offload price per cycle, kNoOffer when the
/// server does not serve the vehicle.
UnitPrices unit_prices(const VehicleState& s, const TaskSpec& task, double f_local,
                       double psi_off, const SimParams& p);
/// Same with an explicit queue pressure, for controllers with other queues.
UnitPrices unit_prices(double pressure, double f_local, double psi_off, const SimParams& p);

/// Closed-form minimizer of the vehicle objective over (alpha, beta) at a
/// fixed local frequency. Price ties resolve in the order local, offload,
/// cloud.
Split choose_split(const UnitPrices& prices, double V, double f_local, double workload);

/// Per-slot drift-plus-penalty bound minimized by the vehicle.
double p2_objective(const VehicleState& s, const TaskSpec& task, const Split& split,
                    double f_local, double psi_off, const SimParams& p);
double p2_objective(double pressure, const TaskSpec& task, const Split& split, double f_local,
                    double psi_off, const SimParams& p);

struct FrequencyChoice {
  double f_local = 0.0;
  Split split;
  double value = 0.0;
};

/// 64 log-spaced candidate frequencies on [floor_ratio * f_max, f_max].
std::vector<double> frequency_grid(const SimParams& p, int cls, int points = 64);

/// Minimizes the objective over the local frequency, splitting optimally at
/// each candidate. Grid scan refined by golden-section search in log f;
/// ties and flat objectives resolve to the largest frequency.
FrequencyChoice choose_local_frequency(const VehicleState& s, const TaskSpec& task,
                                       double psi_off, const SimParams& p);
FrequencyChoice choose_local_frequency(double pressure, const TaskSpec& task, double psi_off,
                                       const SimParams& p);

/// Same search with the split fixed, used by the baselines.
FrequencyChoice best_frequency_for_split(const VehicleState& s, const TaskSpec& task,
                                         const Split& split, double psi_off,
                                         const SimParams& p);

/// A follower's provisional response, handed to the leader.
struct VehicleBid {
  int vehicle = 0;
  TaskSpec task;
  double f_local = 0.0;
  Split split;
  double psi_loc = 0.0;
  double psi_cld = 0.0;
  double V = 0.0;
};

VehicleBid make_bid(int vehicle, const VehicleState& s, const TaskSpec& task,
                    double prior_psi_off, const SimParams& p);
VehicleBid make_bid(int vehicle, double pressure, const TaskSpec& task, double prior_psi_off,
                    const SimParams& p);

}  // namespace pado
