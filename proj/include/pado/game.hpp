#pragma once

// Slot-level leader/follower exchange and the horizon loop.

#include <vector>

#include "pado/baselines.hpp"
#include "pado/server_policy.hpp"
#include "pado/traces.hpp"

namespace pado {

struct MetricsRecord {
  long t = 0;
  Eigen::VectorXd Q_mean, W_mean;  // per class, mean over vehicles, end of slot
  double B = 0.0;                  // battery at the start of the slot
  double G = 0.0, U = 0.0, C = 0.0, sum_N = 0.0, chi = 0.0;
  double revenue = 0.0;            // service income minus grid cost
  double income = 0.0;
  double payments = 0.0;           // sum of vehicle payments
  double vehicle_cost_mean = 0.0;  // over all vehicles
  double drop_rate = 0.0;          // dropped cycles / arrived cycles
  double acceptance_rate = 0.0;    // accepted offers / offload requests
  double unit_price = 0.0;         // payments / offloaded task units
  double delay_mean = 0.0;         // over served tasks of the slot
  int tasks = 0;

  // raw sums for the aggregates
  Eigen::VectorXd delay_sum, delay_count;  // per class
  double arrived_cycles = 0.0, dropped_cycles = 0.0, offloaded_units = 0.0;
  int requests = 0, accepted = 0;
  int iterations = 0;
  bool converged = true;
};

struct Summary {
  long slots = 0;
  Eigen::VectorXd Q_avg, W_avg, W_final_quarter, W_mid_run;
  Eigen::VectorXd delay_per_class;  // mean task delay, NaN-free: 0 without tasks
  double delay_overall = 0.0;
  double vehicle_cost = 0.0;        // time average of the per-slot mean
  double revenue_total = 0.0, revenue_avg = 0.0;
  double payments_total = 0.0, income_total = 0.0;
  double battery_min = 0.0, battery_max = 0.0, battery_final_quarter = 0.0;
  double grid_total = 0.0;
  double drop_rate = 0.0, acceptance_rate = 0.0, unit_price = 0.0;
  double converged_fraction = 1.0;
  double theta = 0.0, chi_max = 0.0;
};

struct MetricsSeries {
  std::vector<MetricsRecord> records;
  Summary summary;
};

struct WorldState {
  SimParams params;
  long t = 0;
  std::vector<VehicleState> vehicles;
  ServerState server;
  EnergyTraces traces;
  double chi_max = 0.0;
  std::vector<Rng> vehicle_rng;
  Rng server_rng;
  std::vector<double> prior_psi;  // last announced price per vehicle
  std::vector<double> last_f;     // last local frequency per vehicle
};

/// Fresh world at slot 0. Traces are generated for T_slots; they repeat
/// cyclically beyond.
WorldState make_world(const SimParams& p);

struct SlotOutcome {
  SlotDecision decision;
  MetricsRecord metrics;
};

/// Advances `w` by one slot. Throws SimulationFault on an invalid battery
/// extraction.
SlotOutcome run_slot(WorldState& w);

MetricsSeries run_horizon(const SimParams& p);

Summary summarize(const std::vector<MetricsRecord>& records, const SimParams& p, double theta,
                  double chi_max);

}  // namespace pado
