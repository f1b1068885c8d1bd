#pragma once

// Leader side of the slot game: perturbed battery bookkeeping, grid purchase,
// charging and the dual-decomposition pricing of offloaded work.

#include <vector>

#include "pado/vehicle_policy.hpp"

namespace pado {

/// Smallest perturbation satisfying theta >= H chi_max / eta_minus + E_max.
double perturbation_theta(double H, double chi_max, double eta_minus, double e_max);

/// Perturbation used by the simulator: the admissible value for a price
/// ceiling of theta_price_headroom * chi_max, plus a discharge margin of
/// theta_margin_factor * eta_minus * E_max so that one full discharge from
/// just above the discharge threshold stays above E_max. The headroom lets
/// the charging ceiling grow with H.
double simulation_theta(const SimParams& p, double chi_max);

/// theta - H chi / eta_minus + eta_plus * C_max.
double battery_upper_bound(double theta, double H, double chi, double eta_minus,
                           double eta_plus, double c_max);

/// Grid purchase minimizing (B_tilde eta_minus + H chi) G: the battery covers
/// up to E_max of the deficit when the coefficient is positive, otherwise
/// the grid covers all of it.
double grid_purchase(double B, double theta, double H, double chi, double deficit,
                     double e_max, double eta_minus);

/// Energy charged from the renewable surplus. The battery charges only while
/// B_tilde eta_minus + H chi <= 0, and never above the confinement bound of
/// the highest price the trace can reach.
double charge_amount(double B, double theta, double chi, double chi_max, double surplus,
                     const SimParams& p);

/// Projected multiplier update nu + step * (usage - Omega), clipped at zero.
/// With MultiplierSign::Printed the step is subtracted instead.
Eigen::VectorXd update_multipliers(const Eigen::VectorXd& nu, const Eigen::VectorXd& step,
                                   const Eigen::VectorXd& usage, const Eigen::VectorXd& omega,
                                   MultiplierSign sign = MultiplierSign::Ascent);

enum class OfferCase { Full = 1, Partial = 2, Reject = 3 };

/// Leader objective of one vehicle under full offload, partial offload and
/// rejection. All three include the shared -nu . Omega term so that the
/// smallest one is the vehicle's contribution to the Lagrangian.
struct CaseObjectives {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
};

/// Case objective without the multiplier terms. Reject is 0.
double case_value(OfferCase c, const VehicleBid& bid, double f_server, double psi, double B_tilde,
                  const SimParams& p);

CaseObjectives case_objectives(const VehicleBid& bid, double f_server, double g, double B_tilde,
                               const Eigen::VectorXd& nu, const SimParams& p);

/// Whether the follower's closed-form response to price `psi_off` lands in the
/// given case. Full: strictly below the local price and not above the drop
/// price. Partial: between the two.
bool case_admissible(OfferCase c, const VehicleBid& bid, double psi_off);

/// Whether (f_server, g) respects the server delay bound, the frequency cap
/// and the price range.
bool offer_feasible(const VehicleBid& bid, double f_server, double g, const SimParams& p);

/// Offload fraction the leader expects at price `psi_off` in case `c`.
double predicted_beta(OfferCase c, const VehicleBid& bid, double psi_off);

struct VehicleOffer {
  bool accepted = false;
  OfferCase chosen = OfferCase::Reject;
  double f_server = 0.0;
  double g = 0.0;
  double psi_off = kNoOffer;
  double beta = 0.0;  // predicted follower response
};

struct ServerOffer {
  std::vector<VehicleOffer> offers;  // parallel to the bids
  Eigen::VectorXd nu;                // multipliers after the last update
  int iterations = 0;
  bool converged = false;
  double phi = 0.0;   // Lagrangian value at `nu`
  bool repaired = false;  // capacity repair rejected extra vehicles
};

/// Per-vehicle minimizers of the full and partial cases, independent of nu.
struct CaseOptimum {
  bool feasible = false;
  double value = 0.0;  // objective without the nu terms
  double f_server = 0.0;
  double g = 0.0;
  double beta = 0.0;
};

struct VehicleCases {
  CaseOptimum full, partial;
};

VehicleCases optimize_cases(const VehicleBid& bid, double B_tilde, const SimParams& p);

/// min over (f, g) and cases of the Lagrangian at fixed nu, with the chosen
/// case per vehicle.
struct InnerSolution {
  double phi = 0.0;
  std::vector<OfferCase> chosen;
  Eigen::VectorXd usage;
};

InnerSolution inner_minimum(const std::vector<VehicleBid>& bids,
                            const std::vector<VehicleCases>& cases, const Eigen::VectorXd& nu,
                            const Eigen::VectorXd& omega);

/// Convenience: optimize_cases for every bid, then inner_minimum.
InnerSolution evaluate_lagrangian(const std::vector<VehicleBid>& bids, double B_tilde,
                                  const Eigen::VectorXd& nu, const SimParams& p);

/// Dual ascent over nu with per-vehicle case selection. Stops when the
/// Lagrangian changes by less than epsilon * dual_scale or after
/// max_iterations updates. A final pass rejects the lowest-gain vehicles
/// until every capacity holds.
ServerOffer solve_offer(const std::vector<VehicleBid>& bids, double B_tilde,
                        const Eigen::VectorXd& nu_init, const SimParams& p);

/// Initial multipliers nu_max, expressed in dual_scale / demand_max units.
Eigen::VectorXd initial_multipliers(const SimParams& p);

/// Service income minus grid cost.
double server_revenue(double service_income, double chi, double G);

}  // namespace pado
