#pragma once

// Brute-force reference solvers. They share only the objective evaluators
// with the policies, never the decision logic.

#include <string>
#include <vector>

#include "pado/server_policy.hpp"

namespace pado {

struct P2Grid {
  double step = 0.01;  // alpha and beta resolution
  int f_points = 64;   // log-spaced local frequencies
};

struct P2Solution {
  double alpha = 0.0, beta = 0.0, f_local = 0.0;
  double value = 0.0;
};

/// Exhaustive minimum of the vehicle objective over alpha + beta <= 1 and the
/// frequency grid.
P2Solution brute_force_p2(const VehicleState& s, const TaskSpec& task, double psi_off,
                          const SimParams& p, const P2Grid& grid = {});

/// Same search at one fixed local frequency.
P2Solution brute_force_split(const VehicleState& s, const TaskSpec& task, double psi_off,
                             double f_local, const SimParams& p, double step = 0.01);

struct ServerGrid {
  int f_points = 512;  // log-spaced over the feasible frequency window
  int g_points = 512;  // linear over [0, min(g_max, psi_cld f)]
  int zoom_levels = 1;  // extra grids around the best cell
};

struct ServerSolution {
  double phi = 0.0;
  std::vector<OfferCase> chosen;
  std::vector<double> f_server, g;
};

/// Exact minimum of the Lagrangian at fixed nu over case assignments and the
/// (f, g) grid. At most 3 vehicles; throws std::invalid_argument above.
ServerSolution brute_force_server(const std::vector<VehicleBid>& bids, double B_tilde,
                                  const Eigen::VectorXd& nu, const SimParams& p,
                                  const ServerGrid& grid = {});

struct BoundViolation {
  long t = 0;
  double B = 0.0, lower = 0.0, upper = 0.0;
  std::string branch;  // "charge" or "discharge" rule active at t
};

/// Checks E_max <= B^t <= theta - H chi^t / eta_minus + eta_plus C_max for
/// every t, with no tolerance.
std::vector<BoundViolation> battery_bound_check(const std::vector<double>& B,
                                                const std::vector<double>& chi, double theta,
                                                const SimParams& p);

}  // namespace pado
