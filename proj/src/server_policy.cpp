#include "pado/server_policy.hpp"

#include <cmath>
#include <limits>

namespace pado {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double perturbation_theta(double H, double chi_max, double eta_minus, double e_max) {
  return H * chi_max / eta_minus + e_max;
}

double simulation_theta(const SimParams& p, double chi_max) {
  // The extra 1e-9 keeps the lower confinement bound exact under rounding.
  const double margin = p.theta_margin_factor * p.eta_minus * p.e_max * (1.0 + 1e-9);
  return perturbation_theta(p.H, p.theta_price_headroom * chi_max, p.eta_minus, p.e_max) +
         margin;
}

double battery_upper_bound(double theta, double H, double chi, double eta_minus,
                           double eta_plus, double c_max) {
  return theta - H * chi / eta_minus + eta_plus * c_max;
}

double grid_purchase(double B, double theta, double H, double chi, double deficit,
                     double e_max, double eta_minus) {
  if ((B - theta) * eta_minus + H * chi > 0.0) return std::max(deficit - e_max, 0.0);
  return deficit;
}

double charge_amount(double B, double theta, double chi, double chi_max, double surplus,
                     const SimParams& p) {
  if ((B - theta) * p.eta_minus + p.H * chi > 0.0) return 0.0;
  const double cap =
      battery_upper_bound(theta, p.H, chi_max, p.eta_minus, p.eta_plus, p.c_max);
  const double headroom = std::max(cap - B, 0.0) / p.eta_plus * (1.0 - 1e-12);
  return std::max(0.0, std::min({p.c_max, surplus, headroom}));
}

Eigen::VectorXd update_multipliers(const Eigen::VectorXd& nu, const Eigen::VectorXd& step,
                                   const Eigen::VectorXd& usage, const Eigen::VectorXd& omega,
                                   MultiplierSign sign) {
  const double dir = sign == MultiplierSign::Ascent ? 1.0 : -1.0;
  return (nu.array() + dir * step.array() * (usage - omega).array()).cwiseMax(0.0).matrix();
}

double predicted_beta(OfferCase c, const VehicleBid& bid, double psi_off) {
  switch (c) {
    case OfferCase::Full: return 1.0;
    case OfferCase::Partial: {
      const double slope = bid.V * bid.f_local * bid.f_local / bid.task.workload;
      return 1.0 - std::clamp(slope * (psi_off - bid.psi_loc), 0.0, 1.0);
    }
    case OfferCase::Reject: return 0.0;
  }
  return 0.0;
}

bool case_admissible(OfferCase c, const VehicleBid& bid, double psi_off) {
  switch (c) {
    case OfferCase::Full: return psi_off < bid.psi_loc && psi_off <= bid.psi_cld;
    case OfferCase::Partial: return bid.psi_loc <= psi_off && psi_off <= bid.psi_cld;
    case OfferCase::Reject: return true;
  }
  return false;
}

bool offer_feasible(const VehicleBid& bid, double f_server, double g, const SimParams& p) {
  return f_server > 0.0 && bid.task.workload / f_server < p.tau_d &&
         f_server <= p.f_server_max && g >= 0.0 && g <= p.effective_g_max();
}

double case_value(OfferCase c, const VehicleBid& bid, double f_server, double psi,
                  double B_tilde, const SimParams& p) {
  const double R = bid.task.workload;
  const double energy = p.kappa * B_tilde * p.eta_minus * f_server;
  switch (c) {
    case OfferCase::Full: return -R * (energy + p.H * psi);
    case OfferCase::Partial: {
      if (p.lambda2_form == Lambda2Form::Printed) {
        const double fl2 = bid.f_local * bid.f_local;
        const double T = p.lambda2_T;
        return p.H * fl2 * psi * psi + (energy * fl2 - R * T * p.H) * psi - R * T * energy;
      }
      const double beta = predicted_beta(OfferCase::Partial, bid, psi);
      return beta > 0.0 ? -beta * R * (energy + p.H * psi) : 0.0;
    }
    case OfferCase::Reject: return 0.0;
  }
  return 0.0;
}

CaseObjectives case_objectives(const VehicleBid& bid, double f_server, double g, double B_tilde,
                               const Eigen::VectorXd& nu, const SimParams& p) {
  const double psi = g / f_server;
  const double nu_omega = nu.dot(p.capacity());
  const double nu_r = nu.dot(bid.task.demand);
  CaseObjectives out;
  out.lambda1 = case_value(OfferCase::Full, bid, f_server, psi, B_tilde, p) + nu_r - nu_omega;
  // An unserved partial offer carries no resource term.
  const double partial = case_value(OfferCase::Partial, bid, f_server, psi, B_tilde, p);
  const bool serves = p.lambda2_form == Lambda2Form::Printed ||
                      predicted_beta(OfferCase::Partial, bid, psi) > 0.0;
  out.lambda2 = partial + (serves ? nu_r : 0.0) - nu_omega;
  out.lambda3 = -nu_omega;
  return out;
}

namespace {

struct PriceChoice {
  bool feasible = false;
  double value = kInf;
  double psi = 0.0;
};

// Best offload price at a fixed server frequency. The case objective is
// linear (full) or convex quadratic (partial) in the price, so the optimum is
// an endpoint of the admissible interval or the clamped vertex.
PriceChoice best_price(OfferCase c, const VehicleBid& bid, double f, double B_tilde,
                       const SimParams& p) {
  const double R = bid.task.workload;
  const double energy = p.kappa * B_tilde * p.eta_minus * f;
  const double psi_cap = p.effective_g_max() / f;
  double lo, hi;
  double candidates[3];
  int nc = 0;
  if (c == OfferCase::Full) {
    if (!(bid.psi_loc > 0.0)) return {};
    lo = 0.0;
    hi = std::min({bid.psi_loc * (1.0 - p.price_margin), bid.psi_cld, psi_cap});
  } else {
    lo = std::max(bid.psi_loc, 0.0);
    hi = std::min(bid.psi_cld, psi_cap);
    if (p.lambda2_form == Lambda2Form::Derived) {
      const double slope = bid.V * bid.f_local * bid.f_local / R;
      if (p.H > 0.0 && slope > 0.0)
        candidates[nc++] = 0.5 / slope + 0.5 * bid.psi_loc - energy / (2.0 * p.H);
    } else if (p.H > 0.0 && bid.f_local > 0.0) {
      const double fl2 = bid.f_local * bid.f_local;
      candidates[nc++] = -(energy * fl2 - R * p.lambda2_T * p.H) / (2.0 * p.H * fl2);
    }
  }
  if (!(hi >= lo)) return {};
  candidates[nc++] = lo;
  candidates[nc++] = hi;

  PriceChoice best;
  for (int k = 0; k < nc; ++k) {
    const double psi = std::clamp(candidates[k], lo, hi);
    if (c == OfferCase::Partial && predicted_beta(c, bid, psi) <= 0.0) continue;
    const double v = case_value(c, bid, f, psi, B_tilde, p);
    if (v < best.value) best = {true, v, psi};
  }
  return best;
}

CaseOptimum optimize_case(OfferCase c, const VehicleBid& bid, double B_tilde,
                          const SimParams& p) {
  const double f_lo = bid.task.workload / p.tau_d * (1.0 + 1e-9);
  const double f_hi = p.f_server_max;
  if (!(f_lo <= f_hi)) return {};

  CaseOptimum best;
  auto consider = [&](double f) {
    const auto pc = best_price(c, bid, f, B_tilde, p);
    if (pc.feasible && (!best.feasible || pc.value < best.value))
      best = {true, pc.value, f, pc.psi * f, predicted_beta(c, bid, pc.psi)};
    return pc.feasible ? pc.value : kInf;
  };

  constexpr int kGrid = 32;
  const double la = std::log(f_lo), lb = std::log(f_hi);
  int best_i = -1;
  double best_v = kInf;
  for (int i = 0; i < kGrid; ++i) {
    const double lf = kGrid == 1 || lb == la ? lb : la + (lb - la) * i / (kGrid - 1);
    const double v = consider(std::exp(lf));
    if (v < best_v) best_v = v, best_i = i;
  }
  if (best_i < 0) return best;

  // Golden-section refinement between the neighbours of the best grid point.
  const double step = (lb - la) / (kGrid - 1);
  double a = std::max(la, la + step * (best_i - 1)), b = std::min(lb, la + step * (best_i + 1));
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double v1 = consider(std::exp(x1)), v2 = consider(std::exp(x2));
  for (int it = 0; it < 30 && b - a > 1e-10; ++it) {
    if (v1 <= v2) {
      b = x2, x2 = x1, v2 = v1;
      x1 = b - kInvPhi * (b - a);
      v1 = consider(std::exp(x1));
    } else {
      a = x1, x1 = x2, v1 = v2;
      x2 = a + kInvPhi * (b - a);
      v2 = consider(std::exp(x2));
    }
  }
  return best;
}

double step_base(const SimParams& p, double scale) {
  return p.dual_step * scale / std::max(p.demand_max, 1e-12);
}

}  // namespace

VehicleCases optimize_cases(const VehicleBid& bid, double B_tilde, const SimParams& p) {
  return {optimize_case(OfferCase::Full, bid, B_tilde, p),
          optimize_case(OfferCase::Partial, bid, B_tilde, p)};
}

InnerSolution inner_minimum(const std::vector<VehicleBid>& bids,
                            const std::vector<VehicleCases>& cases, const Eigen::VectorXd& nu,
                            const Eigen::VectorXd& omega) {
  InnerSolution sol;
  sol.usage = Eigen::VectorXd::Zero(omega.size());
  sol.phi = -nu.dot(omega);
  sol.chosen.reserve(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const double nu_r = nu.dot(bids[i].task.demand);
    const double l1 = cases[i].full.feasible ? cases[i].full.value + nu_r : kInf;
    const double l2 = cases[i].partial.feasible ? cases[i].partial.value + nu_r : kInf;
    OfferCase c = OfferCase::Reject;
    double v = 0.0;
    if (l1 <= l2 && l1 <= v) {
      c = OfferCase::Full, v = l1;
    } else if (l2 < l1 && l2 <= v) {
      c = OfferCase::Partial, v = l2;
    }
    sol.phi += v;
    sol.chosen.push_back(c);
    if (c != OfferCase::Reject) sol.usage += bids[i].task.demand;
  }
  return sol;
}

InnerSolution evaluate_lagrangian(const std::vector<VehicleBid>& bids, double B_tilde,
                                  const Eigen::VectorXd& nu, const SimParams& p) {
  std::vector<VehicleCases> cases;
  cases.reserve(bids.size());
  for (const auto& b : bids) cases.push_back(optimize_cases(b, B_tilde, p));
  return inner_minimum(bids, cases, nu, p.capacity());
}

Eigen::VectorXd initial_multipliers(const SimParams& p) {
  return Eigen::VectorXd::Constant(p.num_resources(),
                                   p.nu_max * p.dual_scale() / std::max(p.demand_max, 1e-12));
}

ServerOffer solve_offer(const std::vector<VehicleBid>& bids, double B_tilde,
                        const Eigen::VectorXd& nu_init, const SimParams& p) {
  ServerOffer out;
  out.nu = nu_init;
  if (bids.empty()) {
    out.converged = true;
    return out;
  }

  std::vector<VehicleCases> cases;
  cases.reserve(bids.size());
  double scale = p.dual_scale();
  for (const auto& b : bids) {
    cases.push_back(optimize_cases(b, B_tilde, p));
    if (cases.back().full.feasible) scale = std::max(scale, std::abs(cases.back().full.value));
    if (cases.back().partial.feasible)
      scale = std::max(scale, std::abs(cases.back().partial.value));
  }
  if (!(scale > 0.0)) scale = 1.0;

  const Eigen::VectorXd omega = p.capacity();
  const double base = step_base(p, scale);
  // Halving keeps a per-resource move length: it shrinks on a sign change of
  // the subgradient and grows slowly otherwise; the step divides it by the
  // subgradient magnitude.
  Eigen::VectorXd move = Eigen::VectorXd::Constant(omega.size(), base);
  Eigen::VectorXd step = move;
  Eigen::VectorXd nu = nu_init;
  InnerSolution sol = inner_minimum(bids, cases, nu, omega);
  Eigen::VectorXd prev_grad = Eigen::VectorXd::Zero(omega.size());

  int n = 0;
  while (n < p.max_iterations) {
    const Eigen::VectorXd grad = sol.usage - omega;
    switch (p.step_rule) {
      case DualStepRule::Halving:
        for (Eigen::Index k = 0; k < grad.size(); ++k) {
          const double turn = grad(k) * prev_grad(k);
          if (turn < 0.0) move(k) *= 0.5;
          else if (turn > 0.0) move(k) = std::min(1.2 * move(k), 1e3 * base);
          step(k) = move(k) / std::max(std::abs(grad(k)), 1e-12);
        }
        break;
      case DualStepRule::InvSqrt: step.setConstant(base / std::sqrt(double(n + 1))); break;
      case DualStepRule::Constant: break;
    }
    prev_grad = grad;
    nu = update_multipliers(nu, step, sol.usage, omega, p.multiplier_sign);
    InnerSolution next = inner_minimum(bids, cases, nu, omega);
    ++n;
    const bool done = std::abs(next.phi - sol.phi) < p.epsilon * scale;
    sol = std::move(next);
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.iterations = n;
  out.nu = nu;
  out.phi = sol.phi;

  // Capacity repair: drop the accepted vehicles with the smallest gain over
  // rejection until every resource fits.
  std::vector<OfferCase> chosen = sol.chosen;
  Eigen::VectorXd usage = sol.usage;
  const double tol = 1e-12;
  auto violated = [&] { return ((usage - omega).array() > tol * omega.array().max(1.0)).any(); };
  while (violated()) {
    int worst = -1;
    double worst_gain = kInf;
    const Eigen::ArrayXd over = (usage - omega).array().max(0.0);
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (chosen[i] == OfferCase::Reject) continue;
      if ((bids[i].task.demand.array() * over).sum() <= 0.0) continue;
      const auto& co = chosen[i] == OfferCase::Full ? cases[i].full : cases[i].partial;
      const double gain = -(co.value + nu.dot(bids[i].task.demand));
      if (gain < worst_gain) worst_gain = gain, worst = static_cast<int>(i);
    }
    if (worst < 0) break;
    chosen[worst] = OfferCase::Reject;
    usage -= bids[worst].task.demand;
    out.repaired = true;
  }

  out.offers.resize(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    auto& o = out.offers[i];
    o.chosen = chosen[i];
    if (chosen[i] == OfferCase::Reject) continue;
    const auto& co = chosen[i] == OfferCase::Full ? cases[i].full : cases[i].partial;
    o.accepted = true;
    o.f_server = co.f_server;
    o.g = co.g;
    o.psi_off = offload_price(co.g, co.f_server);
    o.beta = co.beta;
  }
  return out;
}

double server_revenue(double service_income, double chi, double G) {
  return service_income - chi * G;
}

}  // namespace pado
