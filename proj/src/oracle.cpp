#include "pado/oracle.hpp"

#include <cmath>
#include <limits>
#include <array>
#include <stdexcept>
#include <tuple>

namespace pado {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

P2Solution brute_force_split(const VehicleState& s, const TaskSpec& task, double psi_off,
                             double f_local, const SimParams& p, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  P2Solution best{0.0, 0.0, f_local, kInf};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const Split sp{double(i) / n, double(j) / n};
      if (sp.beta > 0.0 && !std::isfinite(psi_off)) continue;  // no offer, no offload
      const double v = p2_objective(s, task, sp, f_local, psi_off, p);
      if (v < best.value) best = {sp.alpha, sp.beta, f_local, v};
    }
  }
  return best;
}

P2Solution brute_force_p2(const VehicleState& s, const TaskSpec& task, double psi_off,
                          const SimParams& p, const P2Grid& grid) {
  const double hi = p.f_max(task.cls), lo = hi * p.f_local_floor_ratio;
  P2Solution best{0.0, 0.0, hi, kInf};
  for (int k = 0; k < grid.f_points; ++k) {
    const double f = grid.f_points == 1
                         ? hi
                         : lo * std::pow(hi / lo, double(k) / (grid.f_points - 1));
    const auto cand = brute_force_split(s, task, psi_off, f, p, grid.step);
    if (cand.value < best.value) best = cand;
  }
  return best;
}

namespace {

struct CaseBest {
  double value = kInf;
  double f = 0.0, g = 0.0;
};

CaseBest grid_case(OfferCase c, const VehicleBid& bid, double B_tilde, const Eigen::VectorXd& nu,
                   const SimParams& p, const ServerGrid& grid) {
  CaseBest best;
  const double f_lo = bid.task.workload / p.tau_d * (1.0 + 1e-9);
  const double f_hi = p.f_server_max;
  if (f_lo > f_hi) return best;
  const double gmax = p.effective_g_max();
  auto psi_cap = [&](double f) { return std::max(0.0, std::min(gmax / f, bid.psi_cld)); };

  auto scan = [&](double lf_a, double lf_b, double psi_a, double psi_b, bool relative) {
    int bk = -1, bj = -1;
    const int nf = grid.f_points, ng = grid.g_points;
    for (int k = 0; k < nf; ++k) {
      const double lf = nf == 1 ? lf_b : lf_a + (lf_b - lf_a) * k / (nf - 1);
      const double f = std::exp(lf);
      const double cap = psi_cap(f);
      const double a = relative ? 0.0 : std::clamp(psi_a, 0.0, cap);
      const double b = relative ? cap : std::clamp(psi_b, 0.0, cap);
      for (int j = 0; j < ng; ++j) {
        const double psi = ng == 1 ? b : a + (b - a) * j / (ng - 1);
        if (!case_admissible(c, bid, psi)) continue;
        if (c == OfferCase::Partial && predicted_beta(c, bid, psi) <= 0.0) continue;
        const auto obj = case_objectives(bid, f, psi * f, B_tilde, nu, p);
        const double v = c == OfferCase::Full ? obj.lambda1 : obj.lambda2;
        if (v < best.value) {
          best = {v, f, psi * f};
          bk = k, bj = j;
        }
      }
    }
    return std::pair{bk, bj};
  };

  double la = std::log(f_lo), lb = std::log(f_hi);
  auto [k, j] = scan(la, lb, 0.0, 0.0, true);
  for (int z = 0; z < grid.zoom_levels && k >= 0; ++z) {
    const double df = grid.f_points > 1 ? (lb - la) / (grid.f_points - 1) : 0.0;
    const double lf = std::log(best.f);
    const double psi = best.g / best.f;
    const double dpsi = psi_cap(best.f) / std::max(grid.g_points - 1, 1);
    la = std::max(la, lf - df), lb = std::min(lb, lf + df);
    std::tie(k, j) = scan(la, lb, psi - dpsi, psi + dpsi, false);
    if (k < 0) break;
  }
  return best;
}

}  // namespace

ServerSolution brute_force_server(const std::vector<VehicleBid>& bids, double B_tilde,
                                  const Eigen::VectorXd& nu, const SimParams& p,
                                  const ServerGrid& grid) {
  const int n = static_cast<int>(bids.size());
  if (n > 3) throw std::invalid_argument("brute_force_server: at most 3 vehicles");
  ServerSolution out;
  if (n == 0) return out;

  const double nu_omega = nu.dot(p.capacity());
  // Per vehicle: values of the three cases, each including -nu . Omega.
  std::vector<std::array<CaseBest, 3>> table(n);
  for (int i = 0; i < n; ++i) {
    table[i][0] = grid_case(OfferCase::Full, bids[i], B_tilde, nu, p, grid);
    table[i][1] = grid_case(OfferCase::Partial, bids[i], B_tilde, nu, p, grid);
    table[i][2] = {-nu_omega, 0.0, 0.0};
  }

  int combos = 1;
  for (int i = 0; i < n; ++i) combos *= 3;
  double best = kInf;
  int best_code = 0;
  for (int code = 0; code < combos; ++code) {
    double phi = -nu_omega;
    int rest = code;
    for (int i = 0; i < n; ++i, rest /= 3) phi += table[i][rest % 3].value + nu_omega;
    if (phi < best) best = phi, best_code = code;
  }

  out.phi = best;
  int rest = best_code;
  for (int i = 0; i < n; ++i, rest /= 3) {
    const int c = rest % 3;
    out.chosen.push_back(static_cast<OfferCase>(c + 1));
    out.f_server.push_back(table[i][c].f);
    out.g.push_back(table[i][c].g);
  }
  return out;
}

std::vector<BoundViolation> battery_bound_check(const std::vector<double>& B,
                                                const std::vector<double>& chi, double theta,
                                                const SimParams& p) {
  std::vector<BoundViolation> out;
  for (std::size_t t = 0; t < B.size(); ++t) {
    const double c = chi[t % chi.size()];
    const double upper = battery_upper_bound(theta, p.H, c, p.eta_minus, p.eta_plus, p.c_max);
    if (B[t] < p.e_max || B[t] > upper) {
      const bool discharge = (B[t] - theta) * p.eta_minus + p.H * c > 0.0;
      out.push_back({long(t), B[t], p.e_max, upper, discharge ? "discharge" : "charge"});
    }
  }
  return out;
}

}  // namespace pado
