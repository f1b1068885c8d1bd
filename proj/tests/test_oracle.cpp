#include <gtest/gtest.h>

#include "pado/oracle.hpp"

using namespace pado;

namespace {
VehicleBid bid_for(const SimParams& p, int v, double units, double deadline, double pressure) {
  auto b = make_bid(v, pressure, make_task(p, units, deadline, Eigen::VectorXd::Ones(2)),
                    kNoOffer, p);
  return b;
}
}  // namespace

TEST(OracleP2, RespectsSimplex) {
  const auto p = default_params();
  VehicleState s(p.num_classes());
  s.W(1) = 2e-3;
  const auto o = brute_force_p2(s, make_task(p, 15, 0.005), 1e-19, p);
  EXPECT_LE(o.alpha + o.beta, 1.0 + 1e-12);
  EXPECT_GE(o.alpha, 0.0);
  EXPECT_GE(o.beta, 0.0);
}

TEST(OracleP2, NoOfferMeansNoOffload) {
  const auto p = default_params();
  VehicleState s(p.num_classes());
  EXPECT_EQ(brute_force_p2(s, make_task(p, 15, 0.005), kNoOffer, p).beta, 0.0);
}

TEST(OracleServer, SeparableWithoutMultipliers) {
  auto p = default_params();
  const Eigen::VectorXd nu = Eigen::VectorXd::Zero(2);
  const auto a = bid_for(p, 0, 15, 0.005, 1e-3);
  const auto b = bid_for(p, 1, 11, 0.012, 4e-3);
  const ServerGrid g{96, 96, 1};
  const double both = brute_force_server({a, b}, 1e-11, nu, p, g).phi;
  const double sep = brute_force_server({a}, 1e-11, nu, p, g).phi +
                     brute_force_server({b}, 1e-11, nu, p, g).phi;
  EXPECT_NEAR(both, sep, 1e-9 * std::abs(sep));
}

TEST(OracleServer, ExpensiveResourcesRejectAll) {
  const auto p = default_params();
  const Eigen::VectorXd nu = Eigen::VectorXd::Constant(2, 1e6 * p.dual_scale());
  const auto s = brute_force_server({bid_for(p, 0, 15, 0.005, 1e-3)}, 1e-11, nu, p, {64, 64, 0});
  EXPECT_EQ(s.chosen[0], OfferCase::Reject);
}

TEST(OracleServer, RefusesMoreThanThreeVehicles) {
  const auto p = default_params();
  std::vector<VehicleBid> bids(4, bid_for(p, 0, 15, 0.005, 1e-3));
  EXPECT_THROW(brute_force_server(bids, 0.0, Eigen::VectorXd::Zero(2), p), std::invalid_argument);
}

TEST(BoundCheck, FlagsBothSides) {
  const auto p = default_params();
  const double theta = 2e-10;
  const std::vector<double> chi{5e-14, 5e-14, 5e-14};
  const double upper = theta - p.H * 5e-14 / p.eta_minus + p.eta_plus * p.c_max;
  const auto v = battery_bound_check({0.5 * p.e_max, p.e_max, upper * 1.01}, chi, theta, p);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].t, 0);
  EXPECT_EQ(v[1].t, 2);
  EXPECT_FALSE(v[0].branch.empty());
  EXPECT_TRUE(battery_bound_check({}, {}, theta, p).empty());
}
