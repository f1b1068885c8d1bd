#include <gtest/gtest.h>

#include <sstream>

#include "pado/game.hpp"
#include "pado/metrics_io.hpp"
#include "pado/oracle.hpp"

using namespace pado;

namespace {
SimParams small(PolicyKind k = PolicyKind::PADO, int T = 200) {
  auto p = default_params();
  p.num_vehicles = 10;
  p.T_slots = T;
  p.policy = k;
  return p;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}
}  // namespace

TEST(Horizon, ZeroSlotsGivesEmptySeries) {
  const auto r = run_horizon(small(PolicyKind::PADO, 0));
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.summary.slots, 0);
}

TEST(Horizon, NoArrivalsChargesBatteryWithinBound) {
  auto p = small(PolicyKind::PADO, 3000);
  p.arrival_prob = 0.0;
  const auto r = run_horizon(p);
  for (const auto& m : r.records) {
    EXPECT_EQ(m.tasks, 0);
    EXPECT_EQ(m.revenue, 0.0);
    EXPECT_EQ(m.G, 0.0);
    EXPECT_TRUE((m.Q_mean.array() == 0.0).all());
  }
  EXPECT_GT(r.records.back().B, r.records.front().B);
  std::vector<double> B, chi;
  for (const auto& m : r.records) B.push_back(m.B), chi.push_back(m.chi);
  EXPECT_TRUE(battery_bound_check(B, chi, r.summary.theta, p).empty());
}

TEST(Horizon, DeterministicForFixedSeed) {
  for (auto k : {PolicyKind::PADO, PolicyKind::LE, PolicyKind::DRO, PolicyKind::TDO}) {
    const auto p = small(k, 150);
    EXPECT_EQ(metrics_csv(run_horizon(p).records, 4), metrics_csv(run_horizon(p).records, 4))
        << to_string(k);
  }
}

TEST(Horizon, SeedChangesTheRun) {
  auto p = small(PolicyKind::PADO, 100);
  const auto a = metrics_csv(run_horizon(p).records, 4);
  p.seed = 2;
  EXPECT_NE(a, metrics_csv(run_horizon(p).records, 4));
}

TEST(Horizon, LongerRunExtendsShorterRun) {
  auto p = small(PolicyKind::PADO, 120);
  const auto a = lines(metrics_csv(run_horizon(p).records, 4));
  p.T_slots = 240;
  const auto b = lines(metrics_csv(run_horizon(p).records, 4));
  ASSERT_EQ(b.size(), 2 * a.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << "line " << i;
}

TEST(Horizon, PaymentsEqualServerIncome) {
  for (auto k : {PolicyKind::PADO, PolicyKind::DRO, PolicyKind::TDO}) {
    const auto r = run_horizon(small(k, 300));
    EXPECT_NEAR(r.summary.payments_total, r.summary.income_total,
                1e-9 * std::abs(r.summary.income_total))
        << to_string(k);
    for (const auto& m : r.records)
      EXPECT_NEAR(m.revenue, m.income - m.chi * m.G, 1e-12 * std::abs(m.income) + 1e-30);
  }
}

TEST(Horizon, LocalOnlyNeverUsesServer) {
  const auto r = run_horizon(small(PolicyKind::LE, 200));
  EXPECT_EQ(r.summary.payments_total, 0.0);
  for (const auto& m : r.records) EXPECT_EQ(m.requests, 0);
}

TEST(Horizon, NoServerCapacityMeansNoOffload) {
  auto p = small(PolicyKind::PADO, 200);
  p.omega = Eigen::VectorXd::Zero(2);
  const auto r = run_horizon(p);
  EXPECT_EQ(r.summary.payments_total, 0.0);
  for (const auto& m : r.records) EXPECT_EQ(m.accepted, 0);
}

TEST(Horizon, BatteryStaysConfined) {
  const auto p = small(PolicyKind::PADO, 1500);
  const auto r = run_horizon(p);
  std::vector<double> B, chi;
  for (const auto& m : r.records) B.push_back(m.B), chi.push_back(m.chi);
  EXPECT_TRUE(battery_bound_check(B, chi, r.summary.theta, p).empty());
  for (const auto& m : r.records) {
    EXPECT_GE(m.drop_rate, 0.0);
    EXPECT_LE(m.drop_rate, 1.0 + 1e-12);
    EXPECT_TRUE((m.Q_mean.array() >= 0.0).all());
    EXPECT_TRUE((m.W_mean.array() >= 0.0).all());
  }
}

TEST(Slot, StepwiseMatchesHorizon) {
  const auto p = small(PolicyKind::PADO, 50);
  auto w = make_world(p);
  std::vector<MetricsRecord> rec;
  for (int t = 0; t < p.T_slots; ++t) rec.push_back(run_slot(w).metrics);
  EXPECT_EQ(metrics_csv(rec, 4), metrics_csv(run_horizon(p).records, 4));
}
