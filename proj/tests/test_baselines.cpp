#include <gtest/gtest.h>

#include "pado/baselines.hpp"

using namespace pado;

namespace {
TaskSpec task_of(const SimParams& p) { return make_task(p, 15.0, 0.005, Eigen::VectorXd::Ones(2)); }
}  // namespace

TEST(LocalOnly, NeverOffloads) {
  const auto p = default_params();
  VehicleState s(p.num_classes());
  const auto c = le_decide(s, task_of(p), p);
  EXPECT_EQ(c.split.alpha, 1.0);
  EXPECT_EQ(c.split.beta, 0.0);
  EXPECT_GT(c.f_local, 0.0);
}

TEST(LocalOnly, BacklogRaisesFrequency) {
  const auto p = default_params();
  const auto task = task_of(p);
  VehicleState idle(p.num_classes()), busy(p.num_classes());
  busy.W(task.cls) = 1.0;
  EXPECT_GE(le_decide(busy, task, p).f_local, le_decide(idle, task, p).f_local);
  EXPECT_DOUBLE_EQ(le_decide(busy, task, p).f_local, p.f_max(task.cls));
}

TEST(RandomOffload, ZeroProbabilityIsLocalOnly) {
  auto p = default_params();
  p.dro_offload_prob = 0.0;
  Rng rng(1);
  VehicleState s(p.num_classes());
  Eigen::VectorXd cap = p.capacity();
  for (int i = 0; i < 50; ++i) {
    const auto d = dro_decide(rng, s, task_of(p), cap, p);
    EXPECT_FALSE(d.wants_offload);
    EXPECT_EQ(d.split.alpha, 1.0);
    EXPECT_DOUBLE_EQ(d.f_local, le_decide(s, task_of(p), p).f_local);
  }
  EXPECT_EQ(cap, p.capacity());
}

TEST(RandomOffload, NoCapacitySendsShareToCloud) {
  auto p = default_params();
  p.dro_offload_prob = 1.0;
  Rng rng(2);
  VehicleState s(p.num_classes());
  Eigen::VectorXd cap = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < 50; ++i) {
    const auto d = dro_decide(rng, s, task_of(p), cap, p);
    EXPECT_FALSE(d.accepted);
    EXPECT_EQ(d.split.beta, 0.0);
    EXPECT_LE(d.split.alpha, 1.0);
  }
}

TEST(RandomOffload, AdmissionDeductsCapacity) {
  auto p = default_params();
  p.dro_offload_prob = 1.0;
  Rng rng(3);
  VehicleState s(p.num_classes());
  Eigen::VectorXd cap = Eigen::VectorXd::Constant(2, 2.5);
  int accepted = 0;
  for (int i = 0; i < 10; ++i) accepted += dro_decide(rng, s, task_of(p), cap, p).accepted;
  EXPECT_EQ(accepted, 2);
  EXPECT_DOUBLE_EQ(cap(0), 0.5);
}

TEST(Backlog, DrainsWithoutArrivals) {
  const auto p = default_params();
  double bits = 5e4;
  for (int i = 0; i < 100; ++i) {
    const double next = update_backlog_bits(bits, nullptr, {}, 1e9, p);
    EXPECT_LE(next, bits);
    EXPECT_GE(next, 0.0);
    bits = next;
  }
  EXPECT_EQ(bits, 0.0);
}

TEST(Backlog, FrequencyNonDecreasingInBacklog) {
  auto p = default_params();
  p.p2_energy_term = P2EnergyTerm::AlphaVariant;  // local energy priced
  const auto task = task_of(p);
  double prev = 0.0;
  for (double q : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
    VehicleState s(p.num_classes());
    s.Q(task.cls) = q;
    const double f = tdo_decide(s, task, kNoOffer, p).f_local;
    EXPECT_GE(f, prev * (1 - 1e-6));
    prev = f;
  }
}
