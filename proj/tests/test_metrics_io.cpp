#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "pado/game.hpp"
#include "pado/metrics_io.hpp"

using namespace pado;

TEST(MetricsCsv, ColumnOrder) {
  const auto c = metrics_columns(2);
  const std::vector<std::string> head{"t", "Q_mean_s1", "Q_mean_s2", "W_mean_s1", "W_mean_s2", "B"};
  ASSERT_GE(c.size(), head.size());
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(c[i], head[i]);
  EXPECT_EQ(c.back(), "tasks");
}

TEST(MetricsCsv, RoundTripsThroughFile) {
  auto p = default_params();
  p.num_vehicles = 5;
  p.T_slots = 30;
  const auto r = run_horizon(p);
  const auto path = (std::filesystem::temp_directory_path() / "pado_metrics_test.csv").string();
  write_metrics_csv(path, r.records, 4);
  const auto cols = read_metrics_csv(path);
  ASSERT_EQ(cols.at("t").size(), 30u);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(cols.at("B")[i], r.records[i].B);
    EXPECT_EQ(cols.at("revenue")[i], r.records[i].revenue);
  }
  std::remove(path.c_str());
}

TEST(SummaryJson, HasHeadlineKeys) {
  auto p = default_params();
  p.num_vehicles = 5;
  p.T_slots = 20;
  const auto j = summary_to_json(run_horizon(p).summary);
  for (const char* k : {"Q_avg", "W_avg", "delay_overall", "vehicle_cost", "revenue_total",
                        "unit_price", "theta"})
    EXPECT_TRUE(j.contains(k)) << k;
  const auto lock = run_lock(p);
  EXPECT_EQ(lock.at("seed"), 1);
  EXPECT_TRUE(lock.contains("config"));
}
