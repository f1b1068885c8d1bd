#include <gtest/gtest.h>

#include "pado/params.hpp"

using namespace pado;
using nlohmann::json;

namespace {
std::string field_of(const json& j) {
  try {
    params_from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}
}  // namespace

TEST(Params, DefaultsValidate) {
  const auto p = default_params();
  EXPECT_NO_THROW(validate(p));
  EXPECT_EQ(p.num_classes(), 4);
  EXPECT_EQ(p.num_resources(), 2);
}

TEST(Params, JsonRoundTrip) {
  const json j = params_to_json(default_params());
  EXPECT_EQ(params_to_json(params_from_json(j)), j);
}

TEST(Params, MissingGammaNamesTheField) {
  json j = params_to_json(default_params());
  j.erase("gamma");
  EXPECT_EQ(field_of(j), "gamma");
  j["gamma"] = json::array();
  EXPECT_EQ(field_of(j), "gamma");
}

TEST(Params, RejectsUnknownAndInvalidValues) {
  const json base = params_to_json(default_params());
  json j = base;
  j["Vee"] = 1.0;
  EXPECT_EQ(field_of(j), "Vee");
  j = base;
  j["arrival_prob"] = 1.5;
  EXPECT_EQ(field_of(j), "arrival_prob");
  j = base;
  j["gamma"] = {0.004, 0.002};
  EXPECT_EQ(field_of(j), "gamma");
  j = base;
  j["traces"]["price"]["low"] = -1.0;
  EXPECT_EQ(field_of(j), "traces.price.low");
  j = base;
  j["policy"] = "magic";
  EXPECT_EQ(field_of(j), "policy");
}

TEST(Params, PartialConfigKeepsDefaults) {
  const auto p = params_from_json(json{{"gamma", {0.002, 0.004}}, {"V", 5e8}});
  EXPECT_EQ(p.num_classes(), 2);
  EXPECT_DOUBLE_EQ(p.V, 5e8);
  EXPECT_EQ(p.f_local_max.size(), 2);
  EXPECT_EQ(p.num_vehicles, default_params().num_vehicles);
}

TEST(Params, PolicyNames) {
  for (auto k : {PolicyKind::PADO, PolicyKind::LE, PolicyKind::DRO, PolicyKind::TDO})
    EXPECT_EQ(policy_from_string(to_string(k)), k);
}
