#include "pado/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pado {

using nlohmann::json;

SimParams default_params() {
  SimParams p;
  p.gamma.resize(4);
  p.gamma << 0.002, 0.004, 0.008, 0.016;
  p.f_local_max = Eigen::VectorXd::Constant(4, 2e9);
  p.omega = Eigen::VectorXd::Constant(2, 20.0);
  return p;
}

namespace {

void require(bool ok, const char* field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const SimParams& p) {
  require(p.num_vehicles >= 0, "num_vehicles", "must be >= 0");
  require(p.arrival_prob >= 0.0 && p.arrival_prob <= 1.0, "arrival_prob",
          "must lie in [0, 1]");
  require(positive(p.task_units_min), "task_units_min", "must be > 0");
  require(p.task_units_max >= p.task_units_min, "task_units_max",
          "must be >= task_units_min");
  require(positive(p.bits_per_unit), "bits_per_unit", "must be > 0");
  require(positive(p.cycles_per_bit), "cycles_per_bit", "must be > 0");
  require(positive(p.slot_length), "slot_length", "must be > 0");
  require(p.gamma.size() > 0, "gamma", "required: non-empty list of delay-class deadlines");
  for (Eigen::Index s = 0; s < p.gamma.size(); ++s) {
    require(positive(p.gamma(s)), "gamma", "deadlines must be > 0");
    if (s > 0) require(p.gamma(s) >= p.gamma(s - 1), "gamma", "must be non-decreasing");
  }
  require(p.deadline_upper_factor == 0.0 || p.deadline_upper_factor >= 1.0,
          "deadline_upper_factor", "must be 0 (auto) or >= 1");
  require(p.f_local_max.size() == p.gamma.size(), "f_local_max",
          "needs one entry per delay class");
  for (Eigen::Index s = 0; s < p.f_local_max.size(); ++s)
    require(positive(p.f_local_max(s)), "f_local_max", "must be > 0");
  require(p.f_local_floor_ratio > 0.0 && p.f_local_floor_ratio < 1.0,
          "f_local_floor_ratio", "must lie in (0, 1)");
  require(positive(p.kappa), "kappa", "must be > 0");
  require(positive(p.V), "V", "must be > 0");
  require(positive(p.drop_price), "drop_price", "must be > 0");
  require(positive(p.tau_d), "tau_d", "must be > 0");
  require(positive(p.f_server_max), "f_server_max", "must be > 0");
  require(p.H >= 0.0 && std::isfinite(p.H), "H", "must be >= 0");
  require(p.eta_plus > 0.0 && p.eta_plus <= 1.0, "eta_plus", "must lie in (0, 1]");
  require(p.eta_minus >= 1.0, "eta_minus", "must be >= 1");
  require(p.e_max >= 0.0, "e_max", "must be >= 0");
  require(p.c_max >= 0.0, "c_max", "must be >= 0");
  require(p.u_max >= 0.0, "u_max", "must be >= 0");
  require(p.theta_margin_factor >= 0.0, "theta_margin_factor", "must be >= 0");
  require(p.theta_price_headroom >= 1.0, "theta_price_headroom", "must be >= 1");
  require(p.omega.size() > 0, "omega", "needs at least one resource type");
  for (Eigen::Index k = 0; k < p.omega.size(); ++k)
    require(p.omega(k) >= 0.0, "omega", "capacities must be >= 0");
  require(p.omega_scale >= 0.0, "omega_scale", "must be >= 0");
  require(p.demand_min >= 0.0 && p.demand_max >= p.demand_min, "demand_max",
          "need 0 <= demand_min <= demand_max");
  require(p.g_max >= 0.0, "g_max", "must be >= 0");
  require(p.price_margin > 0.0 && p.price_margin < 1.0, "price_margin", "must lie in (0, 1)");
  require(positive(p.dual_step), "dual_step", "must be > 0");
  require(p.nu_max >= 0.0, "nu_max", "must be >= 0");
  require(positive(p.epsilon), "epsilon", "must be > 0");
  require(p.max_iterations >= 1, "max_iterations", "must be >= 1");
  require(p.lambda2_T > 0.0, "lambda2_T", "must be > 0");
  require(p.stackelberg_inner_rounds >= 1, "stackelberg_inner_rounds", "must be >= 1");
  require(p.renewable.kind == "diurnal" || p.renewable.kind == "constant" ||
              p.renewable.kind == "file",
          "traces.renewable.kind", "must be diurnal, constant or file");
  require(p.renewable.kind != "file" || !p.renewable.file.empty(), "traces.renewable.file",
          "required when kind = file");
  require(p.renewable.period_slots > 0, "traces.renewable.period_slots", "must be > 0");
  require(p.renewable.noise >= 0.0 && p.renewable.noise <= 1.0, "traces.renewable.noise",
          "must lie in [0, 1]");
  require(p.price.kind == "square" || p.price.kind == "constant" || p.price.kind == "file",
          "traces.price.kind", "must be square, constant or file");
  require(p.price.kind != "file" || !p.price.file.empty(), "traces.price.file",
          "required when kind = file");
  require(positive(p.price.low), "traces.price.low", "must be > 0");
  require(p.price.high >= p.price.low, "traces.price.high", "must be >= low");
  require(p.price.period_slots > 0, "traces.price.period_slots", "must be > 0");
  require(p.price.peak_fraction >= 0.0 && p.price.peak_fraction <= 1.0,
          "traces.price.peak_fraction", "must lie in [0, 1]");
  require(p.dro_offload_prob >= 0.0 && p.dro_offload_prob <= 1.0, "dro_offload_prob",
          "must lie in [0, 1]");
  require(p.dro_price_fraction >= 0.0, "dro_price_fraction", "must be >= 0");
  require(p.T_slots >= 0, "T_slots", "must be >= 0");
}

std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::PADO: return "pado";
    case PolicyKind::LE: return "le";
    case PolicyKind::DRO: return "dro";
    case PolicyKind::TDO: return "tdo";
  }
  return "pado";
}

PolicyKind policy_from_string(const std::string& s) {
  if (s == "pado") return PolicyKind::PADO;
  if (s == "le") return PolicyKind::LE;
  if (s == "dro") return PolicyKind::DRO;
  if (s == "tdo") return PolicyKind::TDO;
  throw ConfigError("policy", "unknown policy '" + s + "' (pado|le|dro|tdo)");
}

namespace {

// Reads `key` of `obj` into `out` if present, reporting type errors by path.
template <typename T>
void get(const json& obj, const std::string& prefix, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError(prefix + key, "wrong type");
  }
}

Eigen::VectorXd get_vector(const json& obj, const char* key, const Eigen::VectorXd& dflt) {
  auto it = obj.find(key);
  if (it == obj.end()) return dflt;
  std::vector<double> v;
  if (it->is_number()) {
    v.assign(dflt.size() > 0 ? dflt.size() : 1, it->get<double>());
  } else {
    try {
      v = it->get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError(key, "expected a number or a list of numbers");
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(prefix + it.key(), "unknown key");
}

template <typename E>
E get_enum(const json& obj, const char* key, E dflt,
           std::initializer_list<std::pair<const char*, E>> names) {
  auto it = obj.find(key);
  if (it == obj.end()) return dflt;
  if (!it->is_string()) throw ConfigError(key, "expected a string");
  const auto s = it->get<std::string>();
  for (const auto& [n, e] : names)
    if (s == n) return e;
  throw ConfigError(key, "unrecognized value '" + s + "'");
}

}  // namespace

SimParams params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be an object");
  check_keys(j, "",
             {"num_vehicles", "arrival_prob", "task_units_min", "task_units_max",
              "bits_per_unit", "cycles_per_bit", "slot_length", "gamma",
              "deadline_upper_factor", "f_local_max", "f_local_floor_ratio", "kappa", "V",
              "drop_price", "p2_energy_term", "tau_d", "f_server_max", "H", "eta_plus",
              "eta_minus", "e_max", "c_max", "u_max", "battery_initial",
              "theta_margin_factor", "theta_price_headroom", "omega", "omega_scale", "demand_min", "demand_max",
              "g_max", "price_margin", "dual_step", "nu_max", "epsilon", "max_iterations",
              "step_rule", "multiplier_sign", "lambda2_form", "lambda2_T",
              "stackelberg_inner_rounds", "traces", "policy", "dro_offload_prob",
              "dro_price_fraction", "T_slots", "seed"});

  SimParams p = default_params();
  auto g = j.find("gamma");
  if (g == j.end() || g->is_null() || (g->is_array() && g->empty()))
    throw ConfigError("gamma", "required: non-empty list of delay-class deadlines");
  p.gamma = get_vector(j, "gamma", Eigen::VectorXd());

  get(j, "", "num_vehicles", p.num_vehicles);
  get(j, "", "arrival_prob", p.arrival_prob);
  get(j, "", "task_units_min", p.task_units_min);
  get(j, "", "task_units_max", p.task_units_max);
  get(j, "", "bits_per_unit", p.bits_per_unit);
  get(j, "", "cycles_per_bit", p.cycles_per_bit);
  get(j, "", "slot_length", p.slot_length);
  get(j, "", "deadline_upper_factor", p.deadline_upper_factor);
  p.f_local_max = get_vector(j, "f_local_max", Eigen::VectorXd::Constant(p.gamma.size(), 2e9));
  get(j, "", "f_local_floor_ratio", p.f_local_floor_ratio);
  get(j, "", "kappa", p.kappa);
  get(j, "", "V", p.V);
  get(j, "", "drop_price", p.drop_price);
  p.p2_energy_term = get_enum(j, "p2_energy_term", p.p2_energy_term,
                              {{"as_printed", P2EnergyTerm::AsPrinted},
                               {"alpha_variant", P2EnergyTerm::AlphaVariant}});
  get(j, "", "tau_d", p.tau_d);
  get(j, "", "f_server_max", p.f_server_max);
  get(j, "", "H", p.H);
  get(j, "", "eta_plus", p.eta_plus);
  get(j, "", "eta_minus", p.eta_minus);
  get(j, "", "e_max", p.e_max);
  get(j, "", "c_max", p.c_max);
  get(j, "", "u_max", p.u_max);
  get(j, "", "battery_initial", p.battery_initial);
  get(j, "", "theta_margin_factor", p.theta_margin_factor);
  get(j, "", "theta_price_headroom", p.theta_price_headroom);
  p.omega = get_vector(j, "omega", p.omega);
  get(j, "", "omega_scale", p.omega_scale);
  get(j, "", "demand_min", p.demand_min);
  get(j, "", "demand_max", p.demand_max);
  get(j, "", "g_max", p.g_max);
  get(j, "", "price_margin", p.price_margin);
  get(j, "", "dual_step", p.dual_step);
  get(j, "", "nu_max", p.nu_max);
  get(j, "", "epsilon", p.epsilon);
  get(j, "", "max_iterations", p.max_iterations);
  p.step_rule = get_enum(j, "step_rule", p.step_rule,
                         {{"halving", DualStepRule::Halving},
                          {"inv_sqrt", DualStepRule::InvSqrt},
                          {"constant", DualStepRule::Constant}});
  p.multiplier_sign = get_enum(j, "multiplier_sign", p.multiplier_sign,
                               {{"ascent", MultiplierSign::Ascent},
                                {"printed", MultiplierSign::Printed}});
  p.lambda2_form = get_enum(j, "lambda2_form", p.lambda2_form,
                            {{"derived", Lambda2Form::Derived}, {"printed", Lambda2Form::Printed}});
  get(j, "", "lambda2_T", p.lambda2_T);
  get(j, "", "stackelberg_inner_rounds", p.stackelberg_inner_rounds);

  if (auto t = j.find("traces"); t != j.end()) {
    if (!t->is_object()) throw ConfigError("traces", "expected an object");
    check_keys(*t, "traces.", {"renewable", "price"});
    if (auto r = t->find("renewable"); r != t->end()) {
      check_keys(*r, "traces.renewable.", {"kind", "file", "period_slots", "noise"});
      get(*r, "traces.renewable.", "kind", p.renewable.kind);
      get(*r, "traces.renewable.", "file", p.renewable.file);
      get(*r, "traces.renewable.", "period_slots", p.renewable.period_slots);
      get(*r, "traces.renewable.", "noise", p.renewable.noise);
    }
    if (auto c = t->find("price"); c != t->end()) {
      check_keys(*c, "traces.price.",
                 {"kind", "file", "low", "high", "period_slots", "peak_fraction"});
      get(*c, "traces.price.", "kind", p.price.kind);
      get(*c, "traces.price.", "file", p.price.file);
      get(*c, "traces.price.", "low", p.price.low);
      get(*c, "traces.price.", "high", p.price.high);
      get(*c, "traces.price.", "period_slots", p.price.period_slots);
      get(*c, "traces.price.", "peak_fraction", p.price.peak_fraction);
    }
  }

  if (auto it = j.find("policy"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("policy", "expected a string");
    p.policy = policy_from_string(it->get<std::string>());
  }
  get(j, "", "dro_offload_prob", p.dro_offload_prob);
  get(j, "", "dro_price_fraction", p.dro_price_fraction);
  get(j, "", "T_slots", p.T_slots);
  get(j, "", "seed", p.seed);

  validate(p);
  return p;
}

namespace {
std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
}  // namespace

json params_to_json(const SimParams& p) {
  json j;
  j["num_vehicles"] = p.num_vehicles;
  j["arrival_prob"] = p.arrival_prob;
  j["task_units_min"] = p.task_units_min;
  j["task_units_max"] = p.task_units_max;
  j["bits_per_unit"] = p.bits_per_unit;
  j["cycles_per_bit"] = p.cycles_per_bit;
  j["slot_length"] = p.slot_length;
  j["gamma"] = to_std(p.gamma);
  j["deadline_upper_factor"] = p.deadline_upper_factor;
  j["f_local_max"] = to_std(p.f_local_max);
  j["f_local_floor_ratio"] = p.f_local_floor_ratio;
  j["kappa"] = p.kappa;
  j["V"] = p.V;
  j["drop_price"] = p.drop_price;
  j["p2_energy_term"] =
      p.p2_energy_term == P2EnergyTerm::AsPrinted ? "as_printed" : "alpha_variant";
  j["tau_d"] = p.tau_d;
  j["f_server_max"] = p.f_server_max;
  j["H"] = p.H;
  j["eta_plus"] = p.eta_plus;
  j["eta_minus"] = p.eta_minus;
  j["e_max"] = p.e_max;
  j["c_max"] = p.c_max;
  j["u_max"] = p.u_max;
  j["battery_initial"] = p.battery_initial;
  j["theta_margin_factor"] = p.theta_margin_factor;
  j["theta_price_headroom"] = p.theta_price_headroom;
  j["omega"] = to_std(p.omega);
  j["omega_scale"] = p.omega_scale;
  j["demand_min"] = p.demand_min;
  j["demand_max"] = p.demand_max;
  j["g_max"] = p.g_max;
  j["price_margin"] = p.price_margin;
  j["dual_step"] = p.dual_step;
  j["nu_max"] = p.nu_max;
  j["epsilon"] = p.epsilon;
  j["max_iterations"] = p.max_iterations;
  j["step_rule"] = p.step_rule == DualStepRule::Halving   ? "halving"
                   : p.step_rule == DualStepRule::InvSqrt ? "inv_sqrt"
                                                          : "constant";
  j["multiplier_sign"] = p.multiplier_sign == MultiplierSign::Ascent ? "ascent" : "printed";
  j["lambda2_form"] = p.lambda2_form == Lambda2Form::Derived ? "derived" : "printed";
  j["lambda2_T"] = p.lambda2_T;
  j["stackelberg_inner_rounds"] = p.stackelberg_inner_rounds;
  j["traces"]["renewable"] = {{"kind", p.renewable.kind},
                              {"file", p.renewable.file},
                              {"period_slots", p.renewable.period_slots},
                              {"noise", p.renewable.noise}};
  j["traces"]["price"] = {{"kind", p.price.kind},
                          {"file", p.price.file},
                          {"low", p.price.low},
                          {"high", p.price.high},
                          {"period_slots", p.price.period_slots},
                          {"peak_fraction", p.price.peak_fraction}};
  j["policy"] = to_string(p.policy);
  j["dro_offload_prob"] = p.dro_offload_prob;
  j["dro_price_fraction"] = p.dro_price_fraction;
  j["T_slots"] = p.T_slots;
  j["seed"] = p.seed;
  return j;
}

SimParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
  return params_from_json(j);
}

}  // namespace pado
