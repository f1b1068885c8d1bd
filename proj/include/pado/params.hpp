#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace pado {

/// Thrown for malformed or out-of-range configuration. `field()` is the
/// dotted path of the offending key, e.g. `traces.price.high`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class PolicyKind { PADO, LE, DRO, TDO };

/// Which local-energy term the vehicle drift-plus-penalty objective uses.
/// `AsPrinted` charges kappa * beta * f_local * R; `AlphaVariant` charges
/// kappa * alpha * f_local * R, the term the unit-price closed form minimizes.
enum class P2EnergyTerm { AsPrinted, AlphaVariant };

/// Form of the partial-offload leader objective.
enum class Lambda2Form { Derived, Printed };

enum class MultiplierSign { Ascent, Printed };

/// Step schedule of the projected dual update.
enum class DualStepRule { Halving, InvSqrt, Constant };

struct RenewableTraceSpec {
  std::string kind = "diurnal";  // diurnal | constant | file
  std::string file;
  int period_slots = 2000;
  double noise = 0.2;  // relative uniform noise amplitude
};

struct PriceTraceSpec {
  std::string kind = "square";  // square | constant | file
  std::string file;
  double low = 2.5e-14;   // currency per J
  double high = 5.0e-14;  // currency per J
  int period_slots = 500;
  double peak_fraction = 0.5;
};

/// Every tunable of one simulation. Times are seconds, frequencies cycles/s,
/// energies joules. Prices are per CPU cycle unless stated otherwise.
struct SimParams {
  // vehicles and tasks
  int num_vehicles = 50;
  double arrival_prob = 0.6;
  double task_units_min = 10.0;
  double task_units_max = 20.0;
  double bits_per_unit = 1000.0;
  double cycles_per_bit = 1000.0;
  double slot_length = 1e-3;
  Eigen::VectorXd gamma;  // delay-class deadlines, non-decreasing
  double deadline_upper_factor = 0.0;  // 0: ratio gamma_S / gamma_{S-1}
  Eigen::VectorXd f_local_max;  // per class; empty -> 2 GHz everywhere
  double f_local_floor_ratio = 1e-3;
  double kappa = 1e-28;
  double V = 1e8;
  double drop_price = 1.8e-19;  // per cycle
  P2EnergyTerm p2_energy_term = P2EnergyTerm::AsPrinted;

  // server
  double tau_d = 0.01;
  double f_server_max = 1e10;
  double H = 2000.0;
  double eta_plus = 0.95;
  double eta_minus = 1.2;
  double e_max = 2e-11;
  double c_max = 4e-11;
  double u_max = 8e-11;
  double battery_initial = -1.0;  // < 0: start at e_max
  double theta_margin_factor = 1.0;
  double theta_price_headroom = 1.5;  // theta sized for headroom * max grid price
  Eigen::VectorXd omega;  // resource capacities
  double omega_scale = 1.0;
  double demand_min = 0.5;
  double demand_max = 1.5;
  double g_max = 0.0;  // currency per server-second; 0: 10 * drop_price * f_server_max
  double price_margin = 1e-6;
  double dual_step = 0.5;
  double nu_max = 1.0;
  double epsilon = 1e-6;
  int max_iterations = 100;
  DualStepRule step_rule = DualStepRule::Halving;
  MultiplierSign multiplier_sign = MultiplierSign::Ascent;
  Lambda2Form lambda2_form = Lambda2Form::Derived;
  double lambda2_T = 1.0;
  int stackelberg_inner_rounds = 1;
  RenewableTraceSpec renewable;
  PriceTraceSpec price;

  // experiment
  PolicyKind policy = PolicyKind::PADO;
  double dro_offload_prob = 0.5;
  double dro_price_fraction = 0.5;
  int T_slots = 1000;
  std::uint64_t seed = 1;

  int num_classes() const { return static_cast<int>(gamma.size()); }
  int num_resources() const { return static_cast<int>(omega.size()); }
  double f_max(int cls) const { return f_local_max(cls); }
  double effective_g_max() const {
    return g_max > 0.0 ? g_max : 10.0 * drop_price * f_server_max;
  }
  Eigen::VectorXd capacity() const { return omega * omega_scale; }
  double max_workload() const { return task_units_max * bits_per_unit * cycles_per_bit; }
  /// Scale of one vehicle's contribution to the leader objective; used to
  /// express dual quantities in dimensionless terms.
  double dual_scale() const { return H * drop_price * max_workload(); }
};

/// The experiment preset with every field at its default and the four
/// geometric delay classes 2, 4, 8, 16 ms.
SimParams default_params();

/// Throws ConfigError naming the first invalid field.
void validate(const SimParams& p);

SimParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SimParams& p);
SimParams load_params(const std::string& path);

std::string to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& s);

}  // namespace pado
