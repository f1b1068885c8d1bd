#include "pado/traces.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pado {

double EnergyTraces::max_price() const { return *std::max_element(chi.begin(), chi.end()); }

std::vector<double> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<trace>", "cannot open trace file '" + path + "'");
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v))
      throw ConfigError("<trace>", path + ":" + std::to_string(lineno) + ": not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("<trace>", "trace file '" + path + "' has no values");
  return out;
}

void write_trace_file(const std::string& path, const std::vector<double>& values,
                      const std::string& header) {
  std::ofstream out(path);
  out << "# " << header << "\n";
  out.precision(17);
  for (double v : values) out << v << "\n";
}

EnergyTraces build_traces(const SimParams& p, long length, Rng& rng) {
  const long n = std::max(length, 1L);
  EnergyTraces tr;

  if (p.renewable.kind == "file") {
    tr.U = read_trace_file(p.renewable.file);
    for (double u : tr.U)
      if (u < 0.0 || u > p.u_max)
        throw ConfigError("traces.renewable.file", "values must lie in [0, u_max]");
  } else if (p.renewable.kind == "constant") {
    tr.U.assign(n, p.u_max);
  } else {
    // Diurnal profile: raised sinusoid with multiplicative uniform noise.
    std::uniform_real_distribution<double> noise(-p.renewable.noise, p.renewable.noise);
    tr.U.resize(n);
    for (long t = 0; t < n; ++t) {
      const double phase = 2.0 * std::numbers::pi * double(t) / p.renewable.period_slots;
      const double base = 0.5 * p.u_max * (1.0 - std::cos(phase));
      tr.U[t] = std::clamp(base * (1.0 + noise(rng)), 0.0, p.u_max);
    }
  }

  if (p.price.kind == "file") {
    tr.chi = read_trace_file(p.price.file);
    for (double c : tr.chi)
      if (!(c > 0.0)) throw ConfigError("traces.price.file", "prices must be > 0");
  } else if (p.price.kind == "constant") {
    tr.chi.assign(n, p.price.high);
  } else {
    tr.chi.resize(n);
    const long peak = std::lround(p.price.peak_fraction * p.price.period_slots);
    for (long t = 0; t < n; ++t)
      tr.chi[t] = (t % p.price.period_slots) < peak ? p.price.high : p.price.low;
  }
  return tr;
}

}  // namespace pado
