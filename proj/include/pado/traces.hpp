#pragma once

#include <string>
#include <vector>

#include "pado/model.hpp"

namespace pado {

/// Renewable production U (J per slot) and grid unit price chi (currency per
/// J). Traces shorter than the horizon repeat cyclically.
struct EnergyTraces {
  std::vector<double> U;
  std::vector<double> chi;

  double renewable(long t) const { return U.empty() ? 0.0 : U[t % U.size()]; }
  double price(long t) const { return chi[t % chi.size()]; }
  double max_price() const;
};

/// Reads a plain-text trace: one value per line, blank lines and lines
/// starting with '#' ignored.
std::vector<double> read_trace_file(const std::string& path);
void write_trace_file(const std::string& path, const std::vector<double>& values,
                      const std::string& header);

/// Builds both traces for `length` slots (at least one) from the configured
/// generators. Throws ConfigError on unreadable or out-of-range files.
EnergyTraces build_traces(const SimParams& p, long length, Rng& rng);

}  // namespace pado
