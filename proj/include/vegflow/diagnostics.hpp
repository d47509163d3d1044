#ifndef VEGFLOW_DIAGNOSTICS_HPP_
#define VEGFLOW_DIAGNOSTICS_HPP_

#include <vector>

namespace vegflow {

// Per-step time series recorded by run(). Residual definitions:
//  - lake_residual: max over wet cells of |z + h nu3 - c|, c the wet-cell mean
//  - mass_budget_residual: |d(total mass)/dt - applied forcing rate| relative
//    to the larger of the two rates and the mass scale
//  - energy_budget_residual: d(total energy)/dt + boundary outflux
//    - forcing/friction exchange rate (absolute)
struct DiagnosticsReport {
  std::vector<double> t;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> max_v;
  std::vector<double> lake_residual;
  std::vector<double> mass_budget_residual;
  std::vector<double> energy_budget_residual;

  std::size_t size() const { return t.size(); }
};

}  // namespace vegflow

#endif  // VEGFLOW_DIAGNOSTICS_HPP_
