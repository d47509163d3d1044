#ifndef VEGFLOW_VERIFY_HPP_
#define VEGFLOW_VERIFY_HPP_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "vegflow/geometry.hpp"
#include "vegflow/solver.hpp"

namespace vegflow::verify {

// --- flow measures (fixed summation order, compensated accumulation) ------

// Sum of beta theta h over cells, times the cell area.
double total_mass(const FlowField& flow, const Grid& grid);
// Sum of beta theta h E, E the mechanical energy density.
double total_energy(const FlowField& flow, const Grid& grid, const RunConfig& cfg);
double max_speed(const FlowField& flow, const Grid& grid, const RunConfig& cfg);
// Max over wet cells of |z + h nu3 - c|, c the wet-cell mean surface level.
double lake_residual(const FlowField& flow, const Grid& grid, const RunConfig& cfg);

// |d(mass)/dt - (applied forcing - boundary outflux)| relative to the larger
// of the exchange-rate scale and the per-step relative mass change scale.
double mass_budget_residual(double mass_before, double mass_after, double dt,
                            const StepStats& stats);

// d(total energy)/dt + boundary outflux - sum of beta (M (w - |v|^2/2)
// - K |v|^3) dA. First-order consistent for smooth resolved flows; exact
// zero at a lake at rest. Absolute rate units.
double energy_budget_residual(const FlowField& before, const FlowField& after, const Grid& grid,
                              const RunConfig& cfg, double dt, const StepStats* stats = nullptr);

// Max over wet cells of |v^a d_a Et| by central differences. When
// require_steady is set, runs one trial step (no forcing, no friction) and
// throws NotSteady if any component moved by more than 1e-10.
double bernoulli_check(const FlowField& flow, const Grid& grid, const RunConfig& cfg,
                       bool require_steady = true);

// --- eigenstructure oracle -------------------------------------------------

// Solves the generalised eigenproblem det(dF.n - lambda dH) = 0 with
// finite-difference Jacobians in the primitive variables and closed-form
// cubic roots. Returns the sorted roots. Throws IllConditionedPencil for
// near-dry states.
std::array<double, 3> jacobian_eigen_oracle(const PrimitiveState& s, double theta,
                                            const GeometryCoefficients& geom, Vec2 n_cov,
                                            double g, ModelKind kind, double h_dry = 1e-8);

// --- classical dam-break reference ------------------------------------------

// Similarity solution of the frictionless dam break over a flat bed, with
// the intermediate state found by bisection to 1e-12.
class StokerSolution {
 public:
  StokerSolution(double h_left, double h_right, double g);

  double h_star() const { return h_star_; }
  double u_star() const { return u_star_; }
  double shock_speed() const { return shock_speed_; }

  double depth(double x, double t) const;
  double velocity(double x, double t) const;

 private:
  double h_left_, h_right_, g_;
  double c_left_;
  double h_star_ = 0.0, u_star_ = 0.0, c_star_ = 0.0, shock_speed_ = 0.0;
  bool dry_ = false;
  bool trivial_ = false;
};

// --- Cartesian quadrature oracles -------------------------------------------
// These parameterise the embedded surfaces x = b(y) + y3 nu(y) directly and
// integrate Cartesian fields against numerically differentiated tangents;
// they share no frame algebra with the curvilinear operations they check.

using CartScalarField = std::function<double(const Vec3&)>;
using CartVectorField = std::function<Vec3(const Vec3&)>;
using CartTensorField = std::function<Mat3(const Vec3&)>;

double cartesian_lateral_scalar_flux(const SurfaceGeometry& geom, const CartVectorField& f,
                                     const Region& region, const ScalarFn& lower,
                                     const ScalarFn& upper, const QuadratureSpec& quad);
Vec3 cartesian_lateral_tensor_flux(const SurfaceGeometry& geom, const CartTensorField& t,
                                   const Region& region, const ScalarFn& lower,
                                   const ScalarFn& upper, const QuadratureSpec& quad);
Vec3 cartesian_cap_tensor_flux(const SurfaceGeometry& geom, const CartTensorField& t,
                               const Region& region, const ScalarFn& cap,
                               const QuadratureSpec& quad);

// Stress-specific cap-flux formula for t = -p I + tau, with the viscous part
// expressed in the frame tangent to the cap surface.
Vec3 stress_cap_flux(const SurfaceGeometry& geom, const CartScalarField& pressure,
                     const CartTensorField& tau, const Region& region, const ScalarFn& cap,
                     const GradFn& cap_grad, const QuadratureSpec& quad);

// Offset-frame components of Cartesian fields at (y, y3); used to feed the
// curvilinear operations from Cartesian test fields.
Vec3 to_offset_vector(const SurfacePoint& p, double y3, const Vec3& cart);
Mat3 to_offset_tensor(const SurfacePoint& p, double y3, const Mat3& cart);

// --- verification suites -----------------------------------------------------

struct SuiteRow {
  std::string suite;
  std::string case_id;
  double metric = 0.0;
  double limit = 0.0;
  bool pass = false;
};

std::vector<SuiteRow> eigen_suite(int n_states = 1000, unsigned seed = 12345);
std::vector<SuiteRow> lemma_suite();
std::vector<SuiteRow> stoker_suite();
std::vector<SuiteRow> balance_suite();
// which: all | eigen | lemmas | stoker | balance
std::vector<SuiteRow> run_suites(const std::string& which);

}  // namespace vegflow::verify

#endif  // VEGFLOW_VERIFY_HPP_
