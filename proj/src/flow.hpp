#pragma once

#include <functional>
#include <vector>

#include "compiled.hpp"
#include "normalform.hpp"
#include "polynomial.hpp"

namespace bnf {

using StateVectorLD = std::vector<std::complex<long double>>;

struct FlowOptions {
  double tol = 1e-12;
  double rho0 = 1.0;  // BlowUp radius in H^{s0}
  double s0 = 1.0;
  size_t max_steps = 50'000'000;
  double initial_step = 1e-2;
};

struct TrajectoryLog {
  std::vector<double> times;
  std::vector<double> norm_sc, low_sc, high_sc, high_l2, energy;
  std::vector<std::vector<double>> actions;
  std::vector<size_t> steps;
  double tol = 0.0, s_c = 0.0;
  int threshold = 0;
  size_t rejected = 0;
  StateVector final_state;
};

// Sample times 0 < t_1 < ... < |T| growing geometrically by `ratio` from `first`,
// ending at T (negative T gives negative times).
std::vector<double> geometric_times(double T, double first, double ratio);

// Integrates i u' = Omega u + grad P(u) in the rotating frame u = e^{-i Omega t}(u0 + w)
// with an embedded Runge-Kutta-Fehlberg 7(8) controller. on_step(t, u) runs after
// each accepted step and may return false to stop early.
class Propagator {
 public:
  Propagator(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity, const StateVector& u0,
             FlowOptions options = {});

  double time() const { return t_; }
  size_t steps() const { return steps_; }
  size_t rejected() const { return rejected_; }
  StateVector state() const;
  // Displacement w in the rotating frame.
  const StateVector& displacement() const { return w_; }
  const StateVector& initial() const { return v0_; }
  // Returns false if on_step stopped the run before reaching t_end.
  bool advance(double t_end, const std::function<bool(double, const StateVector&)>& on_step = {});

 private:
  SpectrumPtr spectrum_;
  const CompiledPolynomial* p_;
  StateVector v0_, w_;
  FlowOptions options_;
  double t_ = 0.0, h_;
  size_t steps_ = 0, rejected_ = 0;
};

double hamiltonian_energy(const FrequencySpectrum& spectrum, const CompiledPolynomial& p, const StateVector& u);

TrajectoryLog integrate(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity, const StateVector& u0,
                        const std::vector<double>& sample_times, double s_c, int threshold,
                        const FlowOptions& options = {});

struct FlowSafety {
  double radius = 0.0;
  double chi_norm = 0.0;
  double gamma = 1.0;
  double constant = 1.0;
  int r = 3;
};

// radius = c * min(1 / ||chi||_gamma, gamma)
FlowSafety flow_safety(const InhomogeneousPolynomial& chi, double gamma, double constant = 1.0);

struct ChiFlowOptions {
  double tol = 1e-13;
  bool guard = true;
  double s = 1.0;  // regularity of the safety check, 1 + nu
};

// Flow of i u' = grad chi(u), computed as the displacement d = Phi^t(u0) - u0.
class ChiFlow {
 public:
  ChiFlow(SpectrumPtr spectrum, const InhomogeneousPolynomial& chi, FlowSafety safety, ChiFlowOptions options = {});

  StateVector displacement(const StateVector& u0, double t) const;
  StateVectorLD displacement_ld(const StateVectorLD& u0, long double t) const;
  StateVector apply(const StateVector& u0, double t) const;
  const FlowSafety& safety() const { return safety_; }
  const CompiledPolynomial& compiled() const { return compiled_; }

 private:
  void check_radius(double norm) const;
  void check_near_identity(double u_norm, double d_norm) const;
  SpectrumPtr spectrum_;
  CompiledPolynomial compiled_;
  FlowSafety safety_;
  ChiFlowOptions options_;
};

struct LinearFit {
  double slope = 0.0, intercept = 0.0;
  size_t points = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct TransformSample {
  double amplitude;
  double residual;   // |(Z2 + P)(Phi^{-1} u) - (Z2 + Q)(u)|
  double reference;  // |P(u)|
};

struct TransformReport {
  std::vector<TransformSample> samples;
  LinearFit fit;  // log residual against log amplitude
};

TransformReport transform_check(const InhomogeneousPolynomial& P, const NormalFormResult& result,
                                const StateVector& profile, const std::vector<double>& amplitudes,
                                const ChiFlowOptions& options = {}, double safety_constant = 1.0);

struct LifespanRow {
  double epsilon;
  double t_exit;
  bool censored;
  size_t steps;
};

struct LifespanResult {
  std::vector<LifespanRow> rows;
  LinearFit fit;  // log T against log(1/eps), uncensored rows only
};

// u0 = eps * v / ||v||_{H^{s_c}}; runs until ||u||_{H^{s_c}} >= doubling * eps or T_cap.
LifespanResult lifespan_experiment(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity,
                                   const StateVector& profile, const std::vector<double>& amplitudes, double s_c,
                                   double doubling, double t_cap, const FlowOptions& options = {}, int workers = 1);

struct DriftReport {
  double max_action_drift = 0.0;   // max_k sup_t |J_k(t) - J_k(0)|
  double high_mass_drift = 0.0;    // sup_t | ||Pi_{>N} u||^2 - ||Pi_{>N} u0||^2 |
  size_t steps = 0;
};

DriftReport superaction_drift(SpectrumPtr spectrum, const CompiledPolynomial& resonant, const StateVector& u0,
                              double T, int threshold, const FlowOptions& options = {});

struct NormalFormDriftOptions {
  double window = 20.0;
  int samples = 20;
  double doubling = 2.0;
  double s_c = 1.0;
  FlowOptions flow;
  ChiFlowOptions chi;
  double safety_constant = 1.0;
};

struct NormalFormDriftRow {
  double epsilon;
  double norm0;      // ||z(0)||^2_{H^{s_c}}
  double max_drift;  // sup over samples of | ||z(t)||^2 - ||z(0)||^2 |
  double t_double;   // window * (doubling^2 - 1) * norm0 / max_drift
};

struct NormalFormDriftResult {
  std::vector<NormalFormDriftRow> rows;
  LinearFit fit;  // log t_double against log(1/eps)
};

// Drift of the H^{s_c} norm in normal-form coordinates z = Phi_chi^1(u) along the
// true flow, extrapolated linearly to a doubling time.
NormalFormDriftResult normal_form_drift(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity,
                                        const InhomogeneousPolynomial& chi, double gamma,
                                        const StateVector& profile, const std::vector<double>& amplitudes,
                                        const NormalFormDriftOptions& options = {}, int workers = 1);

}  // namespace bnf
