#include "flow.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "errors.hpp"

namespace bnf {

namespace {

namespace ode = boost::numeric::odeint;

template <class T>
using StateT = std::vector<std::complex<T>>;

template <class T>
bool all_finite(const StateT<T>& x) {
  for (const auto& z : x)
    if (!std::isfinite(static_cast<double>(z.real())) || !std::isfinite(static_cast<double>(z.imag()))) return false;
  return true;
}

template <class T>
T max_abs(const StateT<T>& x) {
  T m = 0;
  for (const auto& z : x) m = std::max(m, std::abs(z));
  return m;
}

// Adaptive RKF78 from t to t_end. h carries the step suggestion across calls.
template <class T, class Sys, class OnStep>
bool drive(Sys&& sys, StateT<T>& x, T& t, T t_end, T& h, T abs_tol, T rel_tol, size_t max_steps, size_t& steps,
           size_t& rejected, OnStep&& on_step) {
  using stepper_t = ode::runge_kutta_fehlberg78<StateT<T>, T, StateT<T>, T>;
  auto ctrl = ode::make_controlled(abs_tol, rel_tol, stepper_t());
  const T dir = t_end >= t ? T(1) : T(-1);
  h = dir * std::abs(h);
  size_t budget = 0;
  while ((t_end - t) * dir > 0) {
    T dt = h;
    bool capped = false;
    if ((t + dt - t_end) * dir >= 0) {
      dt = t_end - t;
      capped = true;
    }
    auto res = ctrl.try_step(sys, x, t, dt);
    if (res == ode::success) {
      ++steps;
      if (capped) t = t_end;
      if (!capped || std::abs(dt) > std::abs(h)) h = dt;
      if (!all_finite(x)) fail(ErrorKind::NumericalAbort, "integrator produced a non-finite state");
      if (!on_step(t, x)) return false;
    } else {
      ++rejected;
      h = dt;
      if (std::abs(h) < T(1e-14) * std::max(T(1), std::abs(t)))
        fail(ErrorKind::NumericalAbort, "step size underflow at t = " + std::to_string(static_cast<double>(t)));
    }
    if (++budget > max_steps) fail(ErrorKind::NumericalAbort, "step budget exhausted");
  }
  return true;
}

double weighted_cross(const FrequencySpectrum& spectrum, const StateVector& u, const StateVector& d, double s) {
  // sum_k max(k,1)^{2s} sum_{j in C_k} (2 Re(conj(u_j) d_j) + |d_j|^2)
  double acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    const double w = std::pow(std::max(spectrum.cluster_of(j), 1), 2.0 * s);
    acc += w * (2.0 * (std::conj(u[j]) * d[j]).real() + std::norm(d[j]));
  }
  return acc;
}

}  // namespace

std::vector<double> geometric_times(double T, double first, double ratio) {
  require(first > 0.0 && ratio > 1.0, ErrorKind::InvalidArgument, "sampling needs first > 0 and ratio > 1");
  std::vector<double> out;
  const double end = std::abs(T);
  if (end == 0.0) return out;
  for (double t = first; t < end; t *= ratio) out.push_back(T < 0 ? -t : t);
  out.push_back(T);
  return out;
}

Propagator::Propagator(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity, const StateVector& u0,
                       FlowOptions options)
    : spectrum_(std::move(spectrum)), p_(&nonlinearity), v0_(u0), w_(u0.size(), cplx(0.0, 0.0)), options_(options),
      h_(options.initial_step) {
  require(spectrum_ && u0.size() == spectrum_->size(), ErrorKind::SpectrumMismatch,
          "initial state length differs from spectrum size");
  require(options.tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  for (auto z : u0)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument, "initial state not finite");
}

StateVector Propagator::state() const {
  StateVector u(v0_.size());
  for (size_t j = 0; j < u.size(); ++j) u[j] = std::polar(1.0, -spectrum_->omega(j) * t_) * (v0_[j] + w_[j]);
  return u;
}

bool Propagator::advance(double t_end, const std::function<bool(double, const StateVector&)>& on_step) {
  const auto& spec = *spectrum_;
  const size_t n = v0_.size();
  StateVector u(n), g(n), phase(n);
  auto sys = [&](const StateVector& w, StateVector& dw, double t) {
    for (size_t j = 0; j < n; ++j) {
      phase[j] = std::polar(1.0, spec.omega(j) * t);
      u[j] = std::conj(phase[j]) * (v0_[j] + w[j]);
      g[j] = 0.0;
    }
    p_->add_gradient(u, g);
    dw.resize(n);
    for (size_t j = 0; j < n; ++j) dw[j] = cplx(0.0, -1.0) * phase[j] * g[j];
  };
  const double scale = std::max(max_abs(v0_), 1e-300);
  StateVector cur(n);
  auto step = [&](double t, const StateVector& w) {
    for (size_t j = 0; j < n; ++j) cur[j] = std::polar(1.0, -spec.omega(j) * t) * (v0_[j] + w[j]);
    if (sobolev_norm(spec, cur, options_.s0) > options_.rho0)
      fail(ErrorKind::BlowUp, "H^s0 norm left the ball of radius " + std::to_string(options_.rho0) +
                                  " at t = " + std::to_string(t));
    return on_step ? on_step(t, cur) : true;
  };
  if (p_->size() == 0) {
    // linear flow: the rotating-frame state is constant
    t_ = t_end;
    return step(t_, w_);
  }
  return drive<double>(sys, w_, t_, t_end, h_, options_.tol * scale, options_.tol, options_.max_steps, steps_,
                       rejected_, step);
}

double hamiltonian_energy(const FrequencySpectrum& spectrum, const CompiledPolynomial& p, const StateVector& u) {
  return z2(spectrum, u) + p.value(u);
}

TrajectoryLog integrate(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity, const StateVector& u0,
                        const std::vector<double>& sample_times, double s_c, int threshold,
                        const FlowOptions& options) {
  TrajectoryLog log;
  log.tol = options.tol;
  log.s_c = s_c;
  log.threshold = threshold;
  const auto& spec = *spectrum;
  Propagator prop(spectrum, nonlinearity, u0, options);
  auto record = [&](double t, const StateVector& u) {
    log.times.push_back(t);
    log.norm_sc.push_back(sobolev_norm(spec, u, s_c));
    log.low_sc.push_back(sobolev_norm(spec, project(spec, u, Selector::at_most(threshold)), s_c));
    StateVector hi = project(spec, u, Selector::above(threshold));
    log.high_sc.push_back(sobolev_norm(spec, hi, s_c));
    log.high_l2.push_back(l2_norm(hi));
    log.energy.push_back(hamiltonian_energy(spec, nonlinearity, u));
    log.actions.push_back(super_actions(spec, u));
    log.steps.push_back(prop.steps());
  };
  record(0.0, u0);
  double last = 0.0;
  for (double t : sample_times) {
    require(std::abs(t) > std::abs(last) && (t > 0) == (sample_times.front() > 0), ErrorKind::InvalidArgument,
            "sample times must move monotonically away from 0");
    prop.advance(t);
    record(t, prop.state());
    last = t;
  }
  log.rejected = prop.rejected();
  log.final_state = prop.state();
  return log;
}

FlowSafety flow_safety(const InhomogeneousPolynomial& chi, double gamma, double constant) {
  require(gamma > 0.0 && constant > 0.0, ErrorKind::InvalidArgument, "safety radius needs gamma > 0 and c > 0");
  FlowSafety s;
  s.gamma = gamma;
  s.constant = constant;
  s.r = std::max(3, chi.max_degree());
  s.chi_norm = poly_norm(chi, gamma);
  const double inv = s.chi_norm > 0.0 ? 1.0 / s.chi_norm : std::numeric_limits<double>::infinity();
  s.radius = constant * std::min(inv, gamma);
  return s;
}

ChiFlow::ChiFlow(SpectrumPtr spectrum, const InhomogeneousPolynomial& chi, FlowSafety safety, ChiFlowOptions options)
    : spectrum_(std::move(spectrum)), compiled_(chi), safety_(safety), options_(options) {}

void ChiFlow::check_radius(double norm) const {
  if (options_.guard && !(norm < 2.0 * safety_.radius))
    fail(ErrorKind::OutsideSafetyRadius, "state norm " + std::to_string(norm) + " is not below twice the radius " +
                                             std::to_string(safety_.radius));
}

void ChiFlow::check_near_identity(double u_norm, double d_norm) const {
  if (options_.guard && d_norm > u_norm / safety_.radius * u_norm)
    fail(ErrorKind::NumericalAbort, "chi flow left the near-identity regime");
}

StateVector ChiFlow::displacement(const StateVector& u0, double t) const {
  const auto& spec = *spectrum_;
  const double u_norm = sobolev_norm(spec, u0, options_.s);
  check_radius(u_norm);
  const size_t n = u0.size();
  StateVector d(n, cplx(0.0, 0.0));
  if (compiled_.size() == 0 || t == 0.0) return d;
  StateVector u(n);
  auto sys = [&](const StateVector& x, StateVector& dx, double) {
    for (size_t j = 0; j < n; ++j) u[j] = u0[j] + x[j];
    dx.assign(n, cplx(0.0, 0.0));
    compiled_.add_gradient(u, dx, cplx(0.0, -1.0));
  };
  double time = 0.0, h = 0.1 * t;
  size_t steps = 0, rejected = 0;
  const double scale = std::max(max_abs(u0), 1e-300);
  // the displacement is O(|u0|^2), so the absolute tolerance is scaled accordingly
  drive<double>(sys, d, time, t, h, options_.tol * scale * scale, options_.tol, 10'000'000, steps, rejected,
                [](double, const StateVector&) { return true; });
  check_near_identity(u_norm, sobolev_norm(spec, d, options_.s));
  return d;
}

StateVectorLD ChiFlow::displacement_ld(const StateVectorLD& u0, long double t) const {
  const auto& spec = *spectrum_;
  StateVector u0d(u0.size());
  for (size_t j = 0; j < u0.size(); ++j) u0d[j] = cplx(static_cast<double>(u0[j].real()), static_cast<double>(u0[j].imag()));
  const double u_norm = sobolev_norm(spec, u0d, options_.s);
  check_radius(u_norm);
  const size_t n = u0.size();
  using C = std::complex<long double>;
  StateVectorLD d(n, C(0, 0));
  if (compiled_.size() == 0 || t == 0) return d;
  StateVectorLD u(n);
  auto sys = [&](const StateVectorLD& x, StateVectorLD& dx, long double) {
    for (size_t j = 0; j < n; ++j) u[j] = u0[j] + x[j];
    dx.assign(n, C(0, 0));
    compiled_.add_gradient_as<long double>(u, dx, C(0, -1));
  };
  long double time = 0, h = t / 10;
  size_t steps = 0, rejected = 0;
  const long double scale = std::max(max_abs(u0), 1e-300L);
  const long double tol = std::min<long double>(options_.tol, 1e-17L);
  drive<long double>(sys, d, time, t, h, tol * scale * scale, tol, 10'000'000, steps, rejected,
                     [](long double, const StateVectorLD&) { return true; });
  StateVector dd(n);
  for (size_t j = 0; j < n; ++j) dd[j] = cplx(static_cast<double>(d[j].real()), static_cast<double>(d[j].imag()));
  check_near_identity(u_norm, sobolev_norm(spec, dd, options_.s));
  return d;
}

StateVector ChiFlow::apply(const StateVector& u0, double t) const {
  StateVector d = displacement(u0, t);
  for (size_t j = 0; j < d.size(); ++j) d[j] += u0[j];
  return d;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorKind::InvalidArgument, "fit needs equally many x and y values");
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) return f;
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

TransformReport transform_check(const InhomogeneousPolynomial& P, const NormalFormResult& result,
                                const StateVector& profile, const std::vector<double>& amplitudes,
                                const ChiFlowOptions& options, double safety_constant) {
  const SpectrumPtr& spectrum = P.spectrum();
  const auto& spec = *spectrum;
  FlowSafety safety = flow_safety(result.chi, result.gamma, safety_constant);
  ChiFlow flow(spectrum, result.chi, safety, options);
  CompiledPolynomial cp(P), cq(result.resonant);
  TransformReport rep;
  using C = std::complex<long double>;
  std::vector<double> lx, ly;
  for (double eps : amplitudes) {
    StateVectorLD u(profile.size());
    for (size_t j = 0; j < u.size(); ++j) u[j] = C(profile[j].real(), profile[j].imag()) * static_cast<long double>(eps);
    StateVectorLD d = flow.displacement_ld(u, -1.0L);
    StateVectorLD v(u.size());
    long double dz2 = 0;
    for (size_t j = 0; j < u.size(); ++j) {
      v[j] = u[j] + d[j];
      dz2 += static_cast<long double>(spec.omega(j)) * ((std::conj(u[j]) * d[j]).real() + std::norm(d[j]) / 2);
    }
    const long double r = dz2 + cp.value_as<long double>(v) - cq.value_as<long double>(u);
    const double ref = std::abs(static_cast<double>(cp.value_as<long double>(u)));
    rep.samples.push_back({eps, std::abs(static_cast<double>(r)), ref});
    if (r != 0) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(std::abs(static_cast<double>(r))));
    }
  }
  rep.fit = fit_line(lx, ly);
  return rep;
}

LifespanResult lifespan_experiment(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity,
                                   const StateVector& profile, const std::vector<double>& amplitudes, double s_c,
                                   double doubling, double t_cap, const FlowOptions& options, int workers) {
  require(!amplitudes.empty(), ErrorKind::InvalidArgument, "amplitude ladder is empty");
  for (size_t i = 1; i < amplitudes.size(); ++i)
    require(amplitudes[i] < amplitudes[i - 1], ErrorKind::InvalidArgument, "amplitude ladder must decrease");
  require(doubling > 1.0 && t_cap > 0.0, ErrorKind::InvalidArgument, "need doubling > 1 and T_cap > 0");
  const auto& spec = *spectrum;
  const double pn = sobolev_norm(spec, profile, s_c);
  require(pn > 0.0, ErrorKind::InvalidArgument, "profile is zero");
  LifespanResult res;
  res.rows.resize(amplitudes.size());
  parallel_for(amplitudes.size(), workers, [&](size_t i) {
    const double eps = amplitudes[i];
    StateVector u0(profile.size());
    for (size_t j = 0; j < u0.size(); ++j) u0[j] = profile[j] * (eps / pn);
    Propagator prop(spectrum, nonlinearity, u0, options);
    const double target = doubling * eps;
    double t_prev = 0.0, n_prev = eps, t_exit = t_cap;
    bool hit = false;
    prop.advance(t_cap, [&](double t, const StateVector& u) {
      const double nrm = sobolev_norm(spec, u, s_c);
      if (nrm >= target) {
        // linear interpolation inside the last accepted step
        t_exit = t_prev + (t - t_prev) * (target - n_prev) / std::max(nrm - n_prev, 1e-300);
        hit = true;
        return false;
      }
      t_prev = t;
      n_prev = nrm;
      return true;
    });
    res.rows[i] = {eps, t_exit, !hit, prop.steps()};
  });
  std::vector<double> x, y;
  for (const auto& row : res.rows)
    if (!row.censored) {
      x.push_back(std::log(1.0 / row.epsilon));
      y.push_back(std::log(row.t_exit));
    }
  res.fit = fit_line(x, y);
  return res;
}

DriftReport superaction_drift(SpectrumPtr spectrum, const CompiledPolynomial& resonant, const StateVector& u0,
                              double T, int threshold, const FlowOptions& options) {
  const auto& spec = *spectrum;
  const auto j0 = super_actions(spec, u0);
  DriftReport rep;
  Propagator prop(spectrum, resonant, u0, options);
  const StateVector& v0 = prop.initial();
  // J_k is invariant under the rotation, so it is read off the rotating-frame state.
  auto check = [&](double, const StateVector&) {
    const StateVector& w = prop.displacement();
    std::vector<double> dj(j0.size(), 0.0);
    for (size_t j = 0; j < w.size(); ++j)
      dj[spec.cluster_of(j) - 1] += 2.0 * (std::conj(v0[j]) * w[j]).real() + std::norm(w[j]);
    double hi = 0.0;
    for (size_t i = 0; i < dj.size(); ++i) {
      rep.max_action_drift = std::max(rep.max_action_drift, std::abs(dj[i]));
      if (static_cast<int>(i) + 1 > threshold) hi += dj[i];
    }
    rep.high_mass_drift = std::max(rep.high_mass_drift, std::abs(hi));
    return true;
  };
  prop.advance(T, check);
  rep.steps = prop.steps();
  return rep;
}

NormalFormDriftResult normal_form_drift(SpectrumPtr spectrum, const CompiledPolynomial& nonlinearity,
                                        const InhomogeneousPolynomial& chi, double gamma,
                                        const StateVector& profile, const std::vector<double>& amplitudes,
                                        const NormalFormDriftOptions& options, int workers) {
  require(options.samples >= 1 && options.window > 0.0, ErrorKind::InvalidArgument, "drift window is empty");
  const auto& spec = *spectrum;
  const double pn = sobolev_norm(spec, profile, options.s_c);
  require(pn > 0.0, ErrorKind::InvalidArgument, "profile is zero");
  FlowSafety safety = flow_safety(chi, gamma, options.safety_constant);
  ChiFlow flow(spectrum, chi, safety, options.chi);
  NormalFormDriftResult res;
  res.rows.resize(amplitudes.size());
  parallel_for(amplitudes.size(), workers, [&](size_t i) {
    const double eps = amplitudes[i];
    StateVector v0(profile.size());
    for (size_t j = 0; j < v0.size(); ++j) v0[j] = profile[j] * (eps / pn);
    // [N(z) - N(u)] at a state u
    auto correction = [&](const StateVector& u) {
      return weighted_cross(spec, u, flow.displacement(u, 1.0), options.s_c);
    };
    const double c0 = correction(v0);
    const double norm0 = sobolev_norm_sq(spec, v0, options.s_c) + c0;
    Propagator prop(spectrum, nonlinearity, v0, options.flow);
    double worst = 0.0;
    for (int s = 1; s <= options.samples; ++s) {
      prop.advance(options.window * s / options.samples);
      const double du = weighted_cross(spec, v0, prop.displacement(), options.s_c);
      const double drift = du + correction(prop.state()) - c0;
      worst = std::max(worst, std::abs(drift));
    }
    const double d2 = options.doubling * options.doubling - 1.0;
    res.rows[i] = {eps, norm0, worst, worst > 0.0 ? options.window * d2 * norm0 / worst
                                                  : std::numeric_limits<double>::infinity()};
  });
  std::vector<double> x, y;
  for (const auto& row : res.rows)
    if (std::isfinite(row.t_double)) {
      x.push_back(std::log(1.0 / row.epsilon));
      y.push_back(std::log(row.t_double));
    }
  res.fit = fit_line(x, y);
  return res;
}

}  // namespace bnf
