#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "compiled.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "hashing.hpp"
#include "inequalities.hpp"
#include "normalform.hpp"
#include "resonance.hpp"

namespace bnf {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Output {
  std::filesystem::path dir;
  std::string hash;

  void write(const std::string& name, const std::string& body) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + (dir / name).string());
    out << body;
    if (!out) fail(ErrorKind::Io, "write failed for " + (dir / name).string());
  }
  void csv(const std::string& name, const std::string& body) const { write(name, "# manifest: " + hash + "\n" + body); }
  void json_file(const std::string& name, json j) const {
    j["manifest_hash"] = hash;
    write(name, j.dump(2) + "\n");
  }
};

std::string key_label(const MonomialKey& key) {
  std::string s;
  for (int i = 0; i < key.q; ++i) {
    if (i) s += ' ';
    s += std::to_string(key.k(i)) + (key.sigma(i) > 0 ? "+" : "-");
  }
  return s;
}

std::string polynomial_text(const InhomogeneousPolynomial& p) {
  std::string out;
  for (const auto& [q, part] : p.parts()) out += part.to_text();
  return out;
}

void require_config(bool cond, const Config& config, const std::string& section, const std::string& key,
                    const std::string& what) {
  if (!cond) fail(ErrorKind::Config, config.where(section, key) + ": " + what);
}

json fit_json(const LinearFit& f) { return {{"slope", f.slope}, {"intercept", f.intercept}, {"points", f.points}}; }

FlowOptions flow_options(const Config& c, const RunOptions& run) {
  FlowOptions f;
  f.tol = run.tol ? *run.tol : c.get_real("flow", "tol", 1e-12);
  f.rho0 = c.get_real("flow", "rho0", 1.0);
  f.s0 = c.get_real("flow", "s0", 1.0);
  return f;
}

double resolve_gamma(const Config& c, const ModelBundle& model, int r, std::optional<ParameterSchedule>* sched) {
  const double s_c = c.get_real("normalform", "s_c", 1.0);
  const double eps = c.get_real("normalform", "epsilon", 1e-2);
  const double a_r = c.get_real("normalform", "a_r", r);
  const double nu = c.get_real("nonlinearity", "nu", 0.0);
  ParameterSchedule s = schedule(r, s_c, eps, a_r, model.spectrum->alpha(), model.spectrum->beta(), nu);
  if (sched) *sched = s;
  return c.has("normalform", "gamma") ? c.get_real("normalform", "gamma", 0.0) : s.gamma;
}

void cmd_clusters(const Config& c, const RunOptions&, const Output& out) {
  ModelBundle m = build_model(c);
  out.csv("clusters.csv", decomposition_csv(m.decomposition, m.spectrum.get()));
  out.write("spectrum.txt", m.spectrum->to_text());
  out.json_file("slack.json", {{"family", m.family},
                               {"modes", m.spectrum->size()},
                               {"clusters", m.spectrum->cluster_count()},
                               {"weyl_constant", m.decomposition.weyl_constant},
                               {"dimension", m.decomposition.dimension},
                               {"slack", m.spectrum->slack()},
                               {"spectrum_hash", m.spectrum->hash()}});
}

void cmd_nf(const Config& c, const RunOptions& run, const Output& out) {
  ModelBundle m = build_model(c);
  InhomogeneousPolynomial P = build_nonlinearity(c, m);
  const int r = c.get_int("normalform", "r", 3);
  std::optional<ParameterSchedule> sched;
  const double gamma = resolve_gamma(c, m, r, &sched);
  NormalFormOptions opt;
  opt.prune = c.get_real("normalform", "prune", 1e-14);
  opt.budget = static_cast<size_t>(c.get_real("normalform", "budget", 1e7));
  opt.workers = run.workers;
  NormalFormResult res = birkhoff(P, gamma, r, opt);
  res.schedule = sched;
  out.write("chi.txt", polynomial_text(res.chi));
  out.write("resonant.txt", polynomial_text(res.resonant));
  json j = json::parse(diagnostics_json(res));
  j["spectrum_hash"] = m.spectrum->hash();
  j["polynomial_hash"] = sha256_hex(polynomial_text(P)).substr(0, 16);
  const auto amps = c.get_reals("normalform", "amplitudes");
  if (!amps.empty()) {
    ChiFlowOptions co;
    co.tol = c.get_real("normalform", "tol", 1e-13);
    co.guard = c.get_bool("normalform", "guard", true);
    co.s = 1.0 + c.get_real("nonlinearity", "nu", 0.0);
    StateVector profile = build_profile(c, *m.spectrum, run.seed);
    TransformReport rep = transform_check(P, res, profile, amps, co, c.get_real("normalform", "safety_constant", 1.0));
    json samples = json::array();
    for (const auto& s : rep.samples)
      samples.push_back({{"amplitude", s.amplitude}, {"residual", s.residual}, {"reference", s.reference}});
    j["transform_check"] = {{"samples", samples}, {"fit", fit_json(rep.fit)}};
  }
  out.json_file("diagnostics.json", j);
}

void cmd_simulate(const Config& c, const RunOptions& run, const Output& out) {
  ModelBundle m = build_model(c);
  InhomogeneousPolynomial P = build_nonlinearity(c, m);
  CompiledPolynomial cp(P);
  StateVector u0 = build_profile(c, *m.spectrum, run.seed);
  const double amp = c.get_real("state", "amplitude", 1e-2);
  for (auto& z : u0) z *= amp;
  const double T = c.get_real("flow", "T", 10.0);
  const double s_c = c.get_real("flow", "s_c", 1.0);
  const int N = c.get_int("flow", "threshold", std::max(1, m.spectrum->cluster_count() / 2));
  auto times = geometric_times(T, c.get_real("flow", "first_sample", 1e-2), c.get_real("flow", "ratio", 1.25));
  TrajectoryLog log = integrate(m.spectrum, cp, u0, times, s_c, N, flow_options(c, run));
  std::ostringstream os;
  os << "t,norm_sc,low_sc,high_sc,high_l2,energy,steps";
  for (int k = 1; k <= m.spectrum->cluster_count(); ++k) os << ",J_" << k;
  os << "\n";
  for (size_t i = 0; i < log.times.size(); ++i) {
    os << num(log.times[i]) << ',' << num(log.norm_sc[i]) << ',' << num(log.low_sc[i]) << ',' << num(log.high_sc[i])
       << ',' << num(log.high_l2[i]) << ',' << num(log.energy[i]) << ',' << log.steps[i];
    for (double J : log.actions[i]) os << ',' << num(J);
    os << "\n";
  }
  out.csv("trajectory.csv", os.str());
  double drift = 0.0;
  for (double e : log.energy) drift = std::max(drift, std::abs(e - log.energy.front()));
  out.json_file("summary.json", {{"samples", log.times.size()},
                                 {"T", T},
                                 {"tol", log.tol},
                                 {"rejected_steps", log.rejected},
                                 {"energy_drift", drift},
                                 {"spectrum_hash", m.spectrum->hash()}});
}

void cmd_lifespan(const Config& c, const RunOptions& run, const Output& out) {
  ModelBundle m = build_model(c);
  InhomogeneousPolynomial P = build_nonlinearity(c, m);
  CompiledPolynomial cp(P);
  StateVector profile = build_profile(c, *m.spectrum, run.seed);
  const auto amps = c.get_reals("lifespan", "amplitudes", {1e-1, 3e-2, 1e-2});
  const double s_c = c.get_real("lifespan", "s_c", 1.0);
  const double doubling = c.get_real("lifespan", "doubling", 2.0);
  const std::string mode = c.get_string("lifespan", "mode", "direct");
  FlowOptions fo = flow_options(c, run);
  if (mode == "direct") {
    LifespanResult res = lifespan_experiment(m.spectrum, cp, profile, amps, s_c, doubling,
                                             c.get_real("lifespan", "t_cap", 1e4), fo, run.workers);
    std::ostringstream os;
    os << "epsilon,t_exit,censored,steps\n";
    json rows = json::array();
    for (const auto& r : res.rows) {
      os << num(r.epsilon) << ',' << num(r.t_exit) << ',' << (r.censored ? 1 : 0) << ',' << r.steps << "\n";
      rows.push_back({{"epsilon", r.epsilon}, {"t_exit", r.t_exit}, {"censored", r.censored}});
    }
    out.csv("lifespan.csv", os.str());
    out.json_file("summary.json", {{"mode", mode}, {"rows", rows}, {"fit", fit_json(res.fit)}});
  } else if (mode == "nf_drift") {
    const double gamma = c.get_real("lifespan", "gamma", 1e-6);
    NormalFormDriftOptions no;
    no.window = c.get_real("lifespan", "window", 20.0);
    no.samples = c.get_int("lifespan", "samples", 20);
    no.doubling = doubling;
    no.s_c = s_c;
    no.flow = fo;
    no.safety_constant = c.get_real("lifespan", "safety_constant", 1.0);
    no.chi.guard = false;
    std::ostringstream os;
    os << "r,epsilon,norm0,max_drift,t_double\n";
    json fits = json::array();
    for (int r : c.get_ints("lifespan", "orders", {3, 4, 5})) {
      NormalFormOptions opt;
      opt.workers = run.workers;
      NormalFormResult nf = birkhoff(P, gamma, r, opt);
      NormalFormDriftResult res = normal_form_drift(m.spectrum, cp, nf.chi, gamma, profile, amps, no, run.workers);
      for (const auto& row : res.rows)
        os << r << ',' << num(row.epsilon) << ',' << num(row.norm0) << ',' << num(row.max_drift) << ','
           << num(row.t_double) << "\n";
      fits.push_back({{"r", r}, {"fit", fit_json(res.fit)}});
    }
    out.csv("lifespan.csv", os.str());
    out.json_file("summary.json", {{"mode", mode}, {"gamma", gamma}, {"fits", fits}});
  } else {
    fail(ErrorKind::Config, c.where("lifespan", "mode") + ": expected 'direct' or 'nf_drift', got '" + mode + "'");
  }
}

void cmd_mass_scan(const Config& c, const RunOptions& run, const Output& out) {
  std::vector<double> masses = c.get_reals("scan", "masses");
  if (masses.empty()) {
    const double lo = c.get_real("scan", "mass_min", 0.1), hi = c.get_real("scan", "mass_max", 1.0);
    const int steps = c.get_int("scan", "mass_steps", 10);
    require_config(steps >= 1 && hi >= lo, c, "scan", "mass_steps", "need mass_steps >= 1 and mass_max >= mass_min");
    for (int i = 0; i < steps; ++i) masses.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
  }
  const int q = c.get_int("scan", "q", 3);
  const int kmax = c.get_int("scan", "kmax", 10);
  const double gamma = c.get_real("scan", "gamma", 1e-6);
  const int N = c.get_int("scan", "threshold", kmax);
  const int lambda_max = c.get_int("spectrum", "lambda_max", kmax - 1);
  const int wc = c.get_int("spectrum", "weyl_constant", 3);
  const size_t budget = static_cast<size_t>(c.get_real("scan", "budget", 1e7));
  FrequencyFamily family = [&](double mass) { return kg_circle(mass, lambda_max, wc).spectrum; };
  auto rows = mass_scan(family, masses, q, kmax, gamma, run.workers, budget);
  std::ostringstream os;
  os << "m,key,min_divisor,certificate,class,resonant_count,keys\n";
  for (const auto& r : rows) {
    std::string cls = "none";
    if (r.keys_scanned > 0) cls = type_name(classify(r.worst_key, N, gamma, *family(r.mass), budget).type);
    os << num(r.mass) << ',' << (r.keys_scanned ? key_label(r.worst_key) : std::string("-")) << ','
       << num(r.worst_min_divisor) << ',' << num(r.worst_certificate) << ',' << cls << ',' << r.resonant_count << ','
       << r.keys_scanned << "\n";
  }
  out.csv("scan.csv", os.str());
}

void cmd_inequalities(const Config& c, const RunOptions&, const Output& out) {
  const int kmax = c.get_int("inequalities", "kmax", 30);
  const int L = c.get_int("inequalities", "L", 400);
  const auto degrees = c.get_ints("inequalities", "degrees", {3, 4});
  const auto ns = c.get_reals("inequalities", "n", {4, 5, 6});
  const auto nus = c.get_reals("inequalities", "nu", {0, 1});
  auto pack = [](const ScanResult& r) {
    return json{{"name", r.name},         {"worst_ratio", r.worst_ratio}, {"least_ratio", r.least_ratio},
                {"worst_tuple", r.worst_tuple}, {"worst_partner", r.worst_partner}, {"worst_extra", r.worst_extra},
                {"checked", r.checked}};
  };
  json results = json::array();
  for (size_t i = 0; i < degrees.size(); ++i)
    for (size_t j = i; j < degrees.size(); ++j) {
      const int q = degrees[i], qp = degrees[j];
      json row = {{"q", q}, {"qp", qp}};
      row["gamma_convolution"] = pack(scan_gamma_convolution(q, qp, kmax, L));
      row["a_bound"] = pack(scan_a_bound(q, qp, kmax));
      row["b_bound"] = pack(scan_b_bound(q, qp, kmax));
      results.push_back(row);
    }
  json per_degree = json::array();
  for (int q : degrees) {
    json row = {{"q", q}, {"gamma_equivalence", pack(scan_gamma_equivalence(q, kmax))}};
    json transfer = json::array(), dup = json::array();
    for (double n : ns)
      for (double nu : nus) {
        transfer.push_back({{"n", n}, {"nu", nu}, {"scan", pack(scan_weight_transfer(q, n, nu, kmax))}});
        dup.push_back({{"n", n}, {"nu", nu}, {"scan", pack(scan_duplicated_pair(q, n, nu, kmax))}});
      }
    row["weight_transfer"] = transfer;
    row["duplicated_pair"] = dup;
    per_degree.push_back(row);
  }
  out.json_file("inequalities.json", {{"kmax", kmax}, {"L", L}, {"pairs", results}, {"degrees", per_degree}});
}

}  // namespace

std::string manifest_hash(const std::string& command, const std::string& config_text, uint64_t seed,
                          std::optional<double> tol) {
  std::string blob = "command=" + command + "\nseed=" + std::to_string(seed) +
                     "\ntol=" + (tol ? hexfloat(*tol) : std::string("default")) + "\nversion=" + kVersion +
                     "\nconfig=\n" + config_text;
  return sha256_hex(blob);
}

ModelBundle build_model(const Config& c) {
  ModelBundle m;
  m.family = c.get_string("spectrum", "family", "kg_circle");
  const int wc = c.get_int("spectrum", "weyl_constant", 0);
  const int dim = c.get_int("spectrum", "dimension", 1);
  if (m.family == "kg_circle") {
    const double mass = c.get_real("spectrum", "mass", 0.537);
    CircleModel cm = kg_circle(mass, c.get_int("spectrum", "lambda_max", 11), wc > 0 ? wc : 3);
    m.spectrum = cm.spectrum;
    m.decomposition = cm.decomposition;
    m.circle = std::move(cm);
  } else if (m.family == "kg_generic_spectrum") {
    auto eig = c.get_reals("spectrum", "eigenvalues");
    require_config(!eig.empty(), c, "spectrum", "eigenvalues", "kg_generic_spectrum needs an eigenvalue list");
    m.spectrum = kg_frequencies(eig, c.get_real("spectrum", "mass", 1.0), dim, wc, &m.decomposition);
  } else if (m.family == "nls_plane_wave") {
    auto eig = c.get_reals("spectrum", "eigenvalues");
    if (eig.empty()) eig = circle_eigenvalues(c.get_int("spectrum", "lambda_max", 11));
    m.spectrum = nls_frequencies(eig, c.get_real("spectrum", "p0", 1.0), c.get_real("spectrum", "f_prime", 0.5), dim,
                                 wc, &m.decomposition);
  } else if (m.family == "quantum_oscillator") {
    OscillatorModel om = oscillator_frequencies(c.get_reals("spectrum", "sqrt_rho", {1.0}),
                                                c.get_real("spectrum", "mass", 1.0), c.get_int("spectrum", "levels", 10));
    m.spectrum = om.spectrum;
    m.decomposition = om.decomposition;
    m.oscillator = std::move(om);
  } else if (m.family == "explicit") {
    auto freq = c.get_reals("spectrum", "frequencies");
    auto cl = c.get_ints("spectrum", "clusters");
    require_config(!freq.empty() && freq.size() == cl.size(), c, "spectrum", "frequencies",
                   "explicit spectra need equally long frequencies and clusters lists");
    m.spectrum = std::make_shared<const FrequencySpectrum>(freq, cl, c.get_real("spectrum", "alpha", 1.0),
                                                           c.get_real("spectrum", "upsilon", 1.0),
                                                           c.get_real("spectrum", "beta", 1.0));
    // one boundary pair per cluster around the frequencies it holds
    for (int k = 1; k <= m.spectrum->cluster_count(); ++k) {
      double lo = k, hi = k;
      if (m.spectrum->dim(k) > 0) {
        lo = m.spectrum->omega(m.spectrum->members(k).front());
        hi = m.spectrum->omega(m.spectrum->members(k).back());
      }
      m.decomposition.boundaries.push_back(lo);
      m.decomposition.boundaries.push_back(hi);
    }
  } else {
    fail(ErrorKind::Config, c.where("spectrum", "family") + ": unknown family '" + m.family + "'");
  }
  return m;
}

InhomogeneousPolynomial build_nonlinearity(const Config& c, const ModelBundle& m) {
  const double nu = c.get_real("nonlinearity", "nu", 0.0);
  const double n = c.get_real("nonlinearity", "n", 0.0);
  const auto monomials = c.all("nonlinearity", "monomial");
  InhomogeneousPolynomial P(m.spectrum, nu, n);
  if (!monomials.empty()) {
    for (const auto& e : monomials) {
      const std::string loc = c.origin() + ":" + std::to_string(e.line) + ": monomial";
      const auto colon = e.value.find(':');
      if (colon == std::string::npos) fail(ErrorKind::Config, loc + ": expected 're im : j1+ j2- ...'");
      std::istringstream head(e.value.substr(0, colon)), tail(e.value.substr(colon + 1));
      std::string re, im;
      if (!(head >> re >> im)) fail(ErrorKind::Config, loc + ": missing coefficient");
      std::vector<int> modes, sigma;
      for (std::string tok; tail >> tok;) {
        const char s = tok.back();
        if ((s != '+' && s != '-') || tok.size() < 2) fail(ErrorKind::Config, loc + ": bad factor '" + tok + "'");
        int j = 0;
        try {
          j = std::stoi(tok.substr(0, tok.size() - 1));
        } catch (...) {
          fail(ErrorKind::Config, loc + ": bad mode index in '" + tok + "'");
        }
        if (j < 1 || static_cast<size_t>(j) > m.spectrum->size())
          fail(ErrorKind::Config, loc + ": mode " + std::to_string(j) + " outside 1.." + std::to_string(m.spectrum->size()));
        modes.push_back(j - 1);
        sigma.push_back(s == '+' ? 1 : -1);
      }
      const int q = static_cast<int>(modes.size());
      if (q < 3) fail(ErrorKind::Config, loc + ": monomials need at least three factors");
      P.part(q).add_monomial(modes, sigma, cplx(parse_real(re), parse_real(im)));
    }
    return P;
  }
  PowerCoefficients coeffs;
  if (c.has("nonlinearity", "coefficients")) {
    std::istringstream is(c.get_string("nonlinearity", "coefficients", ""));
    for (std::string tok; is >> tok;) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        fail(ErrorKind::Config, c.where("nonlinearity", "coefficients") + ": expected 'q:a' pairs");
      coeffs[std::stoi(tok.substr(0, colon))] = parse_real(tok.substr(colon + 1));
    }
  } else {
    coeffs[3] = 1.0;
  }
  const int kmax = c.get_int("nonlinearity", "kmax", m.spectrum->cluster_count());
  InhomogeneousPolynomial out(m.spectrum, nu, n);
  if (m.circle) out = kg_circle_nonlinearity(*m.circle, coeffs, kmax);
  else if (m.oscillator) out = oscillator_nonlinearity(*m.oscillator, coeffs, kmax);
  else fail(ErrorKind::UnsupportedBasis, "family '" + m.family + "' has no mode-product integrals; give explicit monomials");
  InhomogeneousPolynomial graded(m.spectrum, nu, n);
  for (const auto& [q, part] : out.parts()) {
    HomogeneousPolynomial g = part;
    g.set_grading(nu, n);
    graded.set_part(std::move(g));
  }
  return graded;
}

StateVector build_profile(const Config& c, const FrequencySpectrum& spectrum, uint64_t seed) {
  StateVector u(spectrum.size(), cplx(0.0, 0.0));
  const auto modes = c.all("state", "mode");
  if (!modes.empty()) {
    for (const auto& e : modes) {
      std::istringstream is(e.value);
      int j;
      std::string re, im;
      if (!(is >> j >> re >> im) || j < 1 || static_cast<size_t>(j) > spectrum.size())
        fail(ErrorKind::Config, c.origin() + ":" + std::to_string(e.line) + ": mode expects 'j re im' with 1 <= j <= " +
                                    std::to_string(spectrum.size()));
      u[j - 1] += cplx(parse_real(re), parse_real(im));
    }
    return u;
  }
  const double decay = c.get_real("state", "decay", 2.0);
  const bool random_phases = c.get_bool("state", "random_phases", false);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (size_t j = 0; j < u.size(); ++j) {
    const double a = std::pow(static_cast<double>(spectrum.cluster_of(j)), -decay);
    u[j] = std::polar(a, random_phases ? phase(rng) : 0.0);
  }
  return u;
}

void run_command(const RunOptions& run) {
  require(run.workers >= 1, ErrorKind::InvalidArgument, "workers must be at least 1");
  if (run.tol) require(*run.tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  Config config = run.config_path.empty() ? Config::parse("", "<empty>") : Config::load(run.config_path);
  Output out;
  out.dir = run.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(out.dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + run.out_dir + ": " + ec.message());
  out.hash = manifest_hash(run.command, config.text(), run.seed, run.tol);
  json manifest = {{"command", run.command},
                   {"config_path", run.config_path},
                   {"seed", run.seed},
                   {"tol", run.tol ? json(*run.tol) : json(nullptr)},
                   {"version", kVersion},
                   {"config_sha256", sha256_hex(config.text())}};
  if (run.command == "clusters") cmd_clusters(config, run, out);
  else if (run.command == "nf") cmd_nf(config, run, out);
  else if (run.command == "simulate") cmd_simulate(config, run, out);
  else if (run.command == "lifespan") cmd_lifespan(config, run, out);
  else if (run.command == "mass-scan") cmd_mass_scan(config, run, out);
  else if (run.command == "verify-inequalities") cmd_inequalities(config, run, out);
  else fail(ErrorKind::InvalidArgument, "unknown command '" + run.command + "'");
  out.json_file("manifest.json", manifest);
}

}  // namespace bnf
