#include "normalform.hpp"

#include <cmath>
#include <json.hpp>

#include "errors.hpp"
#include "tensor_ops.hpp"

namespace bnf {

ParameterSchedule schedule(int r, double s_c, double epsilon, double a_r, double alpha, double beta, double nu) {
  require(r >= 3, ErrorKind::InvalidArgument, "normal form order r must be at least 3");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::InvalidArgument, "epsilon must lie in (0, 1]");
  require(alpha > 0.0 && beta > 0.0, ErrorKind::InvalidArgument, "alpha and beta must be positive");
  ParameterSchedule sc;
  sc.r = r;
  sc.s_c = s_c;
  sc.epsilon = epsilon;
  sc.a_r = a_r;
  sc.alpha = alpha;
  sc.beta = beta;
  sc.nu = nu;
  const double rr = r;
  const double e = 2.0 * a_r + rr * alpha * beta + 2.0;
  sc.s = s_c + 9.0 * rr * rr * e + alpha;
  const double gap = sc.s - s_c;
  sc.log_N = -8.0 * rr / gap * std::log(epsilon);
  sc.log_gamma = -e * sc.log_N;
  sc.N = std::exp(sc.log_N);
  sc.gamma = std::exp(sc.log_gamma);
  sc.log_gamma_pow = -rr * sc.log_gamma;
  sc.log_n_pow = gap / (9.0 * rr) * sc.log_N;
  sc.log_eps_pow = -8.0 / 9.0 * std::log(epsilon);
  sc.below_bootstrap_order = r < 17;
  sc.degenerate = epsilon == 1.0;
  return sc;
}

namespace {

double factorial(int n) {
  uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<uint64_t>(i);
  return static_cast<double>(f);
}

using Table = std::map<std::pair<int, int>, HomogeneousPolynomial>;  // (level, degree)

// sum over q of {chi^(q), prev(level - 1, d - q + 2)}
HomogeneousPolynomial nested_level(const InhomogeneousPolynomial& chi, const Table& table, int level, int d,
                                   const SpectrumPtr& spectrum, double nu, double n, const NormalFormOptions& options) {
  std::vector<std::pair<const HomogeneousPolynomial*, const HomogeneousPolynomial*>> jobs;
  for (const auto& [q, cq] : chi.parts()) {
    if (q >= d || cq.empty()) continue;
    auto it = table.find({level - 1, d - q + 2});
    if (it == table.end() || it->second.empty()) continue;
    jobs.push_back({&cq, &it->second});
  }
  std::vector<HomogeneousPolynomial> parts(jobs.size());
  BracketOptions bo{options.prune};
  parallel_for(jobs.size(), options.workers,
               [&](size_t i) { parts[i] = poisson_bracket(*jobs[i].first, *jobs[i].second, bo); });
  HomogeneousPolynomial sum(spectrum, d, nu, n);
  for (const auto& p : parts) sum += p;
  return sum;
}

}  // namespace

double cohomological_residual(const HomogeneousPolynomial& chi, const HomogeneousPolynomial& q,
                              const HomogeneousPolynomial& rhs) {
  const double scale = rhs.coefficient_scale();
  HomogeneousPolynomial defect = bracket_with_Z2(chi);
  defect += q;
  defect += rhs.scaled(-1.0);
  const double d = defect.coefficient_scale();
  return scale > 0.0 ? d / scale : d;
}

NormalFormResult birkhoff(const InhomogeneousPolynomial& P, double gamma, int r, const NormalFormOptions& options) {
  require(r >= 3, ErrorKind::InvalidArgument, "normal form order r must be at least 3");
  require(r <= kMaxDegree, ErrorKind::DegreeOverflow, "normal form order exceeds the supported degree");
  require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
  const SpectrumPtr& spectrum = P.spectrum();
  require(spectrum != nullptr, ErrorKind::InvalidArgument, "polynomial has no spectrum");
  for (const auto& [q, part] : P.parts()) {
    require(q >= 3, ErrorKind::DegreeUnderflow, "normal form input has a part of degree below 3");
    require(!part.spectrum() || part.spectrum()->hash() == spectrum->hash(), ErrorKind::SpectrumMismatch,
            "polynomial parts live on different spectra");
  }
  const double nu = P.nu(), n = P.n();
  NormalFormResult res;
  res.r = r;
  res.gamma = gamma;
  res.chi = InhomogeneousPolynomial(spectrum, nu, n);
  res.resonant = InhomogeneousPolynomial(spectrum, nu, n);
  Table A, B;
  for (const auto& [q, part] : P.parts())
    if (q <= r) A[{0, q}] = part;

  for (int d = 3; d <= r; ++d) {
    HomogeneousPolynomial K(spectrum, d, nu, n), H(spectrum, d, nu, n);
    for (int level = 1; level <= d - 3; ++level) {
      HomogeneousPolynomial a = nested_level(res.chi, A, level, d, spectrum, nu, n, options);
      HomogeneousPolynomial b = nested_level(res.chi, B, level, d, spectrum, nu, n, options);
      K += a.scaled(1.0 / factorial(level));
      H += b.scaled(1.0 / factorial(level + 1));
      A[{level, d}] = std::move(a);
      B[{level, d}] = std::move(b);
    }
    HomogeneousPolynomial rhs(spectrum, d, nu, n);
    if (const auto* p = P.find(d)) rhs += *p;
    rhs += K;
    rhs += H;

    HomogeneousPolynomial chi(spectrum, d, nu, n), q(spectrum, d, nu, n);
    for (const auto& [key, t] : rhs.terms()) {
      auto dec = is_gamma_resonant(key, gamma, *spectrum, options.budget);
      if (dec.resonant) {
        q.set_canonical(key, t);
        continue;
      }
      CoefficientTensor c = t;
      for_each_index(t.shape, [&](size_t off, const int* idx) {
        double div = 0.0;
        for (int a = 0; a < key.q; ++a) div += key.sigma(a) * spectrum->omega(spectrum->members(key.k(a))[idx[a]]);
        if (div == 0.0)
          fail(ErrorKind::SingularDivisor, "certified key " + key.to_string() + " has a vanishing divisor entry");
        c.data[off] = t.data[off] / cplx(0.0, div);
      });
      chi.set_canonical(key, std::move(c));
    }

    DegreeDiagnostics dg;
    dg.degree = d;
    if (const auto* p = P.find(d)) dg.p_norm = poly_norm(*p);
    dg.chi_norm = poly_norm(chi);
    dg.q_norm = poly_norm(q);
    dg.k_norm = poly_norm(K);
    dg.h_norm = poly_norm(H);
    dg.scale = rhs.coefficient_scale();
    dg.residual = cohomological_residual(chi, q, rhs);
    dg.chi_keys = chi.term_count();
    dg.resonant_keys = q.term_count();
    res.diagnostics.push_back(dg);

    B[{0, d}] = bracket_with_Z2(chi).scaled(-1.0);
    res.chi.set_part(std::move(chi));
    res.resonant.set_part(std::move(q));
    res.K[d] = std::move(K);
    res.H[d] = std::move(H);
  }
  return res;
}

std::string diagnostics_json(const NormalFormResult& result) {
  nlohmann::ordered_json j;
  j["r"] = result.r;
  j["gamma"] = result.gamma;
  auto& degrees = j["degrees"] = nlohmann::ordered_json::array();
  for (const auto& d : result.diagnostics) {
    degrees.push_back({{"degree", d.degree},
                       {"p_norm", d.p_norm},
                       {"chi_norm", d.chi_norm},
                       {"q_norm", d.q_norm},
                       {"k_norm", d.k_norm},
                       {"h_norm", d.h_norm},
                       {"scale", d.scale},
                       {"residual", d.residual},
                       {"chi_keys", d.chi_keys},
                       {"resonant_keys", d.resonant_keys}});
  }
  if (result.schedule) {
    const auto& s = *result.schedule;
    j["schedule"] = {{"r", s.r},       {"s_c", s.s_c},       {"s", s.s},
                     {"epsilon", s.epsilon}, {"N", s.N},     {"gamma", s.gamma},
                     {"a_r", s.a_r},   {"alpha", s.alpha},   {"beta", s.beta},
                     {"nu", s.nu},     {"below_bootstrap_order", s.below_bootstrap_order},
                     {"degenerate", s.degenerate}};
  }
  return j.dump(2);
}

}  // namespace bnf
