#include <bnf/bnf.h>

#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "compiled.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "normalform.hpp"
#include "polynomial.hpp"
#include "resonance.hpp"

struct bnf_spectrum {
  bnf::SpectrumPtr ptr;
};
struct bnf_polynomial {
  bnf::InhomogeneousPolynomial poly;
};
struct bnf_normal_form {
  bnf::NormalFormResult result;
};

namespace {

thread_local std::string last_error;

bnf_status status_of(bnf::ErrorKind kind) {
  using bnf::ErrorKind;
  switch (kind) {
    case ErrorKind::Io:
      return BNF_ERR_IO;
    case ErrorKind::Config:
    case ErrorKind::Parse:
      return BNF_ERR_CONFIG;
    case ErrorKind::BlowUp:
    case ErrorKind::SingularDivisor:
    case ErrorKind::NumericalAbort:
    case ErrorKind::OutsideSafetyRadius:
      return BNF_ERR_NUMERICAL;
    case ErrorKind::ProductTooLarge:
      return BNF_ERR_BUDGET;
    default:
      return BNF_ERR_INVALID;
  }
}

template <class F>
bnf_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return BNF_OK;
  } catch (const bnf::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BNF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BNF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) bnf::fail(bnf::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string poly_text(const bnf::InhomogeneousPolynomial& p) {
  std::string out;
  for (const auto& [q, part] : p.parts()) out += part.to_text();
  return out;
}

bnf::StateVector unpack(const double* u, size_t n) {
  bnf::StateVector v(n);
  for (size_t j = 0; j < n; ++j) v[j] = bnf::cplx(u[2 * j], u[2 * j + 1]);
  return v;
}

bnf::MonomialKey class_key(const bnf_spectrum* s, size_t q, const int* clusters, const int* sigma) {
  need(s, "spectrum");
  need(clusters, "clusters");
  need(sigma, "sigma");
  bnf::require(q >= 1 && q <= static_cast<size_t>(bnf::kMaxDegree), bnf::ErrorKind::InvalidArgument,
               "degree out of range");
  std::vector<int> k(clusters, clusters + q), sg(sigma, sigma + q);
  for (size_t l = 0; l < q; ++l) {
    bnf::require(k[l] >= 1 && k[l] <= s->ptr->cluster_count(), bnf::ErrorKind::InvalidArgument,
                 "cluster index out of range");
    bnf::require(sg[l] == 1 || sg[l] == -1, bnf::ErrorKind::InvalidArgument, "sigma must be +1 or -1");
  }
  return bnf::MonomialKey::from(k, sg);
}

}  // namespace

extern "C" {

const char* bnf_last_error(void) { return last_error.c_str(); }
const char* bnf_version(void) { return bnf::kVersion; }

int bnf_exit_code(bnf_status status) {
  switch (status) {
    case BNF_OK:
      return 0;
    case BNF_ERR_CONFIG:
    case BNF_ERR_INVALID:
      return 2;
    case BNF_ERR_NUMERICAL:
      return 3;
    case BNF_ERR_BUDGET:
      return 4;
    default:
      return 1;
  }
}

void bnf_string_free(char* s) { delete[] s; }

bnf_status bnf_config_validate(const char* text) {
  return guarded([&] {
    need(text, "text");
    bnf::Config::parse(text);
  });
}

bnf_status bnf_model_from_config(const char* text, bnf_spectrum** spectrum, bnf_polynomial** nonlinearity) {
  return guarded([&] {
    need(text, "text");
    need(spectrum, "spectrum");
    bnf::Config c = bnf::Config::parse(text);
    bnf::ModelBundle m = bnf::build_model(c);
    if (nonlinearity) *nonlinearity = new bnf_polynomial{bnf::build_nonlinearity(c, m)};
    *spectrum = new bnf_spectrum{m.spectrum};
  });
}

bnf_status bnf_spectrum_from_frequencies(const double* omega, const int* cluster, size_t n, double alpha,
                                         double upsilon, double beta, bnf_spectrum** out) {
  return guarded([&] {
    need(omega, "omega");
    need(cluster, "cluster");
    need(out, "out");
    *out = new bnf_spectrum{std::make_shared<const bnf::FrequencySpectrum>(
        std::vector<double>(omega, omega + n), std::vector<int>(cluster, cluster + n), alpha, upsilon, beta)};
  });
}

size_t bnf_spectrum_size(const bnf_spectrum* s) { return s ? s->ptr->size() : 0; }
int bnf_spectrum_cluster_count(const bnf_spectrum* s) { return s ? s->ptr->cluster_count() : 0; }
double bnf_spectrum_frequency(const bnf_spectrum* s, size_t j) {
  return s && j < s->ptr->size() ? s->ptr->omega(j) : 0.0;
}
int bnf_spectrum_cluster_of(const bnf_spectrum* s, size_t j) {
  return s && j < s->ptr->size() ? s->ptr->cluster_of(j) : 0;
}

bnf_status bnf_spectrum_text(const bnf_spectrum* s, char** out) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    *out = dup(s->ptr->to_text());
  });
}

void bnf_spectrum_free(bnf_spectrum* s) { delete s; }

bnf_status bnf_polynomial_new(const bnf_spectrum* s, double nu, double n, bnf_polynomial** out) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    *out = new bnf_polynomial{bnf::InhomogeneousPolynomial(s->ptr, nu, n)};
  });
}

bnf_status bnf_polynomial_add_monomial(bnf_polynomial* p, size_t q, const int* modes, const int* sigma, double re,
                                       double im) {
  return guarded([&] {
    need(p, "polynomial");
    need(modes, "modes");
    need(sigma, "sigma");
    bnf::require(q >= 1 && q <= static_cast<size_t>(bnf::kMaxDegree), bnf::ErrorKind::InvalidArgument,
                 "degree out of range");
    std::vector<int> m(modes, modes + q), sg(sigma, sigma + q);
    for (size_t l = 0; l < q; ++l) {
      bnf::require(m[l] >= 0 && static_cast<size_t>(m[l]) < p->poly.spectrum()->size(),
                   bnf::ErrorKind::InvalidArgument, "mode index out of range");
      bnf::require(sg[l] == 1 || sg[l] == -1, bnf::ErrorKind::InvalidArgument, "sigma must be +1 or -1");
    }
    p->poly.part(static_cast<int>(q)).add_monomial(m, sg, bnf::cplx(re, im));
  });
}

bnf_status bnf_polynomial_evaluate(const bnf_polynomial* p, const double* u, size_t n, double* value) {
  return guarded([&] {
    need(p, "polynomial");
    need(u, "u");
    need(value, "value");
    bnf::require(n == p->poly.spectrum()->size(), bnf::ErrorKind::SpectrumMismatch, "state length mismatch");
    *value = bnf::evaluate(p->poly, unpack(u, n));
  });
}

bnf_status bnf_polynomial_gradient(const bnf_polynomial* p, const double* u, size_t n, double* grad) {
  return guarded([&] {
    need(p, "polynomial");
    need(u, "u");
    need(grad, "grad");
    bnf::require(n == p->poly.spectrum()->size(), bnf::ErrorKind::SpectrumMismatch, "state length mismatch");
    bnf::StateVector g = bnf::gradient(p->poly, unpack(u, n));
    for (size_t j = 0; j < n; ++j) {
      grad[2 * j] = g[j].real();
      grad[2 * j + 1] = g[j].imag();
    }
  });
}

bnf_status bnf_polynomial_bracket(const bnf_polynomial* p, int qp, const bnf_polynomial* q, int qq,
                                  bnf_polynomial** out) {
  return guarded([&] {
    need(p, "p");
    need(q, "q");
    need(out, "out");
    const bnf::HomogeneousPolynomial* a = p->poly.find(qp);
    const bnf::HomogeneousPolynomial* b = q->poly.find(qq);
    bnf::require(a && b, bnf::ErrorKind::InvalidArgument, "requested homogeneous part is empty");
    bnf::InhomogeneousPolynomial r(p->poly.spectrum(), p->poly.nu(), p->poly.n());
    r.set_part(bnf::poisson_bracket(*a, *b));
    *out = new bnf_polynomial{std::move(r)};
  });
}

bnf_status bnf_polynomial_text(const bnf_polynomial* p, char** out) {
  return guarded([&] {
    need(p, "polynomial");
    need(out, "out");
    *out = dup(poly_text(p->poly));
  });
}

void bnf_polynomial_free(bnf_polynomial* p) { delete p; }

bnf_status bnf_divisor(const bnf_spectrum* s, size_t q, const int* clusters, const int* sigma, double* min_divisor,
                       double* certificate) {
  return guarded([&] {
    bnf::DivisorReport rep = bnf::divisor_report(class_key(s, q, clusters, sigma), *s->ptr);
    if (min_divisor) *min_divisor = rep.min_divisor;
    if (certificate) *certificate = rep.gamma_certificate;
  });
}

bnf_status bnf_classify(const bnf_spectrum* s, size_t q, const int* clusters, const int* sigma, int threshold,
                        double gamma, bnf_resonance_type* type) {
  return guarded([&] {
    need(type, "type");
    auto c = bnf::classify(class_key(s, q, clusters, sigma), threshold, gamma, *s->ptr);
    *type = static_cast<bnf_resonance_type>(static_cast<int>(c.type));
  });
}

bnf_status bnf_normal_form_compute(const bnf_polynomial* p, double gamma, int r, int workers, bnf_normal_form** out) {
  return guarded([&] {
    need(p, "polynomial");
    need(out, "out");
    bnf::NormalFormOptions opt;
    opt.workers = workers < 1 ? 1 : workers;
    *out = new bnf_normal_form{bnf::birkhoff(p->poly, gamma, r, opt)};
  });
}

bnf_status bnf_normal_form_chi(const bnf_normal_form* nf, char** out) {
  return guarded([&] {
    need(nf, "normal form");
    need(out, "out");
    *out = dup(poly_text(nf->result.chi));
  });
}

bnf_status bnf_normal_form_resonant(const bnf_normal_form* nf, char** out) {
  return guarded([&] {
    need(nf, "normal form");
    need(out, "out");
    *out = dup(poly_text(nf->result.resonant));
  });
}

bnf_status bnf_normal_form_diagnostics(const bnf_normal_form* nf, char** out) {
  return guarded([&] {
    need(nf, "normal form");
    need(out, "out");
    *out = dup(bnf::diagnostics_json(nf->result));
  });
}

void bnf_normal_form_free(bnf_normal_form* nf) { delete nf; }

bnf_status bnf_run(const bnf_run_options* options) {
  return guarded([&] {
    need(options, "options");
    need(options->command, "command");
    bnf::RunOptions run;
    run.command = options->command;
    if (options->config_path) run.config_path = options->config_path;
    if (options->out_dir) run.out_dir = options->out_dir;
    run.seed = options->seed;
    run.workers = options->workers;
    if (options->has_tol) run.tol = options->tol;
    bnf::run_command(run);
  });
}

}  // extern "C"
