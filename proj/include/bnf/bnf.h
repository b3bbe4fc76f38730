#ifndef BNF_BNF_H
#define BNF_BNF_H

#include <stddef.h>
#include <stdint.h>

#if defined(BNF_BUILDING)
#define BNF_API __attribute__((visibility("default")))
#else
#define BNF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bnf_status {
  BNF_OK = 0,
  BNF_ERR_IO = 1,
  BNF_ERR_CONFIG = 2,
  BNF_ERR_NUMERICAL = 3,
  BNF_ERR_BUDGET = 4,
  BNF_ERR_INVALID = 5,
  BNF_ERR_INTERNAL = 6
} bnf_status;

typedef enum bnf_resonance_type {
  BNF_NON_RESONANT = 0,
  BNF_TYPE_I = 1,
  BNF_TYPE_II = 2,
  BNF_TYPE_III = 3,
  BNF_ANOMALOUS = 4
} bnf_resonance_type;

typedef struct bnf_spectrum bnf_spectrum;
typedef struct bnf_polynomial bnf_polynomial;
typedef struct bnf_normal_form bnf_normal_form;

// Message of the last failing call on this thread ("" if none).
BNF_API const char* bnf_last_error(void);
BNF_API const char* bnf_version(void);
// Process exit code for a status: 0, 1 (io/internal), 2 (config/invalid), 3 (numerical), 4 (budget).
BNF_API int bnf_exit_code(bnf_status status);
// Strings returned through char** are owned by the caller.
BNF_API void bnf_string_free(char* s);

// Validates an INI run configuration without running anything.
BNF_API bnf_status bnf_config_validate(const char* text);

// Spectrum and nonlinearity described by the [spectrum] and [nonlinearity] sections.
BNF_API bnf_status bnf_model_from_config(const char* text, bnf_spectrum** spectrum, bnf_polynomial** nonlinearity);
// cluster[j] is the 1-based cluster of mode j.
BNF_API bnf_status bnf_spectrum_from_frequencies(const double* omega, const int* cluster, size_t n, double alpha,
                                                 double upsilon, double beta, bnf_spectrum** out);
BNF_API size_t bnf_spectrum_size(const bnf_spectrum* s);
BNF_API int bnf_spectrum_cluster_count(const bnf_spectrum* s);
BNF_API double bnf_spectrum_frequency(const bnf_spectrum* s, size_t j);
BNF_API int bnf_spectrum_cluster_of(const bnf_spectrum* s, size_t j);
BNF_API bnf_status bnf_spectrum_text(const bnf_spectrum* s, char** out);
BNF_API void bnf_spectrum_free(bnf_spectrum* s);

BNF_API bnf_status bnf_polynomial_new(const bnf_spectrum* s, double nu, double n, bnf_polynomial** out);
// Adds c * prod u_{modes[l]}^{sigma[l]} and its conjugate; modes are 0-based, sigma is +1 or -1.
BNF_API bnf_status bnf_polynomial_add_monomial(bnf_polynomial* p, size_t q, const int* modes, const int* sigma,
                                               double re, double im);
// u holds n complex numbers as interleaved (re, im) pairs.
BNF_API bnf_status bnf_polynomial_evaluate(const bnf_polynomial* p, const double* u, size_t n, double* value);
BNF_API bnf_status bnf_polynomial_gradient(const bnf_polynomial* p, const double* u, size_t n, double* grad);
// Poisson bracket of two homogeneous parts of degrees qp and qq.
BNF_API bnf_status bnf_polynomial_bracket(const bnf_polynomial* p, int qp, const bnf_polynomial* q, int qq,
                                          bnf_polynomial** out);
BNF_API bnf_status bnf_polynomial_text(const bnf_polynomial* p, char** out);
BNF_API void bnf_polynomial_free(bnf_polynomial* p);

// Minimum divisor and gamma certificate of the cluster class (k_l, sigma_l), l < q.
BNF_API bnf_status bnf_divisor(const bnf_spectrum* s, size_t q, const int* clusters, const int* sigma,
                               double* min_divisor, double* certificate);
BNF_API bnf_status bnf_classify(const bnf_spectrum* s, size_t q, const int* clusters, const int* sigma,
                                int threshold, double gamma, bnf_resonance_type* type);

BNF_API bnf_status bnf_normal_form_compute(const bnf_polynomial* p, double gamma, int r, int workers,
                                           bnf_normal_form** out);
BNF_API bnf_status bnf_normal_form_chi(const bnf_normal_form* nf, char** out);
BNF_API bnf_status bnf_normal_form_resonant(const bnf_normal_form* nf, char** out);
BNF_API bnf_status bnf_normal_form_diagnostics(const bnf_normal_form* nf, char** out);
BNF_API void bnf_normal_form_free(bnf_normal_form* nf);

typedef struct bnf_run_options {
  const char* command;      // clusters, nf, simulate, lifespan, mass-scan, verify-inequalities
  const char* config_path;  // may be NULL
  const char* out_dir;      // NULL means "."
  uint64_t seed;
  int workers;
  int has_tol;
  double tol;
} bnf_run_options;

BNF_API bnf_status bnf_run(const bnf_run_options* options);

#ifdef __cplusplus
}
#endif

#endif
