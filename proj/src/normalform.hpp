#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polynomial.hpp"
#include "resonance.hpp"

namespace bnf {

struct ParameterSchedule {
  int r = 3;
  double s_c = 0.0, s = 0.0;
  double epsilon = 1.0, N = 1.0, gamma = 1.0;
  double a_r = 0.0, alpha = 1.0, beta = 1.0, nu = 0.0;
  double log_N = 0.0, log_gamma = 0.0;
  // log of gamma^{-r}, of N^{(s - s_c)/(9r)} and of eps^{-8/9}
  double log_gamma_pow = 0.0, log_n_pow = 0.0, log_eps_pow = 0.0;
  bool below_bootstrap_order = false;  // r < 17
  bool degenerate = false;             // eps = 1
};

ParameterSchedule schedule(int r, double s_c, double epsilon, double a_r, double alpha, double beta, double nu);

struct NormalFormOptions {
  double prune = 1e-14;
  size_t budget = kDefaultEnumerationBudget;
  int workers = 1;
};

struct DegreeDiagnostics {
  int degree = 0;
  double p_norm = 0.0, chi_norm = 0.0, q_norm = 0.0, k_norm = 0.0, h_norm = 0.0;
  double residual = 0.0;  // max_key ||{Z2,chi} + Q - (P + K + H)||_F / scale
  double scale = 0.0;
  size_t chi_keys = 0, resonant_keys = 0;
};

struct NormalFormResult {
  InhomogeneousPolynomial chi;
  InhomogeneousPolynomial resonant;
  std::map<int, HomogeneousPolynomial> K, H;
  int r = 3;
  double gamma = 1.0;
  std::optional<ParameterSchedule> schedule;
  std::vector<DegreeDiagnostics> diagnostics;
};

// Solves the cohomological equations {Z2, chi^(d)} + Q^(d) = P^(d) + K^(d) + H^(d)
// for d = 3..r, putting every key certified non-gamma-resonant into chi.
NormalFormResult birkhoff(const InhomogeneousPolynomial& P, double gamma, int r, const NormalFormOptions& options = {});

// max over keys of the Frobenius norm of the per-degree identity defect, divided by the coefficient scale
double cohomological_residual(const HomogeneousPolynomial& chi, const HomogeneousPolynomial& q,
                              const HomogeneousPolynomial& rhs);

std::string diagnostics_json(const NormalFormResult& result);

}  // namespace bnf
