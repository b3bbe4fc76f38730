#pragma once

#include <map>
#include <vector>

#include "polynomial.hpp"

namespace bnf {

// Smallest C with #{lambda <= k} <= C k^d for every k up to the truncation.
int auto_weyl_constant(const std::vector<double>& eigenvalues, int dimension);

// omega = sqrt(lambda^2 + m), alpha = upsilon = 1, beta = d.
SpectrumPtr kg_frequencies(const std::vector<double>& eigenvalues, double mass, int dimension, int weyl_constant = 0,
                           ClusterDecomposition* decomposition = nullptr);

// Drops the first eigenvalue; omega_j = sqrt(lambda_{j+1}^4 + 2 p0 f'(p0) lambda_{j+1}^2),
// alpha = 2, upsilon = 1, beta = d/2. Clusters are built on lambda.
SpectrumPtr nls_frequencies(const std::vector<double>& eigenvalues, double p0, double f_prime, int dimension,
                            int weyl_constant = 0, ClusterDecomposition* decomposition = nullptr);

// Circle: modes e^{inx}/sqrt(2 pi), |n| <= lambda_max, ordered 0, -1, 1, -2, 2, ...
struct CircleModel {
  SpectrumPtr spectrum;
  std::vector<int> fourier;  // mode j -> n
  ClusterDecomposition decomposition;
};
std::vector<double> circle_eigenvalues(int lambda_max);
CircleModel kg_circle(double mass, int lambda_max, int weyl_constant = 3);

// Harmonic oscillator -Delta + sum rho_i x_i^2: lambda^2 = sum sqrt(rho_i)(2 n_i + 1).
struct OscillatorModel {
  SpectrumPtr spectrum;
  std::vector<std::vector<int>> quanta;  // mode j -> (n_1, ..., n_d)
  std::vector<double> sqrt_rho;
  ClusterDecomposition decomposition;
};
OscillatorModel oscillator_frequencies(const std::vector<double>& sqrt_rho, double mass, int levels);

// Nonlinearity F(Psi) = sum_q a_q Psi^q (q in 3..6) with Psi = Lambda^{-1/2}(u + conj u)/2.
using PowerCoefficients = std::map<int, double>;

MultilinearForm circle_form(const CircleModel& model, int q, double a);
InhomogeneousPolynomial kg_circle_nonlinearity(const CircleModel& model, const PowerCoefficients& coefficients,
                                               int kmax);

// Gauss-Hermite rule for weight e^{-y^2} (Golub-Welsch).
void gauss_hermite(int points, std::vector<double>& nodes, std::vector<double>& weights);
// int prod_l psi_{n_l}(x) dx for normalized Hermite functions.
double hermite_product_integral(const std::vector<int>& n);
MultilinearForm oscillator_form(const OscillatorModel& model, int q, double a);
InhomogeneousPolynomial oscillator_nonlinearity(const OscillatorModel& model, const PowerCoefficients& coefficients,
                                                int kmax);

}  // namespace bnf
