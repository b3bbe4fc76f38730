#pragma once

#include <random>
#include <vector>

#include "polynomial.hpp"
#include "spectrum.hpp"

namespace bnf::testing {

// dims[k-1] modes in cluster k with frequencies in [k, k + 0.4).
inline SpectrumPtr random_spectrum(const std::vector<int>& dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> off(0.0, 0.4);
  std::vector<double> omega;
  std::vector<int> cluster;
  for (size_t k = 0; k < dims.size(); ++k) {
    std::vector<double> f;
    for (int i = 0; i < dims[k]; ++i) f.push_back(static_cast<double>(k + 1) + off(rng));
    std::sort(f.begin(), f.end());
    for (double x : f) {
      omega.push_back(x);
      cluster.push_back(static_cast<int>(k + 1));
    }
  }
  return std::make_shared<const FrequencySpectrum>(omega, cluster, 1.0, 1.0, 1.0);
}

inline HomogeneousPolynomial random_polynomial(const SpectrumPtr& s, int q, int monomials, std::mt19937_64& rng,
                                               int max_mode = -1) {
  const int top = max_mode < 0 ? static_cast<int>(s->size()) - 1 : max_mode;
  std::uniform_int_distribution<int> mode(0, top), sign(0, 1);
  std::normal_distribution<double> g;
  HomogeneousPolynomial p(s, q);
  for (int m = 0; m < monomials; ++m) {
    std::vector<int> modes(q), sigma(q);
    for (int l = 0; l < q; ++l) {
      modes[l] = mode(rng);
      sigma[l] = sign(rng) ? 1 : -1;
    }
    p.add_monomial(modes, sigma, cplx(g(rng), g(rng)));
  }
  return p;
}

inline StateVector random_state(size_t n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector u(n);
  for (auto& z : u) z = scale * cplx(g(rng), g(rng));
  return u;
}

inline double max_abs(const StateVector& u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace bnf::testing
