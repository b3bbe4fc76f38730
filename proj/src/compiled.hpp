#pragma once

#include <array>
#include <complex>
#include <vector>

#include "polynomial.hpp"

namespace bnf {

// Flat monomial list of a real polynomial, for repeated evaluation along
// trajectories. Each entry contributes weight * Re(c * prod u^sigma).
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const HomogeneousPolynomial& p);
  explicit CompiledPolynomial(const InhomogeneousPolynomial& p);
  void add(const HomogeneousPolynomial& p);

  size_t size() const { return monos_.size(); }
  size_t dimension() const { return dim_; }
  double value(const StateVector& u) const;
  // 2 dF/d conj(u), accumulated into g (scaled by s)
  void add_gradient(const StateVector& u, StateVector& g, cplx s = 1.0) const;
  StateVector gradient(const StateVector& u) const;

  // Same operations in another floating type (coefficients are widened).
  template <class T>
  T value_as(const std::vector<std::complex<T>>& u) const;
  template <class T>
  void add_gradient_as(const std::vector<std::complex<T>>& u, std::vector<std::complex<T>>& g,
                       std::complex<T> s) const;

 private:
  struct Mono {
    cplx c;
    double weight;
    int q;
    uint32_t plus_mask;
    std::array<int, kMaxDegree> mode;
  };
  std::vector<Mono> monos_;
  size_t dim_ = 0;
};

template <class T>
T CompiledPolynomial::value_as(const std::vector<std::complex<T>>& u) const {
  T acc = 0;
  for (const auto& m : monos_) {
    std::complex<T> prod(static_cast<T>(m.c.real()), static_cast<T>(m.c.imag()));
    for (int a = 0; a < m.q; ++a) prod *= (m.plus_mask >> a & 1u) ? u[m.mode[a]] : std::conj(u[m.mode[a]]);
    acc += static_cast<T>(m.weight) * prod.real();
  }
  return acc;
}

template <class T>
void CompiledPolynomial::add_gradient_as(const std::vector<std::complex<T>>& u, std::vector<std::complex<T>>& g,
                                         std::complex<T> s) const {
  std::array<std::complex<T>, kMaxDegree + 1> pre, suf;
  std::array<std::complex<T>, kMaxDegree> x;
  for (const auto& m : monos_) {
    for (int a = 0; a < m.q; ++a) x[a] = (m.plus_mask >> a & 1u) ? u[m.mode[a]] : std::conj(u[m.mode[a]]);
    pre[0] = std::complex<T>(static_cast<T>(m.c.real()), static_cast<T>(m.c.imag()));
    for (int a = 0; a < m.q; ++a) pre[a + 1] = pre[a] * x[a];
    suf[m.q] = T(1);
    for (int a = m.q - 1; a >= 0; --a) suf[a] = suf[a + 1] * x[a];
    const std::complex<T> sw = s * static_cast<T>(m.weight);
    for (int a = 0; a < m.q; ++a) {
      std::complex<T> d = pre[a] * suf[a + 1];
      if (m.plus_mask >> a & 1u) d = std::conj(d);
      g[m.mode[a]] += sw * d;
    }
  }
}

}  // namespace bnf
