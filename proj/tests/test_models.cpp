#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "models.hpp"
#include "support.hpp"

using namespace bnf;
using namespace bnf::testing;

namespace {

// a int (sum_j omega_j^{-1/2} Re(u_j e_j))^q dx on a uniform grid, exact for
// trigonometric polynomials of low degree
double circle_oracle(const CircleModel& m, const StateVector& u, int q, double a) {
  const int M = 256;
  const double h = 2.0 * M_PI / M;
  double acc = 0.0;
  for (int i = 0; i < M; ++i) {
    const double x = i * h;
    double psi = 0.0;
    for (size_t j = 0; j < u.size(); ++j)
      psi += (u[j] * std::polar(1.0 / std::sqrt(2.0 * M_PI), m.fourier[j] * x)).real() /
             std::sqrt(m.spectrum->omega(j));
    acc += std::pow(psi, q);
  }
  return a * acc * h;
}

// Hermite functions by the three-term recurrence and a trapezoid rule
double oscillator_oracle(const OscillatorModel& m, const StateVector& u, int q, double a) {
  const double L = 14.0;
  const int M = 4000;
  const double h = 2 * L / M;
  int nmax = 0;
  for (const auto& n : m.quanta) nmax = std::max(nmax, n[0]);
  std::vector<double> psi(nmax + 1);
  double acc = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double x = -L + i * h;
    psi[0] = std::pow(M_PI, -0.25) * std::exp(-x * x / 2);
    if (nmax >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int k = 1; k < nmax; ++k)
      psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(k / (k + 1.0)) * psi[k - 1];
    double f = 0.0;
    for (size_t j = 0; j < u.size(); ++j) f += u[j].real() * psi[m.quanta[j][0]] / std::sqrt(m.spectrum->omega(j));
    acc += std::pow(f, q) * (i == 0 || i == M ? 0.5 : 1.0);
  }
  return a * acc * h;
}

}  // namespace

TEST_CASE("circle nonlinearity equals direct quadrature") {
  auto m = kg_circle(0.537, 5, 3);
  auto P = kg_circle_nonlinearity(m, {{3, 1.0}, {4, -0.5}}, m.spectrum->cluster_count());
  std::mt19937_64 rng(31);
  for (int t = 0; t < 5; ++t) {
    auto u = random_state(m.spectrum->size(), 0.3, rng);
    const double want = circle_oracle(m, u, 3, 1.0) + circle_oracle(m, u, 4, -0.5);
    CHECK(evaluate(P, u) == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("circle selection rule holds on every stored coefficient") {
  auto m = kg_circle(0.537, 6, 3);
  auto P = kg_circle_nonlinearity(m, {{3, 1.0}}, m.spectrum->cluster_count());
  const auto* p3 = P.find(3);
  REQUIRE(p3 != nullptr);
  size_t nonzero = 0;
  for (const auto& [key, t] : p3->terms()) {
    std::vector<int> idx(3, 0);
    for (size_t off = 0; off < t.data.size(); ++off) {
      size_t rem = off;
      int sum = 0;
      for (int l = 2; l >= 0; --l) {
        const int local = static_cast<int>(rem % t.shape[l]);
        rem /= t.shape[l];
        const int mode = m.spectrum->members(key.k(l))[local];
        sum += key.sigma(l) * m.fourier[mode];
      }
      if (std::abs(t.data[off]) > 0.0) {
        ++nonzero;
        CHECK(sum == 0);
      }
    }
  }
  CHECK(nonzero > 0);
}

TEST_CASE("zero nonlinearity gives the zero polynomial") {
  auto m = kg_circle(0.537, 3, 3);
  auto P = kg_circle_nonlinearity(m, {{3, 0.0}}, 3);
  CHECK(P.empty());
}

TEST_CASE("one-dimensional oscillator nonlinearity equals direct quadrature") {
  auto m = oscillator_frequencies({1.0}, 0.5, 6);
  auto P = oscillator_nonlinearity(m, {{3, 1.0}}, m.spectrum->cluster_count());
  std::mt19937_64 rng(37);
  for (int t = 0; t < 3; ++t) {
    auto u = random_state(m.spectrum->size(), 0.3, rng);
    CHECK(evaluate(P, u) == doctest::Approx(oscillator_oracle(m, u, 3, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("Hermite products and Gauss-Hermite rule") {
  std::vector<double> x, w;
  gauss_hermite(10, x, w);
  double total = 0.0, second = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    second += w[i] * x[i] * x[i];
  }
  CHECK(total == doctest::Approx(std::sqrt(M_PI)));
  CHECK(second == doctest::Approx(std::sqrt(M_PI) / 2));
  CHECK(hermite_product_integral({0, 0}) == doctest::Approx(1.0));
  CHECK(hermite_product_integral({3, 3}) == doctest::Approx(1.0));
  CHECK(hermite_product_integral({2, 3}) == doctest::Approx(0.0).epsilon(1e-14));
  // int psi_0^3 = pi^{-3/4} sqrt(2 pi / 3)
  CHECK(hermite_product_integral({0, 0, 0}) == doctest::Approx(std::pow(M_PI, -0.75) * std::sqrt(2 * M_PI / 3)));
}

TEST_CASE("higher-dimensional oscillator products are unsupported") {
  auto m = oscillator_frequencies({1.0, 1.0}, 0.5, 3);
  try {
    oscillator_nonlinearity(m, {{3, 1.0}}, 2);
    FAIL("expected UnsupportedBasis");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedBasis);
  }
}

TEST_CASE("automatic Weyl constant") {
  CHECK(auto_weyl_constant(circle_eigenvalues(50), 1) == 3);
  CHECK(auto_weyl_constant({0.0, 0.0, 0.0, 0.0, 5.0}, 1) == 4);
}
