#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "polynomial.hpp"
#include "support.hpp"

using namespace bnf;
using namespace bnf::testing;

namespace {

struct Mono {
  std::vector<int> modes, sigma;
  cplx c;
};

cplx monomial(const Mono& m, const StateVector& u) {
  cplx p = m.c;
  for (size_t l = 0; l < m.modes.size(); ++l) p *= m.sigma[l] > 0 ? u[m.modes[l]] : std::conj(u[m.modes[l]]);
  return p;
}

// d/dx + i d/dy by central differences
StateVector fd_gradient(const std::function<double(const StateVector&)>& f, StateVector u, double h) {
  StateVector g(u.size());
  for (size_t j = 0; j < u.size(); ++j) {
    const cplx z = u[j];
    u[j] = z + h;
    double fp = f(u);
    u[j] = z - h;
    double fm = f(u);
    const double dx = (fp - fm) / (2 * h);
    u[j] = z + cplx(0, h);
    fp = f(u);
    u[j] = z - cplx(0, h);
    fm = f(u);
    u[j] = z;
    g[j] = cplx(dx, (fp - fm) / (2 * h));
  }
  return g;
}

double oracle_bracket(const StateVector& gp, const StateVector& gq) {
  double acc = 0.0;
  for (size_t j = 0; j < gp.size(); ++j) acc += (cplx(0, 1) * gp[j] * std::conj(gq[j])).real();
  return acc;
}

}  // namespace

TEST_CASE("key canonical form and multiplicity") {
  auto key = MonomialKey::from({1, 2, 1}, {1, 1, 1});
  CHECK(key.k(0) == 2);
  CHECK(multiplicity(key) == 3.0);
  CHECK_FALSE(key.is_canonical());
  CHECK(key.flipped().is_canonical());
  auto sc = MonomialKey::from({1, 1, 2, 2}, {1, -1, 1, -1});
  CHECK(sc.is_self_conjugate());
  CHECK(sc.is_canonical());
  CHECK(multiplicity(sc) == 24.0);
  CHECK(multiplicity(MonomialKey::from({3, 3, 3}, {-1, -1, -1})) == 1.0);
}

TEST_CASE("gamma weight oracle") {
  // sums of +-1 +-1 +-2: 0 twice, +-2 four times, +-4 twice
  const double oracle = 2.0 + 4.0 * std::pow(5.0, -1.5) + 2.0 * std::pow(17.0, -1.5);
  CHECK(gamma_weight({1, 1, 2}) == doctest::Approx(oracle).epsilon(1e-15));
  CHECK(gamma_weight({1, 1, 2}) == doctest::Approx(2.386302).epsilon(1e-6));
  CHECK(gamma_weight({2, 1, 1}) == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("evaluation equals the sum of monomials plus conjugates") {
  std::mt19937_64 rng(7);
  auto s = random_spectrum({2, 1, 3, 2}, rng);
  std::uniform_int_distribution<int> mode(0, static_cast<int>(s->size()) - 1), sign(0, 1);
  std::normal_distribution<double> g;
  for (int q : {3, 4, 5}) {
    HomogeneousPolynomial p(s, q);
    std::vector<Mono> list;
    for (int m = 0; m < 12; ++m) {
      Mono mo{std::vector<int>(q), std::vector<int>(q), cplx(g(rng), g(rng))};
      for (int l = 0; l < q; ++l) {
        mo.modes[l] = mode(rng);
        mo.sigma[l] = sign(rng) ? 1 : -1;
      }
      p.add_monomial(mo.modes, mo.sigma, mo.c);
      list.push_back(mo);
    }
    // a self-conjugate monomial |u_0|^2 |u_1|^2 type when q = 4
    if (q == 4) {
      Mono mo{{0, 0, 3, 3}, {1, -1, 1, -1}, cplx(0.7, 0.3)};
      p.add_monomial(mo.modes, mo.sigma, mo.c);
      list.push_back(mo);
    }
    for (int trial = 0; trial < 5; ++trial) {
      auto u = random_state(s->size(), 0.8, rng);
      double oracle = 0.0;
      for (const auto& mo : list) oracle += 2.0 * monomial(mo, u).real();
      CHECK(evaluate(p, u) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(11);
  auto s = random_spectrum({1, 2, 2, 3}, rng);
  for (int q : {3, 4, 6}) {
    auto p = random_polynomial(s, q, 10, rng);
    auto u = random_state(s->size(), 0.5, rng);
    auto g = gradient(p, u);
    auto fd = fd_gradient([&](const StateVector& v) { return evaluate(p, v); }, u, 1e-5);
    for (size_t j = 0; j < g.size(); ++j) CHECK(std::abs(g[j] - fd[j]) <= 1e-6 * (1.0 + std::abs(g[j])));
  }
}

TEST_CASE("Poisson bracket agrees with the gradient pairing") {
  std::mt19937_64 rng(3);
  auto s = random_spectrum({2, 1, 2, 2, 1, 2}, rng);
  auto p = random_polynomial(s, 3, 8, rng);
  auto q = random_polynomial(s, 4, 8, rng);
  auto b = poisson_bracket(p, q);
  CHECK(b.degree() == 5);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_state(s->size(), 0.6, rng);
    const double want = oracle_bracket(gradient(p, u), gradient(q, u));
    CHECK(evaluate(b, u) == doctest::Approx(want).epsilon(1e-10));
    CHECK(pointwise_bracket(gradient(p, u), gradient(q, u)) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("bracket antisymmetry and Z2 bracket") {
  std::mt19937_64 rng(5);
  auto s = random_spectrum({2, 2, 1, 2}, rng);
  auto p = random_polynomial(s, 3, 6, rng);
  auto q = random_polynomial(s, 3, 6, rng);
  auto pq = poisson_bracket(p, q);
  auto qp = poisson_bracket(q, p);
  pq += qp;
  CHECK(pq.coefficient_scale() <= 1e-15 * qp.coefficient_scale());
  auto z = bracket_with_Z2(p);
  for (int trial = 0; trial < 5; ++trial) {
    auto u = random_state(s->size(), 0.6, rng);
    StateVector gz(u.size());
    for (size_t j = 0; j < u.size(); ++j) gz[j] = s->omega(j) * u[j];
    CHECK(evaluate(z, u) == doctest::Approx(oracle_bracket(gz, gradient(p, u))).epsilon(1e-12));
  }
}

TEST_CASE("bracket degree limits") {
  std::mt19937_64 rng(1);
  auto s = random_spectrum({1, 1}, rng);
  HomogeneousPolynomial one(s, 1), seven(s, 7), eight(s, 8);
  one.add_monomial({0}, {1}, 1.0);
  seven.add_monomial({0, 0, 0, 0, 0, 0, 1}, {1, 1, 1, 1, 1, 1, -1}, 1.0);
  eight.add_monomial({1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, -1, -1}, 1.0);
  CHECK_THROWS_AS(poisson_bracket(one, one), Error);
  CHECK_THROWS_AS(poisson_bracket(seven, eight), Error);
}

TEST_CASE("text serialization round trip") {
  std::mt19937_64 rng(9);
  auto s = random_spectrum({2, 3, 1}, rng);
  auto p = random_polynomial(s, 4, 10, rng);
  auto back = HomogeneousPolynomial::from_text(p.to_text(), s);
  CHECK(back.to_text() == p.to_text());
  auto u = random_state(s->size(), 1.0, rng);
  CHECK(evaluate(back, u) == evaluate(p, u));
}

TEST_CASE("pruning and reality") {
  std::mt19937_64 rng(4);
  auto s = random_spectrum({1, 1, 1}, rng);
  HomogeneousPolynomial p(s, 3);
  p.add_monomial({0, 1, 2}, {1, 1, -1}, 1.0);
  p.add_monomial({0, 0, 2}, {1, 1, -1}, 1e-17);
  CHECK(p.term_count() == 2);
  CHECK(p.prune(1e-14) == 1);
  CHECK(p.term_count() == 1);
}
