#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "errors.hpp"
#include "normalform.hpp"
#include "support.hpp"

using namespace bnf;
using namespace bnf::testing;

namespace {

void check_identities(const InhomogeneousPolynomial& P, const NormalFormResult& nf) {
  for (const auto& d : nf.diagnostics) CHECK(d.residual <= 1e-12);
  for (const auto& [q, chi] : nf.chi.parts()) {
    const HomogeneousPolynomial* res = nf.resonant.find(q);
    if (!res) continue;
    for (const auto& [key, t] : chi.terms()) CHECK(res->find(key) == nullptr);
  }
  (void)P;
}

}  // namespace

TEST_CASE("two-mode cubic: chi solves the homological equation in closed form") {
  auto s = std::make_shared<const FrequencySpectrum>(std::vector<double>{1.0, 2.1}, std::vector<int>{1, 2}, 1.0, 1.0,
                                                     1.0);
  InhomogeneousPolynomial P(s);
  const cplx c(0.3, -0.2);
  P.part(3).add_monomial({0, 0, 1}, {1, 1, -1}, c);
  auto nf = birkhoff(P, 1e-2, 3);
  const double delta = 2.0 * 1.0 - 2.1;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    auto u = random_state(2, 1.0, rng);
    const cplx m = u[0] * u[0] * std::conj(u[1]);
    const double want = 2.0 * (c / (cplx(0, 1) * delta) * m).real();
    CHECK(evaluate(nf.chi, u) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK((nf.resonant.find(3) == nullptr || nf.resonant.find(3)->empty()));
  check_identities(P, nf);
}

TEST_CASE("resonant-only input leaves chi empty and Q = P") {
  auto s = std::make_shared<const FrequencySpectrum>(std::vector<double>{1.0, 2.1}, std::vector<int>{1, 2}, 1.0, 1.0,
                                                     1.0);
  InhomogeneousPolynomial P(s);
  P.part(3).add_monomial({0, 0, 1}, {1, 1, -1}, cplx(0.3, -0.2));
  auto nf = birkhoff(P, 0.5, 3);
  CHECK(nf.chi.empty());
  REQUIRE(nf.resonant.find(3) != nullptr);
  CHECK(nf.resonant.find(3)->to_text() == P.find(3)->to_text());
}

TEST_CASE("cohomological identity and support disjointness on random data") {
  std::mt19937_64 rng(17);
  auto s = random_spectrum({2, 1, 2, 1, 3}, rng);
  InhomogeneousPolynomial P(s);
  P.set_part(random_polynomial(s, 3, 10, rng));
  P.set_part(random_polynomial(s, 4, 6, rng));
  auto nf = birkhoff(P, 1e-2, 5);
  CHECK(nf.diagnostics.size() == 3);
  check_identities(P, nf);
  auto j = nlohmann::json::parse(diagnostics_json(nf));
  CHECK(j["degrees"].size() == 3);
}

TEST_CASE("normal form Hamiltonian is conjugated to order r + 1") {
  // (Z2 + P)(Phi_chi^{-1}) - (Z2 + Q) is O(|u|^{r+1}); checked through the
  // level sums: Q^(d) - P^(d) - K^(d) - H^(d) = {Z2, chi^(d)} on every key.
  std::mt19937_64 rng(23);
  auto s = random_spectrum({1, 2, 1, 2}, rng);
  InhomogeneousPolynomial P(s);
  P.set_part(random_polynomial(s, 3, 8, rng));
  auto nf = birkhoff(P, 1e-3, 4);
  for (int d = 3; d <= 4; ++d) {
    HomogeneousPolynomial lhs = nf.chi.find(d) ? bracket_with_Z2(*nf.chi.find(d)) : HomogeneousPolynomial(s, d);
    if (nf.resonant.find(d)) lhs += *nf.resonant.find(d);
    HomogeneousPolynomial rhs = P.find(d) ? *P.find(d) : HomogeneousPolynomial(s, d);
    if (nf.K.count(d)) rhs += nf.K.at(d);
    if (nf.H.count(d)) rhs += nf.H.at(d);
    CHECK(cohomological_residual(*nf.chi.find(d), nf.resonant.find(d) ? *nf.resonant.find(d) : HomogeneousPolynomial(s, d),
                                 rhs) <= 1e-12);
    for (int t = 0; t < 3; ++t) {
      auto u = random_state(s->size(), 0.5, rng);
      CHECK(evaluate(lhs, u) == doctest::Approx(evaluate(rhs, u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("schedule closed form") {
  const int r = 17;
  const double s_c = 2.5, eps = 1e-3, a_r = 4.0, alpha = 1.0, beta = 1.0;
  auto sc = schedule(r, s_c, eps, a_r, alpha, beta, 0.0);
  const double e = 2 * a_r + r * alpha * beta + 2;
  CHECK(sc.s == doctest::Approx(s_c + 9.0 * r * r * e + alpha).epsilon(1e-15));
  const double N = std::pow(eps, -8.0 * r / (sc.s - s_c));
  CHECK(sc.N == doctest::Approx(N).epsilon(1e-12));
  CHECK(sc.gamma == doctest::Approx(std::pow(N, -e)).epsilon(1e-12));
  CHECK(sc.log_n_pow == doctest::Approx(sc.log_eps_pow).epsilon(1e-12));
  CHECK(sc.log_gamma_pow <= sc.log_eps_pow);
  CHECK_FALSE(sc.below_bootstrap_order);
  CHECK(schedule(3, 1, 1.0, 3, 1, 1, 0).degenerate);
  CHECK_THROWS_AS(schedule(2, 1, 0.1, 3, 1, 1, 0), Error);
  CHECK_THROWS_AS(schedule(3, 1, 0.0, 3, 1, 1, 0), Error);
}
