#include <doctest.h>

#include <atomic>
#include <cmath>

#include "errors.hpp"
#include "models.hpp"
#include "resonance.hpp"

using namespace bnf;

namespace {

SpectrumPtr integer_spectrum(int clusters) {
  std::vector<double> w;
  std::vector<int> c;
  for (int k = 1; k <= clusters; ++k) {
    w.push_back(k);
    c.push_back(k);
  }
  return std::make_shared<const FrequencySpectrum>(w, c, 1.0, 1.0, 1.0);
}

MonomialKey key(std::vector<int> k, std::vector<int> s) { return MonomialKey::from(k, s); }

}  // namespace

TEST_CASE("two-mode divisor") {
  FrequencySpectrum s({1.0, 2.1}, {1, 2}, 1, 1, 1);
  auto rep = divisor_report(key({2, 1, 1}, {-1, 1, 1}), s);
  CHECK(rep.min_divisor == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.gamma_certificate == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(is_gamma_resonant(key({2, 1, 1}, {-1, 1, 1}), 0.2, s).resonant);
  CHECK_FALSE(is_gamma_resonant(key({2, 1, 1}, {-1, 1, 1}), 0.05, s).resonant);
  CHECK(small_divisor({1, 0, 0}, {-1, 1, 1}, s) == doctest::Approx(-0.1));
}

TEST_CASE("paired frequencies cancel exactly") {
  FrequencySpectrum s({std::sqrt(2.0), std::sqrt(3.0), std::acos(-1.0)}, {1, 2, 3}, 1, 1, 1);
  auto rep = divisor_report(key({1, 1, 3, 2, 3, 2}, {1, -1, 1, 1, -1, -1}), s);
  CHECK(rep.min_divisor == 0.0);
}

TEST_CASE("Cauchy-Schwarz factor and distinct values") {
  // cluster 2 holds two modes with the same frequency: enumerated once
  FrequencySpectrum s({1.0, 2.5, 2.5}, {1, 2, 2}, 1, 1, 1);
  auto rep = divisor_report(key({2, 1, 1}, {-1, 1, 1}), s);
  CHECK(rep.enumerated == 1);
  CHECK(rep.cs_factor == doctest::Approx(std::sqrt(2.0)));
  CHECK(rep.gamma_certificate == doctest::Approx(0.5 / std::sqrt(2.0)));
}

TEST_CASE("enumeration budget") {
  std::vector<double> w;
  std::vector<int> c;
  for (int i = 0; i < 50; ++i) {
    w.push_back(1.0 + 0.001 * i);
    c.push_back(1);
  }
  FrequencySpectrum s(w, c, 1, 1, 1);
  try {
    divisor_report(key({1, 1, 1, 1, 1}, {1, 1, 1, -1, -1}), s, 1000);
    FAIL("expected ProductTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProductTooLarge);
  }
}

TEST_CASE("classification of each type") {
  auto s = integer_spectrum(6);
  const double g = 1e-3;
  CHECK(classify(key({6, 3, 3}, {-1, 1, 1}), 2, g, *s).type == ResonanceType::TypeI);
  CHECK(classify(key({2, 2, 1, 1}, {1, -1, 1, -1}), 2, g, *s).type == ResonanceType::TypeII);
  CHECK(classify(key({5, 4, 1}, {1, -1, -1}), 3, g, *s).type == ResonanceType::TypeIII);
  CHECK(classify(key({2, 1, 1}, {-1, 1, 1}), 3, g, *s).type == ResonanceType::Anomalous);
  CHECK(classify(key({6, 2, 1}, {-1, 1, 1}), 3, g, *s).type == ResonanceType::NonResonant);
  CHECK(std::string(type_name(ResonanceType::TypeIII)) == "TypeIII");
}

TEST_CASE("indicator sum") {
  CHECK(indicator_sum_vanishes(key({2, 2, 1, 1}, {1, -1, -1, 1})));
  CHECK_FALSE(indicator_sum_vanishes(key({2, 1, 1}, {-1, 1, 1})));
}

TEST_CASE("engineered circle resonance at m = 1/3") {
  auto rows = mass_scan([](double m) { return kg_circle(m, 5, 3).spectrum; }, {1.0 / 3.0, 0.537}, 3, 6, 1e-6, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].worst_certificate <= 1e-15);
  CHECK(rows[0].resonant_count >= 1);
  CHECK(rows[0].worst_key == key({2, 1, 1}, {-1, 1, 1}));
  CHECK(rows[1].resonant_count == 0);
  CHECK(rows[1].worst_certificate > 1e-3);
}

TEST_CASE("parallel_for covers the range and propagates errors") {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](size_t i) { sum += static_cast<int>(i); });
  CHECK(sum == 4950);
  CHECK_THROWS_AS(parallel_for(10, 3, [](size_t i) {
                    if (i == 7) fail(ErrorKind::NumericalAbort, "boom");
                  }),
                  Error);
}
