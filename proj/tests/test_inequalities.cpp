#include <doctest.h>

#include <cmath>

#include "inequalities.hpp"
#include "polynomial.hpp"

using namespace bnf;

namespace {

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<int> join(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("sorted tuple enumeration") {
  size_t count = 0;
  bool sorted = true;
  for_each_sorted_tuple(3, 6, [&](const std::vector<int>& k) {
    ++count;
    sorted = sorted && k[0] >= k[1] && k[1] >= k[2];
  });
  CHECK(sorted);
  CHECK(count == binomial(6 + 3 - 1, 3));
}

TEST_CASE("convolution scan matches brute force over gamma weights") {
  const int kmax = 4, L = 30;
  double worst = 0.0;
  for_each_sorted_tuple(2, kmax, [&](const std::vector<int>& a) {
    for_each_sorted_tuple(2, kmax, [&](const std::vector<int>& b) {
      double lhs = 0.0;
      for (int l = 1; l <= L; ++l) lhs += gamma_weight(join(a, {l})) * gamma_weight(join(b, {l}));
      worst = std::max(worst, lhs / gamma_weight(join(a, b)));
    });
  });
  CHECK(scan_gamma_convolution(3, 3, kmax, L).worst_ratio == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("weight transfer ratio on the diagonal") {
  for (int k : {1, 2, 5, 9}) {
    const double kk = k;
    const double g = 2.0 * std::pow(1 + 9 * kk * kk, -1.5) + 6.0 * std::pow(1 + kk * kk, -1.5);
    CHECK(weight_transfer_ratio({k, k, k}, 4.0, 0.0) == doctest::Approx(1.0 / (kk * kk * kk * g)).epsilon(1e-13));
    CHECK(weight_transfer_ratio({k, k, k}, 5.0, 1.0) == doctest::Approx(1.0 / (kk * kk * kk * g)).epsilon(1e-13));
  }
  auto res = scan_weight_transfer(3, 4.0, 0.0, 12);
  CHECK(std::isfinite(res.worst_ratio));
  CHECK(res.checked == binomial(14, 3));
}

TEST_CASE("zero minimal divisor gives gamma weight at least one") {
  for_each_sorted_tuple(3, 8, [&](const std::vector<int>& k) {
    if (k[0] == k[1] + k[2]) CHECK(gamma_weight(k) >= 1.0);
  });
  auto eq = scan_gamma_equivalence(3, 10);
  CHECK(eq.least_ratio >= 1.0);
  CHECK(eq.worst_ratio < 20.0);
}

TEST_CASE("weight bounds with constant one") {
  CHECK(scan_a_bound(3, 3, 8).worst_ratio <= 1.0);
  CHECK(scan_b_bound(3, 4, 8).worst_ratio <= 1.0);
}

TEST_CASE("duplicated pair estimate") {
  CHECK(scan_duplicated_pair(3, 4.0, 1.0, 10).worst_ratio <= 1.0);
  // a pair at or above the largest entry: k* = (m, m, h_1, ...)
  const std::vector<int> h{5, 3, 2};
  for (int m : {5, 7, 12}) {
    const double want = std::pow(3.0 / 5.0, 4.0) * std::pow(2.0, 1.0) / (std::pow(5.0, 1.0) * 3.0 * 2.0);
    CHECK(duplicated_pair_ratio(h, m, 4.0, 1.0) == doctest::Approx(want));
  }
}
