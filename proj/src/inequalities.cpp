#include "inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "polynomial.hpp"

namespace bnf {

void for_each_sorted_tuple(int len, int kmax, const std::function<void(const std::vector<int>&)>& fn) {
  require(len >= 1 && kmax >= 1, ErrorKind::InvalidArgument, "tuple scan needs len >= 1 and kmax >= 1");
  std::vector<int> k(len, 1);
  while (true) {
    fn(k);
    // next non-increasing tuple in colexicographic order: k_1 >= k_2 >= ... >= k_len
    int pos = len - 1;
    while (pos >= 0 && (k[pos] == kmax || (pos > 0 && k[pos] == k[pos - 1]))) --pos;
    if (pos < 0) break;
    ++k[pos];
    for (int i = pos + 1; i < len; ++i) k[i] = 1;
  }
}

namespace {

std::vector<std::vector<int>> sorted_tuples(int len, int kmax) {
  std::vector<std::vector<int>> out;
  for_each_sorted_tuple(len, kmax, [&](const std::vector<int>& k) { out.push_back(k); });
  return out;
}

inline double bracket_cube(double x) { return std::pow(1.0 + x * x, -1.5); }

// Histogram of signed sums over all sign patterns, indexed by s + offset.
std::vector<double> signed_sum_histogram(const std::vector<int>& k, int offset) {
  std::vector<double> g(2 * offset + 1, 0.0);
  const int p = static_cast<int>(k.size());
  for (uint32_t mask = 0; mask < (1u << p); ++mask) {
    int s = 0;
    for (int i = 0; i < p; ++i) s += (mask >> i & 1u) ? -k[i] : k[i];
    g[s + offset] += 1.0;
  }
  return g;
}

struct Profile {
  std::vector<double> F;  // Gamma_{(k,l)} for l = 1..L
  std::vector<double> H;  // sum_s G_k(s) <s + t>^{-3} for t = 0..T
  std::vector<double> G;  // histogram, only t >= 0 half kept (symmetric)
};

Profile make_profile(const std::vector<int>& k, int kmax, int L, int T) {
  const int off = static_cast<int>(k.size()) * kmax;
  const auto g = signed_sum_histogram(k, off);
  Profile pr;
  pr.F.resize(L);
  for (int l = 1; l <= L; ++l) {
    double acc = 0.0;
    for (int s = -off; s <= off; ++s)
      if (g[s + off] != 0.0) acc += g[s + off] * (bracket_cube(s + l) + bracket_cube(s - l));
    pr.F[l - 1] = acc;
  }
  pr.H.resize(T + 1);
  for (int t = 0; t <= T; ++t) {
    double acc = 0.0;
    for (int s = -off; s <= off; ++s)
      if (g[s + off] != 0.0) acc += g[s + off] * bracket_cube(s + t);
    pr.H[t] = acc;
  }
  pr.G.assign(off + 1, 0.0);
  for (int s = 0; s <= off; ++s) pr.G[s] = g[s + off];
  return pr;
}

template <class Check>
ScanResult pair_scan(const std::string& name, int q, int qp, int kmax, Check&& check) {
  require(q >= 3 && qp >= 3, ErrorKind::InvalidArgument, "degrees must be at least 3");
  ScanResult res;
  res.name = name;
  res.least_ratio = std::numeric_limits<double>::infinity();
  const auto A = sorted_tuples(q - 1, kmax);
  const auto B = sorted_tuples(qp - 1, kmax);
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = (q == qp ? i : 0); j < B.size(); ++j) check(i, j, A[i], B[j], res);
  return res;
}

void record(ScanResult& res, double ratio, const std::vector<int>& a, const std::vector<int>& b, int extra) {
  ++res.checked;
  if (ratio > res.worst_ratio) {
    res.worst_ratio = ratio;
    res.worst_tuple = a;
    res.worst_partner = b;
    res.worst_extra = extra;
  }
  res.least_ratio = std::min(res.least_ratio, ratio);
}

}  // namespace

ScanResult scan_gamma_convolution(int q, int qp, int kmax, int L) {
  require(L >= 1, ErrorKind::InvalidArgument, "convolution range must be positive");
  const int T = (std::max(q, qp) - 1) * kmax;
  std::vector<Profile> pa, pb;
  for (const auto& k : sorted_tuples(q - 1, kmax)) pa.push_back(make_profile(k, kmax, L, T));
  if (qp == q) pb = pa;
  else
    for (const auto& k : sorted_tuples(qp - 1, kmax)) pb.push_back(make_profile(k, kmax, L, T));
  return pair_scan("gamma_convolution", q, qp, kmax,
                   [&](size_t i, size_t j, const std::vector<int>& a, const std::vector<int>& b, ScanResult& res) {
                     const Profile& x = pa[i];
                     const Profile& y = pb[j];
                     double lhs = 0.0;
                     for (int l = 0; l < L; ++l) lhs += x.F[l] * y.F[l];
                     // Gamma_{(k,k')} = sum_{s'} G_{k'}(s') H_k(s'), both even in s'
                     double rhs = y.G[0] * x.H[0];
                     const size_t top = std::min(y.G.size(), x.H.size());
                     for (size_t s = 1; s < top; ++s) rhs += 2.0 * y.G[s] * x.H[s];
                     record(res, lhs / rhs, a, b, 0);
                   });
}

namespace {

// (max, second max) of a sorted tuple extended by l
std::pair<long, long> top_two(const std::vector<int>& k, int l) {
  long m1 = k[0], m2 = k.size() > 1 ? k[1] : 0;
  if (l >= m1) return {l, m1};
  if (l > m2) return {m1, l};
  return {m1, m2};
}

}  // namespace

ScanResult scan_a_bound(int q, int qp, int kmax) {
  // a_{k,l} a_{k',l} <= a_{k''} reduces to l K1 <= M1 M2
  return pair_scan("a_bound", q, qp, kmax,
                   [&](size_t, size_t, const std::vector<int>& a, const std::vector<int>& b, ScanResult& res) {
                     const double K1 = std::max(a[0], b[0]);
                     for (int l = 1; l <= kmax; ++l) {
                       const double M1 = std::max(a[0], l), M2 = std::max(b[0], l);
                       record(res, (l * K1) * (l * K1) / ((M1 * M2) * (M1 * M2)), a, b, l);
                     }
                   });
}

ScanResult scan_b_bound(int q, int qp, int kmax) {
  return pair_scan("b_bound", q, qp, kmax,
                   [&](size_t, size_t, const std::vector<int>& a, const std::vector<int>& b, ScanResult& res) {
                     std::vector<int> merged = a;
                     merged.insert(merged.end(), b.begin(), b.end());
                     std::sort(merged.rbegin(), merged.rend());
                     const long K1 = merged[0], K2 = merged[1];
                     for (int l = 1; l <= kmax; ++l) {
                       auto [a1, a2] = top_two(a, l);
                       auto [b1, b2] = top_two(b, l);
                       // (a2/a1)(b2/b1) <= K2/K1, compared exactly
                       const double ratio = static_cast<double>(a2 * b2 * K1) / static_cast<double>(a1 * b1 * K2);
                       record(res, ratio, a, b, l);
                     }
                   });
}

double weight_transfer_ratio(const std::vector<int>& k, double n, double nu) {
  const int q = static_cast<int>(k.size());
  require(q >= 3, ErrorKind::InvalidArgument, "weight transfer needs q >= 3");
  double lhs = std::pow(k[2], nu + n) / std::pow(static_cast<double>(k[0] - k[1] + k[2]), n);
  for (int l = 3; l < q; ++l) lhs *= std::pow(k[l], nu);
  double rhs = gamma_weight(k) * std::pow(static_cast<double>(k[1]) / k[0], n - 3.0);
  for (int l = 2; l < q; ++l) rhs *= std::pow(k[l], nu + 3.0);
  return lhs / rhs;
}

ScanResult scan_weight_transfer(int q, double n, double nu, int kmax) {
  require(n >= 4.0, ErrorKind::InvalidArgument, "weight transfer needs n >= 4");
  ScanResult res;
  res.name = "weight_transfer";
  res.least_ratio = std::numeric_limits<double>::infinity();
  for_each_sorted_tuple(q, kmax, [&](const std::vector<int>& k) { record(res, weight_transfer_ratio(k, n, nu), k, {}, 0); });
  return res;
}

ScanResult scan_gamma_equivalence(int q, int kmax) {
  ScanResult res;
  res.name = "gamma_equivalence";
  res.least_ratio = std::numeric_limits<double>::infinity();
  for_each_sorted_tuple(q, kmax, [&](const std::vector<int>& k) {
    long m = std::numeric_limits<long>::max();
    for (uint32_t mask = 0; mask < (1u << q); ++mask) {
      long s = 0;
      for (int i = 0; i < q; ++i) s += (mask >> i & 1u) ? -k[i] : k[i];
      m = std::min(m, std::abs(s));
    }
    const double md = static_cast<double>(m);
    record(res, gamma_weight(k) * (1.0 + md * md * md), k, {}, static_cast<int>(m));
  });
  return res;
}

double duplicated_pair_ratio(const std::vector<int>& h, int m, double n, double nu) {
  const int q = static_cast<int>(h.size());
  double lhs = std::pow(static_cast<double>(h[1]) / h[0], n);
  for (int l = 2; l < q; ++l) lhs *= std::pow(h[l], nu);
  std::vector<int> k = h;
  k.push_back(m);
  k.push_back(m);
  std::sort(k.rbegin(), k.rend());
  double rhs = std::pow(static_cast<double>(k[1]) / k[0], n);
  for (int l = 2; l < q + 2; ++l) rhs *= std::pow(k[l], nu);
  return lhs / rhs;
}

ScanResult scan_duplicated_pair(int q, double n, double nu, int kmax) {
  ScanResult res;
  res.name = "duplicated_pair";
  res.least_ratio = std::numeric_limits<double>::infinity();
  for_each_sorted_tuple(q, kmax, [&](const std::vector<int>& h) {
    for (int m = 1; m <= kmax; ++m) record(res, duplicated_pair_ratio(h, m, n, nu), h, {}, m);
  });
  return res;
}

}  // namespace bnf
