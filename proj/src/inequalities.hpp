#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bnf {

struct ScanResult {
  std::string name;
  double worst_ratio = 0.0;  // largest LHS / RHS
  double least_ratio = 0.0;  // smallest LHS / RHS (used by two-sided checks)
  std::vector<int> worst_tuple, worst_partner;
  int worst_extra = 0;  // l for the convolution scans, duplicated value for the duplicated-pair scan
  size_t checked = 0;
};

// Calls fn on every non-increasing tuple of length len with entries in 1..kmax.
void for_each_sorted_tuple(int len, int kmax, const std::function<void(const std::vector<int>&)>& fn);

// sum_{l <= L} Gamma_{(k,l)} Gamma_{(k',l)} / Gamma_{(k,k')} over k in N^{q-1}, k' in N^{q'-1}.
ScanResult scan_gamma_convolution(int q, int qp, int kmax, int L);

// a_{k,l} a_{k',l} / a_{k''} and b_{k,l} b_{k',l} / b_{k''} over the same tuples and l <= kmax.
ScanResult scan_a_bound(int q, int qp, int kmax);
ScanResult scan_b_bound(int q, int qp, int kmax);

// k_3^{nu+n} / (k_1 - k_2 + k_3)^n prod_{l>=4} k_l^nu against Gamma_k (k_2/k_1)^{n-3} prod_{l>=3} k_l^{nu+3}.
double weight_transfer_ratio(const std::vector<int>& k, double n, double nu);
ScanResult scan_weight_transfer(int q, double n, double nu, int kmax);

// Gamma_k (1 + min_sigma |sum sigma k|^3): worst (max) and least (min) values.
ScanResult scan_gamma_equivalence(int q, int kmax);

// With k = (h, m, m): (h2/h1)^n prod_{l>=3} h_l^nu against (k2*/k1*)^n prod_{l>=3} (k_l*)^nu.
double duplicated_pair_ratio(const std::vector<int>& h, int m, double n, double nu);
ScanResult scan_duplicated_pair(int q, double n, double nu, int kmax);

}  // namespace bnf
