#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bnf {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

// Boundaries c_1 < c_2 < ... stored 0-based: boundaries[i] is c_{i+1}.
// Cluster k (1-based) is the interval [c_{2k-1}, c_{2k}); [c_{2k}, c_{2k+1})
// is an eigenvalue-free gap of length 1/(4 C k^d).
struct ClusterDecomposition {
  std::vector<double> boundaries;
  int weyl_constant = 1;
  int dimension = 1;

  int cluster_count() const { return static_cast<int>(boundaries.size() / 2); }
  double lower(int k) const { return boundaries[2 * k - 2]; }
  double upper(int k) const { return boundaries[2 * k - 1]; }
  // c_{2k+1}; only defined for k < cluster_count() or when the trailing gap exists.
  double gap_end(int k) const { return boundaries[2 * k]; }
  // Cluster containing x, or 0 if x lies in a gap or beyond the last cluster.
  int locate(double x) const;
};

ClusterDecomposition build_clusters(const std::vector<double>& eigenvalues, int weyl_constant,
                                    int dimension);

class FrequencySpectrum {
 public:
  // cluster_of is 1-based; clusters may be empty. Throws if frequencies are not
  // positive and non-decreasing, or if the measured slack exceeds declared_slack.
  FrequencySpectrum(std::vector<double> frequencies, std::vector<int> cluster_of, double alpha,
                    double upsilon, double beta, std::vector<double> eigenvalues = {},
                    std::optional<double> mass = std::nullopt,
                    double declared_slack = std::numeric_limits<double>::infinity());

  size_t size() const { return omega_.size(); }
  int cluster_count() const { return static_cast<int>(members_.size()) - 1; }
  const std::vector<double>& frequencies() const { return omega_; }
  double omega(size_t j) const { return omega_[j]; }
  int cluster_of(size_t j) const { return cluster_of_[j]; }
  const std::vector<int>& cluster_map() const { return cluster_of_; }
  // Modes of cluster k in increasing order (k in 1..cluster_count()).
  const std::vector<int>& members(int k) const { return members_[k]; }
  int dim(int k) const { return static_cast<int>(members_[k].size()); }
  // Position of mode j inside its cluster.
  int local_index(size_t j) const { return local_[j]; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  std::optional<double> mass() const { return mass_; }
  double alpha() const { return alpha_; }
  double upsilon() const { return upsilon_; }
  double beta() const { return beta_; }
  // sup_k sup_{j in C_k} |omega_j^{1/alpha} - upsilon k|
  double slack() const { return slack_; }
  const std::string& hash() const { return hash_; }

  // Text record: one line "j lambda omega k" per mode (j is 1-based).
  std::string to_text() const;
  static std::shared_ptr<const FrequencySpectrum> from_text(const std::string& text);

 private:
  std::vector<double> omega_;
  std::vector<int> cluster_of_;
  std::vector<std::vector<int>> members_;
  std::vector<int> local_;
  std::vector<double> lambda_;
  std::optional<double> mass_;
  double alpha_, upsilon_, beta_;
  double slack_ = 0.0;
  std::string hash_;
};

using SpectrumPtr = std::shared_ptr<const FrequencySpectrum>;

SpectrumPtr assign_clusters(const ClusterDecomposition& decomposition,
                            const std::vector<double>& eigenvalues,
                            const std::vector<double>& frequencies, double alpha, double upsilon,
                            double beta, std::optional<double> mass = std::nullopt);

// Per-cluster masses J_k; entry i belongs to cluster i+1.
std::vector<double> super_actions(const FrequencySpectrum& spectrum, const StateVector& u);

// sqrt(sum_k max(k,1)^{2s} J_k)
double sobolev_norm(const FrequencySpectrum& spectrum, const StateVector& u, double s);
double sobolev_norm_sq(const FrequencySpectrum& spectrum, const StateVector& u, double s);
double l2_norm(const StateVector& u);

struct Selector {
  enum Kind { Cluster, AtMost, Above } kind;
  int value;
  static Selector cluster(int k) { return {Cluster, k}; }
  static Selector at_most(int n) { return {AtMost, n}; }
  static Selector above(int n) { return {Above, n}; }
};

StateVector project(const FrequencySpectrum& spectrum, const StateVector& u, Selector selector);

// Rows "k,c_{2k-1},c_{2k},count" with a header line.
std::string decomposition_csv(const ClusterDecomposition& decomposition,
                              const FrequencySpectrum* spectrum = nullptr);

}  // namespace bnf
