#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "hashing.hpp"

namespace bnf {

int ClusterDecomposition::locate(double x) const {
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
  long idx = it - boundaries.begin();
  if (idx == 0 || idx == static_cast<long>(boundaries.size())) return 0;
  // x in [b[idx-1], b[idx]); clusters start at even 0-based positions.
  if ((idx - 1) % 2 != 0) return 0;
  return static_cast<int>((idx + 1) / 2);
}

ClusterDecomposition build_clusters(const std::vector<double>& eigenvalues, int weyl_constant,
                                    int dimension) {
  require(!eigenvalues.empty(), ErrorKind::EmptySpectrum, "no eigenvalues");
  require(weyl_constant >= 1 && dimension >= 1, ErrorKind::InvalidArgument,
          "Weyl constant and dimension must be positive");
  for (size_t j = 0; j < eigenvalues.size(); ++j) {
    require(eigenvalues[j] >= 0 && std::isfinite(eigenvalues[j]), ErrorKind::InvalidArgument,
            "eigenvalues must be finite and non-negative");
    require(j == 0 || eigenvalues[j] >= eigenvalues[j - 1], ErrorKind::InvalidArgument,
            "eigenvalues must be sorted");
  }
  const auto& lam = eigenvalues;
  const double top = lam.back();

  ClusterDecomposition dec;
  dec.weyl_constant = weyl_constant;
  dec.dimension = dimension;
  dec.boundaries.push_back(0.0);
  for (long k = 1;; ++k) {
    long kd = 1;
    for (int i = 0; i < dimension; ++i) kd *= k;
    const long cap = static_cast<long>(weyl_constant) * kd;
    const long count = std::upper_bound(lam.begin(), lam.end(), static_cast<double>(k)) - lam.begin();
    if (count > cap) {
      std::ostringstream msg;
      msg << "#{j : lambda_j <= " << k << "} = " << count << " exceeds C*k^d = " << weyl_constant
          << "*" << k << "^" << dimension << " = " << cap;
      fail(ErrorKind::WeylViolation, msg.str());
    }
    // [k-1/2, k) split into 2Ck^d pieces of length 1/(4Ck^d); take the empty
    // piece [k - l/(4Ck^d), k - (l-1)/(4Ck^d)) with the smallest l.
    const long pieces = 2 * cap;
    const double denom = 4.0 * static_cast<double>(cap);
    bool found = false;
    for (long l = 1; l <= pieces; ++l) {
      const double lo = static_cast<double>(k) - static_cast<double>(l) / denom;
      const double hi = static_cast<double>(k) - static_cast<double>(l - 1) / denom;
      auto it = std::lower_bound(lam.begin(), lam.end(), lo);
      if (it == lam.end() || *it >= hi) {
        dec.boundaries.push_back(lo);
        dec.boundaries.push_back(hi);
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorKind::WeylViolation, "no empty subinterval in [k-1/2, k) for k = " + std::to_string(k));
    if (dec.boundaries[dec.boundaries.size() - 2] > top) break;
  }
  return dec;
}

FrequencySpectrum::FrequencySpectrum(std::vector<double> frequencies, std::vector<int> cluster_of,
                                     double alpha, double upsilon, double beta,
                                     std::vector<double> eigenvalues, std::optional<double> mass,
                                     double declared_slack)
    : omega_(std::move(frequencies)),
      cluster_of_(std::move(cluster_of)),
      lambda_(std::move(eigenvalues)),
      mass_(mass),
      alpha_(alpha),
      upsilon_(upsilon),
      beta_(beta) {
  require(!omega_.empty(), ErrorKind::EmptySpectrum, "no frequencies");
  require(cluster_of_.size() == omega_.size(), ErrorKind::InvalidArgument,
          "cluster map length differs from frequency count");
  require(lambda_.empty() || lambda_.size() == omega_.size(), ErrorKind::InvalidArgument,
          "eigenvalue list length differs from frequency count");
  require(alpha > 0 && upsilon > 0 && beta > 0, ErrorKind::InvalidArgument,
          "alpha, upsilon and beta must be positive");
  for (size_t j = 0; j < omega_.size(); ++j) {
    require(std::isfinite(omega_[j]) && omega_[j] > 0, ErrorKind::InvalidArgument,
            "frequencies must be finite and strictly positive");
    require(j == 0 || omega_[j] >= omega_[j - 1], ErrorKind::InvalidArgument,
            "frequencies must be non-decreasing");
    require(cluster_of_[j] >= 1, ErrorKind::InvalidArgument, "cluster indices start at 1");
  }
  int kmax = *std::max_element(cluster_of_.begin(), cluster_of_.end());
  members_.assign(kmax + 1, {});
  local_.resize(omega_.size());
  for (size_t j = 0; j < omega_.size(); ++j) {
    int k = cluster_of_[j];
    local_[j] = static_cast<int>(members_[k].size());
    members_[k].push_back(static_cast<int>(j));
    slack_ = std::max(slack_, std::abs(std::pow(omega_[j], 1.0 / alpha_) - upsilon_ * k));
  }
  if (slack_ > declared_slack) {
    std::ostringstream msg;
    msg << "cluster slack " << slack_ << " exceeds declared bound " << declared_slack;
    fail(ErrorKind::SlackExceeded, msg.str());
  }
  hash_ = sha256_hex(to_text()).substr(0, 16);
}

std::string FrequencySpectrum::to_text() const {
  std::ostringstream os;
  os << "# spectrum alpha=" << hexfloat(alpha_) << " upsilon=" << hexfloat(upsilon_)
     << " beta=" << hexfloat(beta_) << " mass=" << (mass_ ? hexfloat(*mass_) : std::string("-"))
     << "\n";
  for (size_t j = 0; j < omega_.size(); ++j) {
    os << (j + 1) << ' ' << (lambda_.empty() ? std::string("-") : hexfloat(lambda_[j])) << ' '
       << hexfloat(omega_[j]) << ' ' << cluster_of_[j] << '\n';
  }
  return os.str();
}

SpectrumPtr FrequencySpectrum::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  double alpha = 1, upsilon = 1, beta = 1;
  std::optional<double> mass;
  std::vector<double> omega, lambda;
  std::vector<int> cluster;
  bool have_lambda = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "alpha") alpha = parse_real(val);
        else if (key == "upsilon") upsilon = parse_real(val);
        else if (key == "beta") beta = parse_real(val);
        else if (key == "mass" && val != "-") mass = parse_real(val);
      }
      continue;
    }
    std::istringstream ls(line);
    std::string j, lam, om;
    int k = 0;
    if (!(ls >> j >> lam >> om >> k)) fail(ErrorKind::Parse, "bad spectrum line: " + line);
    if (lam == "-") have_lambda = false;
    else lambda.push_back(parse_real(lam));
    omega.push_back(parse_real(om));
    cluster.push_back(k);
  }
  if (!have_lambda) lambda.clear();
  return std::make_shared<FrequencySpectrum>(std::move(omega), std::move(cluster), alpha, upsilon,
                                             beta, std::move(lambda), mass);
}

SpectrumPtr assign_clusters(const ClusterDecomposition& decomposition,
                            const std::vector<double>& eigenvalues,
                            const std::vector<double>& frequencies, double alpha, double upsilon,
                            double beta, std::optional<double> mass) {
  require(eigenvalues.size() == frequencies.size(), ErrorKind::InvalidArgument,
          "eigenvalue and frequency lists differ in length");
  std::vector<int> cluster(eigenvalues.size());
  for (size_t j = 0; j < eigenvalues.size(); ++j) {
    int k = decomposition.locate(eigenvalues[j]);
    if (k == 0) {
      std::ostringstream msg;
      msg << "eigenvalue " << eigenvalues[j] << " (mode " << j + 1 << ") lies outside every cluster";
      fail(ErrorKind::UncoveredEigenvalue, msg.str());
    }
    cluster[j] = k;
  }
  return std::make_shared<FrequencySpectrum>(frequencies, std::move(cluster), alpha, upsilon, beta,
                                             eigenvalues, mass);
}

std::vector<double> super_actions(const FrequencySpectrum& spectrum, const StateVector& u) {
  require(u.size() == spectrum.size(), ErrorKind::SpectrumMismatch, "state length differs from spectrum size");
  std::vector<double> J(spectrum.cluster_count(), 0.0);
  for (size_t j = 0; j < u.size(); ++j) J[spectrum.cluster_of(j) - 1] += std::norm(u[j]);
  return J;
}

double sobolev_norm_sq(const FrequencySpectrum& spectrum, const StateVector& u, double s) {
  auto J = super_actions(spectrum, u);
  double acc = 0.0;
  for (size_t i = 0; i < J.size(); ++i) {
    if (J[i] == 0.0) continue;
    acc += std::pow(static_cast<double>(std::max<size_t>(i + 1, 1)), 2 * s) * J[i];
  }
  return acc;
}

double sobolev_norm(const FrequencySpectrum& spectrum, const StateVector& u, double s) {
  return std::sqrt(sobolev_norm_sq(spectrum, u, s));
}

double l2_norm(const StateVector& u) {
  double acc = 0.0;
  for (auto z : u) acc += std::norm(z);
  return std::sqrt(acc);
}

StateVector project(const FrequencySpectrum& spectrum, const StateVector& u, Selector selector) {
  require(u.size() == spectrum.size(), ErrorKind::SpectrumMismatch, "state length differs from spectrum size");
  StateVector out(u.size());
  for (size_t j = 0; j < u.size(); ++j) {
    int k = spectrum.cluster_of(j);
    bool keep = selector.kind == Selector::Cluster  ? k == selector.value
                : selector.kind == Selector::AtMost ? k <= selector.value
                                                    : k > selector.value;
    if (keep) out[j] = u[j];
  }
  return out;
}

std::string decomposition_csv(const ClusterDecomposition& decomposition,
                              const FrequencySpectrum* spectrum) {
  std::ostringstream os;
  os.precision(17);
  os << "k,c_lower,c_upper,count\n";
  for (int k = 1; k <= decomposition.cluster_count(); ++k) {
    os << k << ',' << decomposition.lower(k) << ',' << decomposition.upper(k) << ',';
    if (spectrum && k <= spectrum->cluster_count()) os << spectrum->dim(k);
    else os << 0;
    os << '\n';
  }
  return os.str();
}

}  // namespace bnf
