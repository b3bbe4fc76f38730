#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spectrum.hpp"

namespace bnf {

constexpr int kMaxDegree = 12;

// A monomial class: q pairs (k_i, sigma_i) kept sorted by (k, sigma) descending.
// Each pair is packed as code = 2k + (sigma > 0).
struct MonomialKey {
  uint8_t q = 0;
  std::array<uint16_t, kMaxDegree> code{};

  static uint16_t encode(int k, int sigma) { return static_cast<uint16_t>(2 * k + (sigma > 0 ? 1 : 0)); }
  int k(int i) const { return code[i] >> 1; }
  int sigma(int i) const { return (code[i] & 1) ? 1 : -1; }

  // Sorts the pairs; order[s] is the input position placed at sorted slot s.
  static MonomialKey from(const std::vector<int>& k, const std::vector<int>& sigma,
                          std::vector<int>* order = nullptr);
  static MonomialKey from_codes(const uint16_t* codes, int q, std::vector<int>* order = nullptr);

  MonomialKey flipped(std::vector<int>* order = nullptr) const;
  bool is_canonical() const;
  bool is_self_conjugate() const;
  std::vector<int> clusters() const;
  std::vector<int> signs() const;
  std::string to_string() const;

  friend bool operator==(const MonomialKey& a, const MonomialKey& b) {
    if (a.q != b.q) return false;
    for (int i = 0; i < a.q; ++i)
      if (a.code[i] != b.code[i]) return false;
    return true;
  }
  friend bool operator<(const MonomialKey& a, const MonomialKey& b) {
    if (a.q != b.q) return a.q < b.q;
    for (int i = 0; i < a.q; ++i)
      if (a.code[i] != b.code[i]) return a.code[i] < b.code[i];
    return false;
  }
};

struct MonomialKeyHash {
  size_t operator()(const MonomialKey& key) const noexcept {
    uint64_t h = 1469598103934665603ull ^ key.q;
    for (int i = 0; i < key.q; ++i) h = (h ^ key.code[i]) * 1099511628211ull;
    return static_cast<size_t>(h);
  }
};

// Runs of identical (k, sigma) pairs inside a sorted key.
struct Block {
  uint16_t code;
  int start;
  int length;
};
std::vector<Block> blocks_of(const MonomialKey& key);

// Number of orderings of the key's pairs: q! / prod(block lengths)!.
double multiplicity(const MonomialKey& key);

struct CoefficientTensor {
  std::vector<int> shape;
  std::vector<cplx> data;

  size_t size() const { return data.size(); }
  double frobenius() const;
};

CoefficientTensor zero_tensor(const MonomialKey& key, const FrequencySpectrum& spectrum);
// out axis s carries input axis order[s].
CoefficientTensor permute_axes(const CoefficientTensor& t, const std::vector<int>& order);
// Averages over permutations of axes that share a (k, sigma) pair.
void block_symmetrize(CoefficientTensor& t, const MonomialKey& key);
// Coefficients of the conjugate key: entrywise conjugate, axes reordered.
CoefficientTensor conjugate_partner(const MonomialKey& key, const CoefficientTensor& t,
                                    MonomialKey* partner = nullptr);

// Real homogeneous polynomial of degree q. Only canonical keys are stored; the
// conjugate key carries the entrywise conjugate. A stored tensor T on key K
// contributes mult(K) * sum_j T_j prod u^sigma plus its conjugate (once if K
// is self-conjugate).
class HomogeneousPolynomial {
 public:
  using TermMap = std::map<MonomialKey, CoefficientTensor>;

  HomogeneousPolynomial() = default;
  HomogeneousPolynomial(SpectrumPtr spectrum, int degree, double nu = 0.0, double n = 0.0);

  int degree() const { return degree_; }
  double nu() const { return nu_; }
  double n() const { return n_; }
  void set_grading(double nu, double n) { nu_ = nu; n_ = n; }
  const SpectrumPtr& spectrum() const { return spectrum_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  // Adds tensor t (axes in the order of k/sigma) and its conjugate.
  void add_term(const std::vector<int>& k, const std::vector<int>& sigma, const std::vector<cplx>& t);
  // Adds c * prod_l u_{modes[l]}^{sigma[l]} plus its conjugate (modes 0-based).
  void add_monomial(const std::vector<int>& modes, const std::vector<int>& sigma, cplx c);
  // Stores t on a canonical key as is (summing with what is there).
  void accumulate_canonical(const MonomialKey& key, const CoefficientTensor& t, double scale = 1.0);
  void set_canonical(const MonomialKey& key, CoefficientTensor t);
  void erase(const MonomialKey& key) { terms_.erase(key); }
  const CoefficientTensor* find(const MonomialKey& key) const;

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& other);
  HomogeneousPolynomial& scale(double s);
  HomogeneousPolynomial scaled(double s) const;
  // Largest Frobenius norm over stored tensors.
  double coefficient_scale() const;
  // Drops tensors with Frobenius norm below rel * coefficient_scale(); returns count.
  size_t prune(double rel);
  // Projects self-conjugate tensors onto the real subspace.
  void enforce_reality();

  std::string to_text() const;
  static HomogeneousPolynomial from_text(const std::string& text, SpectrumPtr spectrum);

 private:
  SpectrumPtr spectrum_;
  int degree_ = 0;
  double nu_ = 0.0, n_ = 0.0;
  TermMap terms_;
};

class InhomogeneousPolynomial {
 public:
  InhomogeneousPolynomial() = default;
  explicit InhomogeneousPolynomial(SpectrumPtr spectrum, double nu = 0.0, double n = 0.0)
      : spectrum_(std::move(spectrum)), nu_(nu), n_(n) {}

  const SpectrumPtr& spectrum() const { return spectrum_; }
  double nu() const { return nu_; }
  double n() const { return n_; }
  HomogeneousPolynomial& part(int q);
  const HomogeneousPolynomial* find(int q) const;
  void set_part(HomogeneousPolynomial p);
  const std::map<int, HomogeneousPolynomial>& parts() const { return parts_; }
  int max_degree() const { return parts_.empty() ? 0 : parts_.rbegin()->first; }
  bool empty() const;
  // Keeps degrees <= r.
  InhomogeneousPolynomial truncated(int r) const;

 private:
  SpectrumPtr spectrum_;
  double nu_ = 0.0, n_ = 0.0;
  std::map<int, HomogeneousPolynomial> parts_;
};

double gamma_weight(const std::vector<int>& k);
double key_weight(const MonomialKey& key, double nu, double n);
double poly_norm(const HomogeneousPolynomial& p);
// sup_q gamma^{q-3} ||P^{(q)}||
double poly_norm(const InhomogeneousPolynomial& p, double gamma);

double evaluate(const HomogeneousPolynomial& p, const StateVector& u);
double evaluate(const InhomogeneousPolynomial& p, const StateVector& u);
// Same sum without discarding imaginary parts of self-conjugate keys.
cplx evaluate_complex(const HomogeneousPolynomial& p, const StateVector& u);

// (grad P(u))_j = 2 d P / d conj(u_j)
StateVector gradient(const HomogeneousPolynomial& p, const StateVector& u);
StateVector gradient(const InhomogeneousPolynomial& p, const StateVector& u);

// Re sum a_j conj(b_j)
double real_dot(const StateVector& a, const StateVector& b);
// Z2(u) = 1/2 sum omega_j |u_j|^2
double z2(const FrequencySpectrum& spectrum, const StateVector& u);
// {P,Q}(u) computed from gradients: (i grad P, grad Q)
double pointwise_bracket(const StateVector& grad_p, const StateVector& grad_q);

struct BracketOptions {
  double prune = 1e-14;
};

HomogeneousPolynomial poisson_bracket(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q,
                                      const BracketOptions& options = {});
// {Z2, P}: each entry times i * sum_l sigma_l omega_{j_l}.
HomogeneousPolynomial bracket_with_Z2(const HomogeneousPolynomial& p);

// Real symmetric q-linear form evaluated on basis vectors: modes[l] selects
// the eigenmode, imag[l] = 1 multiplies that argument by i.
using MultilinearForm = std::function<double(const std::vector<int>& modes, const std::vector<int>& imag)>;

// C-multilinear coefficient of the (k, sigma) class by the 2^{-q} average.
CoefficientTensor polarize(const MultilinearForm& form, const MonomialKey& key,
                           const FrequencySpectrum& spectrum);

// All canonical keys of degree q on clusters 1..kmax with non-empty clusters.
std::vector<MonomialKey> canonical_keys(int q, int kmax, const FrequencySpectrum& spectrum);

// Collects every canonical class of a form of degree q into a polynomial.
HomogeneousPolynomial from_form(const MultilinearForm& form, SpectrumPtr spectrum, int q, int kmax);

}  // namespace bnf
