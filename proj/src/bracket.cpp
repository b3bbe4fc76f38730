#include <Eigen/Core>
#include <unordered_map>

#include "errors.hpp"
#include "polynomial.hpp"
#include "tensor_ops.hpp"

namespace bnf {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A term of the ordered-tuple expansion: coefficient mult(K) * T on key K.
struct FullTerm {
  MonomialKey key;
  CoefficientTensor t;
};

std::vector<FullTerm> expand(const HomogeneousPolynomial& p) {
  std::vector<FullTerm> out;
  for (const auto& [key, t] : p.terms()) {
    const double mult = multiplicity(key);
    FullTerm a{key, t};
    for (auto& z : a.t.data) z *= mult;
    if (!key.is_self_conjugate()) {
      FullTerm b;
      b.t = conjugate_partner(key, a.t, &b.key);
      out.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

// One differentiated slot of a full term: the tensor reshaped as a matrix with
// the slot's axis last (for the left factor) or first (for the right factor).
struct Slot {
  const FullTerm* term;
  int axis;
  int length;
  std::vector<uint16_t> rest;  // codes of the other axes, in matrix order
  std::vector<int> rest_shape;
  RowMat mat;
};

Slot make_slot(const FullTerm& ft, const Block& b, bool axis_last) {
  Slot s;
  s.term = &ft;
  s.axis = b.start;
  s.length = b.length;
  const int q = ft.key.q;
  std::vector<int> order;
  for (int a = 0; a < q; ++a)
    if (a != b.start) order.push_back(a);
  if (axis_last) order.push_back(b.start);
  else order.insert(order.begin(), b.start);
  CoefficientTensor perm = permute_axes(ft.t, order);
  size_t rest_size = 1;
  for (int a = 0; a < q; ++a) {
    if (a == b.start) continue;
    s.rest.push_back(ft.key.code[a]);
    s.rest_shape.push_back(ft.t.shape[a]);
    rest_size *= static_cast<size_t>(ft.t.shape[a]);
  }
  const int d = ft.t.shape[b.start];
  if (axis_last) s.mat = Eigen::Map<const RowMat>(perm.data.data(), rest_size, d);
  else s.mat = Eigen::Map<const RowMat>(perm.data.data(), d, rest_size);
  return s;
}

// Total order on polynomial contents: degree, term count, keys, coefficients.
int compare(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q) {
  if (p.degree() != q.degree()) return p.degree() < q.degree() ? -1 : 1;
  if (p.term_count() != q.term_count()) return p.term_count() < q.term_count() ? -1 : 1;
  auto a = p.terms().begin(), b = q.terms().begin();
  for (; a != p.terms().end(); ++a, ++b) {
    if (a->first < b->first) return -1;
    if (b->first < a->first) return 1;
    const auto& x = a->second.data;
    const auto& y = b->second.data;
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i].real() != y[i].real()) return x[i].real() < y[i].real() ? -1 : 1;
      if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag() ? -1 : 1;
    }
  }
  return 0;
}

HomogeneousPolynomial bracket_ordered(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q, int degree,
                                      double nu, double n, const BracketOptions& options) {
  HomogeneousPolynomial out(p.spectrum(), degree, nu, n);
  if (p.empty() || q.empty()) return out;

  const auto fa = expand(p);
  const auto fb = expand(q);
  std::vector<Slot> left;
  std::unordered_map<uint16_t, std::vector<Slot>> right;
  for (const auto& ft : fa)
    for (const auto& b : blocks_of(ft.key)) left.push_back(make_slot(ft, b, true));
  for (const auto& ft : fb)
    for (const auto& b : blocks_of(ft.key)) right[b.code].push_back(make_slot(ft, b, false));

  std::unordered_map<MonomialKey, CoefficientTensor, MonomialKeyHash> acc;
  std::array<uint16_t, kMaxDegree> codes{};
  std::vector<int> order, merged_shape(degree);
  RowMat prod;
  for (const auto& sa : left) {
    const uint16_t code = sa.term->key.code[sa.axis];
    auto it = right.find(code ^ 1);
    if (it == right.end()) continue;
    // {P,Q} = 2i sum (dP/d conj u * dQ/du - dP/du * dQ/d conj u)
    const double sigma_a = (code & 1) ? 1.0 : -1.0;
    for (const auto& sb : it->second) {
      const int na = static_cast<int>(sa.rest.size());
      for (int i = 0; i < na; ++i) codes[i] = sa.rest[i];
      for (size_t i = 0; i < sb.rest.size(); ++i) codes[na + i] = sb.rest[i];
      MonomialKey rkey = MonomialKey::from_codes(codes.data(), degree, &order);
      if (!rkey.is_canonical()) continue;
      const cplx coef(0.0, 2.0 * -sigma_a * sa.length * sb.length);
      prod.noalias() = sa.mat * sb.mat;
      auto slot = acc.find(rkey);
      if (slot == acc.end()) slot = acc.emplace(rkey, zero_tensor(rkey, *p.spectrum())).first;
      std::vector<int> raw_shape = sa.rest_shape;
      raw_shape.insert(raw_shape.end(), sb.rest_shape.begin(), sb.rest_shape.end());
      auto out_strides = row_major_strides(slot->second.shape);
      std::vector<size_t> step(degree);
      for (int s = 0; s < degree; ++s) step[order[s]] = out_strides[s];
      scatter_permuted(prod.data(), raw_shape, step, slot->second.data.data(), coef);
    }
  }

  for (auto& [key, t] : acc) {
    block_symmetrize(t, key);
    const double inv = 1.0 / multiplicity(key);
    for (auto& z : t.data) z *= inv;
    out.set_canonical(key, std::move(t));
  }
  out.enforce_reality();
  if (options.prune > 0.0) out.prune(options.prune);
  return out;
}

}  // namespace

// Operands are evaluated in a fixed order and the result negated when swapped,
// so {P,Q} = -{Q,P} holds bit for bit.
HomogeneousPolynomial poisson_bracket(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q,
                                      const BracketOptions& options) {
  require(p.spectrum() && q.spectrum(), ErrorKind::InvalidArgument, "bracket operands need a spectrum");
  require(p.spectrum()->hash() == q.spectrum()->hash(), ErrorKind::SpectrumMismatch,
          "bracket operands live on different spectra");
  const int degree = p.degree() + q.degree() - 2;
  require(degree >= 1, ErrorKind::DegreeUnderflow, "bracket of degree below one");
  require(degree <= kMaxDegree, ErrorKind::DegreeOverflow,
          "bracket degree " + std::to_string(degree) + " exceeds " + std::to_string(kMaxDegree));
  const int order = compare(p, q);
  if (order == 0) return HomogeneousPolynomial(p.spectrum(), degree, p.nu(), p.n());
  if (order < 0) return bracket_ordered(p, q, degree, p.nu(), p.n(), options);
  return bracket_ordered(q, p, degree, p.nu(), p.n(), options).scale(-1.0);
}

}  // namespace bnf
