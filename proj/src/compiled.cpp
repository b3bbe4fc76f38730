#include "compiled.hpp"

#include <algorithm>
#include <map>

#include "tensor_ops.hpp"

namespace bnf {

CompiledPolynomial::CompiledPolynomial(const HomogeneousPolynomial& p) { add(p); }

CompiledPolynomial::CompiledPolynomial(const InhomogeneousPolynomial& p) {
  for (const auto& [q, part] : p.parts()) add(part);
}

void CompiledPolynomial::add(const HomogeneousPolynomial& p) {
  if (!p.spectrum()) return;
  const auto& spectrum = *p.spectrum();
  dim_ = spectrum.size();
  // Entries of a symmetric tensor that name the same monomial are merged.
  std::map<std::vector<int>, std::pair<cplx, double>> merged;
  for (const auto& [key, t] : p.terms()) {
    const double mult = multiplicity(key);
    const double weight = key.is_self_conjugate() ? 1.0 : 2.0;
    std::vector<int> tag(key.q);
    for_each_index(t.shape, [&](size_t off, const int* idx) {
      if (t.data[off] == cplx(0.0, 0.0)) return;
      for (int a = 0; a < key.q; ++a)
        tag[a] = 2 * spectrum.members(key.k(a))[idx[a]] + (key.sigma(a) > 0 ? 1 : 0);
      std::sort(tag.begin(), tag.end());
      auto& slot = merged[tag];
      slot.first += mult * t.data[off];
      slot.second = weight;
    });
  }
  for (const auto& [tag, cw] : merged) {
    if (cw.first == cplx(0.0, 0.0)) continue;
    Mono m{};
    m.c = cw.first;
    m.weight = cw.second;
    m.q = static_cast<int>(tag.size());
    for (int a = 0; a < m.q; ++a) {
      m.mode[a] = tag[a] >> 1;
      if (tag[a] & 1) m.plus_mask |= 1u << a;
    }
    monos_.push_back(m);
  }
}

double CompiledPolynomial::value(const StateVector& u) const { return value_as<double>(u); }

void CompiledPolynomial::add_gradient(const StateVector& u, StateVector& g, cplx s) const {
  add_gradient_as<double>(u, g, s);
}

StateVector CompiledPolynomial::gradient(const StateVector& u) const {
  StateVector g(u.size(), cplx(0.0, 0.0));
  add_gradient(u, g);
  return g;
}

}  // namespace bnf
