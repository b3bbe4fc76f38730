#include "polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "hashing.hpp"
#include "tensor_ops.hpp"

namespace bnf {

MonomialKey MonomialKey::from_codes(const uint16_t* codes, int q, std::vector<int>* order) {
  require(q >= 1 && q <= kMaxDegree, ErrorKind::DegreeOverflow,
          "degree " + std::to_string(q) + " outside 1.." + std::to_string(kMaxDegree));
  std::array<int, kMaxDegree> idx;
  std::iota(idx.begin(), idx.begin() + q, 0);
  std::stable_sort(idx.begin(), idx.begin() + q, [&](int a, int b) { return codes[a] > codes[b]; });
  MonomialKey key;
  key.q = static_cast<uint8_t>(q);
  for (int s = 0; s < q; ++s) key.code[s] = codes[idx[s]];
  if (order) order->assign(idx.begin(), idx.begin() + q);
  return key;
}

MonomialKey MonomialKey::from(const std::vector<int>& k, const std::vector<int>& sigma,
                              std::vector<int>* order) {
  require(k.size() == sigma.size(), ErrorKind::InvalidArgument, "cluster and sign tuples differ in length");
  std::array<uint16_t, kMaxDegree> codes{};
  require(k.size() <= static_cast<size_t>(kMaxDegree), ErrorKind::DegreeOverflow, "degree too large");
  for (size_t i = 0; i < k.size(); ++i) {
    require(k[i] >= 1, ErrorKind::InvalidArgument, "cluster indices start at 1");
    require(sigma[i] == 1 || sigma[i] == -1, ErrorKind::InvalidArgument, "signs must be +1 or -1");
    codes[i] = encode(k[i], sigma[i]);
  }
  return from_codes(codes.data(), static_cast<int>(k.size()), order);
}

MonomialKey MonomialKey::flipped(std::vector<int>* order) const {
  std::array<uint16_t, kMaxDegree> codes{};
  for (int i = 0; i < q; ++i) codes[i] = code[i] ^ 1;
  return from_codes(codes.data(), q, order);
}

bool MonomialKey::is_canonical() const {
  MonomialKey f = flipped();
  for (int i = 0; i < q; ++i)
    if (code[i] != f.code[i]) return code[i] < f.code[i];
  return true;
}

bool MonomialKey::is_self_conjugate() const { return flipped() == *this; }

std::vector<int> MonomialKey::clusters() const {
  std::vector<int> out(q);
  for (int i = 0; i < q; ++i) out[i] = k(i);
  return out;
}

std::vector<int> MonomialKey::signs() const {
  std::vector<int> out(q);
  for (int i = 0; i < q; ++i) out[i] = sigma(i);
  return out;
}

std::string MonomialKey::to_string() const {
  std::string s = "(";
  for (int i = 0; i < q; ++i) s += (i ? "," : "") + std::to_string(k(i));
  s += ";";
  for (int i = 0; i < q; ++i) s += sigma(i) > 0 ? '+' : '-';
  return s + ")";
}

std::vector<Block> blocks_of(const MonomialKey& key) {
  std::vector<Block> out;
  for (int i = 0; i < key.q; ++i) {
    if (!out.empty() && out.back().code == key.code[i]) ++out.back().length;
    else out.push_back({key.code[i], i, 1});
  }
  return out;
}

double multiplicity(const MonomialKey& key) {
  // q <= 12 so the integer arithmetic is exact.
  uint64_t num = 1;
  for (int i = 2; i <= key.q; ++i) num *= static_cast<uint64_t>(i);
  uint64_t den = 1;
  for (const auto& b : blocks_of(key))
    for (int i = 2; i <= b.length; ++i) den *= static_cast<uint64_t>(i);
  return static_cast<double>(num / den);
}

double CoefficientTensor::frobenius() const {
  double acc = 0.0;
  for (auto z : data) acc += std::norm(z);
  return std::sqrt(acc);
}

CoefficientTensor zero_tensor(const MonomialKey& key, const FrequencySpectrum& spectrum) {
  CoefficientTensor t;
  t.shape.resize(key.q);
  size_t n = 1;
  for (int i = 0; i < key.q; ++i) {
    int k = key.k(i);
    t.shape[i] = k <= spectrum.cluster_count() ? spectrum.dim(k) : 0;
    n *= static_cast<size_t>(t.shape[i]);
  }
  t.data.assign(n, cplx(0.0, 0.0));
  return t;
}

CoefficientTensor permute_axes(const CoefficientTensor& t, const std::vector<int>& order) {
  const int q = static_cast<int>(t.shape.size());
  CoefficientTensor out;
  out.shape.resize(q);
  for (int s = 0; s < q; ++s) out.shape[s] = t.shape[order[s]];
  out.data.resize(t.data.size());
  auto out_strides = row_major_strides(out.shape);
  // step[a]: output stride carried by input axis a
  std::vector<size_t> step(q);
  for (int s = 0; s < q; ++s) step[order[s]] = out_strides[s];
  scatter_permuted(t.data.data(), t.shape, step, out.data.data(), cplx(1.0, 0.0));
  return out;
}

void block_symmetrize(CoefficientTensor& t, const MonomialKey& key) {
  const int q = key.q;
  for (const auto& b : blocks_of(key)) {
    if (b.length < 2 || t.shape[b.start] <= 1) continue;
    // Sym_t = (1/t) sum_{i<=t} (i t) Sym_{t-1}: coset representatives of S_{t-1} in S_t.
    for (int level = 2; level <= b.length; ++level) {
      const int pt = b.start + level - 1;
      CoefficientTensor acc = t;
      for (int i = 0; i < level - 1; ++i) {
        std::vector<int> order(q);
        std::iota(order.begin(), order.end(), 0);
        std::swap(order[b.start + i], order[pt]);
        CoefficientTensor sw = permute_axes(t, order);
        for (size_t e = 0; e < acc.data.size(); ++e) acc.data[e] += sw.data[e];
      }
      const double inv = 1.0 / level;
      for (auto& z : acc.data) z *= inv;
      t = std::move(acc);
    }
  }
}

CoefficientTensor conjugate_partner(const MonomialKey& key, const CoefficientTensor& t,
                                    MonomialKey* partner) {
  std::vector<int> order;
  MonomialKey f = key.flipped(&order);
  if (partner) *partner = f;
  CoefficientTensor out = permute_axes(t, order);
  for (auto& z : out.data) z = std::conj(z);
  return out;
}

HomogeneousPolynomial::HomogeneousPolynomial(SpectrumPtr spectrum, int degree, double nu, double n)
    : spectrum_(std::move(spectrum)), degree_(degree), nu_(nu), n_(n) {
  require(spectrum_ != nullptr, ErrorKind::InvalidArgument, "polynomial needs a spectrum");
  require(degree >= 1 && degree <= kMaxDegree, ErrorKind::DegreeOverflow,
          "degree " + std::to_string(degree) + " outside 1.." + std::to_string(kMaxDegree));
}

const CoefficientTensor* HomogeneousPolynomial::find(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? nullptr : &it->second;
}

void HomogeneousPolynomial::accumulate_canonical(const MonomialKey& key, const CoefficientTensor& t,
                                                 double scale) {
  require(key.q == degree_, ErrorKind::InvalidArgument, "key degree differs from polynomial degree");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    CoefficientTensor c = t;
    if (scale != 1.0)
      for (auto& z : c.data) z *= scale;
    terms_.emplace(key, std::move(c));
    return;
  }
  require(it->second.data.size() == t.data.size(), ErrorKind::InvalidArgument, "tensor shape mismatch");
  for (size_t e = 0; e < t.data.size(); ++e) it->second.data[e] += scale * t.data[e];
}

void HomogeneousPolynomial::set_canonical(const MonomialKey& key, CoefficientTensor t) {
  require(key.q == degree_, ErrorKind::InvalidArgument, "key degree differs from polynomial degree");
  terms_[key] = std::move(t);
}

void HomogeneousPolynomial::add_term(const std::vector<int>& k, const std::vector<int>& sigma,
                                     const std::vector<cplx>& t) {
  require(static_cast<int>(k.size()) == degree_, ErrorKind::InvalidArgument, "term degree differs from polynomial degree");
  std::vector<int> order;
  MonomialKey key = MonomialKey::from(k, sigma, &order);
  CoefficientTensor in;
  in.shape.resize(k.size());
  size_t n = 1;
  for (size_t i = 0; i < k.size(); ++i) {
    require(k[i] <= spectrum_->cluster_count(), ErrorKind::InvalidArgument,
            "cluster " + std::to_string(k[i]) + " beyond the truncation");
    in.shape[i] = spectrum_->dim(k[i]);
    n *= static_cast<size_t>(in.shape[i]);
  }
  require(t.size() == n, ErrorKind::InvalidArgument, "tensor size does not match the cluster dimensions");
  if (n == 0) return;
  in.data = t;
  CoefficientTensor sorted = permute_axes(in, order);
  block_symmetrize(sorted, key);
  if (key.is_canonical()) {
    accumulate_canonical(key, sorted);
    if (key.is_self_conjugate()) accumulate_canonical(key, conjugate_partner(key, sorted));
  } else {
    MonomialKey partner;
    CoefficientTensor c = conjugate_partner(key, sorted, &partner);
    accumulate_canonical(partner, c);
  }
}

void HomogeneousPolynomial::add_monomial(const std::vector<int>& modes, const std::vector<int>& sigma,
                                         cplx c) {
  require(modes.size() == sigma.size(), ErrorKind::InvalidArgument, "mode and sign tuples differ in length");
  std::vector<int> k(modes.size());
  for (size_t i = 0; i < modes.size(); ++i) {
    require(modes[i] >= 0 && static_cast<size_t>(modes[i]) < spectrum_->size(), ErrorKind::InvalidArgument,
            "mode index out of range");
    k[i] = spectrum_->cluster_of(modes[i]);
  }
  MonomialKey key = MonomialKey::from(k, sigma);
  std::vector<int> shape(k.size());
  size_t n = 1;
  for (size_t i = 0; i < k.size(); ++i) {
    shape[i] = spectrum_->dim(k[i]);
    n *= static_cast<size_t>(shape[i]);
  }
  std::vector<cplx> t(n, cplx(0.0, 0.0));
  size_t off = 0;
  for (size_t i = 0; i < k.size(); ++i) off = off * shape[i] + spectrum_->local_index(modes[i]);
  t[off] = c / multiplicity(key);
  add_term(k, sigma, t);
}

HomogeneousPolynomial& HomogeneousPolynomial::operator+=(const HomogeneousPolynomial& other) {
  require(other.degree_ == degree_, ErrorKind::InvalidArgument, "adding polynomials of different degree");
  require(!other.spectrum_ || !spectrum_ || other.spectrum_->hash() == spectrum_->hash(),
          ErrorKind::SpectrumMismatch, "polynomials live on different spectra");
  for (const auto& [key, t] : other.terms_) accumulate_canonical(key, t);
  return *this;
}

HomogeneousPolynomial& HomogeneousPolynomial::scale(double s) {
  for (auto& [key, t] : terms_)
    for (auto& z : t.data) z *= s;
  return *this;
}

HomogeneousPolynomial HomogeneousPolynomial::scaled(double s) const {
  HomogeneousPolynomial out = *this;
  out.scale(s);
  return out;
}

double HomogeneousPolynomial::coefficient_scale() const {
  double m = 0.0;
  for (const auto& [key, t] : terms_) m = std::max(m, t.frobenius());
  return m;
}

size_t HomogeneousPolynomial::prune(double rel) {
  const double cut = rel * coefficient_scale();
  size_t dropped = 0;
  for (auto it = terms_.begin(); it != terms_.end();) {
    double f = it->second.frobenius();
    if (f <= cut || f == 0.0) {
      it = terms_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

void HomogeneousPolynomial::enforce_reality() {
  for (auto& [key, t] : terms_) {
    if (!key.is_self_conjugate()) continue;
    CoefficientTensor c = conjugate_partner(key, t);
    for (size_t e = 0; e < t.data.size(); ++e) t.data[e] = 0.5 * (t.data[e] + c.data[e]);
  }
}

std::string HomogeneousPolynomial::to_text() const {
  std::ostringstream os;
  os << "bnf-polynomial 1\n";
  os << "degree " << degree_ << "\n";
  os << "nu " << hexfloat(nu_) << "\n";
  os << "n " << hexfloat(n_) << "\n";
  os << "spectrum " << (spectrum_ ? spectrum_->hash() : std::string("-")) << "\n";
  os << "terms " << terms_.size() << "\n";
  for (const auto& [key, t] : terms_) {
    for (int i = 0; i < key.q; ++i) os << (i ? "," : "") << key.k(i);
    os << ' ';
    for (int i = 0; i < key.q; ++i) os << (key.sigma(i) > 0 ? '+' : '-');
    os << ' ';
    for (size_t i = 0; i < t.shape.size(); ++i) os << (i ? "," : "") << t.shape[i];
    for (auto z : t.data) os << ' ' << hexfloat(z.real()) << ' ' << hexfloat(z.imag());
    os << '\n';
  }
  return os.str();
}

static std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

HomogeneousPolynomial HomogeneousPolynomial::from_text(const std::string& text, SpectrumPtr spectrum) {
  std::istringstream is(text);
  std::string line, word;
  auto expect = [&](const std::string& name) {
    if (!std::getline(is, line)) fail(ErrorKind::Parse, "polynomial text ends before '" + name + "'");
    std::istringstream ls(line);
    ls >> word;
    if (word != name) fail(ErrorKind::Parse, "expected '" + name + "', found '" + line + "'");
    std::string rest;
    std::getline(ls, rest);
    return rest.empty() ? rest : rest.substr(rest.find_first_not_of(' '));
  };
  if (expect("bnf-polynomial") != "1") fail(ErrorKind::Parse, "unsupported polynomial format version");
  int degree = std::stoi(expect("degree"));
  double nu = parse_real(expect("nu"));
  double n = parse_real(expect("n"));
  std::string hash = expect("spectrum");
  if (spectrum && hash != "-" && hash != spectrum->hash())
    fail(ErrorKind::SpectrumMismatch, "polynomial was written for spectrum " + hash + ", got " + spectrum->hash());
  size_t count = std::stoul(expect("terms"));
  HomogeneousPolynomial p(spectrum, degree, nu, n);
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) fail(ErrorKind::Parse, "missing polynomial term");
    std::istringstream ls(line);
    std::string ks, ss, shs;
    ls >> ks >> ss >> shs;
    std::vector<int> k = split_ints(ks), shape = split_ints(shs), sigma;
    for (char c : ss) sigma.push_back(c == '+' ? 1 : -1);
    MonomialKey key = MonomialKey::from(k, sigma);
    if (!key.is_canonical() || key.clusters() != k || key.signs() != sigma)
      fail(ErrorKind::Parse, "term key is not in canonical form: " + line);
    CoefficientTensor t;
    t.shape = shape;
    size_t sz = 1;
    for (int d : shape) sz *= static_cast<size_t>(d);
    t.data.resize(sz);
    for (size_t e = 0; e < sz; ++e) {
      std::string re, im;
      if (!(ls >> re >> im)) fail(ErrorKind::Parse, "short coefficient list: " + line);
      t.data[e] = cplx(parse_real(re), parse_real(im));
    }
    p.set_canonical(key, std::move(t));
  }
  return p;
}

HomogeneousPolynomial& InhomogeneousPolynomial::part(int q) {
  auto it = parts_.find(q);
  if (it == parts_.end()) it = parts_.emplace(q, HomogeneousPolynomial(spectrum_, q, nu_, n_)).first;
  return it->second;
}

const HomogeneousPolynomial* InhomogeneousPolynomial::find(int q) const {
  auto it = parts_.find(q);
  return it == parts_.end() ? nullptr : &it->second;
}

void InhomogeneousPolynomial::set_part(HomogeneousPolynomial p) {
  if (!spectrum_) spectrum_ = p.spectrum();
  int q = p.degree();
  parts_[q] = std::move(p);
}

bool InhomogeneousPolynomial::empty() const {
  for (const auto& [q, p] : parts_)
    if (!p.empty()) return false;
  return true;
}

InhomogeneousPolynomial InhomogeneousPolynomial::truncated(int r) const {
  InhomogeneousPolynomial out(spectrum_, nu_, n_);
  for (const auto& [q, p] : parts_)
    if (q <= r) out.set_part(p);
  return out;
}

double gamma_weight(const std::vector<int>& k) {
  const int q = static_cast<int>(k.size());
  double acc = 0.0;
  for (uint32_t mask = 0; mask < (1u << q); ++mask) {
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += (mask >> i & 1u) ? -k[i] : k[i];
    acc += std::pow(1.0 + s * s, -1.5);
  }
  return acc;
}

double key_weight(const MonomialKey& key, double nu, double n) {
  double w = gamma_weight(key.clusters());
  if (key.q >= 2 && n != 0.0) w *= std::pow(static_cast<double>(key.k(1)) / key.k(0), n);
  if (nu != 0.0)
    for (int i = 2; i < key.q; ++i) w *= std::pow(static_cast<double>(key.k(i)), nu);
  return w;
}

double poly_norm(const HomogeneousPolynomial& p) {
  double m = 0.0;
  for (const auto& [key, t] : p.terms()) m = std::max(m, t.frobenius() / key_weight(key, p.nu(), p.n()));
  return m;
}

double poly_norm(const InhomogeneousPolynomial& p, double gamma) {
  double m = 0.0;
  for (const auto& [q, part] : p.parts()) m = std::max(m, std::pow(gamma, q - 3) * poly_norm(part));
  return m;
}

namespace {

struct ClusterValues {
  // x[k][s]: u restricted to cluster k, s = 0 conjugated, s = 1 plain
  std::vector<std::array<std::vector<cplx>, 2>> x;
};

ClusterValues cluster_values(const FrequencySpectrum& spectrum, const StateVector& u) {
  require(u.size() == spectrum.size(), ErrorKind::SpectrumMismatch, "state length differs from spectrum size");
  ClusterValues cv;
  cv.x.resize(spectrum.cluster_count() + 1);
  for (int k = 1; k <= spectrum.cluster_count(); ++k) {
    const auto& mem = spectrum.members(k);
    cv.x[k][0].resize(mem.size());
    cv.x[k][1].resize(mem.size());
    for (size_t i = 0; i < mem.size(); ++i) {
      cv.x[k][1][i] = u[mem[i]];
      cv.x[k][0][i] = std::conj(u[mem[i]]);
    }
  }
  return cv;
}

std::vector<const cplx*> axis_vectors(const MonomialKey& key, const ClusterValues& cv) {
  std::vector<const cplx*> xs(key.q);
  for (int a = 0; a < key.q; ++a) xs[a] = cv.x[key.k(a)][key.code[a] & 1].data();
  return xs;
}

}  // namespace

cplx evaluate_complex(const HomogeneousPolynomial& p, const StateVector& u) {
  if (p.empty()) return 0.0;
  auto cv = cluster_values(*p.spectrum(), u);
  cplx acc = 0.0;
  for (const auto& [key, t] : p.terms()) {
    cplx v = multiplicity(key) * contract_all(t.data.data(), t.shape, axis_vectors(key, cv));
    acc += key.is_self_conjugate() ? v : v + std::conj(v);
  }
  return acc;
}

double evaluate(const HomogeneousPolynomial& p, const StateVector& u) { return evaluate_complex(p, u).real(); }

double evaluate(const InhomogeneousPolynomial& p, const StateVector& u) {
  double acc = 0.0;
  for (const auto& [q, part] : p.parts()) acc += evaluate(part, u);
  return acc;
}

StateVector gradient(const HomogeneousPolynomial& p, const StateVector& u) {
  const auto& spectrum = *p.spectrum();
  StateVector grad(u.size(), cplx(0.0, 0.0));
  if (p.empty()) return grad;
  auto cv = cluster_values(spectrum, u);
  // [self-conjugate?][sign]: derivatives of f in u (sign 1) and conj(u) (sign 0)
  std::vector<cplx> d[2][2];
  for (auto& a : d)
    for (auto& b : a) b.assign(u.size(), cplx(0.0, 0.0));
  std::vector<cplx> buf;
  for (const auto& [key, t] : p.terms()) {
    const auto xs = axis_vectors(key, cv);
    const double mult = multiplicity(key);
    const int sc = key.is_self_conjugate() ? 1 : 0;
    for (const auto& b : blocks_of(key)) {
      const int k = b.code >> 1;
      const auto& mem = spectrum.members(k);
      buf.assign(mem.size(), cplx(0.0, 0.0));
      contract_but(t.data.data(), t.shape, xs, b.start, buf.data());
      auto& dst = d[sc][b.code & 1];
      const double f = mult * b.length;
      for (size_t i = 0; i < mem.size(); ++i) dst[mem[i]] += f * buf[i];
    }
  }
  for (size_t j = 0; j < u.size(); ++j)
    grad[j] = 2.0 * (d[0][0][j] + std::conj(d[0][1][j])) + (d[1][0][j] + std::conj(d[1][1][j]));
  return grad;
}

StateVector gradient(const InhomogeneousPolynomial& p, const StateVector& u) {
  StateVector g(u.size(), cplx(0.0, 0.0));
  for (const auto& [q, part] : p.parts()) {
    auto gp = gradient(part, u);
    for (size_t j = 0; j < g.size(); ++j) g[j] += gp[j];
  }
  return g;
}

double real_dot(const StateVector& a, const StateVector& b) {
  double acc = 0.0;
  for (size_t j = 0; j < a.size(); ++j) acc += (a[j] * std::conj(b[j])).real();
  return acc;
}

double z2(const FrequencySpectrum& spectrum, const StateVector& u) {
  double acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) acc += spectrum.omega(j) * std::norm(u[j]);
  return 0.5 * acc;
}

double pointwise_bracket(const StateVector& grad_p, const StateVector& grad_q) {
  double acc = 0.0;
  for (size_t j = 0; j < grad_p.size(); ++j) acc += (cplx(0.0, 1.0) * grad_p[j] * std::conj(grad_q[j])).real();
  return acc;
}

HomogeneousPolynomial bracket_with_Z2(const HomogeneousPolynomial& p) {
  HomogeneousPolynomial out(p.spectrum(), p.degree(), p.nu(), p.n());
  const auto& spectrum = *p.spectrum();
  for (const auto& [key, t] : p.terms()) {
    CoefficientTensor r = t;
    for_each_index(t.shape, [&](size_t off, const int* idx) {
      double div = 0.0;
      for (int a = 0; a < key.q; ++a) div += key.sigma(a) * spectrum.omega(spectrum.members(key.k(a))[idx[a]]);
      r.data[off] *= cplx(0.0, div);
    });
    out.set_canonical(key, std::move(r));
  }
  return out;
}

CoefficientTensor polarize(const MultilinearForm& form, const MonomialKey& key,
                           const FrequencySpectrum& spectrum) {
  const int q = key.q;
  CoefficientTensor t = zero_tensor(key, spectrum);
  std::vector<int> modes(q), imag(q);
  const double norm = std::ldexp(1.0, -q);
  for_each_index(t.shape, [&](size_t off, const int* idx) {
    for (int a = 0; a < q; ++a) modes[a] = spectrum.members(key.k(a))[idx[a]];
    cplx acc = 0.0;
    for (uint32_t eta = 0; eta < (1u << q); ++eta) {
      cplx w = 1.0;
      for (int a = 0; a < q; ++a) {
        imag[a] = static_cast<int>(eta >> a & 1u);
        if (imag[a]) w *= cplx(0.0, -key.sigma(a));
      }
      double f = form(modes, imag);
      if (f != 0.0) acc += w * f;
    }
    t.data[off] = norm * acc;
  });
  return t;
}

std::vector<MonomialKey> canonical_keys(int q, int kmax, const FrequencySpectrum& spectrum) {
  require(q >= 1 && q <= kMaxDegree, ErrorKind::DegreeOverflow, "degree out of range");
  std::vector<uint16_t> codes;
  for (int k = std::min(kmax, spectrum.cluster_count()); k >= 1; --k) {
    if (spectrum.dim(k) == 0) continue;
    codes.push_back(MonomialKey::encode(k, 1));
    codes.push_back(MonomialKey::encode(k, -1));
  }
  std::vector<MonomialKey> out;
  if (codes.empty()) return out;
  // non-increasing index sequences over the descending code list
  std::vector<size_t> idx(q, 0);
  MonomialKey key;
  key.q = static_cast<uint8_t>(q);
  while (true) {
    for (int i = 0; i < q; ++i) key.code[i] = codes[idx[i]];
    if (key.is_canonical()) out.push_back(key);
    int pos = q - 1;
    while (pos >= 0 && idx[pos] == codes.size() - 1) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < q; ++i) idx[i] = idx[pos];
  }
  return out;
}

HomogeneousPolynomial from_form(const MultilinearForm& form, SpectrumPtr spectrum, int q, int kmax) {
  HomogeneousPolynomial p(spectrum, q);
  for (const auto& key : canonical_keys(q, kmax, *spectrum)) {
    CoefficientTensor t = polarize(form, key, *spectrum);
    if (t.frobenius() > 0.0) p.set_canonical(key, std::move(t));
  }
  p.prune(1e-14);
  p.enforce_reality();
  return p;
}

}  // namespace bnf
