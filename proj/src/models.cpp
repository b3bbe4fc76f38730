#include "models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace bnf {

int auto_weyl_constant(const std::vector<double>& eigenvalues, int dimension) {
  require(!eigenvalues.empty(), ErrorKind::EmptySpectrum, "no eigenvalues");
  const int top = static_cast<int>(std::ceil(eigenvalues.back())) + 1;
  double c = 1.0;
  for (int k = 1; k <= top; ++k) {
    const auto count = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), static_cast<double>(k)) -
                       eigenvalues.begin();
    c = std::max(c, static_cast<double>(count) / std::pow(static_cast<double>(k), dimension));
  }
  return static_cast<int>(std::ceil(c - 1e-12));
}

SpectrumPtr kg_frequencies(const std::vector<double>& eigenvalues, double mass, int dimension, int weyl_constant,
                           ClusterDecomposition* decomposition) {
  require(mass > 0.0, ErrorKind::InvalidArgument, "Klein-Gordon mass must be positive");
  require(std::is_sorted(eigenvalues.begin(), eigenvalues.end()), ErrorKind::InvalidArgument,
          "eigenvalues must be sorted");
  const int c = weyl_constant > 0 ? weyl_constant : auto_weyl_constant(eigenvalues, dimension);
  ClusterDecomposition dec = build_clusters(eigenvalues, c, dimension);
  std::vector<double> omega(eigenvalues.size());
  for (size_t j = 0; j < omega.size(); ++j) omega[j] = std::sqrt(eigenvalues[j] * eigenvalues[j] + mass);
  if (decomposition) *decomposition = dec;
  return assign_clusters(dec, eigenvalues, omega, 1.0, 1.0, dimension, mass);
}

SpectrumPtr nls_frequencies(const std::vector<double>& eigenvalues, double p0, double f_prime, int dimension,
                            int weyl_constant, ClusterDecomposition* decomposition) {
  require(eigenvalues.size() >= 2, ErrorKind::EmptySpectrum, "need at least two eigenvalues");
  require(std::is_sorted(eigenvalues.begin(), eigenvalues.end()), ErrorKind::InvalidArgument,
          "eigenvalues must be sorted");
  const double c = 2.0 * p0 * f_prime;
  std::vector<double> lambda(eigenvalues.begin() + 1, eigenvalues.end());
  std::vector<double> omega(lambda.size());
  for (size_t j = 0; j < lambda.size(); ++j) {
    const double l2 = lambda[j] * lambda[j];
    const double rad = l2 * l2 + c * l2;
    if (!(rad > 0.0))
      fail(ErrorKind::StabilityViolation, "2 p0 f'(p0) = " + std::to_string(c) + " gives a non-positive frequency at lambda = " +
                                              std::to_string(lambda[j]));
    omega[j] = std::sqrt(rad);
  }
  const int wc = weyl_constant > 0 ? weyl_constant : auto_weyl_constant(lambda, dimension);
  ClusterDecomposition dec = build_clusters(lambda, wc, dimension);
  if (decomposition) *decomposition = dec;
  return assign_clusters(dec, lambda, omega, 2.0, 1.0, dimension / 2.0);
}

std::vector<double> circle_eigenvalues(int lambda_max) {
  require(lambda_max >= 0, ErrorKind::InvalidArgument, "lambda_max must be non-negative");
  std::vector<double> out{0.0};
  for (int n = 1; n <= lambda_max; ++n) {
    out.push_back(n);
    out.push_back(n);
  }
  return out;
}

CircleModel kg_circle(double mass, int lambda_max, int weyl_constant) {
  CircleModel m;
  m.spectrum = kg_frequencies(circle_eigenvalues(lambda_max), mass, 1, weyl_constant, &m.decomposition);
  m.fourier.push_back(0);
  for (int n = 1; n <= lambda_max; ++n) {
    m.fourier.push_back(-n);
    m.fourier.push_back(n);
  }
  return m;
}

OscillatorModel oscillator_frequencies(const std::vector<double>& sqrt_rho, double mass, int levels) {
  require(!sqrt_rho.empty(), ErrorKind::InvalidArgument, "oscillator needs at least one sqrt(rho)");
  for (double r : sqrt_rho) require(r > 0.0, ErrorKind::InvalidArgument, "sqrt(rho) values must be positive");
  require(mass >= 0.0, ErrorKind::InvalidArgument, "mass must be non-negative");
  require(levels >= 1, ErrorKind::InvalidArgument, "need at least one level");
  const int d = static_cast<int>(sqrt_rho.size());
  // all lattice points with lambda^2 below the levels-th value of the 1D ladder of the smallest sqrt(rho)
  const double rmin = *std::min_element(sqrt_rho.begin(), sqrt_rho.end());
  double base = std::accumulate(sqrt_rho.begin(), sqrt_rho.end(), 0.0);
  const double cap = base + 2.0 * rmin * (levels - 1) + 1e-9;
  struct Point {
    double l2;
    std::vector<int> n;
  };
  std::vector<Point> pts;
  std::vector<int> n(d, 0);
  std::function<void(int, double)> rec = [&](int axis, double acc) {
    if (axis == d) {
      pts.push_back({acc, n});
      return;
    }
    for (n[axis] = 0;; ++n[axis]) {
      double v = acc + sqrt_rho[axis] * (2.0 * n[axis] + 1.0);
      double rest = 0.0;
      for (int a = axis + 1; a < d; ++a) rest += sqrt_rho[a];
      if (v + rest > cap) break;
      rec(axis + 1, v);
    }
    n[axis] = 0;
  };
  rec(0, 0.0);
  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.l2 < b.l2; });
  OscillatorModel m;
  m.sqrt_rho = sqrt_rho;
  std::vector<double> lambda, omega;
  for (const auto& p : pts) {
    lambda.push_back(std::sqrt(p.l2));
    omega.push_back(std::sqrt(p.l2 + mass));
    m.quanta.push_back(p.n);
  }
  const int dim = 2 * d;
  ClusterDecomposition dec = build_clusters(lambda, auto_weyl_constant(lambda, dim), dim);
  std::optional<double> ms;
  if (mass > 0.0) ms = mass;
  m.spectrum = assign_clusters(dec, lambda, omega, 1.0, 1.0, dim, ms);
  m.decomposition = dec;
  return m;
}

MultilinearForm circle_form(const CircleModel& model, int q, double a) {
  const auto spectrum = model.spectrum;
  const auto fourier = model.fourier;
  return [spectrum, fourier, q, a](const std::vector<int>& modes, const std::vector<int>& imag) {
    // a int prod_l omega^{-1/2} Re(c_l e_{n_l}) dx with c_l = i^{imag_l}
    double pre = a * std::pow(0.5, q) * std::pow(2.0 * M_PI, 1.0 - q / 2.0);
    for (int l = 0; l < q; ++l) pre /= std::sqrt(spectrum->omega(modes[l]));
    cplx acc = 0.0;
    for (uint32_t tau = 0; tau < (1u << q); ++tau) {
      long sum = 0;
      cplx w = 1.0;
      for (int l = 0; l < q; ++l) {
        const bool conj = tau >> l & 1u;
        sum += conj ? -fourier[modes[l]] : fourier[modes[l]];
        if (imag[l]) w *= conj ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
      }
      if (sum == 0) acc += w;
    }
    return pre * acc.real();
  };
}

namespace {

InhomogeneousPolynomial collect(const SpectrumPtr& spectrum, const PowerCoefficients& coefficients, int kmax,
                                const std::function<MultilinearForm(int, double)>& make_form) {
  InhomogeneousPolynomial out(spectrum);
  for (const auto& [q, a] : coefficients) {
    require(q >= 3 && q <= 6, ErrorKind::InvalidArgument, "nonlinearity degrees must lie in 3..6");
    if (a == 0.0) continue;
    out.set_part(from_form(make_form(q, a), spectrum, q, kmax));
  }
  return out;
}

}  // namespace

InhomogeneousPolynomial kg_circle_nonlinearity(const CircleModel& model, const PowerCoefficients& coefficients,
                                               int kmax) {
  return collect(model.spectrum, coefficients, kmax,
                 [&](int q, double a) { return circle_form(model, q, a); });
}

void gauss_hermite(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  require(points >= 1, ErrorKind::InvalidArgument, "need at least one quadrature point");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(points, points);
  for (int i = 1; i < points; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(points);
  weights.resize(points);
  for (int i = 0; i < points; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[i] = std::sqrt(M_PI) * v * v;
  }
}

double hermite_product_integral(const std::vector<int>& n) {
  const int q = static_cast<int>(n.size());
  require(q >= 1, ErrorKind::InvalidArgument, "empty Hermite product");
  const int total = std::accumulate(n.begin(), n.end(), 0);
  const int nmax = *std::max_element(n.begin(), n.end());
  const int points = total / 2 + 2;
  std::vector<double> y, w;
  gauss_hermite(points, y, w);
  const double scale = std::sqrt(2.0 / q);
  double acc = 0.0;
  std::vector<double> h(nmax + 1);
  for (int i = 0; i < points; ++i) {
    const double x = y[i] * scale;
    // normalized Hermite polynomials without the Gaussian factor
    h[0] = std::pow(M_PI, -0.25);
    if (nmax >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int k = 1; k < nmax; ++k) h[k + 1] = std::sqrt(2.0 / (k + 1)) * x * h[k] - std::sqrt(k / (k + 1.0)) * h[k - 1];
    double prod = w[i];
    for (int l = 0; l < q; ++l) prod *= h[n[l]];
    acc += prod;
  }
  return scale * acc;
}

MultilinearForm oscillator_form(const OscillatorModel& model, int q, double a) {
  if (model.sqrt_rho.size() != 1)
    fail(ErrorKind::UnsupportedBasis, "mode-product integrals are only available for the one-dimensional oscillator");
  const auto spectrum = model.spectrum;
  const auto quanta = model.quanta;
  const double rho = model.sqrt_rho[0] * model.sqrt_rho[0];
  const double rescale = std::pow(rho, q / 8.0 - 0.25);
  return [spectrum, quanta, q, a, rescale](const std::vector<int>& modes, const std::vector<int>& imag) {
    // the basis is real, so Re(i psi) = 0
    for (int l = 0; l < q; ++l)
      if (imag[l]) return 0.0;
    double pre = a * std::pow(0.5, q) * rescale;
    std::vector<int> n(q);
    for (int l = 0; l < q; ++l) {
      pre *= 2.0 / std::sqrt(spectrum->omega(modes[l]));
      n[l] = quanta[modes[l]][0];
    }
    return pre * hermite_product_integral(n);
  };
}

InhomogeneousPolynomial oscillator_nonlinearity(const OscillatorModel& model, const PowerCoefficients& coefficients,
                                                int kmax) {
  return collect(model.spectrum, coefficients, kmax,
                 [&](int q, double a) { return oscillator_form(model, q, a); });
}

}  // namespace bnf
