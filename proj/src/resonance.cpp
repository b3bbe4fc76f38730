#include "resonance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "errors.hpp"

namespace bnf {

namespace {

// Positive and negative parts summed separately in sorted order, so that
// exactly paired frequencies cancel to an exact zero.
double signed_sum(std::vector<double>& plus, std::vector<double>& minus) {
  std::sort(plus.begin(), plus.end());
  std::sort(minus.begin(), minus.end());
  double a = 0.0, b = 0.0;
  for (double x : plus) a += x;
  for (double x : minus) b += x;
  return a - b;
}

std::vector<double> distinct_frequencies(const FrequencySpectrum& spectrum, int k) {
  std::vector<double> v;
  for (int j : spectrum.members(k)) v.push_back(spectrum.omega(j));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double small_divisor(const std::vector<int>& modes, const std::vector<int>& sigma, const FrequencySpectrum& spectrum) {
  require(modes.size() == sigma.size(), ErrorKind::InvalidArgument, "mode and sign tuples differ in length");
  std::vector<double> plus, minus;
  for (size_t l = 0; l < modes.size(); ++l) {
    require(modes[l] >= 0 && static_cast<size_t>(modes[l]) < spectrum.size(), ErrorKind::InvalidArgument,
            "mode index out of range");
    (sigma[l] > 0 ? plus : minus).push_back(spectrum.omega(modes[l]));
  }
  return signed_sum(plus, minus);
}

DivisorReport divisor_report(const MonomialKey& key, const FrequencySpectrum& spectrum, size_t budget) {
  DivisorReport rep;
  rep.key = key;
  const int q = key.q;
  std::vector<std::vector<double>> values(q);
  double total = 1.0;
  for (int l = 0; l < q; ++l) {
    require(key.k(l) <= spectrum.cluster_count(), ErrorKind::InvalidArgument, "key cluster beyond the truncation");
    values[l] = distinct_frequencies(spectrum, key.k(l));
    rep.cs_factor *= std::sqrt(static_cast<double>(spectrum.dim(key.k(l))));
    total *= static_cast<double>(values[l].size());
  }
  if (total == 0.0) {
    rep.min_divisor = std::numeric_limits<double>::infinity();
    rep.gamma_certificate = rep.min_divisor;
    return rep;
  }
  if (total > static_cast<double>(budget))
    fail(ErrorKind::ProductTooLarge, key.to_string() + " needs " + std::to_string(static_cast<long long>(total)) +
                                         " divisor evaluations, budget is " + std::to_string(budget));
  std::vector<size_t> idx(q, 0);
  std::vector<double> plus, minus;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    plus.clear();
    minus.clear();
    for (int l = 0; l < q; ++l) (key.sigma(l) > 0 ? plus : minus).push_back(values[l][idx[l]]);
    best = std::min(best, std::abs(signed_sum(plus, minus)));
    ++rep.enumerated;
    int l = q - 1;
    while (l >= 0 && ++idx[l] == values[l].size()) idx[l--] = 0;
    if (l < 0) break;
  }
  rep.min_divisor = best;
  rep.gamma_certificate = best / rep.cs_factor;
  return rep;
}

ResonanceDecision is_gamma_resonant(const MonomialKey& key, double gamma, const FrequencySpectrum& spectrum,
                                    size_t budget) {
  require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
  DivisorReport rep = divisor_report(key, spectrum, budget);
  return {!(rep.gamma_certificate >= gamma), rep};
}

const char* type_name(ResonanceType type) {
  switch (type) {
    case ResonanceType::NonResonant: return "NonResonant";
    case ResonanceType::TypeI: return "TypeI";
    case ResonanceType::TypeII: return "TypeII";
    case ResonanceType::TypeIII: return "TypeIII";
    case ResonanceType::Anomalous: return "Anomalous";
  }
  return "?";
}

bool indicator_sum_vanishes(const MonomialKey& key) {
  // keys are sorted, so equal clusters are adjacent
  int i = 0;
  while (i < key.q) {
    int k = key.k(i), s = 0;
    for (; i < key.q && key.k(i) == k; ++i) s += key.sigma(i);
    if (s != 0) return false;
  }
  return true;
}

ResonanceClass classify(const MonomialKey& key, int threshold, double gamma, const FrequencySpectrum& spectrum,
                        size_t budget) {
  auto dec = is_gamma_resonant(key, gamma, spectrum, budget);
  ResonanceClass c{ResonanceType::Anomalous, threshold, gamma, dec.report};
  const int q = key.q;
  const int k1 = key.k(0), k2 = q > 1 ? key.k(1) : 0, k3 = q > 2 ? key.k(2) : 0;
  if (!dec.resonant) c.type = ResonanceType::NonResonant;
  else if (k3 > threshold) c.type = ResonanceType::TypeI;
  else if (k1 <= threshold && indicator_sum_vanishes(key)) c.type = ResonanceType::TypeII;
  else if (k2 > threshold && threshold >= k3 && key.sigma(0) == -key.sigma(1)) c.type = ResonanceType::TypeIII;
  return c;
}

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const size_t w = std::min<size_t>(n, static_cast<size_t>(std::max(1, workers)));
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (size_t t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<MassScanRow> mass_scan(const FrequencyFamily& family, const std::vector<double>& grid, int q, int kmax,
                                   double gamma, int workers, size_t budget) {
  require(!grid.empty(), ErrorKind::InvalidArgument, "mass grid is empty");
  require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
  std::vector<MassScanRow> rows(grid.size());
  parallel_for(grid.size(), workers, [&](size_t i) {
    SpectrumPtr spectrum = family(grid[i]);
    MassScanRow row{grid[i], std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), {}, 0,
                    0};
    for (const auto& key : canonical_keys(q, kmax, *spectrum)) {
      if (indicator_sum_vanishes(key)) continue;
      DivisorReport rep = divisor_report(key, *spectrum, budget);
      ++row.keys_scanned;
      if (rep.gamma_certificate < gamma) ++row.resonant_count;
      if (rep.gamma_certificate < row.worst_certificate) {
        row.worst_certificate = rep.gamma_certificate;
        row.worst_min_divisor = rep.min_divisor;
        row.worst_key = key;
      }
    }
    rows[i] = row;
  });
  return rows;
}

}  // namespace bnf
