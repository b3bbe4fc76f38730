#pragma once

#include <functional>
#include <vector>

#include "polynomial.hpp"

namespace bnf {

constexpr size_t kDefaultEnumerationBudget = 10'000'000;

// sum_l sigma_l omega_{modes[l]}
double small_divisor(const std::vector<int>& modes, const std::vector<int>& sigma, const FrequencySpectrum& spectrum);

struct DivisorReport {
  MonomialKey key;
  double min_divisor = 0.0;
  double cs_factor = 1.0;
  double gamma_certificate = 0.0;
  size_t enumerated = 0;
};

// Exhaustive minimum of |sum sigma omega| over the cluster product set. Modes
// of a cluster sharing a frequency are enumerated once.
DivisorReport divisor_report(const MonomialKey& key, const FrequencySpectrum& spectrum,
                             size_t budget = kDefaultEnumerationBudget);

struct ResonanceDecision {
  bool resonant;
  DivisorReport report;
};

ResonanceDecision is_gamma_resonant(const MonomialKey& key, double gamma, const FrequencySpectrum& spectrum,
                                    size_t budget = kDefaultEnumerationBudget);

enum class ResonanceType { NonResonant, TypeI, TypeII, TypeIII, Anomalous };
const char* type_name(ResonanceType type);

struct ResonanceClass {
  ResonanceType type;
  int threshold;
  double gamma;
  DivisorReport report;
};

// sum_l sigma_l 1_{k_l} == 0
bool indicator_sum_vanishes(const MonomialKey& key);

ResonanceClass classify(const MonomialKey& key, int threshold, double gamma, const FrequencySpectrum& spectrum,
                        size_t budget = kDefaultEnumerationBudget);

using FrequencyFamily = std::function<SpectrumPtr(double mass)>;

struct MassScanRow {
  double mass;
  double worst_certificate;
  double worst_min_divisor;
  MonomialKey worst_key;
  size_t keys_scanned;
  size_t resonant_count;
};

std::vector<MassScanRow> mass_scan(const FrequencyFamily& family, const std::vector<double>& grid, int q, int kmax,
                                   double gamma, int workers = 1, size_t budget = kDefaultEnumerationBudget);

// Runs fn(i) for i in [0, n) on up to `workers` threads; the first exception is rethrown.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace bnf
