#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"
#include "models.hpp"
#include "polynomial.hpp"

namespace bnf {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  int workers = 1;
  std::optional<double> tol;
};

// sha256 over command, config text, seed, tolerance and tool version
std::string manifest_hash(const std::string& command, const std::string& config_text, uint64_t seed,
                          std::optional<double> tol);

struct ModelBundle {
  std::string family;
  SpectrumPtr spectrum;
  ClusterDecomposition decomposition;
  std::optional<CircleModel> circle;
  std::optional<OscillatorModel> oscillator;
};

ModelBundle build_model(const Config& config);
InhomogeneousPolynomial build_nonlinearity(const Config& config, const ModelBundle& model);
// Unscaled initial profile from [state].
StateVector build_profile(const Config& config, const FrequencySpectrum& spectrum, uint64_t seed);

void run_command(const RunOptions& options);

}  // namespace bnf
