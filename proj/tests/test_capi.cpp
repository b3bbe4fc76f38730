#include <bnf/bnf.h>
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("bnf_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BNF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const char* kCircle =
    "[spectrum]\nfamily = kg_circle\nmass = 0.537\nlambda_max = 4\n[nonlinearity]\ncoefficients = 3:1\n"
    "[normalform]\nr = 4\ngamma = 1e-3\n";

}  // namespace

TEST_CASE("model handles through the C API") {
  bnf_spectrum* s = nullptr;
  bnf_polynomial* p = nullptr;
  REQUIRE(bnf_model_from_config(kCircle, &s, &p) == BNF_OK);
  CHECK(bnf_spectrum_size(s) == 9);
  CHECK(bnf_spectrum_cluster_count(s) == 5);
  CHECK(bnf_spectrum_frequency(s, 0) == doctest::Approx(std::sqrt(0.537)));
  CHECK(bnf_spectrum_cluster_of(s, 2) == 2);
  std::vector<double> u(18, 0.01), g(18);
  double v = 0;
  CHECK(bnf_polynomial_evaluate(p, u.data(), 9, &v) == BNF_OK);
  CHECK(v != 0.0);
  CHECK(bnf_polynomial_gradient(p, u.data(), 9, g.data()) == BNF_OK);
  CHECK(bnf_polynomial_evaluate(p, u.data(), 3, &v) == BNF_ERR_INVALID);
  CHECK(std::string(bnf_last_error()).find("mismatch") != std::string::npos);

  bnf_normal_form* nf = nullptr;
  REQUIRE(bnf_normal_form_compute(p, 1e-3, 4, 1, &nf) == BNF_OK);
  char* diag = nullptr;
  REQUIRE(bnf_normal_form_diagnostics(nf, &diag) == BNF_OK);
  CHECK(std::string(diag).find("\"residual\"") != std::string::npos);
  bnf_string_free(diag);
  char* chi = nullptr;
  REQUIRE(bnf_normal_form_chi(nf, &chi) == BNF_OK);
  CHECK(std::string(chi).rfind("bnf-polynomial 1", 0) == 0);
  bnf_string_free(chi);

  bnf_polynomial* b = nullptr;
  CHECK(bnf_polynomial_bracket(p, 3, p, 3, &b) == BNF_OK);
  CHECK(bnf_polynomial_bracket(p, 5, p, 3, &b) == BNF_ERR_INVALID);
  bnf_polynomial_free(b);
  bnf_normal_form_free(nf);
  bnf_polynomial_free(p);
  bnf_spectrum_free(s);
}

TEST_CASE("explicit spectra, monomials and resonance queries") {
  const double w[] = {1.0, 2.0};
  const int c[] = {1, 2};
  bnf_spectrum* s = nullptr;
  REQUIRE(bnf_spectrum_from_frequencies(w, c, 2, 1, 1, 1, &s) == BNF_OK);
  const int k[] = {2, 1, 1}, sg[] = {-1, 1, 1};
  double dmin = -1, cert = -1;
  CHECK(bnf_divisor(s, 3, k, sg, &dmin, &cert) == BNF_OK);
  CHECK(dmin == 0.0);
  bnf_resonance_type t;
  CHECK(bnf_classify(s, 3, k, sg, 3, 1e-3, &t) == BNF_OK);
  CHECK(t == BNF_ANOMALOUS);
  const int bad[] = {3, 1, 1};
  CHECK(bnf_divisor(s, 3, bad, sg, &dmin, &cert) == BNF_ERR_INVALID);

  bnf_polynomial* p = nullptr;
  REQUIRE(bnf_polynomial_new(s, 0, 0, &p) == BNF_OK);
  const int modes[] = {0, 0, 1};
  CHECK(bnf_polynomial_add_monomial(p, 3, modes, sg + 0, 1.0, 0.0) == BNF_OK);
  const double u[] = {0.5, 0.0, 0.25, 0.0};
  double v = 0;
  CHECK(bnf_polynomial_evaluate(p, u, 2, &v) == BNF_OK);
  // conj(u_0) u_0 u_1 * 2 with the sign pattern (-, +, +)
  CHECK(v == doctest::Approx(2 * 0.25 * 0.25));
  bnf_normal_form* nf = nullptr;
  CHECK(bnf_normal_form_compute(p, 1e-3, 2, 1, &nf) == BNF_ERR_INVALID);
  bnf_polynomial_free(p);
  bnf_spectrum_free(s);
}

TEST_CASE("status codes map to exit codes") {
  CHECK(bnf_exit_code(BNF_OK) == 0);
  CHECK(bnf_exit_code(BNF_ERR_CONFIG) == 2);
  CHECK(bnf_exit_code(BNF_ERR_INVALID) == 2);
  CHECK(bnf_exit_code(BNF_ERR_NUMERICAL) == 3);
  CHECK(bnf_exit_code(BNF_ERR_BUDGET) == 4);
  CHECK(bnf_exit_code(BNF_ERR_IO) == 1);
  CHECK(bnf_config_validate("[spectrum]\nmas = 1\n") == BNF_ERR_CONFIG);
  CHECK(std::string(bnf_version()) == "0.1.0");
}

TEST_CASE("CLI outputs are deterministic and carry the manifest hash") {
  auto dir = scratch("determinism");
  std::ofstream(dir / "c.ini") << kCircle << "[state]\nrandom_phases = true\n";
  const std::string cfg = (dir / "c.ini").string();
  REQUIRE(run_cli("clusters --config " + cfg + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli("clusters --config " + cfg + " --out " + (dir / "b").string()) == 0);
  const auto a = slurp(dir / "a" / "clusters.csv");
  CHECK(a == slurp(dir / "b" / "clusters.csv"));
  CHECK(a.rfind("# manifest: ", 0) == 0);
  const std::string hash = a.substr(12, 64);
  CHECK(slurp(dir / "a" / "slack.json").find(hash) != std::string::npos);
  CHECK(slurp(dir / "a" / "manifest.json").find(hash) != std::string::npos);

  REQUIRE(run_cli("nf --config " + cfg + " --seed 5 --out " + (dir / "n1").string()) == 0);
  REQUIRE(run_cli("nf --config " + cfg + " --seed 5 --out " + (dir / "n2").string()) == 0);
  CHECK(slurp(dir / "n1" / "chi.txt") == slurp(dir / "n2" / "chi.txt"));
  CHECK(slurp(dir / "n1" / "diagnostics.json") == slurp(dir / "n2" / "diagnostics.json"));
  REQUIRE(run_cli("nf --config " + cfg + " --seed 6 --out " + (dir / "n3").string()) == 0);
  CHECK(slurp(dir / "n1" / "manifest.json") != slurp(dir / "n3" / "manifest.json"));
}

TEST_CASE("CLI exit codes") {
  auto dir = scratch("exit");
  std::ofstream(dir / "bad.ini") << "[spectrum]\nmas = 1\n";
  std::ofstream(dir / "weyl.ini") << "[spectrum]\nfamily = kg_generic_spectrum\neigenvalues = 0.5 0.5 0.5 0.5\n"
                                     "weyl_constant = 1\n";
  std::ofstream(dir / "radius.ini") << kCircle << "amplitudes = 0.5\n";
  std::ofstream(dir / "budget.ini") << "[spectrum]\nfamily = explicit\nfrequencies = 1.0 1.1 1.2 3.3\n"
                                       "clusters = 1 1 1 2\n[nonlinearity]\nmonomial = 1 0 : 1+ 2+ 3-\n"
                                       "[normalform]\nr = 3\ngamma = 1e-3\nbudget = 2\n";
  const std::string out = " --out " + (dir / "o").string();
  CHECK(run_cli("clusters --config " + (dir / "bad.ini").string() + out) == 2);
  CHECK(run_cli("clusters --config " + (dir / "weyl.ini").string() + out) == 2);
  CHECK(run_cli("nf --config " + (dir / "radius.ini").string() + out) == 3);
  CHECK(run_cli("nf --config " + (dir / "budget.ini").string() + out) == 4);
  CHECK(run_cli("frobnicate" + out) == 2);
  CHECK(run_cli("clusters --config /nonexistent.ini" + out) == 2);
}

TEST_CASE("zero nonlinearity simulation keeps the super actions constant") {
  auto dir = scratch("free");
  std::ofstream(dir / "free.ini") << "[spectrum]\nlambda_max = 3\n[nonlinearity]\ncoefficients = 3:0\n"
                                     "[flow]\nT = 20\n[state]\namplitude = 0.1\n";
  REQUIRE(run_cli("simulate --config " + (dir / "free.ini").string() + " --out " + (dir / "o").string()) == 0);
  std::istringstream csv(slurp(dir / "o" / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  std::vector<std::string> first;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (first.empty()) first = cells;
    for (size_t i = 7; i < cells.size(); ++i) CHECK(std::stod(cells[i]) == doctest::Approx(std::stod(first[i])));
    ++rows;
  }
  CHECK(rows > 3);
}
