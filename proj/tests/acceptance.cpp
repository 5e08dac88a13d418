// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fraceig/asymptotics.hpp"
#include "fraceig/cli.hpp"
#include "fraceig/eigensolve.hpp"
#include "fraceig/functional.hpp"
#include "oracles.hpp"
#include "shooting.hpp"

using namespace fraceig;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_seconds, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(seconds < budget_seconds, "runtime " + fmt(seconds) + " s over budget " + fmt(budget_seconds) + " s");
  if (!v.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s) %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
              v.detail.c_str());
  std::fflush(stdout);
}

std::size_t violations(const std::vector<double>& errors) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (std::abs(errors[i]) > std::abs(errors[i - 1])) ++count;
  return count;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

const std::vector<double> kSweepS{0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};

}  // namespace

int main() {
  criterion(1, "K(N,p) quadrature vs closed form", 1.0, [](Verdict& v) {
    double worst = 0.0;
    for (int dim : {1, 2, 3})
      for (double p : {1.5, 2.0, 3.0, 10.0}) worst = std::max(worst, oracle::rel(k_constant(dim, p), k_constant_closed_form(dim, p)));
    v.require(worst < 1e-10, "max relative error " + fmt(worst));
    v.note("max relative error " + fmt(worst, "%.2e"));
  });

  criterion(2, "optimized energies vs all-pairs references", 10.0, [](Verdict& v) {
    std::mt19937_64 rng(2024);
    const auto kernel = Kernel::periodic_product(2.0, 1.0, 3);
    double worst = 0.0;
    for (const auto& d : {build_interval(1.0, 64), build_box(1.0, 1.0, 16)})
      for (const FracParams fp : {FracParams{0.5, 2.0, {}}, FracParams{0.85, 3.0, {}}, FracParams{0.3, 1.5, {}}}) {
        const auto u = oracle::random_function(d, rng);
        worst = std::max(worst, oracle::rel(gagliardo_energy(u, fp), oracle::energy(u, fp)));
        worst = std::max(worst, oracle::rel(weighted_energy(u, fp, kernel), oracle::energy(u, fp, &kernel)));
        for (double alpha : {0.25, 0.6})
          worst = std::max(worst, oracle::rel(holder_quotient_sup(u, alpha), oracle::holder(u, alpha)));
      }
    v.require(worst < 1e-12, "max relative deviation " + fmt(worst));
    v.note("max relative deviation " + fmt(worst, "%.2e"));
  });

  criterion(3, "homogeneity, convexity, evenness, kernel sandwich", 10.0, [](Verdict& v) {
    std::mt19937_64 rng(77);
    const auto kernel = Kernel::periodic_product(2.0, 0.75, 4);
    double worst = 0.0;
    int checked = 0;
    for (const auto& d : {build_interval(1.0, 48), build_box(1.0, 1.0, 10)})
      for (int trial = 0; trial < 25; ++trial) {
        const FracParams fp{0.2 + 0.03 * trial, 1.5 + 0.1 * trial, {}};
        const auto u = oracle::random_function(d, rng);
        const auto w = oracle::random_function(d, rng);
        const double eu = gagliardo_energy(u, fp);
        for (double c : {-3.0, 0.5}) {
          worst = std::max(worst, oracle::rel(f_n(c * u, fp), std::abs(c) * f_n(u, fp)));
          worst = std::max(worst, oracle::rel(gagliardo_energy(c * u, fp), std::pow(std::abs(c), fp.p) * eu));
        }
        worst = std::max(worst, oracle::rel(gagliardo_energy(-u, fp), eu));
        const double mid = f_n(0.5 * (u + w), fp);
        const double chord = 0.5 * (f_n(u, fp) + f_n(w, fp));
        v.require(mid <= chord * (1.0 + 1e-12), "midpoint convexity");
        const double plain = eu / (1.0 - fp.s);
        const double weighted = weighted_energy(u, fp, kernel);
        v.require(kernel.lower() * plain <= weighted * (1.0 + 1e-12), "sandwich lower bound");
        v.require(weighted <= kernel.upper() * plain * (1.0 + 1e-12), "sandwich upper bound");
        ++checked;
      }
    v.require(worst < 1e-12, "max homogeneity/evenness deviation " + fmt(worst));
    v.note(std::to_string(checked) + " functions, max deviation " + fmt(worst, "%.2e"));
  });

  criterion(4, "s -> 1 at p = 2, n = 256, extrapolated lambda_k vs (k pi)^2", 120.0, [](Verdict& v) {
    const auto d = build_interval(1.0, 256);
    for (int k : {1, 2, 3}) {
      const auto r = sweep_s(d, 2.0, k, kSweepS);
      const double want = std::pow(k * std::numbers::pi, 2);
      const double err = std::abs(*r.extrapolated - want) / want;
      v.require(err < (k == 1 ? 0.03 : 0.05), "k=" + std::to_string(k) + " error " + fmt(err));
      v.note("k=" + std::to_string(k) + ": " + fmt(*r.extrapolated, "%.5g") + " (" + fmt(100 * err, "%.2f") +
             "%, monotonicity violations " + std::to_string(violations(r.rel_errors)) + ")");
    }
  });

  criterion(5, "s -> 1 at p = 3, n = 128, vs (2/3) lambda_{1,3}", 300.0, [](Verdict& v) {
    const double local = local_eigenvalue_1d(1, 3.0, 1.0);
    const double shoot = oracle::shooting_first_eigenvalue(3.0);
    const double shoot_err = oracle::rel(local, shoot);
    v.require(shoot_err < 1e-6, "closed form vs shooting " + fmt(shoot_err));
    const auto r = sweep_s(build_interval(1.0, 128), 3.0, 1, kSweepS);
    const double want = 2.0 / 3.0 * local;
    const double err = std::abs(*r.extrapolated - want) / want;
    v.require(r.all_converged, "solver convergence");
    v.require(err < 0.10, "extrapolation error " + fmt(err));
    v.note("shooting agreement " + fmt(shoot_err, "%.1e") + ", extrapolated " + fmt(*r.extrapolated, "%.5g") +
           " vs " + fmt(want, "%.5g") + " (" + fmt(100 * err, "%.2f") + "%)");
  });

  criterion(6, "p -> infinity, alpha = 0.5, n = 128, lambda^(1/p) vs 2^0.5", 600.0, [](Verdict& v) {
    const auto r = sweep_p(build_interval(1.0, 128), 0.5, {8, 16, 24, 32, 40});
    const double first = std::abs(r.rel_errors.front());
    const double last = std::abs(r.rel_errors.back());
    v.require(r.all_converged, "solver convergence");
    v.require(last < 0.15, "error at p=40 " + fmt(last));
    v.require(last < first, "trend: |error(40)| >= |error(8)|");
    v.note("errors p=8: " + fmt(100 * r.rel_errors.front(), "%.2f") + "%, p=40: " +
           fmt(100 * r.rel_errors.back(), "%.2f") + "%");
  });

  criterion(7, "infinity certificate ratio equals R^-alpha", 1.0, [](Verdict& v) {
    double worst = 0.0;
    for (const auto& d : {build_interval(1.0, 64), build_box(1.0, 1.0, 16), build_box(2.0, 1.0, 16)})
      for (double alpha : {0.25, 0.5, 0.75}) {
        const auto cert = infinity_eigen_certificate(d, alpha);
        v.require(!cert.degraded, "incenter node present");
        v.require(cert.lambda == std::pow(inradius(*d), -alpha), "lambda = R^-alpha");
        worst = std::max(worst, oracle::rel(cert.certified_ratio, cert.lambda));
      }
    v.require(worst < 1e-12, "max deviation " + fmt(worst));
    v.note("max deviation " + fmt(worst, "%.2e"));
  });

  criterion(8, "homogenization, p = 2, s = 0.5, n = 128", 120.0, [](Verdict& v) {
    const auto r = homogenization_sweep(build_interval(1.0, 128), {0.5, 2.0, {}},
                                        Kernel::periodic_product(2.0, 1.0, 1), {1, 2, 4, 8, 16});
    const double last = std::abs(r.rel_errors.back());
    const auto bad = violations(r.rel_errors);
    v.require(last < 0.02, "error at frequency 16 " + fmt(last));
    v.require(bad <= 1, std::to_string(bad) + " monotonicity violations");
    std::string errs;
    for (double e : r.rel_errors) errs += (errs.empty() ? "" : ", ") + fmt(100 * std::abs(e), "%.2f") + "%";
    v.note("errors " + errs);
  });

  criterion(9, "nonlinear solver vs dense spectrum at p = 2", 60.0, [](Verdict& v) {
    double worst = 0.0;
    for (int n : {32, 64, 128}) {
      const auto d = build_interval(1.0, n);
      SolverOptions opt;
      opt.record_history = true;
      const auto r = first_eigenpair(d, {0.5, 2.0, {}}, opt);
      bool decreasing = r.monotone;
      for (std::size_t i = 1; i < r.history.size(); ++i) decreasing = decreasing && r.history[i] <= r.history[i - 1];
      v.require(r.converged, "converged at n=" + std::to_string(n));
      v.require(decreasing, "monotone quotient at n=" + std::to_string(n));
      worst = std::max(worst, oracle::rel(r.lambda, spectrum_linear(d, 0.5, 1)[0].lambda));
    }
    v.require(worst < 1e-6, "max relative deviation " + fmt(worst));
    v.note("max relative deviation " + fmt(worst, "%.2e"));
  });

  criterion(10, "Hausdorff metric axioms on 100 random sets", 5.0, [](Verdict& v) {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> size(1, 5);
    const auto d = build_box(1.0, 1.0, 6);
    std::vector<std::vector<GridFunction>> sets;
    for (int i = 0; i < 100; ++i) {
      std::vector<GridFunction> set;
      for (int j = size(rng); j > 0; --j) set.push_back(oracle::random_function(d, rng));
      sets.push_back(std::move(set));
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const auto& a = sets[i];
      const auto& b = sets[(i + 1) % sets.size()];
      const auto& c = sets[(i + 37) % sets.size()];
      for (double q : {1.0, 2.0, 3.0}) {
        v.require(hausdorff_distance(a, a, q) == 0.0, "identity");
        const double ab = hausdorff_distance(a, b, q);
        v.require(ab > 0.0, "positivity");
        v.require(ab == hausdorff_distance(b, a, q), "symmetry");
        v.require(ab <= hausdorff_distance(a, c, q) + hausdorff_distance(c, b, q) + 1e-12, "triangle inequality");
      }
    }
    v.note("300 triples checked");
  });

  criterion(11, "reports re-run from embedded config are bit-identical (1 and 4 threads)", 120.0, [](Verdict& v) {
    const auto dir = fs::temp_directory_path() / "fraceig_acceptance";
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> runs{
        {"sweep-s", "--p", "3", "--n", "64", "--s", "0.6:0.9:4"},
        {"sweep-p", "--n", "48", "--alpha", "0.5", "--p", "8,16"},
        {"homogenize", "--n", "64", "--frequencies", "1,4"},
        {"eig1", "--domain", "box", "--n", "10", "--s", "0.7", "--p", "2.5"},
        {"spectrum", "--domain", "box", "--n", "12", "--k", "4"},
    };
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string prefix = (dir / ("report" + std::to_string(i))).string();
      auto args = runs[i];
      args.insert(args.end(), {"--output", prefix});
      setenv("FRACEIG_THREADS", "1", 1);
      v.require(run_cli(args) == 0, runs[i][0] + " exit code");
      const auto json_text = slurp(prefix + ".json");
      const auto csv_text = slurp(prefix + ".csv");
      const auto config = dir / ("report" + std::to_string(i) + ".toml");
      std::ofstream(config) << nlohmann::json::parse(json_text)["config"].get<std::string>();
      for (const char* threads : {"4", "1"}) {
        fs::remove(prefix + ".json");
        fs::remove(prefix + ".csv");
        setenv("FRACEIG_THREADS", threads, 1);
        v.require(run_cli({runs[i][0], "--config", config.string()}) == 0, runs[i][0] + " re-run exit code");
        v.require(slurp(prefix + ".json") == json_text, runs[i][0] + " JSON differs with " + threads + " threads");
        v.require(slurp(prefix + ".csv") == csv_text, runs[i][0] + " CSV differs with " + threads + " threads");
      }
    }
    unsetenv("FRACEIG_THREADS");
    v.note(std::to_string(runs.size()) + " reports re-run under 4 and 1 threads");
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
