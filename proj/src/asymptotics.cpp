#include "fraceig/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace fraceig {

const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::s_to_one: return "s-to-1";
    case SweepKind::p_to_infinity: return "p-to-infty";
    case SweepKind::homogenization: return "homogenization";
  }
  return "unknown";
}

namespace {

constexpr double kMaxSweepS = 0.99;

void require_ascending(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": parameter list is empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument(std::string(what) + ": parameters must be strictly ascending");
}

/// Same geometry with half as many intervals, when that is representable.
std::optional<DomainPtr> coarsen(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::interval:
      if (d.intervals(0) % 2 == 0 && d.intervals(0) / 2 >= 3) return build_interval(d.extent(0), d.intervals(0) / 2);
      return std::nullopt;
    case DomainKind::box:
      if (d.intervals(0) % 2 == 0 && d.intervals(1) % 2 == 0 && d.intervals(1) / 2 >= 2)
        return build_box(d.extent(0), d.extent(1), d.intervals(0) / 2);
      return std::nullopt;
    case DomainKind::masked:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<RefinementCheck> refine(const DomainPtr& domain, double parameter, double fine_value,
                                      const std::function<double(const DomainPtr&)>& compute) {
  const auto coarse = coarsen(*domain);
  if (!coarse) return std::nullopt;
  RefinementCheck check;
  check.parameter = parameter;
  check.n_coarse = (*coarse)->intervals(0);
  check.value_coarse = compute(*coarse);
  check.n_fine = domain->intervals(0);
  check.value_fine = fine_value;
  check.relative_change = (fine_value - check.value_coarse) / fine_value;
  return check;
}

double symmetric_pair_distance(const GridFunction& u, const GridFunction& v, double q) {
  return hausdorff_distance({u, -u}, {v, -v}, q);
}

void finish(SweepReport& report) {
  report.rel_errors.clear();
  for (double v : report.values) report.rel_errors.push_back((v - report.reference) / report.reference);
  if (report.parameters.size() >= 3) report.extrapolated = richardson_extrapolate(report.parameters, report.values);
}

/// Length of the 1D interior run, or throws when it is not contiguous.
double interval_length(const Domain& d) {
  const auto lattice = d.lattice();
  int lo = lattice.front().ix, hi = lattice.front().ix;
  for (const auto& node : lattice) {
    lo = std::min(lo, node.ix);
    hi = std::max(hi, node.ix);
  }
  if (static_cast<std::size_t>(hi - lo + 1) != lattice.size())
    throw std::invalid_argument("sweep: 1D reference needs a contiguous interval");
  return (hi - lo + 2) * d.spacing();
}

}  // namespace

SweepReport sweep_s(const DomainPtr& domain, double p, int k, const std::vector<double>& s_values,
                    const SweepOptions& options) {
  if (!domain) throw std::invalid_argument("sweep_s: null domain");
  require_ascending(s_values, "sweep_s");
  for (double s : s_values)
    if (!(s > 0.0 && s <= kMaxSweepS))
      throw std::invalid_argument("sweep_s: s values must lie in (0, 0.99]");
  if (k < 1) throw std::invalid_argument("sweep_s: k must be >= 1");
  if (k > 1 && p != 2.0) throw std::invalid_argument("sweep_s: k > 1 requires p = 2");
  if (domain->dim() == 2 && p != 2.0) throw std::invalid_argument("sweep_s: 2D sweeps require p = 2");
  if (static_cast<std::size_t>(k) > domain->interior_count())
    throw std::invalid_argument("sweep_s: k exceeds the number of interior nodes");
  options.solver.validate();

  SweepReport report;
  report.kind = SweepKind::s_to_one;
  report.k = k;
  report.n = domain->intervals(0);
  report.h = domain->spacing();
  report.note = "s values are capped at 0.99; the grid is fixed along the sweep";
  const int dim = domain->dim();
  if (dim == 1)
    report.reference = k_constant(1, p) * local_eigenvalue_1d(k, p, interval_length(*domain));
  else
    report.reference = k_constant(2, 2.0) * local_spectrum_fd(*domain, k).back();

  auto solve = [&](const DomainPtr& d, double s, GridFunction* eigenfunction) {
    if (p == 2.0) {
      auto pairs = spectrum_linear(d, s, k);
      if (eigenfunction) *eigenfunction = pairs.back().eigenfunction;
      return pairs.back().lambda;
    }
    auto result = first_eigenpair(d, FracParams{s, p, std::nullopt}, options.solver);
    if (!result.converged) report.all_converged = false;
    if (eigenfunction) *eigenfunction = result.eigenfunction;
    return result.lambda;
  };

  std::optional<GridFunction> previous;
  for (double s : s_values) {
    GridFunction u = GridFunction::zeros(domain);
    report.parameters.push_back(s);
    report.values.push_back(solve(domain, s, &u));
    if (previous) report.eigenfunction_distances.push_back(symmetric_pair_distance(*previous, u, p));
    previous = std::move(u);
  }
  finish(report);
  if (options.refinement)
    report.refinement = refine(domain, s_values.back(), report.values.back(),
                               [&](const DomainPtr& d) { return solve(d, s_values.back(), nullptr); });
  return report;
}

SweepReport sweep_p(const DomainPtr& domain, double alpha, const std::vector<double>& p_values,
                    const SweepOptions& options) {
  if (!domain) throw std::invalid_argument("sweep_p: null domain");
  require_ascending(p_values, "sweep_p");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("sweep_p: alpha must lie in (0, 1)");
  const int dim = domain->dim();
  if (!(alpha * p_values.front() > dim))
    throw std::invalid_argument("sweep_p: alpha * min(p) must exceed N so that s_p > 0");
  options.solver.validate();

  SweepReport report;
  report.kind = SweepKind::p_to_infinity;
  report.n = domain->intervals(0);
  report.h = domain->spacing();
  report.reference = infinity_eigen_certificate(domain, alpha).lambda;
  report.note = "s_p = alpha - N/p; values are lambda^(1/p)";

  auto solve = [&](const DomainPtr& d, double p, GridFunction* eigenfunction) {
    auto result = first_eigenpair(d, FracParams::holder_coupled(alpha, p, dim), options.solver);
    if (!result.converged) report.all_converged = false;
    if (eigenfunction) *eigenfunction = result.eigenfunction;
    return std::pow(result.lambda, 1.0 / p);
  };

  std::optional<GridFunction> previous;
  for (double p : p_values) {
    GridFunction u = GridFunction::zeros(domain);
    report.parameters.push_back(p);
    report.values.push_back(solve(domain, p, &u));
    if (previous) report.eigenfunction_distances.push_back(symmetric_pair_distance(*previous, u, p));
    previous = std::move(u);
  }
  finish(report);
  if (options.refinement)
    report.refinement = refine(domain, p_values.back(), report.values.back(),
                               [&](const DomainPtr& d) { return solve(d, p_values.back(), nullptr); });
  return report;
}

SweepReport homogenization_sweep(const DomainPtr& domain, const FracParams& params, const Kernel& family,
                                 const std::vector<int>& frequencies, const SweepOptions& options) {
  if (!domain) throw std::invalid_argument("homogenization: null domain");
  params.validate();
  if (family.rule() != Kernel::Rule::periodic_product && family.rule() != Kernel::Rule::constant)
    throw std::invalid_argument("homogenization: the family must be a periodic-product or constant kernel");
  if (frequencies.empty()) throw std::invalid_argument("homogenization: frequency list is empty");
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (frequencies[i] < 1) throw std::invalid_argument("homogenization: frequencies must be >= 1");
    if (i > 0 && frequencies[i] <= frequencies[i - 1])
      throw std::invalid_argument("homogenization: frequencies must be strictly ascending");
  }
  options.solver.validate();

  SweepReport report;
  report.kind = SweepKind::homogenization;
  report.n = domain->intervals(0);
  report.h = domain->spacing();
  report.note = "first eigenvalue of the weighted energy (no (1-s) factor); reference uses the average kernel";

  auto solve = [&](const DomainPtr& d, const Kernel& kernel) {
    if (params.p == 2.0) return spectrum_linear_weighted(d, params.s, kernel, 1).front().lambda;
    auto result = first_eigenpair_weighted(d, params, kernel, options.solver);
    if (!result.converged) report.all_converged = false;
    return result.lambda;
  };

  report.reference = solve(domain, kernel_average(family));
  for (int f : frequencies) {
    report.parameters.push_back(f);
    report.values.push_back(solve(domain, family.with_frequency(f)));
  }
  for (double v : report.values) report.rel_errors.push_back((v - report.reference) / report.reference);
  if (options.refinement) {
    const Kernel last = family.with_frequency(frequencies.back());
    report.refinement = refine(domain, frequencies.back(), report.values.back(),
                               [&](const DomainPtr& d) { return solve(d, last); });
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct Fit {
  double residual;
  double limit;
};

Fit fit_at(double theta, const std::vector<double>& eps, const Eigen::VectorXd& y, bool two_terms) {
  const auto rows = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixXd a(rows, two_terms ? 3 : 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double e = std::pow(eps[static_cast<std::size_t>(i)], theta);
    a(i, 0) = 1.0;
    a(i, 1) = e;
    if (two_terms) a(i, 2) = e * e;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  return {(a * c - y).squaredNorm(), c[0]};
}

}  // namespace

double richardson_extrapolate(const std::vector<double>& params, const std::vector<double>& values) {
  if (params.size() != values.size()) throw std::invalid_argument("richardson: size mismatch");
  if (params.size() < 3) throw std::invalid_argument("richardson: at least 3 points are required");
  const bool increasing = params[1] > params[0];
  for (std::size_t i = 1; i < params.size(); ++i)
    if (increasing ? !(params[i] > params[i - 1]) : !(params[i] < params[i - 1]))
      throw std::invalid_argument("richardson: parameters must be strictly monotone");
  const bool unit = std::all_of(params.begin(), params.end(), [](double x) { return x > 0.0 && x < 1.0; });
  const bool large = std::all_of(params.begin(), params.end(), [](double x) { return x > 1.0; });
  if (!unit && !large) throw std::invalid_argument("richardson: parameters must all lie in (0,1) or all exceed 1");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("richardson: values must be finite");

  std::vector<double> eps(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) eps[i] = unit ? 1.0 - params[i] : 1.0 / params[i];
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const bool two_terms = params.size() >= 5;

  constexpr int kGrid = 64;
  const double lo = std::log(0.05), hi = std::log(4.0);
  std::vector<double> thetas(kGrid);
  std::size_t best = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    thetas[i] = std::exp(lo + (hi - lo) * i / (kGrid - 1));
    const double r = fit_at(thetas[i], eps, y, two_terms).residual;
    if (r < best_residual) {
      best_residual = r;
      best = static_cast<std::size_t>(i);
    }
  }

  // Golden-section refinement on the bracketing grid cells.
  double a = thetas[best == 0 ? 0 : best - 1];
  double b = thetas[std::min<std::size_t>(best + 1, kGrid - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = fit_at(c, eps, y, two_terms).residual, fd = fit_at(d, eps, y, two_terms).residual;
  for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = fit_at(c, eps, y, two_terms).residual;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = fit_at(d, eps, y, two_terms).residual;
    }
  }
  const Fit refined = fit_at(0.5 * (a + b), eps, y, two_terms);
  const Fit grid = fit_at(thetas[best], eps, y, two_terms);
  return refined.residual <= grid.residual ? refined.limit : grid.limit;
}

double hausdorff_distance(const std::vector<GridFunction>& a, const std::vector<GridFunction>& b, double q) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: sets must be non-empty");
  for (const auto& u : a)
    if (!u.compatible(a.front())) throw std::invalid_argument("hausdorff: all functions must share a domain");
  for (const auto& u : b)
    if (!u.compatible(a.front())) throw std::invalid_argument("hausdorff: all functions must share a domain");

  std::vector<double> dist(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) dist[i * b.size() + j] = lq_norm(a[i] - b[j], q);

  double result = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) m = std::min(m, dist[i * b.size() + j]);
    result = std::max(result, m);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, dist[i * b.size() + j]);
    result = std::max(result, m);
  }
  return result;
}

}  // namespace fraceig
