#include "fraceig/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "fraceig/parallel.hpp"

namespace fraceig {

void SolverOptions::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver: tolerance must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("solver: armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw std::invalid_argument("solver: backtrack_factor must lie in (0, 1)");
  if (!(initial_step > 0.0)) throw std::invalid_argument("solver: initial_step must be positive");
  if (lbfgs_memory < 0 || restarts < 0)
    throw std::invalid_argument("solver: lbfgs_memory and restarts must be >= 0");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  return parallel::pairwise_sum(terms);
}

/// R(v) = scale * E(v) / ||v||_p^p, 0-homogeneous in v.
class RayleighQuotient {
 public:
  RayleighQuotient(std::shared_ptr<const NonlocalStencil> stencil, std::optional<Kernel::Sampled> kernel,
                   double scale)
      : stencil_(std::move(stencil)), kernel_(std::move(kernel)), scale_(scale) {}

  std::size_t size() const { return stencil_->domain().interior_count(); }
  double p() const { return stencil_->p(); }

  double norm_p(std::span<const double> v) const {
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::pow(std::abs(v[i]), p());
    return std::pow(parallel::pairwise_sum(terms) * stencil_->domain().cell_volume(), 1.0 / p());
  }

  void normalize(std::vector<double>& v) const {
    const double norm = norm_p(v);
    for (double& x : v) x /= norm;
  }

  /// Quotient and its gradient at v.
  double evaluate(std::span<const double> v, std::span<double> gradient) const {
    const double pp = p();
    const double cell = stencil_->domain().cell_volume();
    const double energy =
        scale_ * nonlocal_energy_gradient(*stencil_, v, kernel_ ? &*kernel_ : nullptr, gradient);
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::pow(std::abs(v[i]), pp);
    const double mass = parallel::pairwise_sum(terms) * cell;
    const double quotient = energy / mass;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double dmass = pp * std::copysign(std::pow(std::abs(v[i]), pp - 1.0), v[i]) * cell;
      gradient[i] = (scale_ * gradient[i] - quotient * dmass) / mass;
    }
    if (!std::isfinite(quotient)) throw NumericError("Rayleigh quotient is not finite");
    return quotient;
  }

 private:
  std::shared_ptr<const NonlocalStencil> stencil_;
  std::optional<Kernel::Sampled> kernel_;
  double scale_;
};

struct RunOutcome {
  std::vector<double> u;
  double quotient = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool monotone = true;
};

/// Descent on the unit L^p sphere: L-BFGS (or steepest descent) direction,
/// Armijo backtracking, retraction by normalization.
RunOutcome minimize(const RayleighQuotient& rq, std::vector<double> u, const SolverOptions& opt,
                    std::vector<double>* history) {
  const std::size_t n = u.size();
  rq.normalize(u);
  std::vector<double> g(n);
  double quotient = rq.evaluate(u, g);
  if (history) history->push_back(quotient);

  RunOutcome out;
  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;  // (s, y)
  std::vector<double> d(n), trial(n), g_trial(n);
  double last_change = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    // Two-loop recursion.
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    if (!memory.empty()) {
      std::vector<double> alpha(memory.size());
      for (std::size_t k = memory.size(); k-- > 0;) {
        const auto& [s, y] = memory[k];
        alpha[k] = dot(s, d) / dot(y, s);
        for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y[i];
      }
      const auto& [s_last, y_last] = memory.back();
      const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
      for (double& x : d) x *= gamma;
      for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& [s, y] = memory[k];
        const double beta = dot(y, d) / dot(y, s);
        for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * s[i];
      }
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }
    if (slope == 0.0) {
      out.converged = true;
      break;
    }

    double step = opt.initial_step;
    bool accepted = false;
    double q_trial = 0.0;
    for (int bt = 0; bt < 80; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * d[i];
      const double norm = rq.norm_p(trial);
      if (norm > 0.0 && std::isfinite(norm)) {
        for (double& x : trial) x /= norm;
        q_trial = rq.evaluate(trial, g_trial);
        if (q_trial < quotient && q_trial <= quotient + opt.armijo_c * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= opt.backtrack_factor;
    }
    ++out.iterations;
    if (!accepted) {
      // No representable decrease left along the direction.
      out.converged = last_change < 100.0 * opt.tolerance;
      break;
    }

    if (opt.lbfgs_memory > 0) {
      std::vector<double> s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = trial[i] - u[i];
        y[i] = g_trial[i] - g[i];
      }
      const double sy = dot(s, y);
      if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y))) {
        memory.emplace_back(std::move(s), std::move(y));
        if (memory.size() > static_cast<std::size_t>(opt.lbfgs_memory)) memory.pop_front();
      }
    }

    last_change = (quotient - q_trial) / q_trial;
    if (!(q_trial < quotient)) out.monotone = false;
    u.swap(trial);
    g.swap(g_trial);
    quotient = q_trial;
    if (history) history->push_back(quotient);
    if (last_change < opt.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.u = std::move(u);
  out.quotient = quotient;
  out.residual = last_change;
  return out;
}

bool changes_sign(std::span<const double> u) {
  double max_abs = 0.0;
  for (double v : u) max_abs = std::max(max_abs, std::abs(v));
  const double cut = 1e-10 * max_abs;
  const bool pos = std::any_of(u.begin(), u.end(), [cut](double v) { return v > cut; });
  const bool neg = std::any_of(u.begin(), u.end(), [cut](double v) { return v < -cut; });
  return pos && neg;
}

EigenResult solve(const DomainPtr& domain, const FracParams& params, std::optional<Kernel::Sampled> kernel,
                  double scale, const SolverOptions& opt) {
  if (!domain) throw std::invalid_argument("eigensolver: null domain");
  params.validate();
  opt.validate();
  if (!(params.p > 1.0)) throw std::invalid_argument("eigensolver: p must exceed 1");
  const std::size_t n = domain->interior_count();

  RayleighQuotient rq(stencil_for(domain, params.s, params.p), std::move(kernel), scale);

  const GridFunction dist = distance_function(domain);
  std::vector<double> start(dist.values().begin(), dist.values().end());
  bool fallback = false;
  if (opt.initial_guess) {
    const auto& guess = *opt.initial_guess;
    if (guess.size() != n)
      throw std::invalid_argument("eigensolver: initial guess has " + std::to_string(guess.size()) +
                                  " values, expected " + std::to_string(n));
    if (!std::all_of(guess.begin(), guess.end(), [](double v) { return std::isfinite(v); }))
      throw std::invalid_argument("eigensolver: initial guess is not finite");
    if (std::any_of(guess.begin(), guess.end(), [](double v) { return v != 0.0; }))
      start = guess;
    else
      fallback = true;
  }

  std::vector<double> history;
  std::vector<double>* hist = opt.record_history ? &history : nullptr;

  auto run_with_sign_rule = [&](std::vector<double> init) {
    RunOutcome best = minimize(rq, std::move(init), opt, hist);
    // A sign-changing minimizer is replaced by |u|, which never raises the quotient.
    for (int attempt = 0; attempt < 3 && changes_sign(best.u); ++attempt) {
      std::vector<double> folded(best.u);
      for (double& v : folded) v = std::abs(v);
      RunOutcome again = minimize(rq, std::move(folded), opt, hist);
      again.iterations += best.iterations;
      again.monotone = again.monotone && best.monotone;
      best = std::move(again);
    }
    return best;
  };

  RunOutcome best = run_with_sign_rule(start);
  std::size_t total_iterations = best.iterations;
  bool monotone = best.monotone;
  if (opt.restarts > 0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < opt.restarts; ++r) {
      std::vector<double> init(n);
      for (double& v : init) v = unit(rng) + 1e-3;
      RunOutcome candidate = run_with_sign_rule(std::move(init));
      total_iterations += candidate.iterations;
      monotone = monotone && candidate.monotone;
      if (candidate.quotient < best.quotient) best = std::move(candidate);
    }
  }

  if (std::accumulate(best.u.begin(), best.u.end(), 0.0) < 0.0)
    for (double& v : best.u) v = -v;

  return EigenResult{
      .lambda = best.quotient,
      .eigenfunction = GridFunction(domain, std::move(best.u)),
      .iterations = total_iterations,
      .residual = best.residual,
      .converged = best.converged,
      .monotone = monotone,
      .used_fallback_start = fallback,
      .history = std::move(history),
  };
}

}  // namespace

EigenResult first_eigenpair(const DomainPtr& domain, const FracParams& params, const SolverOptions& options) {
  params.validate();
  return solve(domain, params, std::nullopt, 1.0 - params.s, options);
}

EigenResult first_eigenpair_weighted(const DomainPtr& domain, const FracParams& params, const Kernel& kernel,
                                     const SolverOptions& options) {
  params.validate();
  return solve(domain, params, kernel.sample(*domain), 1.0, options);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd assemble_stiffness(const DomainPtr& domain, double s, const Kernel* kernel) {
  const auto stencil = stencil_for(domain, s, 2.0);
  const std::size_t n = domain->interior_count();
  std::optional<Kernel::Sampled> sampled;
  if (kernel) sampled = kernel->sample(*domain);
  const double scale = kernel ? 1.0 : 1.0 - s;
  const auto tail = stencil->tail();

  Eigen::MatrixXd a(n, n);
  parallel::for_each_index(n, [&](std::size_t i) {
    double diagonal = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double w = stencil->pair_weight(i, j);
      if (sampled) w *= sampled->pair(i, j);
      a(i, j) = -2.0 * scale * w;
      diagonal += w;
    }
    const double t = sampled ? tail[i] * sampled->tail[i] : tail[i];
    a(i, i) = 2.0 * scale * (diagonal + t);
  });
  return a;
}

namespace {

std::vector<EigenPair> dense_spectrum(const DomainPtr& domain, const Eigen::MatrixXd& stiffness,
                                      std::size_t k_max) {
  const std::size_t n = domain->interior_count();
  if (k_max < 1 || k_max > n)
    throw std::invalid_argument("spectrum: k_max must lie in [1, " + std::to_string(n) + "]");
  const double cell = domain->cell_volume();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness / cell);
  if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");

  std::vector<EigenPair> out;
  out.reserve(k_max);
  const double norm = 1.0 / std::sqrt(cell);  // unit Euclidean -> unit discrete L2
  for (std::size_t k = 0; k < k_max; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(k)) * norm;
    double sum = v.sum();
    if (std::abs(sum) < 1e-8 * v.cwiseAbs().sum()) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-8 * v.cwiseAbs().maxCoeff()) {
          sum = v[i];
          break;
        }
    }
    if (sum < 0.0) v = -v;
    out.push_back({solver.eigenvalues()[static_cast<Eigen::Index>(k)],
                   GridFunction(domain, std::vector<double>(v.data(), v.data() + v.size()))});
  }
  return out;
}

}  // namespace

std::vector<EigenPair> spectrum_linear(const DomainPtr& domain, double s, std::size_t k_max) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("spectrum: s must lie in (0, 1)");
  if (k_max < 1 || k_max > domain->interior_count())
    throw std::invalid_argument("spectrum: k_max must lie in [1, " +
                                std::to_string(domain->interior_count()) + "]");
  return dense_spectrum(domain, assemble_stiffness(domain, s), k_max);
}

std::vector<EigenPair> spectrum_linear_weighted(const DomainPtr& domain, double s, const Kernel& kernel,
                                                std::size_t k_max) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("spectrum: s must lie in (0, 1)");
  if (k_max < 1 || k_max > domain->interior_count())
    throw std::invalid_argument("spectrum: k_max must lie in [1, " +
                                std::to_string(domain->interior_count()) + "]");
  return dense_spectrum(domain, assemble_stiffness(domain, s, &kernel), k_max);
}

double local_eigenvalue_1d(int k, double p, double length) {
  if (k < 1) throw std::invalid_argument("local eigenvalue: k must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("local eigenvalue: p must exceed 1");
  if (!(length > 0.0)) throw std::invalid_argument("local eigenvalue: L must be positive");
  const double pi_p = 2.0 * std::numbers::pi * std::pow(p - 1.0, 1.0 / p) / (p * std::sin(std::numbers::pi / p));
  return std::pow(k * pi_p / length, p);
}

std::vector<double> local_spectrum_fd(const Domain& domain, std::size_t k_max) {
  const std::size_t n = domain.interior_count();
  if (k_max < 1 || k_max > n) throw std::invalid_argument("local spectrum: k_max out of range");
  const double inv_h2 = 1.0 / (domain.spacing() * domain.spacing());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const auto lattice = domain.lattice();
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0 * domain.dim() * inv_h2;
    const auto node = lattice[i];
    const int neighbours[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int k = 0; k < 2 * domain.dim(); ++k) {
      const auto j = domain.interior_id(node.ix + neighbours[k][0], node.iy + neighbours[k][1]);
      if (j >= 0) a(i, j) = -inv_h2;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  std::vector<double> out(k_max);
  for (std::size_t k = 0; k < k_max; ++k) out[k] = solver.eigenvalues()[static_cast<Eigen::Index>(k)];
  return out;
}

InfinityCertificate infinity_eigen_certificate(const DomainPtr& domain, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("certificate: alpha must lie in (0, 1)");
  const double radius = inradius(*domain);
  GridFunction cone = distance_function(domain);
  for (double& v : cone.values()) v = std::pow(v, alpha);
  const double ratio = holder_quotient_sup(cone, alpha) / lq_norm(cone, std::numeric_limits<double>::infinity());
  const double lambda = std::pow(radius, -alpha);
  const bool degraded = !has_incenter_node(*domain);
  if (!degraded && std::abs(ratio - lambda) > 1e-12 * lambda)
    throw NumericError("certificate: Holder ratio of the cone differs from R^-alpha");
  return InfinityCertificate{lambda, std::move(cone), ratio, degraded};
}

}  // namespace fraceig
