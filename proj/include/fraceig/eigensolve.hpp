#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fraceig/functional.hpp"
#include "fraceig/geometry.hpp"
#include "fraceig/kernel.hpp"

namespace fraceig {

struct SolverOptions {
  std::size_t max_iterations = 50000;
  /// Stop once |R_k - R_{k+1}| / R_{k+1} < tolerance.
  double tolerance = 1e-9;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  /// L-BFGS memory for the search direction; 0 = steepest descent.
  int lbfgs_memory = 8;
  /// Extra runs from random positive starts; the lowest quotient wins.
  int restarts = 0;
  std::uint64_t seed = 0;
  /// Optional starting values (interior node order). A zero vector is
  /// rejected and the distance function is used instead.
  std::optional<std::vector<double>> initial_guess;
  bool record_history = false;

  void validate() const;
};

struct EigenResult {
  double lambda = 0.0;
  GridFunction eigenfunction;  // ||u||_p = 1, nonnegative sum
  std::size_t iterations = 0;
  /// Relative Rayleigh-quotient decrease of the last accepted step.
  double residual = 0.0;
  bool converged = false;
  /// Every accepted iterate lowered the quotient.
  bool monotone = true;
  /// The supplied initial guess was unusable and the distance function was used.
  bool used_fallback_start = false;
  std::vector<double> history;
};

struct EigenPair {
  double lambda;
  GridFunction eigenfunction;  // discrete L2 norm 1
};

/// First eigenpair of (1-s) times the fractional p-Laplacian: minimizes
/// (1-s) E(v) / ||v||_p^p over grid functions on the unit L^p sphere.
EigenResult first_eigenpair(const DomainPtr& domain, const FracParams& params,
                            const SolverOptions& options = {});

/// Same for Phi_a(v) / ||v||_p^p (no (1-s) factor).
EigenResult first_eigenpair_weighted(const DomainPtr& domain, const FracParams& params,
                                     const Kernel& kernel, const SolverOptions& options = {});

/// Stiffness matrix A with u^T A u = (1-s) E(u) at p = 2, or Phi_a(u) when a
/// kernel is given.
Eigen::MatrixXd assemble_stiffness(const DomainPtr& domain, double s, const Kernel* kernel = nullptr);

/// The k_max smallest eigenpairs of A u = lambda h^N u at p = 2, ascending.
std::vector<EigenPair> spectrum_linear(const DomainPtr& domain, double s, std::size_t k_max);

/// Same with the weighted energy Phi_a.
std::vector<EigenPair> spectrum_linear_weighted(const DomainPtr& domain, double s,
                                                const Kernel& kernel, std::size_t k_max);

/// k-th Dirichlet eigenvalue of the 1D p-Laplacian on (0, L): (k pi_p / L)^p
/// with pi_p = 2 pi (p-1)^{1/p} / (p sin(pi/p)).
double local_eigenvalue_1d(int k, double p, double length);

/// k_max smallest eigenvalues of the 3-point (1D) / 5-point (2D) Laplacian
/// with zero exterior values.
std::vector<double> local_spectrum_fd(const Domain& domain, std::size_t k_max);

struct InfinityCertificate {
  double lambda = 0.0;        // R^{-alpha}
  GridFunction cone;          // d^alpha
  double certified_ratio = 0.0;  // holder_quotient_sup(cone) / ||cone||_inf
  bool degraded = false;      // no node attains the inradius
};

/// Holder-infinity eigenvalue R^{-alpha} with its extremal cone d^alpha.
InfinityCertificate infinity_eigen_certificate(const DomainPtr& domain, double alpha);

}  // namespace fraceig
