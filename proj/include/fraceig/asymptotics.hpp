#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraceig/eigensolve.hpp"
#include "fraceig/functional.hpp"
#include "fraceig/geometry.hpp"
#include "fraceig/kernel.hpp"

namespace fraceig {

enum class SweepKind { s_to_one, p_to_infinity, homogenization };

const char* to_string(SweepKind kind);

/// The extreme sweep point recomputed on the grid with half as many intervals.
struct RefinementCheck {
  double parameter = 0.0;
  int n_coarse = 0;
  double value_coarse = 0.0;
  int n_fine = 0;
  double value_fine = 0.0;
  /// (value_fine - value_coarse) / value_fine
  double relative_change = 0.0;
};

struct SweepReport {
  SweepKind kind = SweepKind::s_to_one;
  std::vector<double> parameters;
  /// lambda for s-sweeps and homogenization, lambda^{1/p} for p-sweeps.
  std::vector<double> values;
  int k = 1;
  double reference = 0.0;
  std::optional<double> extrapolated;
  /// (value - reference) / reference, one per parameter.
  std::vector<double> rel_errors;
  int n = 0;
  double h = 0.0;
  std::optional<RefinementCheck> refinement;
  /// Hausdorff distance between {u, -u} at consecutive sweep points.
  std::vector<double> eigenfunction_distances;
  bool all_converged = true;
  std::string note;
};

struct SweepOptions {
  SolverOptions solver;
  bool refinement = true;
};

/// lambda^s_{k,p} along s_values (ascending, each in (0, 0.99]) against
/// K(N,p) times the local eigenvalue. k > 1 requires p = 2; 2D requires p = 2.
SweepReport sweep_s(const DomainPtr& domain, double p, int k, const std::vector<double>& s_values,
                    const SweepOptions& options = {});

/// (lambda^{s_p}_{1,p})^{1/p} with s_p = alpha - N/p against R^{-alpha}.
SweepReport sweep_p(const DomainPtr& domain, double alpha, const std::vector<double>& p_values,
                    const SweepOptions& options = {});

/// First eigenvalue of Phi_a for the family at each oscillation frequency,
/// against the eigenvalue of its average kernel.
SweepReport homogenization_sweep(const DomainPtr& domain, const FracParams& params, const Kernel& family,
                                 const std::vector<int>& frequencies, const SweepOptions& options = {});

/// Limit of values(param) as param -> 1 (params in (0,1)) or -> infinity
/// (params > 1). Fits lambda* + C1 eps^theta + C2 eps^{2 theta} (one
/// correction term below five points), eps = 1 - s or 1/p, with theta
/// chosen by minimizing the least-squares residual.
double richardson_extrapolate(const std::vector<double>& params, const std::vector<double>& values);

/// Hausdorff distance between finite sets of grid functions in the L^q norm.
double hausdorff_distance(const std::vector<GridFunction>& a, const std::vector<GridFunction>& b, double q);

}  // namespace fraceig
