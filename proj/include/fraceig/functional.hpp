#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "fraceig/geometry.hpp"
#include "fraceig/kernel.hpp"
#include "fraceig/stencil.hpp"

namespace fraceig {

/// Raised when an energy evaluates to a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fractional order s in (0,1), integrability p >= 1, and an optional Holder
/// exponent alpha for the p -> infinity coupling s_p = alpha - N/p.
struct FracParams {
  double s = 0.5;
  double p = 2.0;
  std::optional<double> alpha;

  /// Throws std::invalid_argument unless 0 < s < 1, 1 <= p < inf, 0 < alpha < 1.
  void validate() const;

  /// s = alpha - N/p; requires alpha p > N so that s lies in (0, 1).
  static FracParams holder_coupled(double alpha, double p, int dim);
};

/// (1-s) [u]_{s,p}^p on the grid: pair sum plus exterior tail.
double gagliardo_energy(const GridFunction& u, const FracParams& params);

/// gagliardo_energy^{1/p}, the 1-homogeneous normalized seminorm.
double f_n(const GridFunction& u, const FracParams& params);

/// Phi_a(u): the pair sum weighted by a(x_i, x_j) and the tail weighted by
/// a(x_i, pi(x_i)). Carries no (1-s) factor.
double weighted_energy(const GridFunction& u, const FracParams& params, const Kernel& kernel);

/// (sum |u_i|^q h^N)^{1/q}; q = +infinity gives max |u_i|.
double lq_norm(const GridFunction& u, double q);

/// sup over node pairs (exterior nodes included, value 0) of
/// |u_i - u_j| / |x_i - x_j|^alpha.
double holder_quotient_sup(const GridFunction& u, double alpha);

/// K(N,p) = (1/p) int_{|z|=1} |z_N|^p dS by quadrature (N = 1, 2, 3).
double k_constant(int dim, double p);

/// (1/p) 2 pi^{(N-1)/2} Gamma((p+1)/2) / Gamma((N+p)/2).
double k_constant_closed_form(int dim, double p);

/// ||grad u||_p^p with forward differences (zero outside Omega), times h^N.
double dirichlet_energy_local(const GridFunction& u, double p);

// Lower-level evaluation on raw values (interior node order of the stencil's
// domain). None of these apply the (1-s) factor.

/// sum_{i != j} W_ij a_ij |u_i - u_j|^p + 2 sum_i T_i a_i |u_i|^p
double nonlocal_energy(const NonlocalStencil& stencil, std::span<const double> u,
                       const Kernel::Sampled* kernel = nullptr);

/// Energy and its gradient; returns the energy.
double nonlocal_energy_gradient(const NonlocalStencil& stencil, std::span<const double> u,
                                const Kernel::Sampled* kernel, std::span<double> gradient);

}  // namespace fraceig
