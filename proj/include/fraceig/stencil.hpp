#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fraceig/geometry.hpp"

namespace fraceig {

/// Pair and exterior-tail weights of the discrete Gagliardo energy
///
///   E(u) = sum_{i != j interior} W_ij |u_i - u_j|^p + 2 sum_i T_i |u_i|^p
///
/// with W_ij = h^{2N} |x_i - x_j|^{-(N+sp)} for lattice offsets m = (x_i - x_j)/h,
/// plus h^{2N-(N+sp)} c on the 2N axial nearest neighbours. The constant
///
///   c = max(0, -Z_N(N + sp - p) / (2N)),   Z_N(sigma) = sum_{m in Z^N\0} |m|^{-sigma}
///
/// is the lattice-sum defect of a locally linear function (the part of the
/// singular integral that the point sum misses around the diagonal). With it,
/// (1-s) E converges to K(N,p) times the finite-difference p-Dirichlet energy
/// as s -> 1 at fixed h.
///
/// T_i sums the same pair weights over every zero-valued exterior lattice
/// node. In 1D the sum is exact (Hurwitz zeta beyond the grid). In 2D exterior
/// nodes are summed explicitly out to a margin around the grid, and the rest
/// of the plane is integrated in polar coordinates around x_i.
class NonlocalStencil {
 public:
  static constexpr int kMargin2D = 16;

  NonlocalStencil(DomainPtr domain, double s, double p);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  double s() const { return s_; }
  double p() const { return p_; }
  /// N + s p
  double exponent() const { return exponent_; }
  double near_field_correction() const { return correction_; }

  /// Weight for a lattice offset; defined for |dx| <= n_x + margin, |dy| <= n_y + margin.
  double offset_weight(int dx, int dy) const {
    const auto ax = static_cast<std::size_t>(dx < 0 ? -dx : dx);
    const auto ay = static_cast<std::size_t>(dy < 0 ? -dy : dy);
    return offsets_[ay * stride_ + ax];
  }
  double pair_weight(std::size_t i, std::size_t j) const;
  std::span<const double> tail() const { return tail_; }

 private:
  void build_tail_1d();
  void build_tail_2d();

  DomainPtr domain_;
  double s_;
  double p_;
  double exponent_;
  double correction_;
  std::size_t stride_ = 0;
  std::vector<double> offsets_;
  std::vector<double> tail_;
};

/// Unit-lattice pair weight |m|^{-a} + c [|m| = 1] (no h scaling).
double lattice_pair_weight(int dx, int dy, double exponent, double correction);

/// Near-field correction constant c for dimension N and (s, p).
double near_field_correction(int dim, double s, double p);

/// Shared, cached stencil for (domain, s, p).
std::shared_ptr<const NonlocalStencil> stencil_for(const DomainPtr& domain, double s, double p);

}  // namespace fraceig
