#pragma once

// Special functions needed by the nonlocal stencil: Hurwitz zeta, Dirichlet
// beta and the Epstein zeta function of the square lattice. All are the
// analytically continued versions (real argument, s != 1).

namespace fraceig::special {

/// Hurwitz zeta  sum_{k>=0} (k + q)^{-s}, continued to all real s != 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Riemann zeta via hurwitz_zeta(s, 1).
double riemann_zeta(double s);

/// Dirichlet beta  sum_{k>=0} (-1)^k (2k+1)^{-s}, continued to all real s.
double dirichlet_beta(double s);

/// Lattice sum  sum_{m in Z^N \ 0} |m|^{-sigma}  for N in {1, 2}, continued
/// in sigma (pole at sigma = N). N = 1: 2 zeta(sigma); N = 2: 4 zeta(sigma/2) beta(sigma/2).
double lattice_zeta(int dim, double sigma);

}  // namespace fraceig::special
