#include "fraceig/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraceig::special {

namespace {

// B_2, B_4, ..., B_30
constexpr std::array<double, 15> kBernoulli = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("hurwitz_zeta: q must be positive");
  if (s == 1.0) throw std::invalid_argument("hurwitz_zeta: pole at s = 1");

  // Euler-Maclaurin: direct sum up to N, integral, endpoint and Bernoulli
  // corrections evaluated at x = q + N. The shift N has to outgrow |s| for
  // the asymptotic series to converge quickly.
  const int n_direct = 16 + static_cast<int>(std::ceil(std::abs(s)));
  double sum = 0.0;
  for (int k = 0; k < n_direct; ++k) sum += std::pow(q + k, -s);

  const double x = q + n_direct;
  const double x_pow = std::pow(x, -s);
  sum += x * x_pow / (s - 1.0) + 0.5 * x_pow;

  // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^{-s-2j+1}
  double rising = s;  // s (s+1) ... (s+2j-2)
  double factorial = 2.0;
  double x_term = x_pow / x;
  for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
    const double term = kBernoulli[j] / factorial * rising * x_term;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    const double m = 2.0 * static_cast<double>(j) + 1.0;  // next: (s+2j-1)(s+2j)
    rising *= (s + m) * (s + m + 1.0);
    factorial *= (m + 2.0) * (m + 3.0);
    x_term /= x * x;
  }
  return sum;
}

double riemann_zeta(double s) {
  if (s >= 0.0) return hurwitz_zeta(s, 1.0);
  // Reflection; the direct sum cancels catastrophically for negative s.
  if (std::fmod(s, 2.0) == 0.0) return 0.0;
  const double t = 1.0 - s;
  const double log_mag = s * std::log(2.0) + (s - 1.0) * std::log(std::numbers::pi) + std::lgamma(t);
  return std::exp(log_mag) * std::sin(0.5 * std::numbers::pi * s) * hurwitz_zeta(t, 1.0);
}

double dirichlet_beta(double s) {
  // beta(s) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4)); the pole of the two Hurwitz
  // terms at s = 1 cancels, beta(1) = pi/4.
  if (s == 1.0) return std::atan(1.0);
  if (s < 0.0) {
    // beta(1-t) = (pi/2)^{-t} sin(pi t/2) Gamma(t) beta(t), zero at negative odd integers.
    if (std::fmod(s, 2.0) == -1.0) return 0.0;
    const double t = 1.0 - s;
    const double log_mag = -t * std::log(0.5 * std::numbers::pi) + std::lgamma(t);
    return std::exp(log_mag) * std::sin(0.5 * std::numbers::pi * t) * dirichlet_beta(t);
  }
  return std::pow(4.0, -s) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75));
}

double lattice_zeta(int dim, double sigma) {
  switch (dim) {
    case 1:
      return 2.0 * riemann_zeta(sigma);
    case 2:
      return 4.0 * riemann_zeta(0.5 * sigma) * dirichlet_beta(0.5 * sigma);
    default:
      throw std::invalid_argument("lattice_zeta: dimension must be 1 or 2");
  }
}

}  // namespace fraceig::special
