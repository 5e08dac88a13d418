#include "fraceig/functional.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fraceig/parallel.hpp"

namespace fraceig {

void FracParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0, 1), got " + std::to_string(s));
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be finite and >= 1");
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
}

FracParams FracParams::holder_coupled(double alpha, double p, int dim) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(alpha * p > dim))
    throw std::invalid_argument("alpha p must exceed N so that s_p = alpha - N/p > 0");
  FracParams fp{alpha - dim / p, p, alpha};
  fp.validate();
  return fp;
}

namespace {

inline double abs_pow(double x, double p) {
  const double a = std::abs(x);
  return p == 2.0 ? a * a : std::pow(a, p);
}

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericError(std::string(what) + " is not finite");
  return value;
}

void check_values(std::span<const double> u) {
  for (double v : u)
    if (!std::isfinite(v)) throw NumericError("grid function has non-finite values");
}

}  // namespace

double nonlocal_energy(const NonlocalStencil& stencil, std::span<const double> u,
                       const Kernel::Sampled* kernel) {
  const Domain& d = stencil.domain();
  const std::size_t n = d.interior_count();
  if (u.size() != n) throw std::invalid_argument("energy: value count does not match the domain");
  const double p = stencil.p();
  const auto lattice = d.lattice();
  const auto tail = stencil.tail();

  std::vector<double> rows(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    const auto a = lattice[i];
    const double ui = u[i];
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto b = lattice[j];
      double w = stencil.offset_weight(a.ix - b.ix, a.iy - b.iy);
      if (kernel) w *= kernel->pair(i, j);
      row += w * abs_pow(ui - u[j], p);
    }
    const double t = kernel ? tail[i] * kernel->tail[i] : tail[i];
    rows[i] = row + 2.0 * t * abs_pow(ui, p);
  });
  return parallel::pairwise_sum(rows);
}

double nonlocal_energy_gradient(const NonlocalStencil& stencil, std::span<const double> u,
                                const Kernel::Sampled* kernel, std::span<double> gradient) {
  const Domain& d = stencil.domain();
  const std::size_t n = d.interior_count();
  if (u.size() != n || gradient.size() != n)
    throw std::invalid_argument("energy gradient: size mismatch");
  const double p = stencil.p();
  const auto lattice = d.lattice();
  const auto tail = stencil.tail();

  // Each ordered pair appears twice in the energy, so
  // dE/du_k = 2p sum_j W_kj |d|^{p-2} d + 2p T_k |u_k|^{p-2} u_k.
  std::vector<double> rows(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    const auto a = lattice[i];
    const double ui = u[i];
    double row = 0.0;
    double g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto b = lattice[j];
      double w = stencil.offset_weight(a.ix - b.ix, a.iy - b.iy);
      if (kernel) w *= kernel->pair(i, j);
      const double diff = ui - u[j];
      const double mag = std::abs(diff);
      const double lower = p == 2.0 ? mag : std::pow(mag, p - 1.0);  // |d|^{p-1}
      row += w * lower * mag;
      g += w * std::copysign(lower, diff);
    }
    const double t = kernel ? tail[i] * kernel->tail[i] : tail[i];
    const double mag = std::abs(ui);
    const double lower = p == 2.0 ? mag : std::pow(mag, p - 1.0);
    rows[i] = row + 2.0 * t * lower * mag;
    gradient[i] = 2.0 * p * (g + t * std::copysign(lower, ui));
  });
  return parallel::pairwise_sum(rows);
}

double gagliardo_energy(const GridFunction& u, const FracParams& params) {
  params.validate();
  check_values(u.values());
  const auto stencil = stencil_for(u.domain_ptr(), params.s, params.p);
  return checked((1.0 - params.s) * nonlocal_energy(*stencil, u.values()), "gagliardo energy");
}

double f_n(const GridFunction& u, const FracParams& params) {
  return std::pow(gagliardo_energy(u, params), 1.0 / params.p);
}

double weighted_energy(const GridFunction& u, const FracParams& params, const Kernel& kernel) {
  params.validate();
  check_values(u.values());
  const auto stencil = stencil_for(u.domain_ptr(), params.s, params.p);
  const auto sampled = kernel.sample(u.domain());
  return checked(nonlocal_energy(*stencil, u.values(), &sampled), "weighted energy");
}

double lq_norm(const GridFunction& u, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  const auto values = u.values();
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(values.size());
  std::transform(values.begin(), values.end(), terms.begin(),
                 [q](double v) { return abs_pow(v, q); });
  const double sum = parallel::pairwise_sum(terms) * u.domain().cell_volume();
  return std::pow(sum, 1.0 / q);
}

double holder_quotient_sup(const GridFunction& u, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("holder quotient: alpha must lie in (0, 1)");
  const Domain& d = u.domain();
  const std::size_t n = d.interior_count();
  const auto lattice = d.lattice();
  const double h = d.spacing();

  // Interior/exterior pairs: the nearest exterior node maximizes the quotient.
  const auto dist = distance_function(u.domain_ptr());
  std::vector<double> row_max(n, 0.0);
  parallel::for_each_index(n, [&](std::size_t i) {
    double best = std::abs(u[i]) / std::pow(dist[i], alpha);
    const auto a = lattice[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = lattice[j];
      const double r = h * std::hypot(double(a.ix - b.ix), double(a.iy - b.iy));
      best = std::max(best, std::abs(u[i] - u[j]) / std::pow(r, alpha));
    }
    row_max[i] = best;
  });
  return n == 0 ? 0.0 : *std::max_element(row_max.begin(), row_max.end());
}

double k_constant_closed_form(int dim, double p) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("k_constant: N must be 1, 2 or 3");
  if (!(p >= 1.0)) throw std::invalid_argument("k_constant: p must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (dim - 1)) * std::tgamma(0.5 * (p + 1.0)) /
         std::tgamma(0.5 * (dim + p)) / p;
}

double k_constant(int dim, double p) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("k_constant: N must be 1, 2 or 3");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("k_constant: p must be >= 1");
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  switch (dim) {
    case 1:
      // The 0-sphere {-1, +1}.
      return (std::pow(1.0, p) + std::pow(std::abs(-1.0), p)) / p;
    case 2: {
      // int_0^{2pi} |sin t|^p dt = 4 int_0^{pi/2} sin^p t dt
      const double quarter =
          Quad::integrate([p](double t) { return std::pow(std::sin(t), p); }, 0.0, kHalfPi, 15, 1e-14);
      return 4.0 * quarter / p;
    }
    default: {
      // Spherical coordinates: z_3 = cos(phi), dS = sin(phi) dphi dtheta.
      const double polar_half = Quad::integrate(
          [p](double phi) { return std::pow(std::cos(phi), p) * std::sin(phi); }, 0.0, kHalfPi, 15,
          1e-14);
      const double azimuth =
          Quad::integrate([](double) { return 1.0; }, 0.0, 2.0 * std::numbers::pi, 15, 1e-14);
      return azimuth * 2.0 * polar_half / p;
    }
  }
}

double dirichlet_energy_local(const GridFunction& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("dirichlet energy: p must be >= 1");
  const Domain& d = u.domain();
  const double h = d.spacing();
  const int nx = d.intervals(0);
  const int ny = d.dim() == 2 ? d.intervals(1) : 1;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double here = u.at(ix, iy);
      const double gx = (u.at(ix + 1, iy) - here) / h;
      if (d.dim() == 1) {
        terms.push_back(abs_pow(gx, p));
      } else {
        const double gy = (u.at(ix, iy + 1) - here) / h;
        terms.push_back(std::pow(gx * gx + gy * gy, 0.5 * p));
      }
    }
  }
  return parallel::pairwise_sum(terms) * d.cell_volume();
}

}  // namespace fraceig
