#include "fraceig/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fraceig {

Kernel Kernel::constant(double value) {
  if (!(std::isfinite(value) && value > 0.0))
    throw std::invalid_argument("constant kernel must be positive");
  Kernel k;
  k.rule_ = Rule::constant;
  k.mean_ = value;
  k.lower_ = k.upper_ = value;
  return k;
}

Kernel Kernel::periodic_product(double mean, double amplitude, int frequency) {
  if (!std::isfinite(mean) || !std::isfinite(amplitude))
    throw std::invalid_argument("periodic kernel: non-finite parameters");
  if (frequency < 1) throw std::invalid_argument("periodic kernel: frequency must be >= 1");
  if (!(mean - std::abs(amplitude) > 0.0))
    throw std::invalid_argument("periodic kernel: mean - |amplitude| must be positive");
  Kernel k;
  k.rule_ = Rule::periodic_product;
  k.mean_ = mean;
  k.amplitude_ = amplitude;
  k.frequency_ = frequency;
  k.lower_ = mean - std::abs(amplitude);
  k.upper_ = mean + std::abs(amplitude);
  return k;
}

Kernel Kernel::tabulated(DomainPtr domain, std::vector<double> pair, std::vector<double> boundary) {
  if (!domain) throw std::invalid_argument("tabulated kernel: null domain");
  const std::size_t n = domain->interior_count();
  if (pair.size() != n * n || boundary.size() != n)
    throw std::invalid_argument("tabulated kernel: table size does not match the domain");
  Kernel k;
  k.rule_ = Rule::tabulated;
  k.lower_ = boundary.empty() ? 1.0 : boundary[0];
  k.upper_ = k.lower_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = pair[i * n + j];
      if (i == j) continue;
      if (v != pair[j * n + i])
        throw std::invalid_argument("tabulated kernel: not symmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      k.lower_ = std::min(k.lower_, v);
      k.upper_ = std::max(k.upper_, v);
    }
    k.lower_ = std::min(k.lower_, boundary[i]);
    k.upper_ = std::max(k.upper_, boundary[i]);
  }
  if (!(k.lower_ > 0.0) || !std::isfinite(k.upper_))
    throw std::invalid_argument("tabulated kernel: values must be positive and finite");
  k.domain_ = std::move(domain);
  k.pair_ = std::move(pair);
  k.boundary_ = std::move(boundary);
  k.mean_ = 0.0;
  return k;
}

Kernel Kernel::with_frequency(int frequency) const {
  switch (rule_) {
    case Rule::constant:
      return *this;
    case Rule::periodic_product:
      return periodic_product(mean_, amplitude_, frequency);
    case Rule::tabulated:
      break;
  }
  throw std::invalid_argument("tabulated kernels have no frequency family");
}

double Kernel::profile(const Point& x) const {
  // y = 0 for 1D points, so the second factor is 1 there.
  const double w = 2.0 * std::numbers::pi * frequency_;
  return std::cos(w * x.x) * std::cos(w * x.y);
}

double Kernel::operator()(const Point& x, const Point& y) const {
  switch (rule_) {
    case Rule::constant:
      return mean_;
    case Rule::periodic_product:
      return mean_ + amplitude_ * profile(x) * profile(y);
    case Rule::tabulated:
      break;
  }
  throw std::logic_error("tabulated kernels are only defined on node pairs");
}

Kernel::Sampled Kernel::sample(const Domain& domain) const {
  Sampled s;
  const std::size_t n = domain.interior_count();
  s.tail.resize(n);
  if (rule_ == Rule::tabulated) {
    if (!domain_->same_geometry(domain))
      throw std::invalid_argument("tabulated kernel used on a different domain");
    s.table = &pair_;
    s.stride = n;
    s.tail = boundary_;
    return s;
  }
  s.mean = mean_;
  s.amplitude = amplitude_;
  s.factor.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = domain.coordinate(i);
    if (rule_ == Rule::periodic_product) s.factor[i] = profile(x);
    s.tail[i] = (*this)(x, nearest_boundary_point(domain, i));
  }
  return s;
}

Kernel kernel_average(const Kernel& kernel) {
  switch (kernel.rule()) {
    case Kernel::Rule::constant:
      return kernel;
    case Kernel::Rule::periodic_product:
      // The product of cosines has zero mean over a period.
      return Kernel::constant(kernel.mean());
    case Kernel::Rule::tabulated:
      break;
  }
  throw std::invalid_argument("kernel_average: only periodic-product and constant kernels");
}

}  // namespace fraceig
