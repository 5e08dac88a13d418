#include "fraceig/stencil.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fraceig/parallel.hpp"
#include "fraceig/special.hpp"

namespace fraceig {

double near_field_correction(int dim, double s, double p) {
  const double sigma = dim + s * p - p;
  return std::max(0.0, -special::lattice_zeta(dim, sigma) / (2.0 * dim));
}

double lattice_pair_weight(int dx, int dy, double exponent, double correction) {
  const long sq = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
  if (sq == 0) return 0.0;
  const double w = std::pow(static_cast<double>(sq), -0.5 * exponent);
  return sq == 1 ? w + correction : w;
}

NonlocalStencil::NonlocalStencil(DomainPtr domain, double s, double p)
    : domain_(std::move(domain)), s_(s), p_(p) {
  if (!domain_) throw std::invalid_argument("stencil: null domain");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("stencil: s must lie in (0, 1)");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("stencil: p must be >= 1");
  const int dim = domain_->dim();
  exponent_ = dim + s * p;
  correction_ = fraceig::near_field_correction(dim, s, p);

  const double h = domain_->spacing();
  const double scale = std::pow(h, 2.0 * dim - exponent_);
  const int margin = dim == 2 ? kMargin2D : 0;
  const int mx = domain_->intervals(0) + margin;
  const int my = dim == 2 ? domain_->intervals(1) + margin : 0;
  stride_ = static_cast<std::size_t>(mx) + 1;
  offsets_.resize(stride_ * (static_cast<std::size_t>(my) + 1));
  for (int dy = 0; dy <= my; ++dy)
    for (int dx = 0; dx <= mx; ++dx)
      offsets_[static_cast<std::size_t>(dy) * stride_ + dx] =
          scale * lattice_pair_weight(dx, dy, exponent_, correction_);

  if (dim == 1)
    build_tail_1d();
  else
    build_tail_2d();
}

double NonlocalStencil::pair_weight(std::size_t i, std::size_t j) const {
  const auto a = domain_->lattice()[i];
  const auto b = domain_->lattice()[j];
  return offset_weight(a.ix - b.ix, a.iy - b.iy);
}

void NonlocalStencil::build_tail_1d() {
  const Domain& d = *domain_;
  const int n = d.intervals(0);
  const double scale = std::pow(d.spacing(), 2.0 - exponent_);
  std::vector<int> exterior;
  for (int j = 0; j <= n; ++j)
    if (!d.is_interior(j, 0)) exterior.push_back(j);

  tail_.resize(d.interior_count());
  for (std::size_t i = 0; i < tail_.size(); ++i) {
    const int ix = d.lattice()[i].ix;
    double sum = 0.0;
    for (int j : exterior) sum += offset_weight(ix - j, 0);
    // Lattice nodes j < 0 and j > n; neither contains a nearest neighbour.
    sum += scale * (special::hurwitz_zeta(exponent_, ix + 1.0) +
                    special::hurwitz_zeta(exponent_, static_cast<double>(n + 1 - ix)));
    tail_[i] = sum;
  }
}

void NonlocalStencil::build_tail_2d() {
  const Domain& d = *domain_;
  const double h = d.spacing();
  const int nx = d.intervals(0);
  const int ny = d.intervals(1);
  const int m = kMargin2D;

  std::vector<LatticeIndex> exterior;
  for (int iy = -m; iy <= ny + m; ++iy)
    for (int ix = -m; ix <= nx + m; ++ix)
      if (!d.is_interior(ix, iy)) exterior.push_back({ix, iy});

  // Beyond the window: the union of the cells of the window nodes is the
  // rectangle [lo, hi_x] x [lo, hi_y]; integrate |x - y|^{-a} outside it.
  const double lo = (-m - 0.5) * h;
  const double hi_x = (nx + m + 0.5) * h;
  const double hi_y = (ny + m + 0.5) * h;
  const double sigma = exponent_ - 2.0;  // = s p > 0
  auto face = [sigma](double dist, double before, double after) {
    // Rays leaving through a face at perpendicular distance dist, spanning
    // angles [-atan(before/dist), atan(after/dist)]: int (dist/cos t)^{-sigma} dt.
    auto integrand = [sigma](double t) { return std::pow(std::cos(t), sigma); };
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, -std::atan(before / dist), std::atan(after / dist), 8, 1e-13);
    return std::pow(dist, -sigma) * value;
  };

  tail_.resize(d.interior_count());
  parallel::for_each_index(
      tail_.size(),
      [&](std::size_t i) {
        const auto node = d.lattice()[i];
        double near = 0.0;
        for (const auto& e : exterior) near += offset_weight(node.ix - e.ix, node.iy - e.iy);

        const Point x = d.coordinate(node);
        const double left = x.x - lo;
        const double right = hi_x - x.x;
        const double bottom = x.y - lo;
        const double top = hi_y - x.y;
        const double angular = face(right, bottom, top) + face(left, top, bottom) +
                               face(top, right, left) + face(bottom, left, right);
        // W_ij ~ h^N int_{cell j} |x - y|^{-a} dy
        const double far = h * h * angular / sigma;
        tail_[i] = near + far;
      },
      16);
}

// ---------------------------------------------------------------------------

namespace {

struct CacheEntry {
  const Domain* domain;
  double s;
  double p;
  std::shared_ptr<const NonlocalStencil> stencil;
};

std::mutex cache_mutex;
std::deque<CacheEntry> cache;
constexpr std::size_t kCacheCapacity = 32;

}  // namespace

std::shared_ptr<const NonlocalStencil> stencil_for(const DomainPtr& domain, double s, double p) {
  {
    std::lock_guard lock(cache_mutex);
    for (const auto& entry : cache) {
      if (entry.s == s && entry.p == p &&
          (entry.domain == domain.get() || entry.stencil->domain().same_geometry(*domain)))
        return entry.stencil;
    }
  }
  auto built = std::make_shared<const NonlocalStencil>(domain, s, p);
  std::lock_guard lock(cache_mutex);
  cache.push_back({domain.get(), s, p, built});
  if (cache.size() > kCacheCapacity) cache.pop_front();
  return built;
}

}  // namespace fraceig
