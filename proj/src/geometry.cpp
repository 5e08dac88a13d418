#include "fraceig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fraceig {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval:
      return "interval";
    case DomainKind::box:
      return "box";
    case DomainKind::masked:
      return "masked";
  }
  return "unknown";
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Domain::Domain(DomainKind kind, int dim, double h, int nx, int ny,
               const std::vector<std::uint8_t>& mask)
    : kind_(kind), dim_(dim), h_(h), nx_(nx), ny_(ny) {
  const std::size_t nodes = static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1);
  node_to_interior_.assign(nodes, -1);
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      const std::size_t g = static_cast<std::size_t>(iy) * (nx + 1) + ix;
      if (mask[g] == 0) continue;
      node_to_interior_[g] = static_cast<std::int32_t>(lattice_.size());
      lattice_.push_back({ix, iy});
    }
  }
}

Point Domain::coordinate(std::size_t i) const { return coordinate(lattice_[i]); }

Point Domain::coordinate(const LatticeIndex& node) const {
  return {h_ * node.ix, dim_ == 2 ? h_ * node.iy : 0.0};
}

std::ptrdiff_t Domain::interior_id(int ix, int iy) const {
  if (ix < 0 || iy < 0 || ix > nx_ || iy > ny_) return -1;
  return node_to_interior_[static_cast<std::size_t>(iy) * (nx_ + 1) + ix];
}

double Domain::cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }

double Domain::measure() const { return static_cast<double>(interior_count()) * cell_volume(); }

bool Domain::same_geometry(const Domain& other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ && h_ == other.h_ && nx_ == other.nx_ &&
         ny_ == other.ny_ && node_to_interior_ == other.node_to_interior_;
}

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

DomainPtr build_interval(double length, int n) {
  require(std::isfinite(length) && length > 0.0, "interval length must be positive");
  require(n >= 3, "interval needs n >= 3 (got " + std::to_string(n) + ")");
  std::vector<std::uint8_t> mask(n + 1, 1);
  mask.front() = 0;
  mask.back() = 0;
  return DomainPtr(new Domain(DomainKind::interval, 1, length / n, n, 0, mask));
}

DomainPtr build_box(double lx, double ly, int n) {
  require(std::isfinite(lx) && lx > 0.0 && std::isfinite(ly) && ly > 0.0,
          "box side lengths must be positive");
  require(n >= 3, "box needs n >= 3 (got " + std::to_string(n) + ")");
  const double h = lx / n;
  const double rows = ly / h;
  const int ny = static_cast<int>(std::lround(rows));
  require(std::abs(rows - ny) <= 1e-9 * std::max(1.0, rows),
          "box: Ly must be an integer multiple of h = Lx / n");
  require(ny >= 2, "box: Ly too small for an interior row");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n + 1) * (ny + 1), 0);
  for (int iy = 1; iy < ny; ++iy)
    for (int ix = 1; ix < n; ++ix) mask[static_cast<std::size_t>(iy) * (n + 1) + ix] = 1;
  return DomainPtr(new Domain(DomainKind::box, 2, h, n, ny, mask));
}

DomainPtr build_masked(int dim, int n, double h, std::vector<std::uint8_t> mask) {
  require(dim == 1 || dim == 2, "masked grid: dimension must be 1 or 2");
  require(n >= 2, "masked grid: n must be at least 2");
  require(std::isfinite(h) && h > 0.0, "masked grid: h must be positive");
  const int ny = dim == 2 ? n : 0;
  const std::size_t expected = static_cast<std::size_t>(n + 1) * (ny + 1);
  require(mask.size() == expected, "masked grid: expected " + std::to_string(expected) +
                                       " mask entries, got " + std::to_string(mask.size()));
  bool any = false;
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      const bool on = mask[static_cast<std::size_t>(iy) * (n + 1) + ix] != 0;
      const bool frame = ix == 0 || ix == n || (dim == 2 && (iy == 0 || iy == ny));
      require(!(on && frame), "masked grid: frame node (" + std::to_string(ix) + "," +
                                  std::to_string(iy) + ") must be exterior");
      any = any || on;
    }
  }
  require(any, "masked grid: mask has no interior node");
  return DomainPtr(new Domain(DomainKind::masked, dim, h, n, ny, mask));
}

DomainPtr load_mask_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mask file " + path.string());
  std::string line;
  int dim = 0;
  int n = 0;
  double h = 0.0;
  {
    std::getline(in, line);
    std::istringstream header(line);
    if (!(header >> dim >> n >> h))
      throw std::invalid_argument("mask file: header must be \"N n h\"");
  }
  require(dim == 1 || dim == 2, "mask file: N must be 1 or 2");
  require(n >= 2, "mask file: n must be at least 2");
  const int rows = dim == 2 ? n + 1 : 1;
  std::vector<std::uint8_t> mask;
  mask.reserve(static_cast<std::size_t>(rows) * (n + 1));
  int row = 0;
  while (row < rows && std::getline(in, line)) {
    std::size_t before = mask.size();
    for (char c : line) {
      if (c == '0' || c == '1') {
        mask.push_back(c == '1' ? 1 : 0);
      } else if (c != ' ' && c != '\t' && c != ',' && c != '\r') {
        throw std::invalid_argument("mask file: unexpected character in row " +
                                    std::to_string(row));
      }
    }
    if (mask.size() == before) continue;  // blank line
    require(mask.size() - before == static_cast<std::size_t>(n + 1),
            "mask file: row " + std::to_string(row) + " must have " + std::to_string(n + 1) +
                " entries");
    ++row;
  }
  require(row == rows, "mask file: expected " + std::to_string(rows) + " rows, got " +
                           std::to_string(row));
  return build_masked(dim, n, h, std::move(mask));
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("GridFunction: null domain");
  if (values_.size() != domain_->interior_count())
    throw std::invalid_argument("GridFunction: expected " +
                                std::to_string(domain_->interior_count()) + " values, got " +
                                std::to_string(values_.size()));
}

GridFunction GridFunction::zeros(DomainPtr domain) { return constant(std::move(domain), 0.0); }

GridFunction GridFunction::constant(DomainPtr domain, double value) {
  const std::size_t n = domain->interior_count();
  return GridFunction(std::move(domain), std::vector<double>(n, value));
}

double GridFunction::at(int ix, int iy) const {
  const auto id = domain_->interior_id(ix, iy);
  return id < 0 ? 0.0 : values_[static_cast<std::size_t>(id)];
}

bool GridFunction::compatible(const GridFunction& other) const {
  return domain_ == other.domain_ || domain_->same_geometry(*other.domain_);
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!compatible(other)) throw std::invalid_argument("GridFunction: incompatible domains");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!compatible(other)) throw std::invalid_argument("GridFunction: incompatible domains");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double factor, GridFunction u) { return u *= factor; }
GridFunction operator-(GridFunction u) { return u *= -1.0; }

// ---------------------------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher lower envelope of parabolas, in lattice units.
void squared_distance_1d(std::span<const double> f, std::span<double> out) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  int first = 0;
  while (first < n && !std::isfinite(f[first])) ++first;
  if (first == n) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    double s = 0.0;
    while (true) {
      const int r = v[k];
      s = ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * (q - r));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

// Squared lattice distance from every grid node to the nearest exterior node.
std::vector<double> squared_edt(const Domain& d) {
  const int nx = d.intervals(0) + 1;
  const int ny = d.intervals(1) + 1;
  std::vector<double> grid(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      grid[static_cast<std::size_t>(iy) * nx + ix] = d.is_interior(ix, iy) ? kInf : 0.0;

  std::vector<double> line(std::max(nx, ny));
  std::vector<double> result(std::max(nx, ny));
  for (int iy = 0; iy < ny; ++iy) {
    std::span<double> row(grid.data() + static_cast<std::size_t>(iy) * nx, nx);
    std::copy(row.begin(), row.end(), line.begin());
    squared_distance_1d(std::span<const double>(line.data(), nx), std::span<double>(result.data(), nx));
    std::copy_n(result.begin(), nx, row.begin());
  }
  if (ny > 1) {
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) line[iy] = grid[static_cast<std::size_t>(iy) * nx + ix];
      squared_distance_1d(std::span<const double>(line.data(), ny), std::span<double>(result.data(), ny));
      for (int iy = 0; iy < ny; ++iy) grid[static_cast<std::size_t>(iy) * nx + ix] = result[iy];
    }
  }
  return grid;
}

}  // namespace

GridFunction distance_function(const DomainPtr& domain) {
  const Domain& d = *domain;
  std::vector<double> values(d.interior_count());
  if (d.kind() == DomainKind::masked) {
    const auto sq = squared_edt(d);
    const int nx = d.intervals(0) + 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto node = d.lattice()[i];
      values[i] = d.spacing() * std::sqrt(sq[static_cast<std::size_t>(node.iy) * nx + node.ix]);
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Point x = d.coordinate(i);
      double dist = std::min(x.x, d.extent(0) - x.x);
      if (d.dim() == 2) dist = std::min({dist, x.y, d.extent(1) - x.y});
      values[i] = dist;
    }
  }
  return GridFunction(domain, std::move(values));
}

double inradius(const Domain& domain) {
  switch (domain.kind()) {
    case DomainKind::interval:
      return 0.5 * domain.extent(0);
    case DomainKind::box:
      return 0.5 * std::min(domain.extent(0), domain.extent(1));
    case DomainKind::masked:
      break;
  }
  // Masked grids: the maximum of the grid distance function.
  DomainPtr alias(std::shared_ptr<const Domain>{}, &domain);
  const auto d = distance_function(alias);
  return *std::max_element(d.values().begin(), d.values().end());
}

bool has_incenter_node(const Domain& domain) {
  const double radius = inradius(domain);
  DomainPtr alias(std::shared_ptr<const Domain>{}, &domain);
  const auto d = distance_function(alias);
  return std::any_of(d.values().begin(), d.values().end(),
                     [&](double v) { return std::abs(v - radius) <= 1e-12 * radius; });
}

Point nearest_boundary_point(const Domain& domain, std::size_t i) {
  const Point x = domain.coordinate(i);
  if (domain.kind() != DomainKind::masked) {
    Point best = x;
    double best_dist = kInf;
    auto consider = [&](double dist, Point candidate) {
      if (dist < best_dist) {
        best_dist = dist;
        best = candidate;
      }
    };
    consider(x.x, {0.0, x.y});
    consider(domain.extent(0) - x.x, {domain.extent(0), x.y});
    if (domain.dim() == 2) {
      consider(x.y, {x.x, 0.0});
      consider(domain.extent(1) - x.y, {x.x, domain.extent(1)});
    }
    return best;
  }

  // Masked: brute force over exterior grid nodes (the frame is exterior, so
  // nothing off-grid can be closer).
  const auto node = domain.lattice()[i];
  long best_sq = std::numeric_limits<long>::max();
  LatticeIndex best{};
  for (int iy = 0; iy <= domain.intervals(1); ++iy) {
    for (int ix = 0; ix <= domain.intervals(0); ++ix) {
      if (domain.is_interior(ix, iy)) continue;
      const long dx = ix - node.ix;
      const long dy = iy - node.iy;
      const long sq = dx * dx + dy * dy;
      if (sq < best_sq) {
        best_sq = sq;
        best = {ix, iy};
      }
    }
  }
  return domain.coordinate(best);
}

}  // namespace fraceig
