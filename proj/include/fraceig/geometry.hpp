#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace fraceig {

enum class DomainKind { interval, box, masked };

const char* to_string(DomainKind kind);

struct Point {
  double x = 0.0;
  double y = 0.0;  // unused in 1D
};

double distance(const Point& a, const Point& b);

/// Integer lattice position of a grid node; iy = 0 in 1D.
struct LatticeIndex {
  int ix = 0;
  int iy = 0;
};

/// Uniform grid on [0, n_x h] (x [0, n_y h]) with a set of interior nodes.
/// Every node that is not interior, and every point outside the grid, is
/// exterior: grid functions vanish there. Immutable once built.
class Domain {
 public:
  int dim() const { return dim_; }
  DomainKind kind() const { return kind_; }
  double spacing() const { return h_; }
  /// Number of grid intervals along an axis (nodes are 0..n).
  int intervals(int axis) const { return axis == 0 ? nx_ : ny_; }
  double extent(int axis) const { return h_ * intervals(axis); }

  std::size_t interior_count() const { return lattice_.size(); }
  std::span<const LatticeIndex> lattice() const { return lattice_; }
  Point coordinate(std::size_t i) const;
  Point coordinate(const LatticeIndex& node) const;

  /// Interior id of a lattice node, or -1 when exterior (including off-grid).
  std::ptrdiff_t interior_id(int ix, int iy) const;
  bool is_interior(int ix, int iy) const { return interior_id(ix, iy) >= 0; }

  /// |Omega| = interior_count * h^N.
  double measure() const;
  /// h^N, the lumped mass of one node.
  double cell_volume() const;

  bool same_geometry(const Domain& other) const;

 private:
  friend std::shared_ptr<const Domain> build_interval(double, int);
  friend std::shared_ptr<const Domain> build_box(double, double, int);
  friend std::shared_ptr<const Domain> build_masked(int, int, double, std::vector<std::uint8_t>);

  Domain(DomainKind kind, int dim, double h, int nx, int ny, const std::vector<std::uint8_t>& mask);

  DomainKind kind_;
  int dim_;
  double h_;
  int nx_;
  int ny_;
  std::vector<LatticeIndex> lattice_;
  std::vector<std::int32_t> node_to_interior_;  // (nx+1) * (ny+1), row-major in y
};

using DomainPtr = std::shared_ptr<const Domain>;

/// (0, L) with nodes x_i = i L / n; nodes 0 and n are exterior.
DomainPtr build_interval(double length, int n);

/// (0, Lx) x (0, Ly) with h = Lx / n; Ly must be an integer multiple of h.
DomainPtr build_box(double lx, double ly, int n);

/// Grid of (n+1)^dim nodes with spacing h. mask is row-major (x fastest),
/// nonzero = interior. Frame nodes must be exterior.
DomainPtr build_masked(int dim, int n, double h, std::vector<std::uint8_t> mask);

/// Plain-text mask: first line "N n h", then n+1 rows of n+1 tokens 0/1
/// (one row in 1D). Row r holds the nodes with y index r.
DomainPtr load_mask_file(const std::filesystem::path& path);

/// Real values on the interior nodes of a domain; zero everywhere else.
class GridFunction {
 public:
  GridFunction(DomainPtr domain, std::vector<double> values);
  static GridFunction zeros(DomainPtr domain);
  static GridFunction constant(DomainPtr domain, double value);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Value at an arbitrary lattice node, 0 when exterior.
  double at(int ix, int iy = 0) const;

  bool compatible(const GridFunction& other) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double factor);

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double factor, GridFunction u);
GridFunction operator-(GridFunction u);

/// d(x) = dist(x, complement of Omega) at interior nodes. Closed form for
/// interval and box; exact Euclidean distance to the nearest exterior node
/// for masked grids.
GridFunction distance_function(const DomainPtr& domain);

/// Radius of the largest inscribed ball: L/2, min(Lx, Ly)/2, or the maximum
/// of the distance function on masked grids.
double inradius(const Domain& domain);

/// True when some interior node attains the inradius.
bool has_incenter_node(const Domain& domain);

/// Nearest point of the complement for interior node i: the face projection
/// for interval/box, the nearest exterior lattice node for masked grids.
/// Ties go to the lower coordinate / x axis first.
Point nearest_boundary_point(const Domain& domain, std::size_t i);

}  // namespace fraceig
