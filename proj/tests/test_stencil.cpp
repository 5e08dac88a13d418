#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fraceig/stencil.hpp"

using namespace fraceig;

namespace {

// Exterior lattice sum for (0, L) with n intervals, in lattice units:
// sum_{k >= i} k^{-a} + sum_{k >= n-i} k^{-a}.
double interval_tail_lattice(int i, int n, double a) {
  double head_left = 0.0, head_right = 0.0;
  for (int k = 1; k < i; ++k) head_left += std::pow(k, -a);
  for (int k = 1; k < n - i; ++k) head_right += std::pow(k, -a);
  return 2.0 * std::riemann_zeta(a) - head_left - head_right;
}

}  // namespace

TEST_SUITE("stencil") {
  TEST_CASE("near-field correction") {
    // 1D, p = 2: c = -zeta(2s - 1) while that is positive.
    CHECK(near_field_correction(1, 0.75, 2.0) == doctest::Approx(-std::riemann_zeta(0.5)).epsilon(1e-12));
    CHECK(near_field_correction(1, 0.95, 2.0) == doctest::Approx(-std::riemann_zeta(0.9)).epsilon(1e-12));
    // sigma = 1 + sp - p = 0 at s = 0.5, p = 2: -2 zeta(0) / 2 = 1/2.
    CHECK(near_field_correction(1, 0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    // sigma in (-4, -2) makes zeta positive, so no correction applies.
    CHECK(near_field_correction(1, 0.05, 4.0) == 0.0);
    CHECK(near_field_correction(2, 0.9, 2.0) > 0.0);
  }

  TEST_CASE("pair weights follow the lattice formula") {
    const auto d = build_interval(1.0, 16);
    const NonlocalStencil st(d, 0.7, 2.5);
    const double h = d->spacing();
    const double a = 1.0 + 0.7 * 2.5;
    CHECK(st.exponent() == doctest::Approx(a));
    const double c = st.near_field_correction();
    CHECK(st.offset_weight(1, 0) == doctest::Approx(std::pow(h, 2.0 - a) * (1.0 + c)).epsilon(1e-14));
    CHECK(st.offset_weight(-1, 0) == st.offset_weight(1, 0));
    CHECK(st.offset_weight(5, 0) == doctest::Approx(std::pow(h, 2.0) * std::pow(5 * h, -a)).epsilon(1e-13));
    CHECK(st.pair_weight(3, 9) == st.offset_weight(6, 0));
    CHECK(lattice_pair_weight(0, 0, a, c) == 0.0);

    const auto box = build_box(1.0, 1.0, 8);
    const NonlocalStencil sb(box, 0.6, 2.0);
    const double hb = box->spacing();
    CHECK(sb.offset_weight(2, 3) ==
          doctest::Approx(std::pow(hb, 4.0) * std::pow(hb * std::sqrt(13.0), -3.2)).epsilon(1e-13));
    CHECK(sb.offset_weight(0, -1) == sb.offset_weight(1, 0));
  }

  TEST_CASE("1D tail equals the exact exterior lattice sum") {
    for (double s : {0.3, 0.6, 0.95})
      for (double p : {2.0, 3.0}) {
        const int n = 20;
        const auto d = build_interval(1.0, n);
        const NonlocalStencil st(d, s, p);
        const double a = st.exponent();
        const double scale = std::pow(d->spacing(), 2.0 - a);
        for (std::size_t i = 0; i < d->interior_count(); ++i) {
          const int ix = d->lattice()[i].ix;
          CAPTURE(s);
          CAPTURE(p);
          CAPTURE(ix);
          // Nearest neighbours outside carry the correction too.
          double want = interval_tail_lattice(ix, n, a);
          if (ix == 1) want += st.near_field_correction();
          if (ix == n - 1) want += st.near_field_correction();
          CHECK(st.tail()[i] == doctest::Approx(scale * want).epsilon(1e-12));
        }
      }
  }

  TEST_CASE("2D tail against a large explicit disk sum") {
    const int n = 6;
    const auto d = build_box(1.0, 1.0, n);
    const double s = 0.5, p = 2.0;
    const NonlocalStencil st(d, s, p);
    const double a = st.exponent();
    const double sigma = a - 2.0;
    const double scale = std::pow(d->spacing(), 4.0 - a);
    const int radius = 600;
    for (std::size_t i : {std::size_t{0}, std::size_t{7}, std::size_t{12}}) {
      const auto node = d->lattice()[i];
      double sum = 0.0;
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
          const long sq = long(dx) * dx + long(dy) * dy;
          if (sq == 0 || sq > long(radius) * radius) continue;
          if (d->is_interior(node.ix + dx, node.iy + dy)) continue;
          sum += lattice_pair_weight(dx, dy, a, st.near_field_correction());
        }
      // Continuum remainder outside the disk.
      sum += 2.0 * 3.14159265358979323846 * std::pow(radius, -sigma) / sigma;
      CAPTURE(i);
      CHECK(st.tail()[i] == doctest::Approx(scale * sum).epsilon(2e-4));
    }
  }

  TEST_CASE("validation and cache") {
    const auto d = build_interval(1.0, 8);
    CHECK_THROWS_AS(NonlocalStencil(d, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(NonlocalStencil(d, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(NonlocalStencil(d, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(NonlocalStencil(nullptr, 0.5, 2.0), std::invalid_argument);
    const auto a = stencil_for(d, 0.5, 2.0);
    const auto b = stencil_for(build_interval(1.0, 8), 0.5, 2.0);
    CHECK(a == b);
    CHECK(stencil_for(d, 0.6, 2.0) != a);
  }
}
