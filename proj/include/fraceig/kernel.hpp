#pragma once

#include <cstddef>
#include <vector>

#include "fraceig/geometry.hpp"

namespace fraceig {

/// Symmetric bounded interaction weight a(x, y) with alpha_k <= a <= beta_k.
///
/// Three evaluation rules are supported:
///  - constant:          a = c
///  - periodic product:  a = mean + amplitude * P(x) P(y),
///                       P(x) = prod_d cos(2 pi f x_d)
///  - tabulated:         a given on interior node pairs, plus the values
///                       a(x_i, pi(x_i)) used by the exterior tail
class Kernel {
 public:
  enum class Rule { constant, periodic_product, tabulated };

  static Kernel constant(double value);
  static Kernel periodic_product(double mean, double amplitude, int frequency);
  /// pair is row-major interior_count x interior_count and must be symmetric.
  static Kernel tabulated(DomainPtr domain, std::vector<double> pair, std::vector<double> boundary);

  Rule rule() const { return rule_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double mean() const { return mean_; }
  double amplitude() const { return amplitude_; }
  int frequency() const { return frequency_; }

  /// Same family at a different oscillation frequency (constant kernels are
  /// returned unchanged).
  Kernel with_frequency(int frequency) const;

  /// a(x, y) for the analytic rules.
  double operator()(const Point& x, const Point& y) const;

  /// Kernel values on a domain: a(x_i, x_j) for interior pairs and
  /// a(x_i, pi(x_i)) for the tail.
  struct Sampled {
    // For constant / periodic rules pair values are mean + amplitude*f_i*f_j.
    double mean = 1.0;
    double amplitude = 0.0;
    std::vector<double> factor;
    const std::vector<double>* table = nullptr;  // tabulated rule
    std::size_t stride = 0;
    std::vector<double> tail;

    double pair(std::size_t i, std::size_t j) const {
      return table ? (*table)[i * stride + j] : mean + amplitude * factor[i] * factor[j];
    }
  };
  Sampled sample(const Domain& domain) const;

 private:
  Kernel() = default;
  double profile(const Point& x) const;

  Rule rule_ = Rule::constant;
  double mean_ = 1.0;
  double amplitude_ = 0.0;
  int frequency_ = 0;
  double lower_ = 1.0;
  double upper_ = 1.0;
  DomainPtr domain_;
  std::vector<double> pair_;
  std::vector<double> boundary_;
};

/// Weak-* limit of a periodic family: the constant kernel equal to its mean.
Kernel kernel_average(const Kernel& kernel);

}  // namespace fraceig
