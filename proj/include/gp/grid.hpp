#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gp {

/// Periodic box discretization: dim in {2,3}, n points per axis, box length L.
/// The dual lattice is xi_k = 2*pi*k/L for k in {-n/2,...,n/2-1}, stored in
/// DFT index order (k >= 0 first, then negative frequencies).
class Grid {
public:
  Grid(int dim, int n, double box_length)
      : dim_(dim), n_(n), length_(box_length) {
    if (dim != 2 && dim != 3)
      throw std::invalid_argument("Grid: dim must be 2 or 3");
    if (n < 8 || n % 2 != 0)
      throw std::invalid_argument("Grid: n must be even and >= 8");
    if (!(box_length > 0.0))
      throw std::invalid_argument("Grid: box_length must be positive");
    freqs_.resize(static_cast<std::size_t>(n));
    const double dxi = 2.0 * std::numbers::pi / length_;
    for (int j = 0; j < n; ++j) {
      const int k = (j < n / 2) ? j : j - n;
      freqs_[static_cast<std::size_t>(j)] = dxi * k;
    }
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double cell_volume() const { return std::pow(spacing(), dim_); }
  double volume() const { return std::pow(length_, dim_); }
  double freq_step() const { return 2.0 * std::numbers::pi / length_; }
  /// Largest |xi| component on the lattice (Nyquist).
  double freq_max_axis() const { return freq_step() * (n_ / 2); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
    return s;
  }

  /// Frequency for a single-axis DFT index.
  double freq(int axis_index) const {
    return freqs_[static_cast<std::size_t>(axis_index)];
  }

  /// Signed integer mode for a single-axis DFT index.
  int mode(int axis_index) const {
    return (axis_index < n_ / 2) ? axis_index : axis_index - n_;
  }

  std::array<int, 3> unflatten(std::size_t idx) const {
    std::array<int, 3> out{0, 0, 0};
    auto un = static_cast<std::size_t>(n_);
    for (int a = dim_ - 1; a >= 0; --a) {
      out[static_cast<std::size_t>(a)] = static_cast<int>(idx % un);
      idx /= un;
    }
    return out;
  }

  std::size_t flatten(const std::array<int, 3>& ix) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a)
      idx = idx * static_cast<std::size_t>(n_) +
            static_cast<std::size_t>(ix[static_cast<std::size_t>(a)]);
    return idx;
  }

  /// Dual lattice point at a flat index (z component 0 in 2D).
  std::array<double, 3> xi(std::size_t idx) const {
    auto ix = unflatten(idx);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a)
      out[static_cast<std::size_t>(a)] = freq(ix[static_cast<std::size_t>(a)]);
    return out;
  }

  double xi_abs(std::size_t idx) const {
    auto v = xi(idx);
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  }

  /// Physical coordinate at a flat index, x in [0,L)^dim.
  std::array<double, 3> x(std::size_t idx) const {
    auto ix = unflatten(idx);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    const double h = spacing();
    for (int a = 0; a < dim_; ++a)
      out[static_cast<std::size_t>(a)] = h * ix[static_cast<std::size_t>(a)];
    return out;
  }

private:
  int dim_;
  int n_;
  double length_;
  std::vector<double> freqs_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int dim, int n, double box_length) {
  return std::make_shared<const Grid>(dim, n, box_length);
}

}  // namespace gp
