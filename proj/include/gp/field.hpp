#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "gp/grid.hpp"

namespace gp {

using cplx = std::complex<double>;

enum class Rep { physical, spectral };

/// Complex scalar field over a Grid, in physical or spectral representation.
/// Operations in spectral.hpp treat Fields as immutable values.
class Field {
public:
  Field(GridPtr grid, Rep rep)
      : grid_(std::move(grid)), rep_(rep), values_(grid_->size(), cplx{0.0, 0.0}) {}

  Field(GridPtr grid, Rep rep, std::vector<cplx> values)
      : grid_(std::move(grid)), rep_(rep), values_(std::move(values)) {
    if (values_.size() != grid_->size())
      throw std::invalid_argument("Field: value count does not match grid");
  }

  static Field zeros(GridPtr grid, Rep rep = Rep::physical) {
    return Field(std::move(grid), rep);
  }

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  Rep rep() const { return rep_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, cplx c) { return a *= c; }
  friend Field operator*(cplx c, Field a) { return a *= c; }

private:
  void check_compatible(const Field& o) const {
    if (grid_.get() != o.grid_.get() && grid_->size() != o.grid_->size())
      throw std::invalid_argument("Field: incompatible grids");
    if (rep_ != o.rep_)
      throw std::invalid_argument("Field: mixed representations");
  }

  GridPtr grid_;
  Rep rep_;
  std::vector<cplx> values_;
};

}  // namespace gp
