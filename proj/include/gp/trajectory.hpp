#pragma once

#include <vector>

#include "gp/field.hpp"

namespace gp {

enum class VarTag { u, v, z };

/// Time-indexed sequence of Fields on a shared grid.
struct Trajectory {
  GridPtr grid;
  std::vector<double> times;
  std::vector<Field> fields;
  VarTag tag = VarTag::u;

  std::size_t size() const { return times.size(); }

  void push(double t, Field f) {
    if (!times.empty() && t <= times.back())
      throw std::invalid_argument("Trajectory: times must be increasing");
    times.push_back(t);
    fields.push_back(std::move(f));
  }

  const Field& at(std::size_t i) const { return fields[i]; }
};

inline void check_aligned(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size())
    throw std::invalid_argument("trajectories: misaligned time grids");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * (1.0 + std::abs(a.times[i])))
      throw std::invalid_argument("trajectories: misaligned time grids");
}

}  // namespace gp
