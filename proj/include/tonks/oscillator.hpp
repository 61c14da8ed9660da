#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tonks {

/// Uniform grid of dimensionless positions x/ell, symmetric about zero.
class DimensionlessGrid {
 public:
  /// Grid with 2M+1 points on [-half_extent, half_extent] and spacing close to
  /// 1/points_per_unit; the spacing is refined if needed to reach min_points.
  static DimensionlessGrid symmetric(double half_extent, double points_per_unit,
                                     std::size_t min_points = 2048);

  /// Validates an explicit point list (strictly increasing, uniform within
  /// 1e-12 relative, closed under negation).
  static DimensionlessGrid from_points(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

 private:
  DimensionlessGrid(std::vector<double> points, double spacing)
      : points_(std::move(points)), spacing_(spacing) {}

  std::vector<double> points_;
  double spacing_ = 0.0;
};

/// Orthonormal oscillator eigenfunctions psi_n(x) and their derivatives,
/// rows n = 0..max_index, columns = grid points.
///
/// Scaled so that the physical eigenfunction is psi_n(x/ell)/sqrt(ell).
class EigenfunctionTable {
 public:
  EigenfunctionTable(int max_index, DimensionlessGrid grid);

  int max_index() const { return max_index_; }
  const DimensionlessGrid& grid() const { return grid_; }

  std::span<const double> values(int n) const;
  std::span<const double> derivatives(int n) const;

 private:
  int max_index_;
  DimensionlessGrid grid_;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

EigenfunctionTable build_eigenfunction_table(int max_index, const DimensionlessGrid& grid);

/// psi_n(x) evaluated with the same recurrence as the table.
double eigenfunction_value(int n, double x);

/// d psi_n / dx at a single point.
double eigenfunction_derivative(int n, double x);

}  // namespace tonks
