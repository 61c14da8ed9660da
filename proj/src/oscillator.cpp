#include "tonks/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tonks {

namespace {

// ln(pi^{-1/4})
const double kLogPsi0Norm = -0.25 * std::log(std::numbers::pi);

// Rescaling threshold for the running recurrence.
constexpr double kBig = 1e150;
const double kLogBig = std::log(kBig);

// Fills out[n] = psi_n(x) and deriv[n] = psi_n'(x) for n = 0..max_index.
//
// The recurrence runs on |x| and applies (-1)^n afterwards so parity holds
// bit for bit. Values are carried as mantissa * exp(log_scale) so the
// Gaussian factor cannot underflow before the polynomial growth catches up.
template <class Out>
void evaluate_column(int max_index, double x, Out&& store) {
  const double ax = std::fabs(x);
  const bool negative = x < 0.0;
  double log_scale = kLogPsi0Norm - 0.5 * ax * ax;
  double prev = 0.0;  // psi_{n-1} mantissa
  double cur = 1.0;   // psi_n mantissa
  double value_prev = 0.0;
  for (int n = 0; n <= max_index; ++n) {
    double value = 0.0;
    if (log_scale > -700.0) {
      value = cur * std::exp(log_scale);
    } else if (cur != 0.0) {
      value = std::copysign(std::exp(std::log(std::fabs(cur)) + log_scale), cur);
    }
    // psi_n' = sqrt(2n) psi_{n-1} - x psi_n, evaluated on |x|
    const double deriv = std::sqrt(2.0 * n) * value_prev - ax * value;
    const bool odd = (n & 1) != 0;
    const double value_sign = (negative && odd) ? -1.0 : 1.0;
    // derivative has the opposite parity of the function
    const double deriv_sign = (negative && !odd) ? -1.0 : 1.0;
    store(n, value_sign * value, deriv_sign * deriv);

    const double next = std::sqrt(2.0 / (n + 1)) * ax * cur - std::sqrt(double(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    value_prev = value;
    if (std::fabs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      log_scale += kLogBig;
    }
  }
}

}  // namespace

DimensionlessGrid DimensionlessGrid::symmetric(double half_extent, double points_per_unit,
                                               std::size_t min_points) {
  if (!(half_extent > 0.0) || !(points_per_unit > 0.0))
    throw std::invalid_argument("grid extent and density must be positive");
  auto half_count = static_cast<long>(std::ceil(half_extent * points_per_unit));
  const auto needed = static_cast<long>((min_points + 1) / 2);
  half_count = std::max(half_count, needed);
  const double h = half_extent / static_cast<double>(half_count);
  std::vector<double> pts(static_cast<std::size_t>(2 * half_count + 1));
  for (long j = -half_count; j <= half_count; ++j)
    pts[static_cast<std::size_t>(j + half_count)] = static_cast<double>(j) * h;
  return DimensionlessGrid(std::move(pts), h);
}

DimensionlessGrid DimensionlessGrid::from_points(std::vector<double> points) {
  if (points.size() < 2) throw std::invalid_argument("grid needs at least two points");
  const double h = (points.back() - points.front()) / static_cast<double>(points.size() - 1);
  if (!(h > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
  const double scale = std::max(std::fabs(points.front()), std::fabs(points.back()));
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double step = points[i] - points[i - 1];
    if (!(step > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
    if (std::fabs(step - h) > 1e-12 * std::max(h, scale))
      throw std::invalid_argument("grid spacing is not uniform");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::fabs(points[i] + points[points.size() - 1 - i]) > 1e-12 * std::max(h, scale))
      throw std::invalid_argument("grid is not symmetric about zero");
  }
  return DimensionlessGrid(std::move(points), h);
}

EigenfunctionTable::EigenfunctionTable(int max_index, DimensionlessGrid grid)
    : max_index_(max_index), grid_(std::move(grid)) {
  if (max_index < 0) throw std::invalid_argument("max_index must be >= 0");
  const std::size_t cols = grid_.size();
  const std::size_t rows = static_cast<std::size_t>(max_index) + 1;
  values_.assign(rows * cols, 0.0);
  derivatives_.assign(rows * cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    evaluate_column(max_index, grid_[j], [&](int n, double v, double d) {
      values_[static_cast<std::size_t>(n) * cols + j] = v;
      derivatives_[static_cast<std::size_t>(n) * cols + j] = d;
    });
  }
}

std::span<const double> EigenfunctionTable::values(int n) const {
  if (n < 0 || n > max_index_) throw std::out_of_range("eigenfunction index " + std::to_string(n));
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(n) * grid_.size(),
                                                  grid_.size());
}

std::span<const double> EigenfunctionTable::derivatives(int n) const {
  if (n < 0 || n > max_index_) throw std::out_of_range("eigenfunction index " + std::to_string(n));
  return std::span<const double>(derivatives_)
      .subspan(static_cast<std::size_t>(n) * grid_.size(), grid_.size());
}

EigenfunctionTable build_eigenfunction_table(int max_index, const DimensionlessGrid& grid) {
  if (max_index < 0) throw std::invalid_argument("max_index must be >= 0");
  return EigenfunctionTable(max_index, grid);
}

double eigenfunction_value(int n, double x) {
  if (n < 0) throw std::invalid_argument("eigenfunction index must be >= 0");
  double out = 0.0;
  evaluate_column(n, x, [&](int k, double v, double) {
    if (k == n) out = v;
  });
  return out;
}

double eigenfunction_derivative(int n, double x) {
  if (n < 0) throw std::invalid_argument("eigenfunction index must be >= 0");
  double out = 0.0;
  evaluate_column(n, x, [&](int k, double, double d) {
    if (k == n) out = d;
  });
  return out;
}

}  // namespace tonks
