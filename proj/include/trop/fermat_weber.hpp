#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trop/torus.hpp"

namespace trop {

// Non-owning view of n points in R^e, row-major. Rows may be arbitrary
// coordinate representatives; the solver canonicalizes internally.
struct PointsView {
  const double* data = nullptr;
  std::size_t n = 0;
  std::size_t e = 0;
  std::span<const double> row(std::size_t i) const { return {data + i * e, e}; }
};

struct FwConfig {
  double step0 = 0.0;   // 0 = median pairwise distance / 10
  int max_iters = 1000;
  double tol = 0.0;     // stop early once step0/sqrt(t) < tol (0 = never)
};

// Exact integer gradient of the summed-distance objective at omega. Defined
// only when every residual omega - X_i has a strict unique maximum and
// minimum; otherwise `offending` lists the violating sample indices.
struct IntegerGradient {
  bool defined = false;
  std::vector<long long> grad;          // per coordinate, sums to zero
  std::vector<std::size_t> offending;
};

struct FwResult {
  TorusPoint point;
  double objective = 0.0;
  bool certified = false;  // integer gradient exists and is exactly zero
  int iterations = 0;
  std::vector<long long> gradient;  // empty when undefined at the point
};

// Sum of tropical distances from omega to every row.
double fw_objective(const PointsView& points, std::span<const double> omega);

IntegerGradient integer_gradient(const PointsView& points, std::span<const double> omega,
                                 double tie_tol = 0.0);

// Subgradient descent with diminishing steps and a vanishing-integer-gradient
// optimality certificate at the best iterate (residual coordinates closer
// than 1e-9 are treated as tied, so certification is conservative).
FwResult fw_solve(const PointsView& points, const FwConfig& config = {});

// Exhaustive 2-D chart grid minimizer; e == 3 only, test oracle.
std::pair<TorusPoint, double> fw_brute_force(const PointsView& points, double lo, double hi,
                                             double grid_step);

// Convenience overloads for materialized point sets.
PointsView view_of(const std::vector<double>& flat, std::size_t n, std::size_t e);

}  // namespace trop
