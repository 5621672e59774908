#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trop {

// A point of the tropical projective torus R^e / R*1 in the canonical chart
// that pins the last coordinate to 0. Construction normalizes, so equality
// and hashing on the stored coordinates are exact quotient equality.
class TorusPoint {
 public:
  TorusPoint() = default;

  // Canonicalizes: subtracts the last component from every component.
  // Throws std::invalid_argument if raw has fewer than 2 entries or any
  // non-finite entry.
  explicit TorusPoint(std::vector<double> raw);

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  const std::vector<double>& coords() const { return c_; }
  std::span<const double> span() const { return {c_.data(), c_.size()}; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> c_;
};

TorusPoint normalize(std::span<const double> raw);

// p + delta in the quotient, re-canonicalized.
TorusPoint translate(const TorusPoint& p, const TorusPoint& delta);

// max(v - w) - min(v - w); the generalized Hilbert projective metric.
double tropical_distance(std::span<const double> v, std::span<const double> w);
double tropical_distance(const TorusPoint& v, const TorusPoint& w);

// Directional derivative sign of the tropical distance along coordinate i:
// +1 if v[i] is a (possibly tied) maximum, -1 if v[i] is the strict unique
// minimum, 0 otherwise. Coordinates closer than tol count as tied.
int extremal_sign(std::span<const double> v, std::size_t i, double tol = 0.0);

// extremal_sign(v, i) + extremal_sign(-v, i): 2 iff v is the zero vector,
// 1 iff v[i] is a non-unique extremum of a nonzero v, 0 otherwise.
int tie_degree(std::span<const double> v, std::size_t i, double tol = 0.0);

// Volume e*r^(e-1) of the tropical ball and area e*(e-1)*r^(e-2) of the
// tropical sphere of radius r in R^e / R*1.
double ball_volume(int e, double r);
double sphere_area(int e, double r);

// Normalizing constant e! * sigma^(e-1) of the tropical Laplace density,
// and its log-domain version for large e.
double normalizing_constant(int e, double sigma);
double log_normalizing_constant(int e, double sigma);

// d_tr(x, omega) - c, the tropical analogue of a linear score.
double tropical_inner_product(const TorusPoint& omega, const TorusPoint& x, double c);

}  // namespace trop
