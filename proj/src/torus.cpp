#include "trop/torus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trop/kernels.hpp"

namespace trop {

namespace {

void check_raw(std::span<const double> raw) {
  if (raw.size() < 2)
    throw std::invalid_argument("torus point needs at least 2 coordinates, got " +
                                std::to_string(raw.size()));
  for (const double x : raw)
    if (!std::isfinite(x))
      throw std::invalid_argument("torus point has a non-finite coordinate");
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b)
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
}

}  // namespace

TorusPoint::TorusPoint(std::vector<double> raw) : c_(std::move(raw)) {
  check_raw(c_);
  const double last = c_.back();
  for (double& x : c_) x -= last;
  c_.back() = 0.0;  // force exact zero, -0.0 included
}

TorusPoint normalize(std::span<const double> raw) {
  return TorusPoint(std::vector<double>(raw.begin(), raw.end()));
}

TorusPoint translate(const TorusPoint& p, const TorusPoint& delta) {
  check_dims(p.dim(), delta.dim());
  std::vector<double> out(p.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] + delta[i];
  return TorusPoint(std::move(out));
}

double tropical_distance(std::span<const double> v, std::span<const double> w) {
  check_dims(v.size(), w.size());
  if (v.empty()) throw std::invalid_argument("empty vectors");
  return kernels::range_of_difference(v.data(), w.data(), v.size());
}

double tropical_distance(const TorusPoint& v, const TorusPoint& w) {
  return tropical_distance(v.span(), w.span());
}

int extremal_sign(std::span<const double> v, std::size_t i, double tol) {
  const std::size_t e = v.size();
  if (i >= e) throw std::out_of_range("coordinate index out of range");
  double mx = v[0], mn = v[0];
  for (std::size_t j = 1; j < e; ++j) {
    mx = std::max(mx, v[j]);
    mn = std::min(mn, v[j]);
  }
  if (v[i] >= mx - tol) return 1;
  if (v[i] <= mn + tol) {
    // -1 only when v[i] is the strict unique minimum.
    std::size_t n_min = 0;
    for (std::size_t j = 0; j < e; ++j)
      if (v[j] <= mn + tol) ++n_min;
    if (n_min == 1) return -1;
  }
  return 0;
}

int tie_degree(std::span<const double> v, std::size_t i, double tol) {
  const std::size_t e = v.size();
  if (i >= e) throw std::out_of_range("coordinate index out of range");
  std::vector<double> neg(v.begin(), v.end());
  for (double& x : neg) x = -x;
  return extremal_sign(v, i, tol) + extremal_sign(neg, i, tol);
}

double ball_volume(int e, double r) {
  if (e < 2) throw std::invalid_argument("ball_volume requires e >= 2");
  if (r < 0) throw std::invalid_argument("negative radius");
  return e * std::pow(r, e - 1);
}

double sphere_area(int e, double r) {
  if (e < 2) throw std::invalid_argument("sphere_area requires e >= 2");
  if (r < 0) throw std::invalid_argument("negative radius");
  return static_cast<double>(e) * (e - 1) * std::pow(r, e - 2);
}

double normalizing_constant(int e, double sigma) {
  if (e < 2) throw std::invalid_argument("normalizing_constant requires e >= 2");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  double fact = 1.0;
  for (int k = 2; k <= e; ++k) fact *= k;
  return fact * std::pow(sigma, e - 1);
}

double log_normalizing_constant(int e, double sigma) {
  if (e < 2) throw std::invalid_argument("normalizing_constant requires e >= 2");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  return std::lgamma(e + 1.0) + (e - 1) * std::log(sigma);
}

double tropical_inner_product(const TorusPoint& omega, const TorusPoint& x, double c) {
  return tropical_distance(x, omega) - c;
}

}  // namespace trop
