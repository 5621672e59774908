#include "trop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trop::stats {

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial of negative n");
  return std::lgamma(n + 1.0);
}

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Lower incomplete gamma by series, regularized.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction, regularized.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double lower_regularized_gamma(double a, double x) {
  if (!(a > 0)) throw std::invalid_argument("gamma shape must be positive");
  if (x < 0) throw std::invalid_argument("gamma argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double upper_regularized_gamma(double a, double x) {
  return 1.0 - lower_regularized_gamma(a, x);
}

double upper_regularized_gamma_int(int n, double x) {
  if (n < 1) throw std::invalid_argument("integer gamma shape must be >= 1");
  if (x < 0) throw std::invalid_argument("gamma argument must be nonnegative");
  double term = std::exp(-x);
  double sum = term;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::min(sum, 1.0);
}

double gamma_cdf(double shape, double scale, double x) {
  if (!(scale > 0)) throw std::invalid_argument("gamma scale must be positive");
  if (x <= 0) return 0.0;
  return lower_regularized_gamma(shape, x / scale);
}

double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log_logistic(double t) {
  if (t >= 0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS statistic of empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max(d, std::fabs((k + 1) / n - f));
    d = std::max(d, std::fabs(k / n - f));
  }
  return d;
}

}  // namespace trop::stats
