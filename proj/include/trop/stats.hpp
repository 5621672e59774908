#pragma once

#include <functional>
#include <vector>

namespace trop::stats {

enum class Geometry { tropical, euclidean };
enum class RadialLaw { laplace, gaussian };  // exponent i = 1 resp. 2

double log_factorial(int n);

// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
// fraction otherwise.
double lower_regularized_gamma(double a, double x);
double upper_regularized_gamma(double a, double x);

// Exact finite-sum Q(n, x) = e^{-x} sum_{k<n} x^k / k! for integer shape.
double upper_regularized_gamma_int(int n, double x);

// CDF of Gamma(shape, scale) at x.
double gamma_cdf(double shape, double scale, double x);

// Overflow-safe logistic and log-logistic.
double logistic(double t);
double log_logistic(double t);  // log(1 / (1 + e^{-t}))

// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
// Sorts a copy of the sample.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace trop::stats
