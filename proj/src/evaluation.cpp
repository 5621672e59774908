#include "trop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "trop/kernels.hpp"

namespace trop {

RocCurve roc_and_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels length mismatch");
  const std::size_t n = scores.size();
  std::size_t n1 = 0;
  for (const int y : labels) n1 += (y == 1);
  const std::size_t n0 = n - n1;
  if (n0 == 0 || n1 == 0) throw std::invalid_argument("AUC requires both labels present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney with average ranks over tied scores
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n1) * (n1 + 1);

  RocCurve roc;
  roc.auc = u / (static_cast<double>(n0) * static_cast<double>(n1));

  // ROC points, thresholds descending: predict 1 iff score >= threshold
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = n; k > 0;) {
    const double threshold = scores[order[k - 1]];
    while (k > 0 && scores[order[k - 1]] == threshold) {
      if (labels[order[k - 1]] == 1) ++tp;
      else ++fp;
      --k;
    }
    roc.thresholds.push_back(threshold);
    roc.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n0));
    roc.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n1));
  }
  return roc;
}

double misclassification_rate(const Model& m, const Dataset& data) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.n; ++i)
    wrong += (classify(m, data.row(i)) != data.y[i]);
  return static_cast<double>(wrong) / static_cast<double>(data.n);
}

ErrorIntervals one_species_error(int e, double sigma0, double sigma1, double eps) {
  if (!(sigma0 > 0) || !(sigma1 > 0)) throw std::invalid_argument("sigmas must be positive");
  if (!(sigma0 < sigma1)) throw std::invalid_argument("one_species_error requires sigma0 < sigma1");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  const double em1 = e - 1.0;
  const double alpha = em1 * std::log(sigma1 / sigma0) / (sigma1 - sigma0);
  const auto F = [&](double x) {
    return x <= 0 ? 0.0 : stats::lower_regularized_gamma(em1, x);
  };
  ErrorIntervals out;
  out.class0 = {1.0 - F(sigma1 * (alpha + eps)), 1.0 - F(sigma1 * (alpha - eps))};
  out.class1 = {F(sigma0 * (alpha - eps)), F(sigma0 * (alpha + eps))};
  out.mean = {0.5 * (out.class0.first + out.class1.first),
              0.5 * (out.class0.second + out.class1.second)};
  return out;
}

double two_species_upper_bound(int e, double d_centers, double sigma) {
  if (e < 3) throw std::invalid_argument("two_species_upper_bound requires e >= 3");
  if (d_centers < 0) throw std::invalid_argument("center distance must be nonnegative");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  return 0.5 * stats::upper_regularized_gamma_int(e - 1, d_centers / (2.0 * sigma));
}

GammaFit gamma_fit_diagnostic(const double* rows, std::size_t n, std::size_t e,
                              std::span<const double> center, stats::Geometry geometry,
                              stats::RadialLaw law) {
  if (n == 0) throw std::invalid_argument("empty dataset");
  if (center.size() != e) throw std::invalid_argument("center dimension mismatch");

  std::vector<double> d(n);
  if (geometry == stats::Geometry::tropical) {
    kernels::distances_to_center(rows, n, e, center.data(), d.data());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < e; ++j) {
        const double r = rows[i * e + j] - center[j];
        s += r * r;
      }
      d[i] = std::sqrt(s);
    }
  }

  const int i_exp = law == stats::RadialLaw::laplace ? 1 : 2;
  const double dim = geometry == stats::Geometry::tropical ? static_cast<double>(e) - 1.0
                                                           : static_cast<double>(e);

  // closed-form MLE: sigma^i = mean(d^i) / n
  double mean_pow = 0.0;
  for (const double v : d) mean_pow += i_exp == 1 ? v : v * v;
  mean_pow /= static_cast<double>(n);

  GammaFit fit;
  fit.sigma_hat = i_exp == 1 ? mean_pow / dim : std::sqrt(mean_pow / dim);

  const double shape = dim / i_exp;
  const double scale = i_exp * std::pow(fit.sigma_hat, i_exp);
  const auto cdf = [&](double t) {
    const double z = i_exp == 1 ? t : t * t;
    return z <= 0 ? 0.0 : stats::lower_regularized_gamma(shape, z / scale);
  };

  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  fit.pp.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    fit.pp.emplace_back(cdf(sorted[k]), (k + 0.5) / static_cast<double>(n));

  fit.ks = n == 1 ? 1.0 : stats::ks_statistic(d, cdf);
  return fit;
}

GammaFit gamma_fit_diagnostic(const Dataset& data, const TorusPoint& center,
                              stats::Geometry geometry, stats::RadialLaw law) {
  if (geometry == stats::Geometry::tropical)
    return gamma_fit_diagnostic(data.x.data(), data.n, data.e, center.span(), geometry, law);
  // Euclidean distances are not shift-invariant, so rows must live in the
  // same chart as the canonical center.
  std::vector<double> rows = data.x;
  for (std::size_t i = 0; i < data.n; ++i) {
    double* r = rows.data() + i * data.e;
    const double last = r[data.e - 1];
    for (std::size_t j = 0; j < data.e; ++j) r[j] -= last;
  }
  return gamma_fit_diagnostic(rows.data(), data.n, data.e, center.span(), geometry, law);
}

}  // namespace trop
