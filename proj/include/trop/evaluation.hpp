#pragma once

#include <span>
#include <utility>
#include <vector>

#include "trop/dataset.hpp"
#include "trop/regression.hpp"
#include "trop/stats.hpp"

namespace trop {

struct RocCurve {
  std::vector<double> thresholds;  // descending; +inf for the (0,0) corner
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
};

// Rank (Mann-Whitney) AUC with ties counted half; ROC points at every
// distinct threshold. Requires both labels present.
RocCurve roc_and_auc(std::span<const double> scores, std::span<const int> labels);

double misclassification_rate(const Model& m, const Dataset& data);

// Class-conditional misclassification intervals of the one-species rule for
// estimation error eps = (e-1) d_tr(omega_hat, omega*) / (sigma0 sigma1).
// eps == 0 collapses each interval to the exact rate.
struct ErrorIntervals {
  std::pair<double, double> class0;  // P(C=1 | Y=0)
  std::pair<double, double> class1;  // P(C=0 | Y=1)
  std::pair<double, double> mean;
};
ErrorIntervals one_species_error(int e, double sigma0, double sigma1, double eps);

// Upper bound Q(e-1, d/(2 sigma)) / 2 on the two-species generalization
// error at coincident estimators.
double two_species_upper_bound(int e, double d_centers, double sigma);

// Radius-law goodness of fit: distances of the rows from a center under the
// chosen geometry, the closed-form sigma MLE, the KS statistic against the
// implied Gamma law, and pp-plot points (theoretical, empirical).
struct GammaFit {
  double sigma_hat = 0.0;
  double ks = 0.0;
  std::vector<std::pair<double, double>> pp;
};
GammaFit gamma_fit_diagnostic(const double* rows, std::size_t n, std::size_t e,
                              std::span<const double> center, stats::Geometry geometry,
                              stats::RadialLaw law);
GammaFit gamma_fit_diagnostic(const Dataset& data, const TorusPoint& center,
                              stats::Geometry geometry, stats::RadialLaw law);

}  // namespace trop
