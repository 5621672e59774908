#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trop/dataset.hpp"
#include "trop/fermat_weber.hpp"
#include "trop/torus.hpp"

namespace trop {

// Shared center, class-specific dispersions. sigma0 < sigma1 is stored
// canonically; `swapped` records that the labels arrived the other way
// around (label 0 was the more dispersed class).
struct OneSpeciesModel {
  TorusPoint omega;
  double sigma0 = 1.0;
  double sigma1 = 2.0;
  bool swapped = false;
  double prior = 0.5;  // P(Y = 1)
  std::vector<std::string> leaf_order;

  double label_sigma(int label) const {
    return (label == 1) != swapped ? sigma1 : sigma0;
  }
};

// Class-specific centers, shared dispersion. The decision boundary is the
// tropical bisector of the two centers.
struct TwoSpeciesModel {
  TorusPoint omega0;
  TorusPoint omega1;
  double sigma = 1.0;
  double prior = 0.5;
  std::vector<std::string> leaf_order;
};

// Plain logistic regression on canonical chart coordinates, the Euclidean
// baseline.
struct ClassicalModel {
  std::vector<double> weights;  // length e-1 (chart coordinates)
  double intercept = 0.0;
  std::size_t e = 0;
  std::vector<std::string> leaf_order;
};

using Model = std::variant<OneSpeciesModel, TwoSpeciesModel, ClassicalModel>;

// Log-odds of class 1 for the most general center/dispersion combination:
// d(x,w0)/s0 - d(x,w1)/s1 + (e-1) log(s0/s1) + log(prior/(1-prior)).
double h_general(std::span<const double> x, const TorusPoint& omega0, const TorusPoint& omega1,
                 double sigma0, double sigma1, double prior);

double h_one_species(const OneSpeciesModel& m, std::span<const double> x);
double h_two_species(const TwoSpeciesModel& m, std::span<const double> x);
double h_classical(const ClassicalModel& m, std::span<const double> x);
double h_model(const Model& m, std::span<const double> x);

// Distance threshold c of the one-species rule d(x, omega) >= c, for
// sigma0 < sigma1 and balanced classes.
double one_species_threshold(int e, double sigma0, double sigma1);

double predict_proba(const Model& m, std::span<const double> x);
int classify(const Model& m, std::span<const double> x);  // 1(h >= 0)

// Mean per-sample log-likelihood of the labels under the model.
double log_likelihood(const Model& m, const Dataset& data);

// Pooled Fermat-Weber center, then dispersions by coordinate ascent on the
// per-class precisions (each solved by bisection of the partial derivative).
OneSpeciesModel fit_one_species(const Dataset& data, const FwConfig& fw = {},
                                bool empirical_prior = false);

// Per-class Fermat-Weber centers, then the shared precision by bisection of
// the concave likelihood's derivative.
TwoSpeciesModel fit_two_species(const Dataset& data, const FwConfig& fw = {},
                                bool empirical_prior = false);

// Penalized maximum-likelihood logistic regression (gradient ascent with
// backtracking, ridge 1e-6 so separable data stays finite).
ClassicalModel fit_classical_baseline(const Dataset& data);

void save_model(const std::string& path, const Model& m);
Model load_model(const std::string& path);

}  // namespace trop
