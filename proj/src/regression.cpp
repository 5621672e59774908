#include "trop/regression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "trop/kernels.hpp"
#include "trop/stats.hpp"

namespace trop {

using stats::log_logistic;
using stats::logistic;

namespace {

double prior_offset(double prior) {
  if (!(prior > 0.0) || !(prior < 1.0)) throw std::invalid_argument("prior must be in (0,1)");
  return std::log(prior / (1.0 - prior));
}

void check_sigma(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("sigma must be positive");
}

std::vector<double> distances_to(const Dataset& data, const TorusPoint& center) {
  if (center.dim() != data.e) throw std::invalid_argument("center dimension mismatch");
  std::vector<double> d(data.n);
  kernels::distances_to_center(data.x.data(), data.n, data.e, center.coords().data(), d.data());
  return d;
}

void check_two_classes(const Dataset& data) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  const std::size_t n1 = data.count_label(1);
  if (n1 == 0 || n1 == data.n)
    throw std::invalid_argument("fitting requires both labels present");
}

double empirical_prior_of(const Dataset& data) {
  return static_cast<double>(data.count_label(1)) / static_cast<double>(data.n);
}

// Root of f on [lo, hi] by bisection in log space; f must be evaluable on
// the whole bracket. If f has the same sign at both ends, returns the end
// with the smaller |f| sign-consistent with a maximizer (f decreasing).
double log_bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo <= 0.0) return lo;   // derivative already nonpositive: max at the left end
  if (fhi >= 0.0) return hi;   // still increasing at the right end
  double a = std::log(lo), b = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(std::exp(m));
    if (std::fabs(fm) < 1e-14) return std::exp(m);
    if (fm > 0) a = m;
    else b = m;
    if (b - a < 1e-13) break;
  }
  return std::exp(0.5 * (a + b));
}

constexpr double kLambdaLo = 1e-6;
constexpr double kLambdaHi = 1e6;

}  // namespace

double h_general(std::span<const double> x, const TorusPoint& omega0, const TorusPoint& omega1,
                 double sigma0, double sigma1, double prior) {
  check_sigma(sigma0);
  check_sigma(sigma1);
  if (omega0.dim() != omega1.dim() || x.size() != omega0.dim())
    throw std::invalid_argument("dimension mismatch");
  const double e = static_cast<double>(x.size());
  const double d0 = tropical_distance(x, omega0.span());
  const double d1 = tropical_distance(x, omega1.span());
  return d0 / sigma0 - d1 / sigma1 + (e - 1.0) * std::log(sigma0 / sigma1) +
         prior_offset(prior);
}

double h_one_species(const OneSpeciesModel& m, std::span<const double> x) {
  const double s0 = m.label_sigma(0);
  const double s1 = m.label_sigma(1);
  return h_general(x, m.omega, m.omega, s0, s1, m.prior);
}

double h_two_species(const TwoSpeciesModel& m, std::span<const double> x) {
  return h_general(x, m.omega0, m.omega1, m.sigma, m.sigma, m.prior);
}

double h_classical(const ClassicalModel& m, std::span<const double> x) {
  if (x.size() != m.e) throw std::invalid_argument("dimension mismatch");
  const double last = x[m.e - 1];
  double h = m.intercept;
  for (std::size_t j = 0; j + 1 < m.e; ++j) h += m.weights[j] * (x[j] - last);
  return h;
}

double h_model(const Model& m, std::span<const double> x) {
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, OneSpeciesModel>) return h_one_species(model, x);
        else if constexpr (std::is_same_v<T, TwoSpeciesModel>) return h_two_species(model, x);
        else return h_classical(model, x);
      },
      m);
}

double one_species_threshold(int e, double sigma0, double sigma1) {
  check_sigma(sigma0);
  check_sigma(sigma1);
  if (!(sigma0 < sigma1)) throw std::invalid_argument("threshold requires sigma0 < sigma1");
  return sigma0 * sigma1 * (e - 1.0) * std::log(sigma1 / sigma0) / (sigma1 - sigma0);
}

double predict_proba(const Model& m, std::span<const double> x) {
  return logistic(h_model(m, x));
}

int classify(const Model& m, std::span<const double> x) {
  return h_model(m, x) >= 0.0 ? 1 : 0;
}

double log_likelihood(const Model& m, const Dataset& data) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    const double h = h_model(m, data.row(i));
    sum += data.y[i] == 1 ? log_logistic(h) : log_logistic(-h);
  }
  return sum / static_cast<double>(data.n);
}

OneSpeciesModel fit_one_species(const Dataset& data, const FwConfig& fw, bool empirical_prior) {
  check_two_classes(data);
  if (data.e < 3) throw std::invalid_argument("one-species fit requires e >= 3");

  const FwResult center = fw_solve(PointsView{data.x.data(), data.n, data.e}, fw);
  const std::vector<double> d = distances_to(data, center.point);

  // closed-form per-class radius MLE as the starting point
  double mean0 = 0.0, mean1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (data.y[i] == 0) {
      mean0 += d[i];
      ++n0;
    } else {
      mean1 += d[i];
      ++n1;
    }
  }
  mean0 /= static_cast<double>(n0);
  mean1 /= static_cast<double>(n1);
  const double em1 = static_cast<double>(data.e) - 1.0;
  if (mean0 <= 0.0 && mean1 <= 0.0)
    throw std::invalid_argument("degenerate dataset: all covariates identical");
  const double prior = empirical_prior ? empirical_prior_of(data) : 0.5;
  const double b = prior_offset(prior);

  double lambda0 = 1.0 / std::clamp(mean0 / em1, 1.0 / kLambdaHi, 1.0 / kLambdaLo);
  double lambda1 = 1.0 / std::clamp(mean1 / em1, 1.0 / kLambdaHi, 1.0 / kLambdaLo);

  const auto h_of = [&](double l0, double l1, double di) {
    return l0 * di - l1 * di + em1 * (std::log(l1) - std::log(l0)) + b;
  };
  const auto partial0 = [&](double l0, double l1) {
    double g = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      const double p = logistic(h_of(l0, l1, d[i]));
      g += (data.y[i] - p) * (d[i] - em1 / l0);
    }
    return g / static_cast<double>(data.n);
  };
  const auto partial1 = [&](double l0, double l1) {
    double g = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      const double p = logistic(h_of(l0, l1, d[i]));
      g += (data.y[i] - p) * (em1 / l1 - d[i]);
    }
    return g / static_cast<double>(data.n);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    lambda0 = log_bisect([&](double l0) { return partial0(l0, lambda1); }, kLambdaLo, kLambdaHi);
    lambda1 = log_bisect([&](double l1) { return partial1(lambda0, l1); }, kLambdaLo, kLambdaHi);
    if (std::fabs(partial0(lambda0, lambda1)) < 1e-10 &&
        std::fabs(partial1(lambda0, lambda1)) < 1e-10)
      break;
  }

  OneSpeciesModel model;
  model.omega = center.point;
  model.prior = prior;
  model.leaf_order = data.leaf_order;
  const double s0 = 1.0 / lambda0;
  const double s1 = 1.0 / lambda1;
  model.swapped = s0 > s1;
  model.sigma0 = std::min(s0, s1);
  model.sigma1 = std::max(s0, s1);
  return model;
}

TwoSpeciesModel fit_two_species(const Dataset& data, const FwConfig& fw, bool empirical_prior) {
  check_two_classes(data);
  if (data.e < 3) throw std::invalid_argument("two-species fit requires e >= 3");

  const Dataset d0set = data.with_label(0);
  const Dataset d1set = data.with_label(1);
  const FwResult c0 = fw_solve(PointsView{d0set.x.data(), d0set.n, d0set.e}, fw);
  const FwResult c1 = fw_solve(PointsView{d1set.x.data(), d1set.n, d1set.e}, fw);
  if (c0.point == c1.point)
    throw std::runtime_error(
        "class centers coincide: the bisector is degenerate, use the one-species model");

  const std::vector<double> d0 = distances_to(data, c0.point);
  const std::vector<double> d1 = distances_to(data, c1.point);
  const double prior = empirical_prior ? empirical_prior_of(data) : 0.5;
  const double b = prior_offset(prior);

  // log-likelihood is concave in lambda (h is linear in it)
  const auto dldl = [&](double lambda) {
    double g = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      const double u = d0[i] - d1[i];
      const double p = logistic(lambda * u + b);
      g += (data.y[i] - p) * u;
    }
    return g / static_cast<double>(data.n);
  };
  const double lambda = log_bisect(dldl, kLambdaLo, kLambdaHi);

  TwoSpeciesModel model;
  model.omega0 = c0.point;
  model.omega1 = c1.point;
  model.sigma = 1.0 / lambda;
  model.prior = prior;
  model.leaf_order = data.leaf_order;
  return model;
}

ClassicalModel fit_classical_baseline(const Dataset& data) {
  check_two_classes(data);
  const std::size_t e = data.e;
  const std::size_t p = e - 1;  // chart coordinates
  constexpr double kRidge = 1e-6;

  std::vector<double> z(data.n * p);
  for (std::size_t i = 0; i < data.n; ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < p; ++j) z[i * p + j] = r[j] - r[e - 1];
  }

  std::vector<double> w(p, 0.0);
  double intercept = 0.0;

  const auto objective = [&](const std::vector<double>& wt, double b) {
    double l = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      double h = b;
      for (std::size_t j = 0; j < p; ++j) h += wt[j] * z[i * p + j];
      l += data.y[i] == 1 ? log_logistic(h) : log_logistic(-h);
    }
    l /= static_cast<double>(data.n);
    double pen = 0.0;
    for (const double v : wt) pen += v * v;
    return l - 0.5 * kRidge * pen;
  };

  std::vector<double> gw(p);
  double gb = 0.0;
  double step = 1.0;
  for (int it = 0; it < 5000; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    gb = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      double h = intercept;
      for (std::size_t j = 0; j < p; ++j) h += w[j] * z[i * p + j];
      const double resid = data.y[i] - logistic(h);
      for (std::size_t j = 0; j < p; ++j) gw[j] += resid * z[i * p + j];
      gb += resid;
    }
    double norm2 = gb * gb;
    for (std::size_t j = 0; j < p; ++j) {
      gw[j] = gw[j] / static_cast<double>(data.n) - kRidge * w[j];
      norm2 += gw[j] * gw[j];
    }
    gb /= static_cast<double>(data.n);
    if (std::sqrt(norm2) < 1e-8) break;

    // backtracking line search on the penalized likelihood
    const double base = objective(w, intercept);
    step = std::min(step * 2.0, 1e4);
    std::vector<double> wt(p);
    bool accepted = false;
    while (step > 1e-14) {
      for (std::size_t j = 0; j < p; ++j) wt[j] = w[j] + step * gw[j];
      if (objective(wt, intercept + step * gb) > base) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    for (std::size_t j = 0; j < p; ++j) w[j] = wt[j];
    intercept += step * gb;
  }

  ClassicalModel model;
  model.weights = std::move(w);
  model.intercept = intercept;
  model.e = e;
  model.leaf_order = data.leaf_order;
  return model;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json common_fields(std::size_t e, double prior, const std::vector<std::string>& leaf_order) {
  json j;
  j["e"] = e;
  j["prior"] = prior;
  j["chart"] = "last_coordinate_zero";
  if (!leaf_order.empty()) j["leaf_order"] = leaf_order;
  return j;
}

std::vector<std::string> leaf_order_of(const json& j) {
  if (j.contains("leaf_order")) return j["leaf_order"].get<std::vector<std::string>>();
  return {};
}

}  // namespace

void save_model(const std::string& path, const Model& m) {
  json j = std::visit(
      [](const auto& model) -> json {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, OneSpeciesModel>) {
          json out = common_fields(model.omega.dim(), model.prior, model.leaf_order);
          out["model"] = "one_species";
          out["omega"] = model.omega.coords();
          out["sigma0"] = model.sigma0;
          out["sigma1"] = model.sigma1;
          out["swapped"] = model.swapped;
          return out;
        } else if constexpr (std::is_same_v<T, TwoSpeciesModel>) {
          json out = common_fields(model.omega0.dim(), model.prior, model.leaf_order);
          out["model"] = "two_species";
          out["omega0"] = model.omega0.coords();
          out["omega1"] = model.omega1.coords();
          out["sigma"] = model.sigma;
          return out;
        } else {
          json out = common_fields(model.e, 0.5, model.leaf_order);
          out["model"] = "classical";
          out["weights"] = model.weights;
          out["intercept"] = model.intercept;
          return out;
        }
      },
      m);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << j.dump(2) << "\n";
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  json j;
  in >> j;
  const std::string kind = j.at("model").get<std::string>();
  if (kind == "one_species") {
    OneSpeciesModel m;
    m.omega = TorusPoint(j.at("omega").get<std::vector<double>>());
    m.sigma0 = j.at("sigma0").get<double>();
    m.sigma1 = j.at("sigma1").get<double>();
    m.swapped = j.at("swapped").get<bool>();
    m.prior = j.at("prior").get<double>();
    m.leaf_order = leaf_order_of(j);
    return m;
  }
  if (kind == "two_species") {
    TwoSpeciesModel m;
    m.omega0 = TorusPoint(j.at("omega0").get<std::vector<double>>());
    m.omega1 = TorusPoint(j.at("omega1").get<std::vector<double>>());
    m.sigma = j.at("sigma").get<double>();
    m.prior = j.at("prior").get<double>();
    m.leaf_order = leaf_order_of(j);
    return m;
  }
  if (kind == "classical") {
    ClassicalModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.e = j.at("e").get<std::size_t>();
    m.leaf_order = leaf_order_of(j);
    return m;
  }
  throw std::runtime_error("unknown model kind '" + kind + "' in " + path);
}

}  // namespace trop
