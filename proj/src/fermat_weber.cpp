#include "trop/fermat_weber.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "trop/kernels.hpp"

namespace trop {

namespace {

constexpr double kCertTieTol = 1e-9;

void check_points(const PointsView& points) {
  if (points.n == 0) throw std::invalid_argument("empty point set");
  if (points.e < 2) throw std::invalid_argument("points need dimension >= 2");
}

// Canonicalized copy of the rows (last coordinate zero per row).
std::vector<double> canonical_rows(const PointsView& points) {
  std::vector<double> rows(points.data, points.data + points.n * points.e);
  for (std::size_t i = 0; i < points.n; ++i) {
    double* r = rows.data() + i * points.e;
    const double last = r[points.e - 1];
    for (std::size_t j = 0; j < points.e; ++j) r[j] -= last;
    r[points.e - 1] = 0.0;
  }
  return rows;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    hi = 0.5 * (lo + hi);
  }
  return hi;
}

// Median pairwise tropical distance; exact for small n, a fixed strided
// subsample beyond that so initialization stays O(n).
double median_pairwise_distance(const PointsView& points) {
  const std::size_t n = points.n;
  std::vector<double> d;
  if (n <= 256) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        d.push_back(kernels::range_of_difference(points.data + i * points.e,
                                                 points.data + j * points.e, points.e));
  } else {
    std::uint64_t state = 0x1357fd02ab5cull;
    auto next = [&state]() {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return state >> 11;
    };
    for (int k = 0; k < 40000; ++k) {
      const std::size_t i = next() % n;
      std::size_t j = next() % (n - 1);
      if (j >= i) ++j;
      d.push_back(kernels::range_of_difference(points.data + i * points.e,
                                               points.data + j * points.e, points.e));
    }
  }
  if (d.empty()) return 1.0;
  const double med = median_inplace(d);
  return med > 0 ? med : 1.0;
}

}  // namespace

PointsView view_of(const std::vector<double>& flat, std::size_t n, std::size_t e) {
  if (flat.size() != n * e) throw std::invalid_argument("flat buffer size mismatch");
  return PointsView{flat.data(), n, e};
}

double fw_objective(const PointsView& points, std::span<const double> omega) {
  check_points(points);
  if (omega.size() != points.e) throw std::invalid_argument("dimension mismatch");
  std::vector<double> d(points.n);
  kernels::distances_to_center(points.data, points.n, points.e, omega.data(), d.data());
  double sum = 0.0;
  for (const double v : d) sum += v;
  return sum;
}

IntegerGradient integer_gradient(const PointsView& points, std::span<const double> omega,
                                 double tie_tol) {
  check_points(points);
  if (omega.size() != points.e) throw std::invalid_argument("dimension mismatch");
  const std::size_t e = points.e;
  IntegerGradient out;
  out.grad.assign(e, 0);
  std::vector<double> r(e);
  for (std::size_t i = 0; i < points.n; ++i) {
    const double* x = points.data + i * e;
    double mx = omega[0] - x[0], mn = mx;
    for (std::size_t j = 1; j < e; ++j) {
      r[j] = omega[j] - x[j];
      mx = std::max(mx, r[j]);
      mn = std::min(mn, r[j]);
    }
    r[0] = omega[0] - x[0];
    std::size_t n_max = 0, n_min = 0, arg_max = 0, arg_min = 0;
    for (std::size_t j = 0; j < e; ++j) {
      if (r[j] >= mx - tie_tol) {
        ++n_max;
        arg_max = j;
      }
      if (r[j] <= mn + tie_tol) {
        ++n_min;
        arg_min = j;
      }
    }
    if (n_max != 1 || n_min != 1) {
      out.offending.push_back(i);
      continue;
    }
    ++out.grad[arg_max];
    --out.grad[arg_min];
  }
  out.defined = out.offending.empty();
  if (!out.defined) out.grad.clear();
  return out;
}

FwResult fw_solve(const PointsView& points, const FwConfig& config) {
  check_points(points);
  if (points.e < 3) throw std::invalid_argument("fw_solve requires dimension e >= 3");
  const std::size_t n = points.n;
  const std::size_t e = points.e;

  const std::vector<double> rows = canonical_rows(points);
  const PointsView cpts{rows.data(), n, e};

  // start at the coordinatewise median of the canonical rows
  std::vector<double> omega(e, 0.0);
  {
    std::vector<double> col(n);
    for (std::size_t j = 0; j + 1 < e; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = rows[i * e + j];
      omega[j] = median_inplace(col);
    }
  }

  const double step0 = config.step0 > 0 ? config.step0 : median_pairwise_distance(cpts) / 10.0;

  std::vector<double> best = omega;
  double best_obj = fw_objective(cpts, omega);
  std::vector<double> grad(e);
  std::vector<double> r(e);
  int iters = 0;
  bool certified = false;

  auto try_certify = [&](const std::vector<double>& at) {
    const IntegerGradient g = integer_gradient(cpts, at, kCertTieTol);
    if (!g.defined) return false;
    return std::all_of(g.grad.begin(), g.grad.end(), [](long long v) { return v == 0; });
  };

  for (int t = 1; t <= config.max_iters; ++t) {
    iters = t;
    const double step = step0 / std::sqrt(static_cast<double>(t));
    if (config.tol > 0 && step < config.tol) break;

    // sample-averaged subgradient with the phi tie convention: every tied
    // maximum contributes +1, only a strict unique minimum contributes -1
    std::fill(grad.begin(), grad.end(), 0.0);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = rows.data() + i * e;
      double mx = omega[0] - x[0], mn = mx;
      r[0] = mx;
      for (std::size_t j = 1; j < e; ++j) {
        r[j] = omega[j] - x[j];
        mx = std::max(mx, r[j]);
        mn = std::min(mn, r[j]);
      }
      obj += mx - mn;
      std::size_t n_min = 0, arg_min = 0;
      for (std::size_t j = 0; j < e; ++j) {
        if (r[j] == mx) grad[j] += 1.0;
        if (r[j] == mn) {
          ++n_min;
          arg_min = j;
        }
      }
      if (n_min == 1) grad[arg_min] -= 1.0;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best = omega;
    }

    // a vanishing exact gradient anywhere proves optimality on its own, and
    // iterates cross the optimum's interior where the boundary-hugging best
    // iterate does not
    if (obj <= best_obj && t % 10 == 0 && try_certify(omega)) {
      best = omega;
      best_obj = obj;
      certified = true;
      break;
    }

    for (std::size_t j = 0; j < e; ++j) omega[j] -= step * grad[j] / static_cast<double>(n);
    const double last = omega[e - 1];
    for (double& v : omega) v -= last;
    omega[e - 1] = 0.0;
  }
  // the final iterate may beat the recorded best
  {
    const double obj = fw_objective(cpts, omega);
    if (obj < best_obj) {
      best_obj = obj;
      best = omega;
    }
  }
  if (!certified) certified = try_certify(best);

  // the Fermat-Weber set usually has interior; if the incumbent sits on a
  // tie hyperplane, a tiny objective-neutral dither often reaches a
  // certifiable interior point
  if (!certified) {
    const double scale = std::max(step0, 1e-9);
    std::vector<double> probe(e);
    for (const double mag : {1e-7, 1e-5, 1e-3}) {
      for (std::size_t ja = 0; ja + 1 < e && !certified; ++ja) {
        for (int dir = 0; dir < 4 && !certified; ++dir) {
          probe = best;
          probe[ja] += (dir & 1 ? -1.0 : 1.0) * mag * scale;
          probe[(ja + 1) % (e - 1)] += (dir & 2 ? -1.0 : 1.0) * mag * scale;
          if (fw_objective(cpts, probe) <= best_obj + 1e-12 && try_certify(probe)) {
            best = probe;
            best_obj = fw_objective(cpts, probe);
            certified = true;
          }
        }
      }
    }
  }

  FwResult res;
  res.point = TorusPoint(best);
  res.objective = fw_objective(cpts, res.point.span());
  res.iterations = iters;
  res.certified = certified;
  const IntegerGradient g = integer_gradient(cpts, res.point.span(), kCertTieTol);
  if (g.defined) res.gradient = g.grad;
  return res;
}

std::pair<TorusPoint, double> fw_brute_force(const PointsView& points, double lo, double hi,
                                             double grid_step) {
  check_points(points);
  if (points.e != 3) throw std::invalid_argument("fw_brute_force supports e == 3 only");
  if (!(grid_step > 0) || !(hi > lo)) throw std::invalid_argument("bad grid");
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best{0.0, 0.0, 0.0};
  std::vector<double> probe(3, 0.0);
  const int steps = static_cast<int>(std::floor((hi - lo) / grid_step + 0.5));
  for (int a = 0; a <= steps; ++a) {
    probe[0] = lo + a * grid_step;
    for (int b = 0; b <= steps; ++b) {
      probe[1] = lo + b * grid_step;
      const double obj = fw_objective(points, probe);
      if (obj < best_obj) {
        best_obj = obj;
        best = probe;
      }
    }
  }
  return {TorusPoint(best), best_obj};
}

}  // namespace trop
