#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numeric>

#include "trop/fermat_weber.hpp"
#include "trop/rng.hpp"
#include "trop/sampling.hpp"
#include "trop/torus.hpp"

using namespace trop;

TEST_SUITE_BEGIN("fermat_weber");

namespace {

std::vector<double> flat(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

TEST_CASE("objective values") {
  const std::vector<double> pts = flat({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const PointsView view{pts.data(), 3, 3};
  CHECK(fw_objective(view, std::vector<double>{0, 0, 0}) == 2.0);

  const std::vector<double> single = {1, 2, 0};
  CHECK(fw_objective(PointsView{single.data(), 1, 3}, std::vector<double>{1, 2, 0}) == 0.0);

  // four-leaf example pair: objective at u equals their distance
  const std::vector<double> pair = flat({{2, 2, 2, 1.4, 1.4, 1}, {1.6, 2, 0.6, 2, 1.6, 2}});
  CHECK(fw_objective(PointsView{pair.data(), 2, 6}, std::vector<double>{2, 2, 2, 1.4, 1.4, 1}) ==
        doctest::Approx(2.4).epsilon(1e-15));
}

TEST_CASE("integer gradient of the worked example") {
  const std::vector<double> pts = flat({{0, 0, 0}, {4, 0, 0}});
  const IntegerGradient g =
      integer_gradient(PointsView{pts.data(), 2, 3}, std::vector<double>{2, 1, 0});
  REQUIRE(g.defined);
  CHECK(g.grad == std::vector<long long>{0, 1, -1});
}

TEST_CASE("gradient undefined at a sample point with n = 1") {
  const std::vector<double> pts = {1, 2, 0};
  const IntegerGradient g =
      integer_gradient(PointsView{pts.data(), 1, 3}, std::vector<double>{1, 2, 0});
  CHECK_FALSE(g.defined);
  REQUIRE(g.offending.size() == 1);
  CHECK(g.offending[0] == 0);
}

TEST_CASE("single point with strict extrema gives one +1 and one -1") {
  const std::vector<double> pts = {0, 0, 0};
  const IntegerGradient g =
      integer_gradient(PointsView{pts.data(), 1, 3}, std::vector<double>{3, -1, 0});
  REQUIRE(g.defined);
  CHECK(g.grad == std::vector<long long>{1, -1, 0});
  CHECK(std::accumulate(g.grad.begin(), g.grad.end(), 0ll) == 0);
}

TEST_CASE("integer gradient components always sum to zero") {
  Rng rng(201);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t e = 3 + rng.below(8);
    const std::size_t n = 1 + rng.below(20);
    std::vector<double> pts(n * e);
    for (auto& x : pts) x = rng.uniform(-4, 4);
    std::vector<double> omega(e);
    for (auto& x : omega) x = rng.uniform(-4, 4);
    const IntegerGradient g = integer_gradient(PointsView{pts.data(), n, e}, omega);
    if (g.defined)
      CHECK(std::accumulate(g.grad.begin(), g.grad.end(), 0ll) == 0);
  }
}

TEST_CASE("integer gradient matches finite differences of the objective") {
  Rng rng(202);
  int tested = 0;
  for (int rep = 0; rep < 200 && tested < 100; ++rep) {
    const std::size_t e = 3 + rng.below(5);
    const std::size_t n = 2 + rng.below(10);
    std::vector<double> pts(n * e);
    for (auto& x : pts) x = rng.uniform(-4, 4);
    std::vector<double> omega(e);
    for (auto& x : omega) x = rng.uniform(-4, 4);
    const PointsView view{pts.data(), n, e};
    const IntegerGradient g = integer_gradient(view, omega);
    if (!g.defined) continue;
    ++tested;
    const double h = 1e-6;
    for (std::size_t j = 0; j < e; ++j) {
      std::vector<double> up = omega, dn = omega;
      up[j] += h;
      dn[j] -= h;
      const double fd = (fw_objective(view, up) - fw_objective(view, dn)) / (2 * h);
      REQUIRE(std::fabs(fd - static_cast<double>(g.grad[j])) < 1e-4);
    }
  }
  CHECK(tested >= 50);
}

TEST_CASE("solver on the small instance and the trivial ones") {
  const std::vector<double> pts = flat({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const PointsView view{pts.data(), 3, 3};
  const FwResult res = fw_solve(view);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-9));
  // grid oracle finds nothing better
  const auto [bp, bobj] = fw_brute_force(view, -1.0, 2.0, 0.01);
  CHECK(res.objective <= bobj + 1e-9);

  const std::vector<double> single = {5, 1, 0};
  const FwResult one = fw_solve(PointsView{single.data(), 1, 3});
  CHECK(one.objective == 0.0);
  CHECK(tropical_distance(one.point, normalize(std::vector<double>{5, 1, 0})) == 0.0);

  // two points: any minimizer attains their distance
  const std::vector<double> two = flat({{0, 0, 0}, {3, 1, 0}});
  const PointsView tv{two.data(), 2, 3};
  const FwResult pairres = fw_solve(tv);
  CHECK(pairres.objective == doctest::Approx(3.0).epsilon(1e-6));
  const auto [bp2, bobj2] = fw_brute_force(tv, -0.5, 3.5, 0.01);
  CHECK(bobj2 == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("certificate soundness against the grid oracle") {
  Rng rng(203);
  int certified = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng sub = rng.stream(static_cast<std::uint64_t>(rep));
    const std::size_t n = 5;
    std::vector<double> pts(n * 3);
    for (auto& x : pts) x = sub.uniform(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double last = pts[i * 3 + 2];
      for (std::size_t j = 0; j < 3; ++j) pts[i * 3 + j] -= last;
    }
    const PointsView view{pts.data(), n, 3};
    const FwResult res = fw_solve(view);
    const auto [bp, bobj] = fw_brute_force(view, -1.0, 2.0, 0.01);
    if (res.certified) {
      ++certified;
      REQUIRE(bobj >= res.objective - 1e-9);
      REQUIRE(res.gradient == std::vector<long long>{0, 0, 0});
    }
    // oracle and solver agree within grid_step * n either way
    REQUIRE(std::fabs(res.objective - bobj) <= 0.01 * static_cast<double>(n));
  }
  // the certificate fires often on generic data
  CHECK(certified >= 50);
}

TEST_CASE("best objective is non-increasing across restarts with more iterations") {
  Rng rng(204);
  std::vector<double> pts(40 * 3);
  for (auto& x : pts) x = rng.uniform(-2, 2);
  const PointsView view{pts.data(), 40, 3};
  double prev = std::numeric_limits<double>::infinity();
  for (const int iters : {10, 50, 250, 1000}) {
    FwConfig cfg;
    cfg.max_iters = iters;
    const FwResult res = fw_solve(view, cfg);
    CHECK(res.objective <= prev + 1e-12);
    prev = res.objective;
  }
}

TEST_CASE("estimation error shrinks like one over root n") {
  const TorusPoint center = normalize(std::vector<double>{3, 2, 0});
  const TropicalLaplace dist{center, 1.0};
  Rng rng(205);
  std::vector<double> scaled;
  for (const std::size_t n : {100u, 400u, 1600u}) {
    double total = 0.0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      Rng sub = rng.stream(n).stream(static_cast<std::uint64_t>(rep));
      std::vector<double> pts;
      pts.reserve(n * 3);
      for (std::size_t i = 0; i < n; ++i) {
        const TorusPoint x = sample_tropical_laplace(dist, sub);
        pts.insert(pts.end(), x.coords().begin(), x.coords().end());
      }
      const FwResult res = fw_solve(PointsView{pts.data(), n, 3});
      total += tropical_distance(res.point, center);
    }
    scaled.push_back(total / reps * std::sqrt(static_cast<double>(n)));
  }
  const double lo = *std::min_element(scaled.begin(), scaled.end());
  const double hi = *std::max_element(scaled.begin(), scaled.end());
  INFO("scaled errors ", scaled[0], " ", scaled[1], " ", scaled[2]);
  CHECK(hi / lo < 1.6);
}

TEST_CASE("consistency: error at n = 5000 is small") {
  const TorusPoint center = normalize(std::vector<double>{3, 2, 0});
  const TropicalLaplace dist{center, 1.0};
  Rng rng(206);
  std::vector<double> pts;
  const std::size_t n = 5000;
  for (std::size_t i = 0; i < n; ++i) {
    const TorusPoint x = sample_tropical_laplace(dist, rng);
    pts.insert(pts.end(), x.coords().begin(), x.coords().end());
  }
  const FwResult res = fw_solve(PointsView{pts.data(), n, 3});
  CHECK(tropical_distance(res.point, center) < 0.15);

  std::vector<double> small(pts.begin(), pts.begin() + 50 * 3);
  const FwResult res50 = fw_solve(PointsView{small.data(), 50, 3});
  CHECK(tropical_distance(res50.point, center) < 1.0);
}

TEST_CASE("brute force finds a grid-aligned single point exactly") {
  const std::vector<double> pts = {0.5, 0.25, 0};
  const auto [point, objective] = fw_brute_force(PointsView{pts.data(), 1, 3}, 0.0, 1.0, 0.25);
  CHECK(objective == 0.0);
  CHECK(point.coords() == std::vector<double>{0.5, 0.25, 0});
}

TEST_CASE("brute force input validation") {
  const std::vector<double> pts = {0, 0, 0, 0, 1, 0, 2, 0};  // e = 4 row shape mismatch
  CHECK_THROWS_AS(fw_brute_force(PointsView{pts.data(), 2, 4}, 0, 1, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(fw_solve(PointsView{nullptr, 0, 3}), std::invalid_argument);
}

TEST_SUITE_END();
