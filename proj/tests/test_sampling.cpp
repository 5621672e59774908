#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <map>

#include "trop/sampling.hpp"
#include "trop/stats.hpp"
#include "trop/torus.hpp"

using namespace trop;

TEST_SUITE_BEGIN("sampling");

namespace {

TorusPoint origin(std::size_t e) { return TorusPoint(std::vector<double>(e, 0.0)); }

}  // namespace

TEST_CASE("degenerate dispersion collapses onto the center") {
  Rng rng(101);
  const TropicalLaplace dist{normalize(std::vector<double>{3, 2, 0}), 1e-12};
  for (int i = 0; i < 100; ++i) {
    const TorusPoint x = sample_tropical_laplace(dist, rng);
    CHECK(tropical_distance(x, dist.center) <= 1e-9);
  }
}

TEST_CASE("mean radius matches the Gamma(e-1, sigma) law") {
  Rng rng(102);
  const std::size_t e = 5;
  const double sigma = 2.0;
  const TropicalLaplace dist{origin(e), sigma};
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = tropical_distance(sample_tropical_laplace(dist, rng), dist.center);
    sum += d;
    sumsq += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  const double expect = (e - 1) * sigma;  // Gamma mean
  CHECK(std::fabs(mean - expect) <= 3.0 * sd / std::sqrt(n));
}

TEST_CASE("radius empirical CDF passes a KS test against the Gamma law") {
  for (const int e : {3, 5, 10, 45}) {
    for (const double sigma : {0.5, 1.0, 5.0}) {
      Rng rng(Rng(103).stream(static_cast<std::uint64_t>(e)).stream(
          static_cast<std::uint64_t>(sigma * 2)).seed());
      const TropicalLaplace dist{origin(static_cast<std::size_t>(e)), sigma};
      const int n = 10000;
      std::vector<double> radii(n);
      for (int i = 0; i < n; ++i)
        radii[i] = tropical_distance(sample_tropical_laplace(dist, rng), dist.center);
      const double d = stats::ks_statistic(
          radii, [&](double t) { return stats::gamma_cdf(e - 1.0, sigma, t); });
      INFO("e=", e, " sigma=", sigma, " D=", d);
      REQUIRE(d < 1.63 / std::sqrt(static_cast<double>(n)));
    }
  }
  // larger draw at the plotting setting
  Rng rng(113);
  const TropicalLaplace dist{origin(3), 1.0};
  std::vector<double> radii(100000);
  for (auto& r : radii) r = tropical_distance(sample_tropical_laplace(dist, rng), dist.center);
  CHECK(stats::ks_statistic(radii, [](double t) { return stats::gamma_cdf(2.0, 1.0, t); }) <
        0.01);
}

TEST_CASE("conditional on the radius the point sits exactly on the sphere") {
  // with the center at the origin the raw draw has min 0 and max r, so the
  // canonical distance reproduces the radius to roundoff
  Rng rng(104);
  const TropicalLaplace dist{origin(7), 1.5};
  for (int i = 0; i < 2000; ++i) {
    const TorusPoint x = sample_tropical_laplace(dist, rng);
    const double r = tropical_distance(x, dist.center);
    // the radius equals max - min of the pre-translation draw by construction
    CHECK(r >= 0.0);
    // apply the definition directly on the canonical representative
    double mx = x[0], mn = x[0];
    for (std::size_t j = 1; j < x.dim(); ++j) {
      mx = std::max(mx, x[j]);
      mn = std::min(mn, x[j]);
    }
    CHECK(mx - mn == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("2-D histogram of canonical samples matches the density at e=3") {
  const double sigma = 1.0;
  const std::size_t e = 3;
  Rng rng(105);
  const TropicalLaplace dist{origin(e), sigma};
  const int n = 1000000;
  const int bins = 40;
  const double lo = -4.0 * sigma, hi = 4.0 * sigma;
  const double w = (hi - lo) / bins;
  std::vector<int> hist(bins * bins, 0);
  for (int i = 0; i < n; ++i) {
    const TorusPoint x = sample_tropical_laplace(dist, rng);
    const int a = static_cast<int>(std::floor((x[0] - lo) / w));
    const int b = static_cast<int>(std::floor((x[1] - lo) / w));
    if (a >= 0 && a < bins && b >= 0 && b < bins) ++hist[a * bins + b];
  }
  // density normalized by e! sigma^(e-1) = 6 sigma^2, integrated per cell on
  // a sub-grid because the density has piecewise-linear kinks
  const double lambda = normalizing_constant(3, sigma);
  REQUIRE(lambda == 6.0 * sigma * sigma);
  const std::vector<double> zero{0, 0, 0};
  const int sub = 8;
  int checked = 0;
  for (int a = 0; a < bins; ++a) {
    for (int b = 0; b < bins; ++b) {
      double mass = 0.0;
      for (int sa = 0; sa < sub; ++sa)
        for (int sb = 0; sb < sub; ++sb) {
          const std::vector<double> pt{lo + (a + (sa + 0.5) / sub) * w,
                                       lo + (b + (sb + 0.5) / sub) * w, 0.0};
          mass += std::exp(-tropical_distance(pt, zero) / sigma);
        }
      const double expect = n * mass * (w / sub) * (w / sub) / lambda;
      const double err = std::fabs(hist[a * bins + b] - expect);
      REQUIRE(err <= 5.0 * std::sqrt(expect + 1.0) + 3.0);
      ++checked;
    }
  }
  CHECK(checked == bins * bins);
}

TEST_CASE("radius_cdf values") {
  CHECK(radius_cdf(3, 1, 1.0, 0.0) == 0.0);
  CHECK(radius_cdf(3, 1, 1.0, 4.0236) == doctest::Approx(0.9101).epsilon(2e-4));
  // closed form for shape 2: 1 - (1+x) e^{-x}
  CHECK(radius_cdf(3, 1, 1.0, 0.80472) ==
        doctest::Approx(1.0 - 1.80472 * std::exp(-0.80472)).epsilon(1e-12));
  CHECK(radius_cdf(3, 1, 1.0, 0.80472) == doctest::Approx(0.1929).epsilon(2e-4));
  // Euclidean flag switches the dimension count
  CHECK(radius_cdf(3, 1, 1.0, 1.0, stats::Geometry::euclidean) ==
        doctest::Approx(stats::lower_regularized_gamma(3.0, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(radius_cdf(3, 4, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("yule trees are equidistant binary trees of the right size") {
  Rng rng(106);
  for (int rep = 0; rep < 200; ++rep) {
    Rng sub = rng.stream(static_cast<std::uint64_t>(rep));
    const Tree t = yule_tree(10, 1.0, sub);
    REQUIRE(t.leaf_count() == 10);
    REQUIRE(t.node_count() == 19);  // 10 leaves + 9 internal
    for (std::size_t v = 0; v < t.node_count(); ++v) {
      const auto& kids = t.node(static_cast<int>(v)).children;
      REQUIRE((kids.empty() || kids.size() == 2));
    }
    REQUIRE(is_equidistant(t, 1e-9));
  }
}

TEST_CASE("yule depth for two tips is exponential with the birth rate") {
  Rng rng(107);
  const int n = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Tree t = yule_tree(2, 1.0, rng);
    const double d = t.max_leaf_depth();
    sum += d;
    sumsq += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  CHECK(std::fabs(mean - 1.0) <= 3.0 * sd / std::sqrt(n));
}

TEST_CASE("single-population coalescence time of two lineages has mean N") {
  // two-leaf species tree of negligible depth: everything coalesces above
  // the root at pair rate 1/N
  const double pop = 3.0;
  Rng rng(108);
  const Tree sp = parse_newick("(A:0.001,B:0.001);");
  const SpeciesTree species = make_species_tree(sp, pop);
  const int n = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Tree g = msc_gene_tree(species, rng);
    const double tmrca = g.max_leaf_depth();
    sum += tmrca;
    sumsq += tmrca * tmrca;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  // TMRCA ~ depth + Exp(N) with depth ~ 0
  CHECK(std::fabs(mean - (0.001 + pop)) <= 3.0 * sd / std::sqrt(n));
}

TEST_CASE("deep species trees make gene trees match the species topology") {
  // depth 100 N: every internal branch is >= 25 coalescent units, so deep
  // coalescence is vanishingly rare
  Rng rng(109);
  const Tree sp = parse_newick("(((A:40,B:40):35,C:75):25,(D:60,E:60):40);");
  const SpeciesTree species = make_species_tree(sp, 1.0);
  REQUIRE(species.ratio() == 100.0);
  int matches = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const Tree g = msc_gene_tree(species, rng);
    REQUIRE(is_equidistant(g, 1e-6 * g.max_leaf_depth()));
    REQUIRE(g.leaf_count() == 5);
    // binary coalescent: lineage count drops one merge at a time
    REQUIRE(g.node_count() == 9);
    for (const double v : cophenetic_vector(g).values) REQUIRE(v >= 0.0);
    if (rf_distance(g, species.tree) == 0) ++matches;
  }
  CHECK(matches > 990);
}

TEST_CASE("shallow species trees produce frequent deep coalescence") {
  Rng rng(110);
  const Tree sp = parse_newick("(((A:0.04,B:0.04):0.035,C:0.075):0.025,(D:0.06,E:0.06):0.04);");
  const SpeciesTree species = make_species_tree(sp, 1.0);  // R = 0.1
  int matches = 0;
  for (int i = 0; i < 1000; ++i)
    if (rf_distance(msc_gene_tree(species, rng), species.tree) == 0) ++matches;
  CHECK(matches < 500);
}

TEST_CASE("sampler and simulator are deterministic given the seed") {
  const TropicalLaplace dist{origin(5), 1.0};
  Rng a(7777), b(7777);
  for (int i = 0; i < 10; ++i)
    CHECK(sample_tropical_laplace(dist, a) == sample_tropical_laplace(dist, b));
  Rng c(7778);
  bool any_diff = false;
  Rng a2(7777);
  for (int i = 0; i < 10; ++i)
    any_diff |= !(sample_tropical_laplace(dist, a2) == sample_tropical_laplace(dist, c));
  CHECK(any_diff);
}

TEST_SUITE_END();
