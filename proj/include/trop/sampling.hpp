#pragma once

#include "trop/rng.hpp"
#include "trop/stats.hpp"
#include "trop/torus.hpp"
#include "trop/tree.hpp"

namespace trop {

// Density (1/Lambda) exp(-d_tr(x, center) / sigma) on the projective torus.
struct TropicalLaplace {
  TorusPoint center;
  double sigma = 1.0;
};

// Exact draw: radius r ~ Gamma(e-1, sigma), then a uniform point of the
// tropical sphere of radius r. The sphere's representative set decomposes
// into e(e-1) ordered-pair faces of equal volume, so a face is drawn
// uniformly, the min/max coordinates pinned to 0 and r, and the remaining
// e-2 coordinates drawn Uniform(0, r).
TorusPoint sample_tropical_laplace(const TropicalLaplace& dist, Rng& rng);

// CDF at t of the radius-law variable d^i(X, center), which is distributed
// i*sigma^i * Gamma(n/i) with n = e-1 (tropical) or n = e (Euclidean).
double radius_cdf(int e, int i, double sigma, double t,
                  stats::Geometry geometry = stats::Geometry::tropical);

// Equidistant binary tree from a pure-birth process: with k lineages the
// next split arrives at rate k * birth_rate; after the m-th tip appears the
// present is placed one birth_rate-rate waiting time later so pendant edges
// stay positive. Leaves are labeled t1..tm.
Tree yule_tree(int m, double birth_rate, Rng& rng);

// Species tree for the coalescent: equidistant, with its depth and the
// effective population size. ratio() = depth / pop_size drives how strongly
// gene trees concentrate around the species tree.
struct SpeciesTree {
  Tree tree;
  double depth = 0.0;
  double pop_size = 1.0;
  double ratio() const { return depth / pop_size; }
};

// Validates equidistance and records the depth.
SpeciesTree make_species_tree(Tree tree, double pop_size);

// Multiplies all branch lengths so the root-to-leaf depth equals target.
Tree scale_to_depth(const Tree& tree, double target_depth);

// One gene lineage per species leaf, Kingman coalescent within each species
// branch (pair coalescence rate 1/N), lineage sets merged at species nodes,
// completion above the root. Output is equidistant in time units with the
// species' leaf labels.
Tree msc_gene_tree(const SpeciesTree& species, Rng& rng);

}  // namespace trop
