#include "trop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trop {

TorusPoint sample_tropical_laplace(const TropicalLaplace& dist, Rng& rng) {
  const std::size_t e = dist.center.dim();
  if (!(dist.sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const double r = rng.gamma_int(static_cast<int>(e) - 1, dist.sigma);

  // ordered pair (i, j), i != j: coordinate i carries the min, j the max
  const std::uint64_t pick = rng.below(static_cast<std::uint64_t>(e) * (e - 1));
  const std::size_t i = static_cast<std::size_t>(pick / (e - 1));
  std::size_t j = static_cast<std::size_t>(pick % (e - 1));
  if (j >= i) ++j;

  std::vector<double> x(e);
  for (std::size_t k = 0; k < e; ++k) {
    if (k == i) x[k] = 0.0;
    else if (k == j) x[k] = r;
    else x[k] = rng.uniform(0.0, r);
  }
  return translate(TorusPoint(std::move(x)), dist.center);
}

double radius_cdf(int e, int i, double sigma, double t, stats::Geometry geometry) {
  if (i != 1 && i != 2) throw std::invalid_argument("radius law exponent must be 1 or 2");
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const int n = geometry == stats::Geometry::tropical ? e - 1 : e;
  if (n < 1) throw std::invalid_argument("radius law needs e >= 3 (tropical) or e >= 1");
  if (t <= 0) return 0.0;
  const double shape = static_cast<double>(n) / i;
  const double scale = i * std::pow(sigma, i);
  return stats::lower_regularized_gamma(shape, t / scale);
}

Tree yule_tree(int m, double birth_rate, Rng& rng) {
  if (m < 2) throw std::invalid_argument("yule_tree needs at least 2 leaves");
  if (!(birth_rate > 0)) throw std::invalid_argument("birth rate must be positive");

  struct Proto {
    int left = -1, right = -1;  // proto children, -1 = leaf
    double time = 0.0;          // split time; for leaves the present
  };
  std::vector<Proto> protos;
  protos.push_back({});  // root split at time 0

  // each open lineage hangs off (parent proto, side)
  struct Open {
    int parent;
    bool right;
  };
  std::vector<Open> open = {{0, false}, {0, true}};
  double t = 0.0;
  while (static_cast<int>(open.size()) < m) {
    const int k = static_cast<int>(open.size());
    t += rng.exponential(1.0 / (k * birth_rate));
    const std::size_t pick = static_cast<std::size_t>(rng.below(open.size()));
    const Open chosen = open[pick];
    const int id = static_cast<int>(protos.size());
    protos.push_back({-1, -1, t});
    if (chosen.right) protos[static_cast<std::size_t>(chosen.parent)].right = id;
    else protos[static_cast<std::size_t>(chosen.parent)].left = id;
    open[pick] = {id, false};
    open.push_back({id, true});
  }
  // place the present so the last-born tips get positive pendant edges
  const double present = t + rng.exponential(1.0 / birth_rate);

  // terminate remaining lineages as leaves
  for (const Open& o : open) {
    const int id = static_cast<int>(protos.size());
    protos.push_back({-1, -1, present});
    if (o.right) protos[static_cast<std::size_t>(o.parent)].right = id;
    else protos[static_cast<std::size_t>(o.parent)].left = id;
  }

  Tree tree;
  int next_label = 1;
  // emit proto 0 as the root, depth-first
  struct Frame {
    int proto;
    int parent;
    double parent_time;
  };
  std::vector<Frame> stack = {{0, -1, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const Proto& p = protos[static_cast<std::size_t>(f.proto)];
    const bool leaf = p.left == -1 && p.right == -1;
    std::string label;
    if (leaf) label = "t" + std::to_string(next_label++);
    const int id = tree.add_node(f.parent, p.time - f.parent_time, label);
    if (!leaf) {
      stack.push_back({p.right, id, p.time});
      stack.push_back({p.left, id, p.time});
    }
  }
  return tree;
}

SpeciesTree make_species_tree(Tree tree, double pop_size) {
  if (!(pop_size > 0)) throw std::invalid_argument("population size must be positive");
  const double depth = tree.max_leaf_depth();
  if (!is_equidistant(tree, 1e-9 * std::max(1.0, depth)))
    throw std::invalid_argument("species tree must be equidistant");
  return SpeciesTree{std::move(tree), depth, pop_size};
}

Tree scale_to_depth(const Tree& tree, double target_depth) {
  const double depth = tree.max_leaf_depth();
  if (!(depth > 0)) throw std::invalid_argument("tree has zero depth");
  if (!(target_depth > 0)) throw std::invalid_argument("target depth must be positive");
  Tree out = tree;
  out.scale_lengths(target_depth / depth);
  return out;
}

namespace {

// Gene-tree assembly state: each live lineage is a proto node with the
// backward time of its top end.
struct GeneProto {
  int left = -1, right = -1;
  double back_time = 0.0;  // 0 at the present
  std::string label;
};

// Coalesce lineages within [bt_start, bt_end] at pair rate 1/N; bt_end may
// be infinite (above the species root).
void coalesce(std::vector<int>& lineages, std::vector<GeneProto>& protos, double bt_start,
              double bt_end, double pop_size, Rng& rng) {
  double bt = bt_start;
  while (lineages.size() > 1) {
    const std::size_t k = lineages.size();
    const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    bt += rng.exponential(pop_size / pairs);
    if (bt > bt_end) return;
    std::size_t a = static_cast<std::size_t>(rng.below(k));
    std::size_t b = static_cast<std::size_t>(rng.below(k - 1));
    if (b >= a) ++b;
    if (a > b) std::swap(a, b);
    const int id = static_cast<int>(protos.size());
    protos.push_back({lineages[a], lineages[b], bt, ""});
    lineages[a] = id;
    lineages.erase(lineages.begin() + static_cast<long>(b));
  }
}

std::vector<int> collect_lineages(const SpeciesTree& sp, int v, std::vector<GeneProto>& protos,
                                  Rng& rng) {
  const Tree& t = sp.tree;
  std::vector<int> lineages;
  if (t.is_leaf(v)) {
    const int id = static_cast<int>(protos.size());
    protos.push_back({-1, -1, 0.0, t.node(v).label});
    lineages.push_back(id);
  } else {
    for (const int c : t.node(v).children) {
      auto sub = collect_lineages(sp, c, protos, rng);
      lineages.insert(lineages.end(), sub.begin(), sub.end());
    }
  }
  // the species branch above v spans [depth - depth(v), +length(v)] backward
  const double bt_low = sp.depth - t.depth(v);
  if (t.node(v).parent != -1)
    coalesce(lineages, protos, bt_low, bt_low + t.node(v).length, sp.pop_size, rng);
  else
    coalesce(lineages, protos, bt_low, std::numeric_limits<double>::infinity(), sp.pop_size,
             rng);
  return lineages;
}

void emit_gene_node(const std::vector<GeneProto>& protos, int proto, Tree& tree, int parent,
                    double parent_bt) {
  const GeneProto& p = protos[static_cast<std::size_t>(proto)];
  const int id = tree.add_node(parent, parent_bt - p.back_time, p.label);
  if (p.left != -1) {
    emit_gene_node(protos, p.left, tree, id, p.back_time);
    emit_gene_node(protos, p.right, tree, id, p.back_time);
  }
}

}  // namespace

Tree msc_gene_tree(const SpeciesTree& species, Rng& rng) {
  std::vector<GeneProto> protos;
  std::vector<int> top = collect_lineages(species, species.tree.root(), protos, rng);
  const int root_proto = top.front();
  const double tmrca = protos[static_cast<std::size_t>(root_proto)].back_time;
  Tree tree;
  emit_gene_node(protos, root_proto, tree, -1, tmrca);
  return tree;
}

}  // namespace trop
