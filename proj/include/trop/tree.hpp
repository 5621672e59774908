#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace trop {

struct TreeNode {
  int parent = -1;
  std::vector<int> children;
  double length = 0.0;  // branch length of the edge to the parent
  std::string label;    // nonempty on leaves
};

// Rooted phylogenetic tree with branch lengths. Multifurcations are allowed;
// leaf labels are unique.
class Tree {
 public:
  Tree() = default;

  // parent == -1 creates the root (must be the first node added).
  int add_node(int parent, double length, std::string label = "");

  int root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const TreeNode& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
  bool is_leaf(int v) const { return node(v).children.empty(); }
  void set_length(int v, double length) { nodes_[static_cast<std::size_t>(v)].length = length; }
  void scale_lengths(double factor);

  std::vector<int> leaf_ids() const;
  // Distinct leaf labels in sorted order.
  std::vector<std::string> leaf_labels() const;
  int leaf_count() const;

  // Sum of branch lengths from the root down to v.
  double depth(int v) const;
  double max_leaf_depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

// Parse error with the 1-based byte offset into the input text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t offset_arg)
      : std::runtime_error(what), offset(offset_arg) {}
  std::size_t offset;
};

// Strict Newick: branch lengths mandatory on all non-root edges; a length on
// the root edge is parsed and discarded. Unique leaf labels enforced.
Tree parse_newick(const std::string& text);
std::string write_newick(const Tree& tree);

struct NamedTree {
  std::string name;
  Tree tree;
};

// Minimal Nexus reader: a `trees` block with an optional `translate` table
// and `tree NAME = ... ;` statements. Keywords are case-insensitive, square
// bracket comments are stripped, and an explicit [&U] (unrooted) marker is
// rejected since everything downstream depends on the root.
std::vector<NamedTree> parse_nexus_trees(const std::string& text);

// Vectorized strictly-upper-triangular cophenetic matrix. Pair order is
// lexicographic over the sorted leaf labels: (1,2),...,(1,m),(2,3),...
struct DistanceVector {
  std::vector<double> values;
  std::vector<std::string> leaf_order;
  std::size_t dim() const { return values.size(); }
};

// Index of pair (i, j), i < j, among the e = m(m-1)/2 pairs.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m);

// Pairwise leaf path lengths of a tree with m >= 3 leaves.
DistanceVector cophenetic_vector(const Tree& tree);

// True iff for every leaf triple the two largest pairwise values differ by
// at most tol (the three-point condition).
bool is_ultrametric(const DistanceVector& d, double tol);

// True iff all root-to-leaf path lengths agree within tol.
bool is_equidistant(const Tree& tree, double tol);

// Suggested tolerance for trees read from text files: 1e-6 relative to depth.
double file_read_tolerance(const Tree& tree);

using Clade = std::vector<std::string>;  // sorted labels

// Every proper nontrivial clade: singletons and the full leaf set excluded.
std::set<Clade> clades(const Tree& tree);

// Size of the symmetric difference of the two clade sets. Throws on
// mismatched leaf sets.
int rf_distance(const Tree& a, const Tree& b);

}  // namespace trop
