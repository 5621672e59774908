#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trop/tree.hpp"

namespace trop {

// Ordered MCMC tree sample with strictly increasing iteration indices and a
// shared leaf set.
struct ChainEntry {
  long long iteration = 0;
  Tree tree;
};

struct TreeChain {
  std::vector<ChainEntry> entries;
  std::size_t size() const { return entries.size(); }
  std::vector<std::string> leaf_labels() const;
  // Entries with iteration <= limit.
  TreeChain prefix(long long limit) const;
};

// Loads a chain from a Nexus trees block or a file of one Newick tree per
// line. Iteration indices come from the trailing integer of each tree name
// (MrBayes style "gen.1000"); ordinal position is used when absent.
TreeChain load_chain(const std::string& path);
TreeChain chain_from_named_trees(std::vector<NamedTree> trees);

// Keeps the final ceil(frac * len) entries.
TreeChain truncate_last_fraction(const TreeChain& chain, double frac);

// Fraction of sampled trees containing each observed nontrivial clade.
std::map<Clade, double> split_frequencies(const TreeChain& chain);

enum class SdConvention {
  population,  // |f_a - f_b| / sqrt(2), the reference sampler's formula
  sample,      // |f_a - f_b| / 2
};

struct AsdsfResult {
  double value = 0.0;
  bool no_qualifying_splits = false;
};

// Mean per-split standard deviation of the two chains' split frequencies,
// over splits reaching min_freq in at least one chain.
AsdsfResult asdsf(const TreeChain& a, const TreeChain& b, double min_freq = 0.1,
                  SdConvention convention = SdConvention::population);

struct AucMetric {
  double auc = 0.5;      // reported as max(auc, 1 - auc)
  bool degenerate = false;  // identical class centers, fell back to 0.5
};

// Truncates both chains to the last `frac`, labels trees by chain, fits the
// two-center classifier on a stratified `split` fraction and scores the
// held-out rest by AUC.
AucMetric auc_convergence_metric(const TreeChain& a, const TreeChain& b, double frac,
                                 double split, std::uint64_t seed);

struct DiagnosticRow {
  long long iteration = 0;
  double asdsf_value = 0.0;
  double auc = 0.5;
};

// Both metrics at every multiple of diagnfreq (or once at the end when
// diagnfreq exceeds the chain length), each computed on the last-`frac`
// truncation of the prefixes up to that iteration. Checkpoints whose
// truncated prefixes hold fewer than 4 trees per chain are skipped.
std::vector<DiagnosticRow> diagnose(const TreeChain& a, const TreeChain& b, long long diagnfreq,
                                    double frac, double min_freq, SdConvention convention,
                                    std::uint64_t seed);

}  // namespace trop
