#include "trop/chains.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trop/dataset.hpp"
#include "trop/evaluation.hpp"
#include "trop/regression.hpp"
#include "trop/rng.hpp"

namespace trop {

std::vector<std::string> TreeChain::leaf_labels() const {
  if (entries.empty()) return {};
  return entries.front().tree.leaf_labels();
}

TreeChain TreeChain::prefix(long long limit) const {
  TreeChain out;
  for (const auto& entry : entries)
    if (entry.iteration <= limit) out.entries.push_back(entry);
  return out;
}

namespace {

// Trailing integer of a tree name, e.g. "gen.1000" -> 1000.
long long trailing_integer(const std::string& name, long long fallback) {
  std::size_t end = name.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  std::size_t begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(name[begin - 1]))) --begin;
  if (begin == end) return fallback;
  return std::stoll(name.substr(begin, end - begin));
}

void validate_chain(TreeChain& chain, const std::string& context) {
  if (chain.entries.empty()) return;
  const auto labels = chain.entries.front().tree.leaf_labels();
  long long prev = std::numeric_limits<long long>::min();
  for (auto& entry : chain.entries) {
    if (entry.tree.leaf_labels() != labels)
      throw std::runtime_error(context + ": trees do not share one leaf set");
    if (entry.iteration <= prev)
      throw std::runtime_error(context + ": iteration indices are not strictly increasing");
    prev = entry.iteration;
  }
}

}  // namespace

TreeChain chain_from_named_trees(std::vector<NamedTree> trees) {
  TreeChain chain;
  chain.entries.reserve(trees.size());
  long long ordinal = 0;
  for (auto& nt : trees) {
    ++ordinal;
    chain.entries.push_back({trailing_integer(nt.name, ordinal), std::move(nt.tree)});
  }
  validate_chain(chain, "tree chain");
  return chain;
}

TreeChain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::runtime_error(path + ": empty chain file");

  try {
    if (text.compare(first, 6, "#NEXUS") == 0 || text.compare(first, 6, "#nexus") == 0)
      return chain_from_named_trees(parse_nexus_trees(text));

    // plain newick, one tree per line
    TreeChain chain;
    std::istringstream lines(text);
    std::string line;
    long long ordinal = 0;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      const std::size_t begin = line.find_first_not_of(" \t\r");
      const std::size_t end = line.find_last_not_of(" \t\r");
      if (begin == std::string::npos) continue;
      const std::string trimmed = line.substr(begin, end - begin + 1);
      try {
        chain.entries.push_back({++ordinal, parse_newick(trimmed)});
      } catch (const ParseError& err) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + err.what());
      }
    }
    validate_chain(chain, "chain");
    return chain;
  } catch (const std::runtime_error& err) {
    throw std::runtime_error(path + ": " + err.what());
  }
}

TreeChain truncate_last_fraction(const TreeChain& chain, double frac) {
  if (chain.entries.empty()) throw std::invalid_argument("empty chain");
  if (!(frac > 0.0) || frac > 1.0) throw std::invalid_argument("frac must be in (0, 1]");
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(frac * static_cast<double>(chain.entries.size())));
  TreeChain out;
  out.entries.assign(chain.entries.end() - static_cast<long>(keep), chain.entries.end());
  return out;
}

std::map<Clade, double> split_frequencies(const TreeChain& chain) {
  if (chain.entries.empty()) throw std::invalid_argument("empty chain");
  std::map<Clade, std::size_t> counts;
  for (const auto& entry : chain.entries)
    for (const auto& clade : clades(entry.tree)) ++counts[clade];
  std::map<Clade, double> freq;
  const double n = static_cast<double>(chain.entries.size());
  for (const auto& [clade, count] : counts) freq[clade] = static_cast<double>(count) / n;
  return freq;
}

AsdsfResult asdsf(const TreeChain& a, const TreeChain& b, double min_freq,
                  SdConvention convention) {
  if (a.leaf_labels() != b.leaf_labels())
    throw std::invalid_argument("asdsf requires chains over the same leaf set");
  const auto fa = split_frequencies(a);
  const auto fb = split_frequencies(b);

  std::set<Clade> qualifying;
  for (const auto& [clade, f] : fa)
    if (f >= min_freq) qualifying.insert(clade);
  for (const auto& [clade, f] : fb)
    if (f >= min_freq) qualifying.insert(clade);

  if (qualifying.empty()) return {0.0, true};

  const double denom = convention == SdConvention::population ? std::sqrt(2.0) : 2.0;
  double sum = 0.0;
  for (const auto& clade : qualifying) {
    const auto ita = fa.find(clade);
    const auto itb = fb.find(clade);
    const double va = ita == fa.end() ? 0.0 : ita->second;
    const double vb = itb == fb.end() ? 0.0 : itb->second;
    sum += std::fabs(va - vb) / denom;
  }
  return {sum / static_cast<double>(qualifying.size()), false};
}

namespace {

Dataset chains_to_dataset(const TreeChain& a, const TreeChain& b,
                          const std::vector<std::size_t>& idx_a,
                          const std::vector<std::size_t>& idx_b) {
  Dataset out;
  for (const std::size_t i : idx_a) {
    const DistanceVector dv = cophenetic_vector(a.entries[i].tree);
    if (out.leaf_order.empty()) out.leaf_order = dv.leaf_order;
    out.append(0, dv.values);
  }
  for (const std::size_t i : idx_b) {
    const DistanceVector dv = cophenetic_vector(b.entries[i].tree);
    out.append(1, dv.values);
  }
  return out;
}

}  // namespace

AucMetric auc_convergence_metric(const TreeChain& a, const TreeChain& b, double frac,
                                 double split, std::uint64_t seed) {
  if (a.leaf_labels() != b.leaf_labels())
    throw std::invalid_argument("chains must share one leaf set");
  if (!(split > 0.0) || !(split < 1.0)) throw std::invalid_argument("split must be in (0,1)");
  const TreeChain ta = truncate_last_fraction(a, frac);
  const TreeChain tb = truncate_last_fraction(b, frac);
  if (ta.size() < 4 || tb.size() < 4)
    throw std::invalid_argument("need at least 4 trees per chain after truncation");

  Rng rng(seed);
  // both chains share the split stream, so identical chains get identical
  // training subsets and the degenerate fallback below stays exact
  const auto pick = [&](const TreeChain& chain, std::vector<std::size_t>& train,
                        std::vector<std::size_t>& test) {
    std::vector<std::size_t> idx(chain.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng sub = rng.stream("split");
    sub.shuffle(idx);
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(split * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    train.assign(idx.begin(), idx.begin() + static_cast<long>(n_train));
    test.assign(idx.begin() + static_cast<long>(n_train), idx.end());
  };

  std::vector<std::size_t> train_a, test_a, train_b, test_b;
  pick(ta, train_a, test_a);
  pick(tb, train_b, test_b);

  const Dataset train = chains_to_dataset(ta, tb, train_a, train_b);
  const Dataset test = chains_to_dataset(ta, tb, test_a, test_b);

  TwoSpeciesModel model;
  try {
    model = fit_two_species(train);
  } catch (const std::runtime_error&) {
    return {0.5, true};  // coincident centers: the chains are indistinguishable here
  }

  std::vector<double> scores(test.n);
  for (std::size_t i = 0; i < test.n; ++i) scores[i] = h_two_species(model, test.row(i));
  const double auc = roc_and_auc(scores, test.y).auc;
  return {std::max(auc, 1.0 - auc), false};
}

std::vector<DiagnosticRow> diagnose(const TreeChain& a, const TreeChain& b, long long diagnfreq,
                                    double frac, double min_freq, SdConvention convention,
                                    std::uint64_t seed) {
  if (a.entries.empty() || b.entries.empty()) throw std::invalid_argument("empty chain");
  if (diagnfreq <= 0) throw std::invalid_argument("diagnfreq must be positive");
  const long long last =
      std::min(a.entries.back().iteration, b.entries.back().iteration);

  std::vector<long long> checkpoints;
  for (long long c = diagnfreq; c <= last; c += diagnfreq) checkpoints.push_back(c);
  if (checkpoints.empty()) checkpoints.push_back(last);

  std::vector<DiagnosticRow> rows;
  const Rng rng(seed);
  for (const long long c : checkpoints) {
    const TreeChain pa = a.prefix(c);
    const TreeChain pb = b.prefix(c);
    if (pa.entries.empty() || pb.entries.empty()) continue;
    const TreeChain wa = truncate_last_fraction(pa, frac);
    const TreeChain wb = truncate_last_fraction(pb, frac);
    if (wa.size() < 4 || wb.size() < 4) continue;
    const AsdsfResult sd = asdsf(wa, wb, min_freq, convention);
    const AucMetric auc =
        auc_convergence_metric(pa, pb, frac, 0.5, rng.stream(static_cast<std::uint64_t>(c)).seed());
    rows.push_back({c, sd.value, auc.auc});
  }
  return rows;
}

}  // namespace trop
