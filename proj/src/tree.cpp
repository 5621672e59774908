#include "trop/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "trop/dataset.hpp"

namespace trop {

int Tree::add_node(int parent, double length, std::string label) {
  if (parent == -1 && !nodes_.empty())
    throw std::invalid_argument("tree already has a root");
  if (parent != -1 && (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()))
    throw std::invalid_argument("bad parent id");
  const int id = static_cast<int>(nodes_.size());
  TreeNode n;
  n.parent = parent;
  n.length = length;
  n.label = std::move(label);
  nodes_.push_back(std::move(n));
  if (parent != -1) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

void Tree::scale_lengths(double factor) {
  for (auto& n : nodes_) n.length *= factor;
}

std::vector<int> Tree::leaf_ids() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (nodes_[v].children.empty()) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<std::string> Tree::leaf_labels() const {
  std::vector<std::string> out;
  for (const int v : leaf_ids()) out.push_back(node(v).label);
  std::sort(out.begin(), out.end());
  return out;
}

int Tree::leaf_count() const { return static_cast<int>(leaf_ids().size()); }

double Tree::depth(int v) const {
  double d = 0.0;
  while (node(v).parent != -1) {
    d += node(v).length;
    v = node(v).parent;
  }
  return d;
}

double Tree::max_leaf_depth() const {
  double d = 0.0;
  for (const int v : leaf_ids()) d = std::max(d, depth(v));
  return d;
}

// ---------------------------------------------------------------------------
// Newick
// ---------------------------------------------------------------------------

namespace {

class NewickParser {
 public:
  explicit NewickParser(const std::string& text) : s_(text) {}

  Tree parse() {
    Tree tree;
    skip_ws();
    parse_subtree(tree, -1);
    skip_ws();
    expect(';');
    check_duplicate_labels(tree);
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    // 1-based byte offsets so the first character is offset 1.
    throw ParseError("newick parse error at offset " + std::to_string(pos_ + 1) + ": " + msg,
                     pos_ + 1);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  int parse_subtree(Tree& tree, int parent) {
    skip_ws();
    int id;
    if (peek() == '(') {
      ++pos_;
      id = tree.add_node(parent, 0.0);
      parse_subtree(tree, id);
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        parse_subtree(tree, id);
        skip_ws();
      }
      expect(')');
      parse_label();  // optional internal label, not used downstream
    } else {
      const std::string label = parse_label();
      if (label.empty()) fail("expected a leaf label or '('");
      id = tree.add_node(parent, 0.0, label);
    }
    skip_ws();
    if (peek() == ':') {
      ++pos_;
      tree.set_length(id, parse_number());
    } else if (parent != -1) {
      fail("missing branch length");
    }
    return id;
  }

  std::string parse_label() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  double parse_number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a branch length");
    if (!std::isfinite(v) || v < 0) fail("branch length must be finite and nonnegative");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  void check_duplicate_labels(const Tree& tree) const {
    std::set<std::string> seen;
    for (const int v : tree.leaf_ids()) {
      const auto& label = tree.node(v).label;
      if (!seen.insert(label).second)
        throw ParseError("duplicate leaf label '" + label + "'", pos_ + 1);
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

void write_newick_node(const Tree& tree, int v, std::string& out) {
  const TreeNode& n = tree.node(v);
  if (n.children.empty()) {
    out += n.label;
  } else {
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      write_newick_node(tree, n.children[i], out);
    }
    out += ')';
  }
  if (n.parent != -1) {
    out += ':';
    out += format_double(n.length);
  }
}

}  // namespace

Tree parse_newick(const std::string& text) { return NewickParser(text).parse(); }

std::string write_newick(const Tree& tree) {
  std::string out;
  write_newick_node(tree, tree.root(), out);
  out += ';';
  return out;
}

// ---------------------------------------------------------------------------
// Nexus
// ---------------------------------------------------------------------------

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::size_t line_of(const std::string& text, std::size_t pos) {
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

// Strips [...] comments; assumes comments do not nest or contain ';'.
std::string strip_comments(const std::string& s) {
  std::string out;
  bool in_comment = false;
  for (const char c : s) {
    if (c == '[') in_comment = true;
    else if (c == ']') in_comment = false;
    else if (!in_comment) out += c;
  }
  return out;
}

std::vector<std::string> split_statements(const std::string& block) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : block) {
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::vector<NamedTree> parse_nexus_trees(const std::string& text) {
  const std::string lo = lower(text);
  std::size_t begin = lo.find("begin trees");
  if (begin == std::string::npos) throw std::runtime_error("nexus input has no trees block");
  begin = lo.find(';', begin);
  if (begin == std::string::npos) throw std::runtime_error("malformed trees block header");
  ++begin;
  std::size_t end = lo.find("end;", begin);
  if (end == std::string::npos) end = lo.find("endblock;", begin);
  if (end == std::string::npos) throw std::runtime_error("trees block is not terminated by 'end;'");

  const std::string block = text.substr(begin, end - begin);
  std::map<std::string, std::string> translate;
  std::vector<NamedTree> out;

  std::size_t stmt_pos = begin;
  for (const std::string& raw_stmt : split_statements(block)) {
    const std::size_t line = line_of(text, stmt_pos);
    stmt_pos += raw_stmt.size() + 1;
    const std::string stmt = trim(raw_stmt);
    if (stmt.empty()) continue;
    const std::string head = lower(stmt.substr(0, stmt.find_first_of(" \t\r\n")));

    if (head == "translate") {
      std::istringstream in(strip_comments(stmt.substr(9)));
      std::string entry;
      // entries are "key label" pairs separated by commas
      std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        std::istringstream pair(item);
        std::string key, label;
        pair >> key >> label;
        if (key.empty() || label.empty())
          throw std::runtime_error("line " + std::to_string(line) + ": malformed translate entry '" +
                                   trim(item) + "'");
        translate[key] = label;
      }
    } else if (head == "tree") {
      std::size_t eq = stmt.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("line " + std::to_string(line) + ": tree statement has no '='");
      std::string name = trim(stmt.substr(4, eq - 4));
      std::string spec = trim(stmt.substr(eq + 1));
      // a leading [&U]/[&R] marker decides rootedness before comments go away
      if (spec.size() >= 2 && spec[0] == '[') {
        const std::size_t close = spec.find(']');
        if (close == std::string::npos)
          throw std::runtime_error("line " + std::to_string(line) + ": unterminated comment");
        const std::string marker = lower(spec.substr(1, close - 1));
        if (marker == "&u")
          throw std::runtime_error("line " + std::to_string(line) +
                                   ": tree '" + name +
                                   "' is explicitly unrooted ([&U]); rooted trees are required");
      }
      std::string newick = trim(strip_comments(spec));
      Tree tree;
      try {
        tree = parse_newick(newick + (newick.ends_with(';') ? "" : ";"));
      } catch (const ParseError& err) {
        throw std::runtime_error("line " + std::to_string(line) + ": " + err.what());
      }
      if (!translate.empty()) {
        Tree renamed;
        // rebuild with substituted labels to keep Tree immutable-ish
        std::vector<int> map_ids(tree.node_count(), -1);
        for (std::size_t v = 0; v < tree.node_count(); ++v) {
          const TreeNode& n = tree.node(static_cast<int>(v));
          std::string label = n.label;
          if (n.children.empty()) {
            const auto it = translate.find(label);
            if (it == translate.end())
              throw std::runtime_error("line " + std::to_string(line) + ": translate key '" +
                                       label + "' not found");
            label = it->second;
          }
          map_ids[v] = renamed.add_node(n.parent == -1 ? -1 : map_ids[static_cast<std::size_t>(n.parent)],
                                        n.length, label);
        }
        tree = std::move(renamed);
      }
      out.push_back({std::move(name), std::move(tree)});
    }
    // other statements (link, etc.) are ignored
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cophenetic vectors and clade utilities
// ---------------------------------------------------------------------------

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m) {
  if (i >= j || j >= m) throw std::invalid_argument("pair_index requires i < j < m");
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}

DistanceVector cophenetic_vector(const Tree& tree) {
  const std::vector<int> leaves = tree.leaf_ids();
  const std::size_t m = leaves.size();
  if (m < 3) throw std::invalid_argument("cophenetic_vector requires at least 3 leaves");

  // sort leaf ids by label so the pair indexing is label-lexicographic
  std::vector<int> order(leaves);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return tree.node(a).label < tree.node(b).label; });

  std::vector<double> depth(m);
  for (std::size_t i = 0; i < m; ++i) depth[i] = tree.depth(order[i]);

  DistanceVector dv;
  dv.leaf_order.reserve(m);
  for (const int v : order) dv.leaf_order.push_back(tree.node(v).label);
  dv.values.assign(m * (m - 1) / 2, 0.0);

  std::vector<double> depth_of_node(tree.node_count());
  for (std::size_t v = 0; v < tree.node_count(); ++v)
    depth_of_node[v] = tree.depth(static_cast<int>(v));

  std::vector<int> mark(tree.node_count(), -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int v = order[i]; v != -1; v = tree.node(v).parent) mark[static_cast<std::size_t>(v)] = static_cast<int>(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      int v = order[j];
      while (mark[static_cast<std::size_t>(v)] != static_cast<int>(i)) v = tree.node(v).parent;
      const double lca_depth = depth_of_node[static_cast<std::size_t>(v)];
      dv.values[pair_index(i, j, m)] = depth[i] + depth[j] - 2.0 * lca_depth;
    }
  }
  return dv;
}

bool is_ultrametric(const DistanceVector& d, double tol) {
  const std::size_t m = d.leaf_order.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        double a = d.values[pair_index(i, j, m)];
        double b = d.values[pair_index(i, k, m)];
        double c = d.values[pair_index(j, k, m)];
        // two largest of {a,b,c} must agree within tol
        if (a > c) std::swap(a, c);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (c - b > tol) return false;
      }
  return true;
}

bool is_equidistant(const Tree& tree, double tol) {
  const std::vector<int> leaves = tree.leaf_ids();
  if (leaves.empty()) return true;
  double mn = tree.depth(leaves[0]);
  double mx = mn;
  for (const int v : leaves) {
    const double d = tree.depth(v);
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  return mx - mn <= tol;
}

double file_read_tolerance(const Tree& tree) { return 1e-6 * tree.max_leaf_depth(); }

namespace {

Clade collect_clades(const Tree& tree, int v, std::size_t m, std::set<Clade>& out) {
  Clade mine;
  if (tree.is_leaf(v)) {
    mine.push_back(tree.node(v).label);
    return mine;
  }
  for (const int c : tree.node(v).children) {
    Clade sub = collect_clades(tree, c, m, out);
    mine.insert(mine.end(), sub.begin(), sub.end());
  }
  std::sort(mine.begin(), mine.end());
  if (mine.size() >= 2 && mine.size() <= m - 1) out.insert(mine);
  return mine;
}

}  // namespace

std::set<Clade> clades(const Tree& tree) {
  std::set<Clade> out;
  const std::size_t m = static_cast<std::size_t>(tree.leaf_count());
  collect_clades(tree, tree.root(), m, out);
  return out;
}

int rf_distance(const Tree& a, const Tree& b) {
  if (a.leaf_labels() != b.leaf_labels())
    throw std::invalid_argument("rf_distance requires identical leaf sets");
  const std::set<Clade> ca = clades(a);
  const std::set<Clade> cb = clades(b);
  int diff = 0;
  for (const auto& c : ca)
    if (!cb.count(c)) ++diff;
  for (const auto& c : cb)
    if (!ca.count(c)) ++diff;
  return diff;
}

}  // namespace trop
