#include "tpais/tree_pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "tpais/errors.hpp"

namespace tpais {

double DomainBounds::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < dims(); ++d) v *= upper[d] - lower[d];
  return v;
}

bool DomainBounds::contains(std::span<const double> x) const {
  if (x.size() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
  }
  return true;
}

void DomainBounds::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("bounds: lower/upper must be non-empty and of equal length");
  }
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || !(lower[d] < upper[d])) {
      throw std::invalid_argument("bounds: require finite lower < upper in dimension " +
                                  std::to_string(d));
    }
  }
}

DomainBounds DomainBounds::cube(std::size_t dims, double lo, double hi) {
  return DomainBounds{Point(dims, lo), Point(dims, hi)};
}

bool Node::contains(std::span<const double> x) const {
  if (x.size() != center.size()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] < lower[d]) return false;
    if (x[d] >= upper[d] && !((closed_upper >> d & 1U) && x[d] == upper[d])) return false;
  }
  return true;
}

double Node::volume() const {
  return std::pow(2.0 * radius, static_cast<double>(center.size()));
}

TreePyramid::TreePyramid(DomainBounds bounds, std::size_t dims, int max_depth)
    : bounds_(std::move(bounds)), dims_(dims), max_depth_(max_depth) {
  if (dims_ == 0 || dims_ > kMaxDims) {
    throw std::invalid_argument("tree: dims must be in [1, " + std::to_string(kMaxDims) + "]");
  }
  bounds_.validate();
  if (bounds_.dims() != dims_) throw std::invalid_argument("tree: bounds dimension mismatch");
  if (max_depth_ < 0) throw std::invalid_argument("tree: max_depth must be non-negative");

  const double extent = bounds_.upper[0] - bounds_.lower[0];
  for (std::size_t d = 1; d < dims_; ++d) {
    const double e = bounds_.upper[d] - bounds_.lower[d];
    if (std::abs(e - extent) > 1e-12 * std::max(std::abs(e), std::abs(extent))) {
      throw std::invalid_argument("tree: bounds must be a hypercube (equal extents)");
    }
  }

  Node root;
  root.center.resize(dims_);
  for (std::size_t d = 0; d < dims_; ++d) {
    root.center[d] = (bounds_.upper[d] + bounds_.lower[d]) / 2.0;
  }
  root.radius = std::abs(extent) / 2.0;
  root.lower = bounds_.lower;
  root.upper = bounds_.upper;
  root.closed_upper = static_cast<std::uint32_t>((std::uint64_t{1} << dims_) - 1);
  nodes_.push_back(std::move(root));
  leaves_.push_back(0);
}

std::vector<NodeId> TreePyramid::children(NodeId id) const {
  const Node& n = node(id);
  std::vector<NodeId> out;
  if (n.is_leaf()) return out;
  out.reserve(branching());
  for (std::size_t i = 0; i < branching(); ++i) out.push_back(n.first_child + i);
  return out;
}

std::vector<NodeId> TreePyramid::expand(NodeId id) {
  if (!node(id).is_leaf()) throw std::invalid_argument("tree: cannot expand a non-leaf node");
  if (node(id).level + 1 > max_depth_) {
    throw SamplingError("tree: depth cap of " + std::to_string(max_depth_) + " levels reached");
  }

  const std::size_t count = branching();
  const NodeId first = nodes_.size();
  nodes_.reserve(nodes_.size() + count);
  // `parent` stays valid: the reserve above happened before we bind it.
  const Node& parent = nodes_[id];
  const double half = parent.radius / 2.0;

  std::vector<NodeId> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Node child;
    child.center.resize(dims_);
    child.lower.resize(dims_);
    child.upper.resize(dims_);
    child.radius = half;
    child.level = parent.level + 1;
    child.parent = id;
    for (std::size_t d = 0; d < dims_; ++d) {
      const bool minus = (i >> (dims_ - 1 - d)) & 1U;
      if (minus) {
        child.center[d] = parent.center[d] - half;
        child.lower[d] = parent.lower[d];
        child.upper[d] = parent.center[d];
      } else {
        child.center[d] = parent.center[d] + half;
        child.lower[d] = parent.center[d];
        child.upper[d] = parent.upper[d];
        child.closed_upper |= parent.closed_upper & (1U << d);
      }
    }
    nodes_.push_back(std::move(child));
    ids.push_back(first + i);
  }
  nodes_[id].first_child = first;

  auto pos = std::find(leaves_.begin(), leaves_.end(), id);
  leaves_.erase(pos);
  leaves_.insert(leaves_.end(), ids.begin(), ids.end());
  return ids;
}

std::optional<NodeId> TreePyramid::locate(std::span<const double> x) const {
  if (x.size() != dims_ || !nodes_.front().contains(x)) return std::nullopt;
  NodeId id = root();
  while (!nodes_[id].is_leaf()) {
    const Node& n = nodes_[id];
    std::size_t index = 0;
    for (std::size_t d = 0; d < dims_; ++d) {
      index = (index << 1) | (x[d] < n.center[d] ? 1U : 0U);
    }
    id = n.first_child + index;
  }
  return id;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void dump_node(const TreePyramid& tree, NodeId id, std::string& out) {
  const Node& n = tree.node(id);
  out += std::to_string(n.level);
  for (double c : n.center) {
    out += ' ';
    append_number(out, c);
  }
  out += ' ';
  append_number(out, n.radius);
  out += ' ';
  if (n.weight) {
    append_number(out, *n.weight);
  } else {
    out += '-';
  }
  for (std::size_t d = 0; d < tree.dims(); ++d) {
    out += ' ';
    if (n.sample) {
      append_number(out, (*n.sample)[d]);
    } else {
      out += '-';
    }
  }
  out += '\n';
  if (!n.is_leaf()) {
    for (NodeId c : tree.children(id)) dump_node(tree, c, out);
  }
}

double parse_number(const std::string& token) {
  std::size_t used = 0;
  const double v = std::stod(token, &used);
  if (used != token.size()) throw std::invalid_argument("tree text: bad number '" + token + "'");
  return v;
}

}  // namespace

std::string to_text(const TreePyramid& tree) {
  std::string out = "tpais-tree " + std::to_string(tree.dims()) + ' ' +
                    std::to_string(tree.max_depth()) + '\n';
  out += "bounds";
  for (double v : tree.bounds().lower) {
    out += ' ';
    append_number(out, v);
  }
  for (double v : tree.bounds().upper) {
    out += ' ';
    append_number(out, v);
  }
  out += '\n';
  dump_node(tree, tree.root(), out);
  return out;
}

TreePyramid tree_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  std::size_t dims = 0;
  int max_depth = 0;
  if (!(in >> magic >> dims >> max_depth) || magic != "tpais-tree") {
    throw std::invalid_argument("tree text: missing header");
  }
  std::string tag;
  in >> tag;
  if (tag != "bounds") throw std::invalid_argument("tree text: missing bounds line");
  DomainBounds bounds{Point(dims), Point(dims)};
  for (auto* side : {&bounds.lower, &bounds.upper}) {
    for (std::size_t d = 0; d < dims; ++d) {
      std::string tok;
      in >> tok;
      (*side)[d] = parse_number(tok);
    }
  }
  TreePyramid tree(std::move(bounds), dims, max_depth);

  // Pre-order with levels: a node has children iff the next line is one level deeper.
  struct Row {
    int level = 0;
    std::optional<double> weight;
    std::optional<Point> sample;
  };
  std::vector<Row> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() != 2 * dims + 3) throw std::invalid_argument("tree text: bad node line");
    Row row{};
    row.level = std::stoi(tok[0]);
    if (tok[dims + 2] != "-") row.weight = parse_number(tok[dims + 2]);
    if (tok[dims + 3] != "-") {
      Point x(dims);
      for (std::size_t d = 0; d < dims; ++d) x[d] = parse_number(tok[dims + 3 + d]);
      row.sample = std::move(x);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().level != 0) throw std::invalid_argument("tree text: no root");

  std::size_t cursor = 0;
  auto build = [&](auto&& self, NodeId id) -> void {
    const Row& row = rows.at(cursor++);
    Node& n = tree.node(id);
    if (row.level != n.level) throw std::invalid_argument("tree text: level mismatch");
    n.weight = row.weight;
    n.sample = row.sample;
    if (cursor < rows.size() && rows[cursor].level == row.level + 1) {
      for (NodeId c : tree.expand(id)) self(self, c);
    }
  };
  build(build, tree.root());
  if (cursor != rows.size()) throw std::invalid_argument("tree text: trailing nodes");
  return tree;
}

}  // namespace tpais
