#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tpais {

using Point = std::vector<double>;

/// Axis-aligned sampling domain. TP-AIS needs a hypercube: all extents equal.
struct DomainBounds {
  Point lower;
  Point upper;

  std::size_t dims() const { return lower.size(); }
  double volume() const;
  bool contains(std::span<const double> x) const;

  /// Throws std::invalid_argument unless lower[d] < upper[d] for every d.
  void validate() const;

  static DomainBounds cube(std::size_t dims, double lo, double hi);
};

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// One hypercube cell of the tree pyramid.
///
/// `lower`/`upper` are the exact cell faces, inherited from the parent split,
/// so siblings share faces bit-for-bit. Membership is half-open [lower, upper)
/// except on faces lying on the domain's upper boundary, which are closed.
struct Node {
  Point center;
  double radius = 0.0;
  Point lower;
  Point upper;
  std::uint32_t closed_upper = 0;  // bit d: upper face in dimension d is closed
  int level = 0;
  NodeId parent = kNoNode;
  NodeId first_child = kNoNode;  // children are contiguous in the arena

  std::optional<Point> sample;
  std::optional<double> weight;
  /// log of the target density at `sample`; -inf when undefined or zero.
  double log_target = -std::numeric_limits<double>::infinity();

  bool is_leaf() const { return first_child == kNoNode; }
  bool contains(std::span<const double> x) const;
  /// (2r)^K
  double volume() const;
};

/// Full 2^K-ary tree of hypercube cells over a bounded domain.
class TreePyramid {
 public:
  static constexpr int kDefaultMaxDepth = 64;
  static constexpr std::size_t kMaxDims = 20;

  /// Root center = (upper+lower)/2, radius = (upper-lower)/2. Rejects
  /// invalid or non-cubic bounds and dims outside [1, kMaxDims].
  TreePyramid(DomainBounds bounds, std::size_t dims, int max_depth = kDefaultMaxDepth);

  std::size_t dims() const { return dims_; }
  std::size_t branching() const { return std::size_t{1} << dims_; }
  int max_depth() const { return max_depth_; }
  const DomainBounds& bounds() const { return bounds_; }

  NodeId root() const { return 0; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  Node& node(NodeId id) { return nodes_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }

  /// Leaves in insertion order: an expanded node is removed and its
  /// children are appended in sign-pattern order.
  std::span<const NodeId> leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }

  /// Children ids of a node; empty for leaves.
  std::vector<NodeId> children(NodeId id) const;

  /// Subdivides a leaf into 2^K children of half radius. Child i has offset
  /// +r/2 in dimension d when bit (K-1-d) of i is 0 and -r/2 otherwise, so
  /// "+" precedes "-" and the first dimension is most significant.
  ///
  /// Throws std::invalid_argument for non-leaves and SamplingError when the
  /// children would exceed max_depth.
  std::vector<NodeId> expand(NodeId id);

  /// Leaf whose cell contains x, or nullopt outside the root cell.
  std::optional<NodeId> locate(std::span<const double> x) const;

  double root_radius() const { return nodes_.front().radius; }

 private:
  DomainBounds bounds_;
  std::size_t dims_;
  int max_depth_;
  std::vector<Node> nodes_;
  std::vector<NodeId> leaves_;
};

/// Line-oriented dump, one node per line in pre-order:
///   level c_1 .. c_K radius weight x_1 .. x_K
/// Undefined weight/sample fields are written as "-". The first two lines
/// carry the dimension/depth cap and the domain bounds.
std::string to_text(const TreePyramid& tree);
TreePyramid tree_from_text(std::string_view text);

}  // namespace tpais
