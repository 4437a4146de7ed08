#pragma once

#include <compare>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace tomo {

/// Undirected tree edge, stored as (min id, max id).
struct Edge {
    int u;
    int v;

    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}
    auto operator<=>(const Edge&) const = default;
};

/// Simple leaf-to-leaf path: the node sequence from a to b.
struct EdgePath {
    std::vector<int> nodes; // nodes[0] = a, nodes.back() = b

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    std::vector<Edge> edges() const;
};

/// Leaf split induced by removing one tree edge. Unordered: side_a is the
/// side holding the smallest leaf id; both sides sorted.
class Bipartition {
public:
    Bipartition(std::vector<int> a, std::vector<int> b);

    const std::vector<int>& side_a() const { return a_; }
    const std::vector<int>& side_b() const { return b_; }

    /// Side containing `leaf` (throws if absent).
    const std::vector<int>& side_of(int leaf) const;
    bool is_trivial() const { return a_.size() == 1 || b_.size() == 1; }

    auto operator<=>(const Bipartition&) const = default;

private:
    std::vector<int> a_;
    std::vector<int> b_;
};

/// Rooted multicast routing tree. The root is leaf 0 (the source); every
/// internal node has degree >= 3; leaves are the degree-1 nodes.
class RoutingTree {
public:
    static constexpr int kRoot = 0;

    /// Builds and validates a tree from an undirected edge list.
    static RoutingTree from_edges(const std::vector<Edge>& edges);

    const std::vector<int>& nodes() const { return node_ids_; }
    const std::vector<int>& leaves() const { return leaf_ids_; }
    /// Leaves other than the source.
    std::vector<int> receivers() const;
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    const std::vector<int>& neighbors(int node) const;
    int degree(int node) const { return static_cast<int>(neighbors(node).size()); }
    bool has_node(int node) const { return adj_.count(node) != 0; }
    bool is_leaf(int node) const;
    /// Number of receivers (leaves minus the source).
    int receiver_count() const { return static_cast<int>(leaf_ids_.size()) - 1; }

    /// Parent of `node` on the path toward the root leaf 0.
    int parent(int node) const;

    /// Unique simple path between two distinct leaves.
    EdgePath path_edges(int a, int b) const;

    /// Path between arbitrary nodes (internal helper exposed for reuse).
    EdgePath path_between_nodes(int a, int b) const;

    /// gamma_ab: the node where P_ab, P_0a and P_0b intersect. Both leaves
    /// must be receivers.
    int common_ancestor(int a, int b) const;

    /// Splits P_ab at gamma_ab; returns (edges a->gamma, edges gamma->b).
    /// Unlike common_ancestor this accepts the root as one endpoint, in
    /// which case the corresponding side is empty.
    std::pair<std::vector<Edge>, std::vector<Edge>> split_path(int a, int b) const;

    /// Max over edges of the shortest leaf-to-leaf path through that edge,
    /// in graph-distance units.
    int chord_depth() const;

    /// One bipartition per edge.
    std::set<Bipartition> bipartitions() const;

    /// Closest leaf (graph distance, then smallest id) to gamma_ab among
    /// leaves on the root side of gamma_ab. The root always qualifies.
    int closest_leaf_above(int a, int b) const;

    /// True iff `node` lies in the subtree hanging below gamma (away from
    /// the root), gamma included.
    bool in_subtree_below(int gamma, int node) const;

    /// Graph distance between arbitrary nodes.
    int graph_distance(int a, int b) const;

    /// Trees are equal when they induce the same bipartition set over the
    /// same leaf set (labeled-leaf isomorphism).
    bool same_topology(const RoutingTree& other) const;

private:
    RoutingTree() = default;
    void validate() const;
    void index_from_root();

    std::map<int, std::vector<int>> adj_; // sorted neighbor lists
    std::vector<int> node_ids_;
    std::vector<int> leaf_ids_;
    std::map<int, int> parent_;  // toward root
    std::map<int, int> depth_;   // distance from root
};

/// Recovers the unique tree realizing a compatible bipartition set over
/// `leaves` (which must contain the source 0). Trivial splits are implied.
/// Throws IncompatibilityError naming a conflicting pair otherwise.
RoutingTree tree_from_bipartitions(const std::vector<int>& leaves,
                                   const std::set<Bipartition>& parts);

} // namespace tomo
