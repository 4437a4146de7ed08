#include "tomo/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tomo/error.hpp"

namespace tomo {

std::vector<Edge> EdgePath::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        out.emplace_back(nodes[i], nodes[i + 1]);
    return out;
}

Bipartition::Bipartition(std::vector<int> a, std::vector<int> b) : a_(std::move(a)), b_(std::move(b)) {
    std::sort(a_.begin(), a_.end());
    std::sort(b_.begin(), b_.end());
    if (a_.empty() || b_.empty())
        throw ValidationError("bipartition sides must be nonempty");
    std::vector<int> inter;
    std::set_intersection(a_.begin(), a_.end(), b_.begin(), b_.end(), std::back_inserter(inter));
    if (!inter.empty())
        throw ValidationError("bipartition sides overlap");
    if (b_.front() < a_.front())
        std::swap(a_, b_);
}

const std::vector<int>& Bipartition::side_of(int leaf) const {
    if (std::binary_search(a_.begin(), a_.end(), leaf)) return a_;
    if (std::binary_search(b_.begin(), b_.end(), leaf)) return b_;
    throw ValidationError("leaf " + std::to_string(leaf) + " not in bipartition");
}

RoutingTree RoutingTree::from_edges(const std::vector<Edge>& edges) {
    RoutingTree t;
    for (const Edge& e : edges) {
        if (e.u == e.v)
            throw ValidationError("self-loop at node " + std::to_string(e.u));
        t.adj_[e.u].push_back(e.v);
        t.adj_[e.v].push_back(e.u);
    }
    for (auto& [id, nbrs] : t.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
            throw ValidationError("duplicate edge at node " + std::to_string(id));
        t.node_ids_.push_back(id);
        if (nbrs.size() == 1) t.leaf_ids_.push_back(id);
    }
    t.validate();
    t.index_from_root();
    return t;
}

void RoutingTree::validate() const {
    if (adj_.empty()) throw ValidationError("empty tree");
    if (!adj_.count(kRoot)) throw ValidationError("source leaf 0 missing");
    if (adj_.at(kRoot).size() != 1) throw ValidationError("source leaf 0 must have degree 1");
    std::size_t edge_total = 0;
    for (const auto& [id, nbrs] : adj_) {
        edge_total += nbrs.size();
        if (nbrs.size() == 2)
            throw ValidationError("internal node " + std::to_string(id) + " has degree 2");
    }
    edge_total /= 2;
    if (edge_total != adj_.size() - 1)
        throw ValidationError("edge count does not match a tree");
    // Connectivity: BFS from root must reach everything (acyclicity then
    // follows from the edge count).
    std::set<int> seen{kRoot};
    std::deque<int> q{kRoot};
    while (!q.empty()) {
        int cur = q.front();
        q.pop_front();
        for (int nb : adj_.at(cur))
            if (seen.insert(nb).second) q.push_back(nb);
    }
    if (seen.size() != adj_.size()) throw ValidationError("tree is not connected");
}

void RoutingTree::index_from_root() {
    parent_[kRoot] = kRoot;
    depth_[kRoot] = 0;
    std::deque<int> q{kRoot};
    while (!q.empty()) {
        int cur = q.front();
        q.pop_front();
        for (int nb : adj_.at(cur)) {
            if (parent_.count(nb)) continue;
            parent_[nb] = cur;
            depth_[nb] = depth_[cur] + 1;
            q.push_back(nb);
        }
    }
}

std::vector<int> RoutingTree::receivers() const {
    std::vector<int> out;
    for (int l : leaf_ids_)
        if (l != kRoot) out.push_back(l);
    return out;
}

std::vector<Edge> RoutingTree::edges() const {
    std::vector<Edge> out;
    for (const auto& [id, nbrs] : adj_)
        for (int nb : nbrs)
            if (id < nb) out.emplace_back(id, nb);
    return out;
}

std::size_t RoutingTree::edge_count() const { return adj_.size() - 1; }

const std::vector<int>& RoutingTree::neighbors(int node) const {
    auto it = adj_.find(node);
    if (it == adj_.end())
        throw ValidationError("unknown node id " + std::to_string(node));
    return it->second;
}

bool RoutingTree::is_leaf(int node) const { return neighbors(node).size() == 1; }

int RoutingTree::parent(int node) const {
    auto it = parent_.find(node);
    if (it == parent_.end())
        throw ValidationError("unknown node id " + std::to_string(node));
    return it->second;
}

EdgePath RoutingTree::path_between_nodes(int a, int b) const {
    if (!has_node(a)) throw ValidationError("unknown node id " + std::to_string(a));
    if (!has_node(b)) throw ValidationError("unknown node id " + std::to_string(b));
    // Walk both endpoints up to their meet.
    std::vector<int> up_a{a}, up_b{b};
    int x = a, y = b;
    while (depth_.at(x) > depth_.at(y)) up_a.push_back(x = parent_.at(x));
    while (depth_.at(y) > depth_.at(x)) up_b.push_back(y = parent_.at(y));
    while (x != y) {
        up_a.push_back(x = parent_.at(x));
        up_b.push_back(y = parent_.at(y));
    }
    EdgePath p;
    p.nodes = std::move(up_a);
    for (auto it = up_b.rbegin() + 1; it != up_b.rend(); ++it) p.nodes.push_back(*it);
    return p;
}

EdgePath RoutingTree::path_edges(int a, int b) const {
    if (!has_node(a) || !is_leaf(a))
        throw ValidationError("unknown leaf id " + std::to_string(a));
    if (!has_node(b) || !is_leaf(b))
        throw ValidationError("unknown leaf id " + std::to_string(b));
    if (a == b) throw ValidationError("path endpoints must differ");
    return path_between_nodes(a, b);
}

int RoutingTree::common_ancestor(int a, int b) const {
    if (a == kRoot || b == kRoot)
        throw ValidationError("common_ancestor is undefined for the source leaf");
    if (!has_node(a) || !is_leaf(a) || !has_node(b) || !is_leaf(b) || a == b)
        throw ValidationError("common_ancestor needs two distinct receivers");
    int x = a, y = b;
    while (depth_.at(x) > depth_.at(y)) x = parent_.at(x);
    while (depth_.at(y) > depth_.at(x)) y = parent_.at(y);
    while (x != y) {
        x = parent_.at(x);
        y = parent_.at(y);
    }
    return x;
}

std::pair<std::vector<Edge>, std::vector<Edge>> RoutingTree::split_path(int a, int b) const {
    int gamma;
    if (a == kRoot) gamma = a;
    else if (b == kRoot) gamma = b;
    else gamma = common_ancestor(a, b);
    auto side = [&](int leaf) {
        std::vector<Edge> es;
        for (int cur = leaf; cur != gamma; cur = parent_.at(cur))
            es.emplace_back(cur, parent_.at(cur));
        return es;
    };
    return {side(a), side(b)};
}

int RoutingTree::graph_distance(int a, int b) const {
    if (a == b) return 0;
    return static_cast<int>(path_between_nodes(a, b).length());
}

int RoutingTree::chord_depth() const {
    int best = 0;
    for (const Edge& e : edges()) {
        // min over leaves on each side of the distance to the edge endpoint
        auto nearest_leaf = [&](int from, int avoid) {
            std::map<int, int> dist{{from, 0}};
            std::deque<int> q{from};
            int nearest = -1;
            while (!q.empty()) {
                int cur = q.front();
                q.pop_front();
                if (is_leaf(cur) && cur != from) {
                    nearest = dist[cur];
                    break;
                }
                if (is_leaf(cur) && cur == from) return 0;
                for (int nb : adj_.at(cur)) {
                    if (cur == from && nb == avoid) continue;
                    if (!dist.count(nb)) {
                        dist[nb] = dist[cur] + 1;
                        q.push_back(nb);
                    }
                }
            }
            return nearest;
        };
        int du = nearest_leaf(e.u, e.v);
        int dv = nearest_leaf(e.v, e.u);
        best = std::max(best, du + 1 + dv);
    }
    return best;
}

std::set<Bipartition> RoutingTree::bipartitions() const {
    std::set<Bipartition> out;
    for (const Edge& e : edges()) {
        // Leaves on e.u's side of the cut.
        std::set<int> side{e.u};
        std::deque<int> q{e.u};
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (int nb : adj_.at(cur)) {
                if (cur == e.u && nb == e.v) continue;
                if (side.insert(nb).second) q.push_back(nb);
            }
        }
        std::vector<int> a, b;
        for (int l : leaf_ids_) (side.count(l) ? a : b).push_back(l);
        out.emplace(std::move(a), std::move(b));
    }
    return out;
}

bool RoutingTree::in_subtree_below(int gamma, int node) const {
    int cur = node;
    while (true) {
        if (cur == gamma) return true;
        if (cur == kRoot) return false;
        cur = parent_.at(cur);
    }
}

int RoutingTree::closest_leaf_above(int a, int b) const {
    int gamma = common_ancestor(a, b);
    int best = -1, best_dist = 0;
    for (int l : leaf_ids_) {
        if (l == a || l == b || in_subtree_below(gamma, l)) continue;
        int d = graph_distance(l, gamma);
        if (best == -1 || d < best_dist || (d == best_dist && l < best)) {
            best = l;
            best_dist = d;
        }
    }
    return best; // the root always qualifies, so best >= 0
}

bool RoutingTree::same_topology(const RoutingTree& other) const {
    return leaf_ids_ == other.leaf_ids_ && bipartitions() == other.bipartitions();
}

RoutingTree tree_from_bipartitions(const std::vector<int>& leaves,
                                   const std::set<Bipartition>& parts) {
    std::vector<int> sorted = leaves;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty() || sorted.front() != RoutingTree::kRoot)
        throw ValidationError("leaf set must contain the source leaf 0");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("duplicate leaf ids");

    // Each bipartition maps to its source-free side, a cluster of the
    // laminar family over the receivers; the tree is then read off from
    // cluster nesting. Singletons and the full receiver set are implied.
    auto to_string = [](const std::vector<int>& c) {
        std::ostringstream os;
        os << "{";
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << "}";
        return os.str();
    };

    std::set<std::vector<int>> clusters;
    std::vector<int> all_receivers(sorted.begin() + 1, sorted.end());
    clusters.insert(all_receivers);
    for (int r : all_receivers) clusters.insert({r});
    for (const Bipartition& p : parts) {
        std::vector<int> both;
        std::set_union(p.side_a().begin(), p.side_a().end(), p.side_b().begin(),
                       p.side_b().end(), std::back_inserter(both));
        if (both != sorted)
            throw ValidationError("bipartition leaf set does not match input leaves");
        const bool a_has_root =
            std::binary_search(p.side_a().begin(), p.side_a().end(), RoutingTree::kRoot);
        clusters.insert(a_has_root ? p.side_b() : p.side_a());
    }

    // Laminarity check: every pair nested or disjoint.
    std::vector<std::vector<int>> cl(clusters.begin(), clusters.end());
    for (std::size_t i = 0; i < cl.size(); ++i) {
        for (std::size_t j = i + 1; j < cl.size(); ++j) {
            std::vector<int> inter;
            std::set_intersection(cl[i].begin(), cl[i].end(), cl[j].begin(), cl[j].end(),
                                  std::back_inserter(inter));
            if (inter.empty() || inter == cl[i] || inter == cl[j]) continue;
            throw IncompatibilityError("incompatible bipartitions: " + to_string(cl[i]) +
                                       " conflicts with " + to_string(cl[j]));
        }
    }

    // Sort by decreasing size; parent of a cluster = smallest strict superset.
    std::stable_sort(cl.begin(), cl.end(), [](const auto& x, const auto& y) {
        return x.size() > y.size();
    });
    int next_internal = sorted.back() + 1;
    std::map<std::vector<int>, int> node_of;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        int id;
        if (cl[i].size() == 1) {
            id = cl[i][0];
        } else {
            id = next_internal++;
        }
        node_of[cl[i]] = id;
        // find parent: nearest strict superset (clusters sorted big->small,
        // so scan backwards for the smallest superset already placed)
        int parent_id = -1;
        std::size_t best_size = 0;
        for (std::size_t j = 0; j < i; ++j) {
            if (cl[j].size() <= cl[i].size()) continue;
            if (std::includes(cl[j].begin(), cl[j].end(), cl[i].begin(), cl[i].end())) {
                if (parent_id == -1 || cl[j].size() < best_size) {
                    parent_id = node_of[cl[j]];
                    best_size = cl[j].size();
                }
            }
        }
        if (parent_id == -1) {
            if (i != 0) throw IncompatibilityError("multiple top-level clusters");
            edges.emplace_back(RoutingTree::kRoot, id);
        } else {
            edges.emplace_back(parent_id, id);
        }
    }
    return RoutingTree::from_edges(edges);
}

} // namespace tomo
