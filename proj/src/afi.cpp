#include "tomo/afi.hpp"

#include <algorithm>
#include <deque>

#include "tomo/error.hpp"

namespace tomo {

AdditiveFunction::AdditiveFunction(std::vector<int> leaves) : leaves_(std::move(leaves)) {
    std::sort(leaves_.begin(), leaves_.end());
    if (leaves_.size() < 2) throw ValidationError("additive function needs >= 2 leaves");
    if (std::adjacent_find(leaves_.begin(), leaves_.end()) != leaves_.end())
        throw ValidationError("duplicate leaf ids");
    w_.assign(leaves_.size() * leaves_.size(), 0.0);
}

std::size_t AdditiveFunction::index(int leaf) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), leaf);
    if (it == leaves_.end() || *it != leaf)
        throw ValidationError("leaf " + std::to_string(leaf) + " not in additive function");
    return static_cast<std::size_t>(it - leaves_.begin());
}

void AdditiveFunction::set(int u, int v, double value) {
    if (u == v) throw ValidationError("W(a,a) is fixed at 0");
    std::size_t i = index(u), j = index(v);
    w_[i * leaves_.size() + j] = value;
    w_[j * leaves_.size() + i] = value;
}

double AdditiveFunction::at(int u, int v) const {
    return w_[index(u) * leaves_.size() + index(v)];
}

namespace {

// Closest leaf to `endpoint` within each subtree hanging off it (excluding
// the one toward `other`), as (distance, leaf id) sorted by distance then id.
std::vector<std::pair<int, int>> hanging_representatives(const RoutingTree& t, int endpoint,
                                                         int other) {
    std::vector<std::pair<int, int>> reps;
    for (int nb : t.neighbors(endpoint)) {
        if (nb == other) continue;
        // BFS into the subtree rooted at nb, away from endpoint
        std::map<int, int> dist{{nb, 1}};
        std::deque<int> q{nb};
        int best_leaf = -1, best_dist = 0;
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            if (t.is_leaf(cur)) {
                if (best_leaf == -1 || dist[cur] < best_dist ||
                    (dist[cur] == best_dist && cur < best_leaf)) {
                    best_leaf = cur;
                    best_dist = dist[cur];
                }
                continue;
            }
            for (int next : t.neighbors(cur)) {
                if (next == endpoint || dist.count(next)) continue;
                dist[next] = dist[cur] + 1;
                q.push_back(next);
            }
        }
        reps.emplace_back(best_dist, best_leaf);
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

} // namespace

std::vector<EdgeQuartet> edge_quartets(const RoutingTree& tree) {
    std::vector<EdgeQuartet> out;
    for (const Edge& e : tree.edges()) {
        const bool u_leaf = tree.is_leaf(e.u);
        const bool v_leaf = tree.is_leaf(e.v);
        if (u_leaf && v_leaf) {
            // two-leaf tree: the weight is read directly
            out.push_back({e, e.u, e.u, e.v, e.v});
            continue;
        }
        if (u_leaf || v_leaf) {
            int leaf = u_leaf ? e.u : e.v;
            int inner = u_leaf ? e.v : e.u;
            if (tree.degree(inner) < 3)
                throw ValidationError("internal node " + std::to_string(inner) +
                                      " has degree < 3");
            auto reps = hanging_representatives(tree, inner, leaf);
            out.push_back({e, reps[0].second, reps[1].second, leaf, leaf});
            continue;
        }
        if (tree.degree(e.u) < 3 || tree.degree(e.v) < 3)
            throw ValidationError("internal edge endpoint has degree < 3");
        auto ru = hanging_representatives(tree, e.u, e.v);
        auto rv = hanging_representatives(tree, e.v, e.u);
        out.push_back({e, ru[0].second, ru[1].second, rv[0].second, rv[1].second});
    }
    return out;
}

std::set<std::pair<int, int>> afi_required_pairs(const RoutingTree& tree) {
    std::set<std::pair<int, int>> pairs;
    auto add = [&pairs](int a, int b) {
        if (a != b) pairs.insert(a < b ? std::pair{a, b} : std::pair{b, a});
    };
    for (const EdgeQuartet& q : edge_quartets(tree)) {
        add(q.u1, q.u3);
        add(q.u2, q.u4);
        add(q.u1, q.u2);
        add(q.u3, q.u4);
    }
    return pairs;
}

std::map<Edge, double> afi(const RoutingTree& tree,
                           const std::function<double(int, int)>& W) {
    // W(x,x) = 0 makes the one formula cover internal edges, leaf edges
    // (u3 = u4 = the leaf) and the two-leaf tree.
    auto val = [&](int a, int b) { return a == b ? 0.0 : W(a, b); };
    std::map<Edge, double> out;
    for (const EdgeQuartet& q : edge_quartets(tree))
        out[q.edge] =
            0.5 * (val(q.u1, q.u3) + val(q.u2, q.u4) - val(q.u1, q.u2) - val(q.u3, q.u4));
    return out;
}

std::map<Edge, double> afi(const RoutingTree& tree, const AdditiveFunction& W) {
    return afi(tree, [&W](int a, int b) { return W.at(a, b); });
}

} // namespace tomo
