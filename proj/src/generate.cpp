#include "tomo/generate.hpp"

#include <algorithm>
#include <vector>

#include "tomo/error.hpp"
#include "tomo/random.hpp"

namespace tomo {

RoutingTree balanced_tree(int receivers) {
    if (receivers < 2 || (receivers & (receivers - 1)) != 0)
        throw ValidationError("balanced tree needs a power-of-two receiver count >= 2");
    std::vector<Edge> edges;
    int next_internal = receivers + 1;
    // build top-down: node -> number of receivers below it
    struct Item {
        int id;
        int first;
        int count;
    };
    int top = next_internal++;
    edges.emplace_back(RoutingTree::kRoot, top);
    std::vector<Item> todo{{top, 1, receivers}};
    while (!todo.empty()) {
        Item it = todo.back();
        todo.pop_back();
        int half = it.count / 2;
        for (int side = 0; side < 2; ++side) {
            int first = side == 0 ? it.first : it.first + half;
            if (half == 1) {
                edges.emplace_back(it.id, first);
            } else {
                int child = next_internal++;
                edges.emplace_back(it.id, child);
                todo.push_back({child, first, half});
            }
        }
    }
    return RoutingTree::from_edges(edges);
}

RoutingTree caterpillar_tree(int receivers) {
    if (receivers < 2) throw ValidationError("caterpillar needs >= 2 receivers");
    std::vector<Edge> edges;
    int spine = receivers + 1;
    edges.emplace_back(RoutingTree::kRoot, spine);
    for (int r = 1; r < receivers; ++r) {
        edges.emplace_back(spine, r);
        if (r + 1 < receivers) {
            edges.emplace_back(spine, spine + 1);
            ++spine;
        }
    }
    edges.emplace_back(spine, receivers);
    return RoutingTree::from_edges(edges);
}

RoutingTree random_tree(int receivers, std::uint64_t seed) {
    if (receivers < 1) throw ValidationError("need at least one receiver");
    if (receivers == 1) return RoutingTree::from_edges({Edge(0, 1)});
    std::mt19937_64 rng = stream_engine(seed, 0x7ee5);
    int next_internal = receivers + 1;
    std::vector<Edge> edges;
    std::vector<int> internals;
    int first = next_internal++;
    internals.push_back(first);
    edges.emplace_back(RoutingTree::kRoot, first);
    edges.emplace_back(first, 1);
    edges.emplace_back(first, 2);
    for (int r = 3; r <= receivers; ++r) {
        if (uniform01(rng) < 0.5) {
            // subdivide a random edge, hang the new receiver off the middle
            std::size_t ei = static_cast<std::size_t>(uniform01(rng) * edges.size());
            ei = std::min(ei, edges.size() - 1);
            Edge e = edges[ei];
            int mid = next_internal++;
            internals.push_back(mid);
            edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(ei));
            edges.emplace_back(e.u, mid);
            edges.emplace_back(mid, e.v);
            edges.emplace_back(mid, r);
        } else {
            std::size_t ni = static_cast<std::size_t>(uniform01(rng) * internals.size());
            ni = std::min(ni, internals.size() - 1);
            edges.emplace_back(internals[ni], r);
        }
    }
    return RoutingTree::from_edges(edges);
}

RoutingTree make_tree(const std::string& shape, int receivers, std::uint64_t seed) {
    if (shape == "balanced") return balanced_tree(receivers);
    if (shape == "caterpillar") return caterpillar_tree(receivers);
    if (shape == "random") return random_tree(receivers, seed);
    throw ValidationError("unknown tree shape '" + shape + "'");
}

std::map<Edge, double> random_edge_weights(const RoutingTree& tree, double lo, double hi,
                                           std::uint64_t seed) {
    if (!(lo <= hi)) throw ValidationError("bad weight range");
    std::mt19937_64 rng = stream_engine(seed, 0x3e1);
    std::map<Edge, double> w;
    for (const Edge& e : tree.edges()) w[e] = lo + (hi - lo) * uniform01(rng);
    return w;
}

DelayModel uniform_edge_model(const RoutingTree& tree, const DelayDistribution& dist,
                              double bound, double variance_floor) {
    std::map<Edge, DelayDistribution> dists;
    for (const Edge& e : tree.edges()) dists.emplace(e, dist);
    return DelayModel(tree, std::move(dists), bound, variance_floor);
}

DelayModel random_discrete_model(const RoutingTree& tree, int max_value, int max_support,
                                 std::uint64_t seed) {
    if (max_value < 1 || max_support < 2) throw ValidationError("bad discrete model spec");
    std::mt19937_64 rng = stream_engine(seed, 0xd15c);
    std::map<Edge, DelayDistribution> dists;
    for (const Edge& e : tree.edges()) {
        int support = 2 + static_cast<int>(uniform01(rng) * (max_support - 1));
        support = std::min(support, max_value + 1);
        // pick distinct support points including at least two values
        std::vector<int> points;
        while (static_cast<int>(points.size()) < support) {
            int v = static_cast<int>(uniform01(rng) * (max_value + 1));
            v = std::min(v, max_value);
            if (std::find(points.begin(), points.end(), v) == points.end()) points.push_back(v);
        }
        std::sort(points.begin(), points.end());
        // grid probabilities in multiples of 1/16, each at least 1/16
        std::vector<int> ticks(points.size(), 1);
        int rest = 16 - static_cast<int>(points.size());
        for (int i = 0; i < rest; ++i) {
            std::size_t at = static_cast<std::size_t>(uniform01(rng) * points.size());
            at = std::min(at, points.size() - 1);
            ++ticks[at];
        }
        std::vector<double> probs(static_cast<std::size_t>(max_value) + 1, 0.0);
        for (std::size_t i = 0; i < points.size(); ++i)
            probs[static_cast<std::size_t>(points[i])] = ticks[i] / 16.0;
        dists.emplace(e, DelayDistribution(BoundedDiscrete{probs, 0.0}));
    }
    return DelayModel(tree, std::move(dists), static_cast<double>(max_value), 0.0);
}

} // namespace tomo
