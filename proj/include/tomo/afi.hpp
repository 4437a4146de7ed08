#pragma once

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "tomo/tree.hpp"

namespace tomo {

/// Symmetric leaf function with W(a,a) = 0; edge weights of any sign.
class AdditiveFunction {
public:
    explicit AdditiveFunction(std::vector<int> leaves);

    const std::vector<int>& leaves() const { return leaves_; }
    void set(int u, int v, double value);
    double at(int u, int v) const; // at(u,u) == 0

private:
    std::size_t index(int leaf) const;
    std::vector<int> leaves_;
    std::vector<double> w_;
};

/// Representative leaves for one edge: u1,u2 hang off one endpoint, u3,u4
/// off the other (u3 == u4 == the leaf itself for a leaf edge).
struct EdgeQuartet {
    Edge edge;
    int u1, u2, u3, u4;
};

/// Per-edge representatives: for each endpoint, the closest leaf (graph
/// distance, ties by smallest id) of each hanging subtree; the two nearest
/// subtrees supply the pair. Throws if an internal node has degree < 3.
std::vector<EdgeQuartet> edge_quartets(const RoutingTree& tree);

/// Unordered leaf pairs the four-point combination reads, over all edges.
std::set<std::pair<int, int>> afi_required_pairs(const RoutingTree& tree);

/// Recovers signed edge weights from an additive leaf function:
/// w_e = (W(u1,u3) + W(u2,u4) - W(u1,u2) - W(u3,u4)) / 2. Exact on exactly
/// additive inputs. `W` is queried only at the required pairs.
std::map<Edge, double> afi(const RoutingTree& tree,
                           const std::function<double(int, int)>& W);

std::map<Edge, double> afi(const RoutingTree& tree, const AdditiveFunction& W);

} // namespace tomo
