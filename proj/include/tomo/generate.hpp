#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tomo/delay.hpp"
#include "tomo/tree.hpp"

namespace tomo {

/// Perfect binary tree over `receivers` (a power of two) hanging off the
/// source; every internal node has degree 3.
RoutingTree balanced_tree(int receivers);

/// Spine of internal nodes, one receiver each, two at the far end.
RoutingTree caterpillar_tree(int receivers);

/// Random topology with internal degrees >= 3: receivers join either by
/// subdividing an edge or by attaching to an existing internal node.
RoutingTree random_tree(int receivers, std::uint64_t seed);

RoutingTree make_tree(const std::string& shape, int receivers, std::uint64_t seed);

/// Independent uniform weights in [lo, hi] per edge.
std::map<Edge, double> random_edge_weights(const RoutingTree& tree, double lo, double hi,
                                           std::uint64_t seed);

/// Model with the same distribution on every edge.
DelayModel uniform_edge_model(const RoutingTree& tree, const DelayDistribution& dist,
                              double bound, double variance_floor);

/// Random discrete model: per-edge supports of 2..max_support points within
/// {0..max_value}, probabilities on a coarse grid (exactly representable).
DelayModel random_discrete_model(const RoutingTree& tree, int max_value, int max_support,
                                 std::uint64_t seed);

} // namespace tomo
