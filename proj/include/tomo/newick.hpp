#pragma once

#include <map>
#include <optional>
#include <string>

#include "tomo/tree.hpp"

namespace tomo {

struct NewickTree {
    RoutingTree tree;
    std::map<Edge, double> weights; // empty when the input carried none
    bool has_weights = false;
};

/// Serializes rooted at the source leaf: "(<subtree>[:w])0;". Leaf labels
/// are the integer ids, internal nodes are unlabeled. Pass weights to
/// annotate branches.
std::string to_newick(const RoutingTree& tree,
                      const std::map<Edge, double>* weights = nullptr);

/// Parses the format produced by to_newick (and plain unweighted variants).
/// Internal node ids are assigned deterministically above the max leaf id.
NewickTree from_newick(const std::string& text);

} // namespace tomo
