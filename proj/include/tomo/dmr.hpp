#pragma once

#include <set>
#include <utility>
#include <vector>

#include "tomo/stats.hpp"
#include "tomo/tree.hpp"

namespace tomo {

/// Parameter block for distorted-metric reconstruction. Construction
/// enforces the two chained constraints
///   6 < alpha_prime + 3 < alpha < 1/alpha_tilde
///   M_tilde/beta_tilde + tau < beta M_tilde < (beta_prime M_tilde - 3 tau)/2
/// and fails loudly on any violation.
struct DmrParams {
    double tau;          // distortion accuracy on short distances
    double m_tilde;      // distortion horizon
    double alpha;        // parameter-chain upper anchor
    double alpha_prime;  // gap threshold multiplier (splits at alpha' * tau)
    double beta;         // proximity-graph radius multiplier, in (0,1)
    double beta_prime;   // ball radius multiplier, in (0,1)
    double f;            // edge weight lower bound
    double g;            // edge weight upper bound
    double alpha_tilde;  // < 1/6
    double beta_tilde;   // > 2

    DmrParams(double tau, double m_tilde, double alpha, double alpha_prime, double beta,
              double beta_prime, double f, double g, double alpha_tilde, double beta_tilde);

    /// One reproducible default satisfying every constraint: alpha_tilde =
    /// 1/8, beta_tilde = 3, tau = f/8, M_tilde = 3 g depth_bound, alpha' = 4,
    /// alpha = 7.5, beta/beta' at the midpoints of their feasible intervals.
    static DmrParams defaults(double f, double g, int depth_bound);
};

/// Receiver graph joining pairs with metric value below beta * M_tilde.
struct ProximityGraph {
    std::vector<int> leaves; // sorted
    std::set<std::pair<int, int>> edges; // normalized (min,max)

    bool has_edge(int u, int v) const {
        return edges.count(u < v ? std::pair{u, v} : std::pair{v, u}) != 0;
    }
    std::vector<std::pair<int, int>> sorted_edges() const { return {edges.begin(), edges.end()}; }
};

ProximityGraph proximity_graph(const DistortedMetric& metric, const DmrParams& params);

/// Local split of the ball around (u,v): the side holding u and the side
/// holding v, both sorted.
struct LocalSplit {
    std::vector<int> u_side;
    std::vector<int> v_side;
};

/// Walks the ball around (u,v) in order of estimated intersection point
/// Phi_w = (d(u,v) + d(u,w) - d(v,w))/2 and opens a split whenever the gap
/// to the previous member reaches alpha' * tau. Ties break on smaller Phi
/// then smaller leaf id.
std::vector<LocalSplit> mini_contractor(const ProximityGraph& graph,
                                        const DistortedMetric& metric, int u, int v,
                                        const DmrParams& params);

/// Extends each local split to the full leaf set: crossing edges inside the
/// ball are removed and every remaining leaf joins the side its component
/// touches. A leaf connected to both sides, or to neither, raises
/// InconsistencyError.
std::vector<Bipartition> extender(const ProximityGraph& graph,
                                  const std::vector<LocalSplit>& splits, int u, int v);

/// All deduplicated full bipartitions found across the proximity pairs.
std::set<Bipartition> dmr_bipartitions(const DistortedMetric& metric, const DmrParams& params);

/// Full reconstruction: proximity graph, per-pair local splits, extension,
/// then assembly of the bipartition set into a tree. If the metric is an
/// (alpha_tilde f, beta_tilde g Delta)-distortion of a tree metric with
/// weights in [f,g], the output is that tree. Inconsistent or incompatible
/// splits raise ReconstructionError; no silent wrong tree on detection.
RoutingTree dmr_reconstruct(const DistortedMetric& metric, const DmrParams& params);

} // namespace tomo
