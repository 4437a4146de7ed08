#include "tomo/dmr.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tomo/error.hpp"

namespace tomo {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

DmrParams::DmrParams(double tau_, double m_tilde_, double alpha_, double alpha_prime_,
                     double beta_, double beta_prime_, double f_, double g_,
                     double alpha_tilde_, double beta_tilde_)
    : tau(tau_), m_tilde(m_tilde_), alpha(alpha_), alpha_prime(alpha_prime_), beta(beta_),
      beta_prime(beta_prime_), f(f_), g(g_), alpha_tilde(alpha_tilde_), beta_tilde(beta_tilde_) {
    if (!(tau > 0) || !(m_tilde > 0)) throw ValidationError("tau and M_tilde must be positive");
    if (!(f > 0) || !(g > f)) throw ValidationError("weight bounds need 0 < f < g");
    if (!(alpha_tilde < 1.0 / 6.0) || !(alpha_tilde > 0))
        throw ValidationError("alpha_tilde must lie in (0, 1/6)");
    if (!(beta_tilde > 2)) throw ValidationError("beta_tilde must exceed 2");
    if (!(beta > 0 && beta < 1 && beta_prime > 0 && beta_prime < 1))
        throw ValidationError("beta and beta_prime must lie in (0,1)");
    if (!(6 < alpha_prime + 3 && alpha_prime + 3 < alpha && alpha < 1.0 / alpha_tilde))
        throw ValidationError("parameter chain 6 < alpha'+3 < alpha < 1/alpha_tilde violated");
    double lo = m_tilde / beta_tilde + tau;
    double mid = beta * m_tilde;
    double hi = 0.5 * (beta_prime * m_tilde - 3 * tau);
    if (!(lo < mid && mid < hi))
        throw ValidationError("proximity-radius chain violated: need " + fmt(lo) + " < " +
                              fmt(mid) + " < " + fmt(hi));
}

DmrParams DmrParams::defaults(double f, double g, int depth_bound) {
    if (!(f > 0) || !(g > f)) throw ValidationError("weight bounds need 0 < f < g");
    if (depth_bound < 1) throw ValidationError("depth bound must be >= 1");
    const double alpha_tilde = 1.0 / 8.0;
    const double beta_tilde = 3.0;
    const double tau = alpha_tilde * f;
    const double m_tilde = beta_tilde * g * depth_bound;
    const double r = tau / m_tilde;
    const double bp_lo = 2.0 / beta_tilde + 5.0 * r;
    if (!(bp_lo < 1.0))
        throw ValidationError("no feasible beta_prime: tau too large relative to M_tilde");
    const double beta_prime = 0.5 * (bp_lo + 1.0);
    const double b_lo = 1.0 / beta_tilde + r;
    const double b_hi = 0.5 * beta_prime - 1.5 * r;
    if (!(b_lo < b_hi)) throw ValidationError("no feasible beta for these bounds");
    const double beta = 0.5 * (b_lo + b_hi);
    return DmrParams(tau, m_tilde, 7.5, 4.0, beta, beta_prime, f, g, alpha_tilde, beta_tilde);
}

ProximityGraph proximity_graph(const DistortedMetric& metric, const DmrParams& params) {
    ProximityGraph g;
    g.leaves = metric.leaves();
    const double radius = params.beta * params.m_tilde;
    for (std::size_t i = 0; i < g.leaves.size(); ++i)
        for (std::size_t j = i + 1; j < g.leaves.size(); ++j)
            if (metric.at(g.leaves[i], g.leaves[j]) < radius)
                g.edges.insert({g.leaves[i], g.leaves[j]});
    return g;
}

std::vector<LocalSplit> mini_contractor(const ProximityGraph& graph,
                                        const DistortedMetric& metric, int u, int v,
                                        const DmrParams& params) {
    if (!graph.has_edge(u, v))
        throw ValidationError("(" + std::to_string(u) + "," + std::to_string(v) +
                              ") is not a proximity edge");
    const double ball_radius = params.beta_prime * params.m_tilde;
    std::vector<int> ball;
    for (int w : graph.leaves) {
        double du = (w == u) ? 0.0 : metric.at(u, w);
        double dv = (w == v) ? 0.0 : metric.at(v, w);
        if (std::max(du, dv) < ball_radius) ball.push_back(w);
    }

    const double d_uv = metric.at(u, v);
    auto phi = [&](int w) {
        if (w == u) return 0.0;
        if (w == v) return d_uv;
        return 0.5 * (d_uv + metric.at(u, w) - metric.at(v, w));
    };
    std::vector<std::pair<double, int>> order;
    for (int w : ball)
        if (w != u) order.emplace_back(phi(w), w);
    std::sort(order.begin(), order.end()); // by Phi, then leaf id

    std::vector<LocalSplit> splits;
    std::vector<int> assigned{u};
    double prev_phi = 0.0; // Phi_u
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [p, w] = order[i];
        if (p - prev_phi >= params.alpha_prime * params.tau) {
            LocalSplit s;
            s.u_side = assigned;
            for (std::size_t r = i; r < order.size(); ++r) s.v_side.push_back(order[r].second);
            std::sort(s.u_side.begin(), s.u_side.end());
            std::sort(s.v_side.begin(), s.v_side.end());
            splits.push_back(std::move(s));
        }
        assigned.push_back(w);
        prev_phi = p;
    }
    return splits;
}

std::vector<Bipartition> extender(const ProximityGraph& graph,
                                  const std::vector<LocalSplit>& splits, int u, int v) {
    std::vector<Bipartition> out;
    for (const LocalSplit& s : splits) {
        auto in_u = [&s](int w) {
            return std::binary_search(s.u_side.begin(), s.u_side.end(), w);
        };
        auto in_v = [&s](int w) {
            return std::binary_search(s.v_side.begin(), s.v_side.end(), w);
        };
        // connected components of the graph minus ball-crossing edges
        std::map<int, std::vector<int>> adj;
        for (auto [x, y] : graph.edges) {
            if ((in_u(x) && in_v(y)) || (in_v(x) && in_u(y))) continue;
            adj[x].push_back(y);
            adj[y].push_back(x);
        }
        std::map<int, int> comp;
        int comp_id = 0;
        for (int start : graph.leaves) {
            if (comp.count(start)) continue;
            std::deque<int> q{start};
            comp[start] = comp_id;
            while (!q.empty()) {
                int cur = q.front();
                q.pop_front();
                for (int nb : adj[cur])
                    if (!comp.count(nb)) {
                        comp[nb] = comp_id;
                        q.push_back(nb);
                    }
            }
            ++comp_id;
        }
        std::vector<char> touches_u(comp_id, 0), touches_v(comp_id, 0);
        for (int w : s.u_side) touches_u[comp[w]] = 1;
        for (int w : s.v_side) touches_v[comp[w]] = 1;

        std::vector<int> side_u = s.u_side, side_v = s.v_side;
        for (int w : graph.leaves) {
            if (in_u(w) || in_v(w)) continue;
            int cid = comp[w];
            bool tu = touches_u[cid], tv = touches_v[cid];
            if (tu == tv) {
                std::string kind = tu ? "both sides" : "neither side";
                throw InconsistencyError("leaf " + std::to_string(w) + " connects to " + kind +
                                         " of the split from pair (" + std::to_string(u) + "," +
                                         std::to_string(v) + ")");
            }
            (tu ? side_u : side_v).push_back(w);
        }
        out.emplace_back(std::move(side_u), std::move(side_v));
    }
    return out;
}

std::set<Bipartition> dmr_bipartitions(const DistortedMetric& metric, const DmrParams& params) {
    ProximityGraph graph = proximity_graph(metric, params);
    std::set<Bipartition> parts;
    for (auto [u, v] : graph.sorted_edges()) {
        auto splits = mini_contractor(graph, metric, u, v, params);
        for (Bipartition& b : extender(graph, splits, u, v)) parts.insert(std::move(b));
    }
    return parts;
}

RoutingTree dmr_reconstruct(const DistortedMetric& metric, const DmrParams& params) {
    ProximityGraph graph = proximity_graph(metric, params);
    if (graph.leaves.size() > 1 && graph.edges.empty())
        throw ReconstructionError("proximity graph has no edges; M_tilde too small "
                                  "or the metric is all long distances");
    std::set<Bipartition> parts;
    try {
        for (auto [u, v] : graph.sorted_edges()) {
            auto splits = mini_contractor(graph, metric, u, v, params);
            for (Bipartition& b : extender(graph, splits, u, v)) parts.insert(std::move(b));
        }
        return tree_from_bipartitions(metric.leaves(), parts);
    } catch (const InconsistencyError& e) {
        throw ReconstructionError(std::string("extension inconsistency: ") + e.what());
    } catch (const IncompatibilityError& e) {
        throw ReconstructionError(std::string("conflicting bipartitions: ") + e.what());
    }
}

} // namespace tomo
