#include "tomo/oracle.hpp"

#include <algorithm>

#include "tomo/error.hpp"
#include "tomo/moments.hpp"

namespace tomo {

namespace {

Rational rat_pow(const Rational& base, int e) {
    Rational out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

struct EdgeSupport {
    std::vector<Rational> values;
    std::vector<Rational> probs; // exact, sums to exactly 1
};

EdgeSupport edge_support(const DelayDistribution& d) {
    if (d.is_uniform())
        throw ValidationError("exact oracle requires discrete edge delays");
    EdgeSupport s;
    const auto& disc = d.discrete();
    Rational shift(disc.shift);
    Rational total(0);
    for (std::size_t i = 0; i < disc.probs.size(); ++i) {
        if (disc.probs[i] == 0.0) continue;
        s.values.push_back(Rational(static_cast<int>(i)) + shift);
        s.probs.push_back(Rational(disc.probs[i]));
        total += s.probs.back();
    }
    for (Rational& p : s.probs) p /= total;
    return s;
}

} // namespace

ExactJoint::ExactJoint(const DelayModel& model) {
    const RoutingTree& t = model.tree();
    leaf_order_ = t.leaves();

    const std::vector<Edge> edges = t.edges();
    std::vector<EdgeSupport> supports;
    std::size_t combos = 1;
    for (const Edge& e : edges) {
        supports.push_back(edge_support(model.dist(e)));
        std::size_t sz = supports.back().values.size();
        if (combos > kSupportGuard / sz)
            throw GuardError("joint support exceeds the enumeration guard");
        combos *= sz;
    }

    std::map<Edge, std::size_t> edge_index;
    for (std::size_t i = 0; i < edges.size(); ++i) edge_index[edges[i]] = i;
    std::vector<std::vector<std::size_t>> paths(leaf_order_.size());
    for (std::size_t li = 0; li < leaf_order_.size(); ++li) {
        if (leaf_order_[li] == RoutingTree::kRoot) continue;
        for (const Edge& e : t.path_edges(RoutingTree::kRoot, leaf_order_[li]).edges())
            paths[li].push_back(edge_index.at(e));
    }

    support_.reserve(combos);
    std::vector<std::size_t> idx(edges.size(), 0);
    while (true) {
        Rational p(1);
        for (std::size_t ei = 0; ei < edges.size(); ++ei) p *= supports[ei].probs[idx[ei]];
        std::vector<Rational> leaf_vals(leaf_order_.size(), Rational(0));
        for (std::size_t li = 0; li < leaf_order_.size(); ++li)
            for (std::size_t ei : paths[li]) leaf_vals[li] += supports[ei].values[idx[ei]];
        support_.emplace_back(std::move(leaf_vals), std::move(p));
        // odometer
        std::size_t pos = 0;
        while (pos < edges.size()) {
            if (++idx[pos] < supports[pos].values.size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == edges.size()) break;
    }
}

std::size_t ExactJoint::col_of(int leaf) const {
    auto it = std::lower_bound(leaf_order_.begin(), leaf_order_.end(), leaf);
    if (it == leaf_order_.end() || *it != leaf)
        throw ValidationError("leaf " + std::to_string(leaf) + " not in joint");
    return static_cast<std::size_t>(it - leaf_order_.begin());
}

ExactJoint exact_joint(const DelayModel& model) { return ExactJoint(model); }

Rational exact_central_moment(const DelayDistribution& d, int j) {
    if (j < 0) throw ValidationError("moment order must be >= 0");
    if (j == 0) return Rational(1);
    EdgeSupport s = edge_support(d);
    Rational mu(0);
    for (std::size_t i = 0; i < s.values.size(); ++i) mu += s.probs[i] * s.values[i];
    if (j == 1) return Rational(0);
    Rational m(0);
    for (std::size_t i = 0; i < s.values.size(); ++i)
        m += s.probs[i] * rat_pow(s.values[i] - mu, j);
    return m;
}

Rational exact_delta(const ExactJoint& joint, int a, int b, int j) {
    std::size_t ca = joint.col_of(a), cb = joint.col_of(b);
    // project onto D_a - D_b first; powers then run over few distinct values
    std::map<Rational, Rational> proj;
    for (const auto& [vals, p] : joint.support()) proj[vals[ca] - vals[cb]] += p;
    Rational mean(0);
    for (const auto& [v, p] : proj) mean += p * v;
    if (j == 1) return Rational(0);
    Rational out(0);
    for (const auto& [v, p] : proj) out += p * rat_pow(v - mean, j);
    return out;
}

Rational exact_phi(const ExactJoint& joint, int a, int b, int c, int j) {
    std::size_t ca = joint.col_of(a), cb = joint.col_of(b), cc = joint.col_of(c);
    std::map<std::pair<Rational, Rational>, Rational> proj;
    for (const auto& [vals, p] : joint.support()) {
        Rational x = vals[ca] - vals[cb];
        Rational y = (vals[ca] - vals[cc]) + (vals[cb] - vals[cc]);
        proj[{x, y}] += p;
    }
    Rational mx(0), my(0);
    for (const auto& [v, p] : proj) {
        mx += p * v.first;
        my += p * v.second;
    }
    Rational out(0);
    for (const auto& [v, p] : proj)
        out += p * rat_pow(v.first - mx, j - 1) * (v.second - my);
    return out;
}

AdditiveFunction exact_tree_metric(const RoutingTree& tree,
                                   const std::map<Edge, double>& weights) {
    AdditiveFunction w(tree.leaves());
    const auto& ls = tree.leaves();
    for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = i + 1; j < ls.size(); ++j) {
            double total = 0;
            for (const Edge& e : tree.path_edges(ls[i], ls[j]).edges()) {
                auto it = weights.find(e);
                if (it == weights.end()) throw ValidationError("edge weight missing");
                total += it->second;
            }
            w.set(ls[i], ls[j], total);
        }
    }
    return w;
}

IdentityReport check_lemma_identities(const DelayModel& model, int J) {
    const RoutingTree& t = model.tree();
    ExactJoint joint(model);

    std::map<Edge, std::vector<Rational>> moments;
    for (const Edge& e : t.edges()) {
        std::vector<Rational> row;
        for (int j = 0; j <= J; ++j) row.push_back(exact_central_moment(model.dist(e), j));
        moments.emplace(e, std::move(row));
    }
    auto lookup = [&moments](const Edge& e, int order) { return moments.at(e)[order]; };
    auto path_sum = [&](const std::vector<Edge>& es, int j) {
        Rational s(0);
        for (const Edge& e : es) s += moments.at(e)[j];
        return s;
    };

    IdentityReport rep;
    auto track = [](double& slot, const Rational& residual) {
        double r = std::abs(static_cast<double>(residual));
        slot = std::max(slot, r);
    };

    const auto& ls = t.leaves();
    for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t jj = i + 1; jj < ls.size(); ++jj) {
            int a = ls[i], b = ls[jj];
            auto [a_side, b_side] = t.split_path(a, b);
            for (int j = 2; j <= J; ++j) {
                Rational lhs = exact_delta(joint, a, b, j) -
                               eval_F<Rational>(a_side, b_side, j, lookup);
                Rational rhs = path_sum(a_side, j);
                Rational b_sum = path_sum(b_side, j);
                rhs += (j % 2 == 0) ? b_sum : -b_sum;
                track(rep.max_even_residual, lhs - rhs);
            }
            ++rep.pairs_checked;

            if (a == RoutingTree::kRoot || b == RoutingTree::kRoot) continue;
            int gamma = t.common_ancestor(a, b);
            for (int c : ls) {
                if (c == a || c == b || t.in_subtree_below(gamma, c)) continue;
                for (int j = 3; j <= J; j += 2) {
                    Rational lhs = exact_phi(joint, a, b, c, j) -
                                   (eval_G<Rational>(1, a_side, b_side, j, lookup) +
                                    eval_G<Rational>(2, a_side, b_side, j, lookup));
                    Rational rhs = path_sum(a_side, j) + path_sum(b_side, j);
                    track(rep.max_odd_residual, lhs - rhs);
                }
                ++rep.triples_checked;
            }
        }
    }
    return rep;
}

} // namespace tomo
