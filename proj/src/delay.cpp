#include "tomo/delay.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "tomo/error.hpp"
#include "tomo/random.hpp"

namespace tomo {

DelayDistribution::DelayDistribution(BoundedUniform u) : v_(u) {
    if (!(u.theta > 0) || !std::isfinite(u.theta) || !std::isfinite(u.shift))
        throw ValidationError("uniform delay needs finite theta > 0");
}

DelayDistribution::DelayDistribution(BoundedDiscrete d) : v_(std::move(d)) {
    const auto& dd = std::get<BoundedDiscrete>(v_);
    if (dd.probs.empty()) throw ValidationError("discrete delay needs a probability vector");
    double sum = 0;
    for (double p : dd.probs) {
        if (p < 0 || p > 1) throw ValidationError("discrete probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("discrete probabilities must sum to 1");
}

double DelayDistribution::support_min() const {
    if (is_uniform()) return uniform().shift;
    return discrete().shift;
}

double DelayDistribution::support_max() const {
    if (is_uniform()) return uniform().shift + uniform().theta;
    return discrete().shift + discrete().max_value();
}

double DelayDistribution::mean() const {
    if (is_uniform()) return uniform().shift + uniform().theta / 2.0;
    const auto& d = discrete();
    double m = 0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) m += d.probs[i] * static_cast<double>(i);
    return m + d.shift;
}

double DelayDistribution::central_moment(int j) const {
    if (j < 0) throw ValidationError("moment order must be >= 0");
    if (j == 0) return 1.0;
    if (j == 1) return 0.0;
    if (is_uniform()) {
        // E[(U - theta/2)^j] over U ~ Unif[0, theta]
        if (j % 2 == 1) return 0.0;
        return std::pow(uniform().theta / 2.0, j) / (j + 1);
    }
    const auto& d = discrete();
    double mu = 0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) mu += d.probs[i] * static_cast<double>(i);
    double m = 0;
    for (std::size_t i = 0; i < d.probs.size(); ++i)
        m += d.probs[i] * std::pow(static_cast<double>(i) - mu, j);
    return m;
}

DelayDistribution DelayDistribution::shifted(double mu) const {
    if (is_uniform()) {
        BoundedUniform u = uniform();
        u.shift += mu;
        return DelayDistribution(u);
    }
    BoundedDiscrete d = discrete();
    d.shift += mu;
    return DelayDistribution(d);
}

double DelayDistribution::sample(double u01) const {
    if (is_uniform()) return uniform().shift + uniform().theta * u01;
    const auto& d = discrete();
    double acc = 0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        acc += d.probs[i];
        if (u01 < acc) return d.shift + static_cast<double>(i);
    }
    return d.shift + d.max_value();
}

DelayModel::DelayModel(RoutingTree tree, std::map<Edge, DelayDistribution> dists, double bound,
                       double variance_floor)
    : tree_(std::move(tree)), dists_(std::move(dists)), bound_(bound),
      variance_floor_(variance_floor) {
    if (!(bound_ > 0)) throw ValidationError("delay bound M must be positive");
    if (variance_floor_ < 0) throw ValidationError("variance floor must be >= 0");
    for (const Edge& e : tree_.edges()) {
        auto it = dists_.find(e);
        if (it == dists_.end())
            throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has no delay distribution");
        const auto& d = it->second;
        if (d.support_min() < -1e-12 || d.support_max() > bound_ + 1e-12)
            throw ValidationError("edge delay support outside [0, M]");
        if (d.variance() + 1e-12 < variance_floor_)
            throw ValidationError("edge delay variance below the floor f");
    }
    if (dists_.size() != tree_.edge_count())
        throw ValidationError("distribution map has entries for unknown edges");
}

const DelayDistribution& DelayModel::dist(const Edge& e) const {
    auto it = dists_.find(e);
    if (it == dists_.end()) throw ValidationError("unknown edge");
    return it->second;
}

bool DelayModel::all_discrete() const {
    return std::all_of(dists_.begin(), dists_.end(),
                       [](const auto& kv) { return !kv.second.is_uniform(); });
}

DelayModel DelayModel::shift_means(const std::map<Edge, double>& shifts) const {
    std::map<Edge, DelayDistribution> out;
    for (const auto& [e, d] : dists_) {
        auto it = shifts.find(e);
        out.emplace(e, it == shifts.end() ? d : d.shifted(it->second));
    }
    // model construction re-validates that supports stay within [0, M]
    return DelayModel(tree_, std::move(out), bound_, variance_floor_);
}

std::size_t SampleMatrix::col_of(int leaf) const {
    auto it = std::lower_bound(leaf_order.begin(), leaf_order.end(), leaf);
    if (it == leaf_order.end() || *it != leaf)
        throw ValidationError("leaf " + std::to_string(leaf) + " not in sample matrix");
    return static_cast<std::size_t>(it - leaf_order.begin());
}

SampleMatrix sample_delays(const DelayModel& model, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("need k >= 2 samples");
    const RoutingTree& t = model.tree();
    SampleMatrix m;
    m.leaf_order = t.leaves();
    m.k = k;
    m.seed = seed;
    m.values.assign(k * m.leaf_order.size(), 0.0);

    const std::vector<Edge> edges = t.edges();
    // leaf -> indices into `edges` along its source path
    std::vector<std::vector<std::size_t>> paths(m.leaf_order.size());
    std::map<Edge, std::size_t> edge_index;
    for (std::size_t i = 0; i < edges.size(); ++i) edge_index[edges[i]] = i;
    for (std::size_t li = 0; li < m.leaf_order.size(); ++li) {
        int leaf = m.leaf_order[li];
        if (leaf == RoutingTree::kRoot) continue;
        for (const Edge& e : t.path_edges(RoutingTree::kRoot, leaf).edges())
            paths[li].push_back(edge_index.at(e));
    }

    std::vector<double> draw(edges.size());
    for (std::size_t rep = 0; rep < k; ++rep) {
        std::mt19937_64 rng = stream_engine(seed, rep);
        for (std::size_t ei = 0; ei < edges.size(); ++ei)
            draw[ei] = model.dist(edges[ei]).sample(uniform01(rng));
        for (std::size_t li = 0; li < m.leaf_order.size(); ++li) {
            double total = 0;
            for (std::size_t ei : paths[li]) total += draw[ei];
            m.values[rep * m.leaf_order.size() + li] = total;
        }
    }
    return m;
}

void write_samples_csv(const SampleMatrix& m, std::ostream& os) {
    os.precision(17);
    for (std::size_t i = 0; i < m.leaf_order.size(); ++i)
        os << (i ? "," : "") << m.leaf_order[i];
    os << '\n';
    for (std::size_t r = 0; r < m.k; ++r) {
        for (std::size_t c = 0; c < m.leaf_order.size(); ++c)
            os << (c ? "," : "") << m.at(r, c);
        os << '\n';
    }
}

SampleMatrix read_samples_csv(std::istream& is) {
    SampleMatrix m;
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty samples CSV");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) m.leaf_order.push_back(std::stoi(cell));
    if (!std::is_sorted(m.leaf_order.begin(), m.leaf_order.end()))
        throw ValidationError("samples CSV header must be sorted leaf ids");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::size_t n = 0;
        while (std::getline(row, cell, ',')) {
            m.values.push_back(std::stod(cell));
            ++n;
        }
        if (n != m.leaf_order.size()) throw ValidationError("ragged samples CSV row");
        ++m.k;
    }
    if (m.k < 2) throw ValidationError("need k >= 2 samples");
    return m;
}

} // namespace tomo
