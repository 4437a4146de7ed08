#include "tomo/moments.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>

#include "tomo/error.hpp"

namespace tomo {

namespace {

void gen_compositions(int slots, int remaining, int cap, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if (slots == 0) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    int hi = std::min(cap, remaining);
    // lexicographic over the concatenated vector
    for (int v = 0; v <= hi; ++v) {
        cur.push_back(v);
        gen_compositions(slots - 1, remaining - v, cap, cur, out);
        cur.pop_back();
    }
}

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

const std::vector<Composition>& enumerate_compositions(int alpha, int beta, int j) {
    if (alpha < 0 || beta < 0) throw ValidationError("negative path lengths");
    if (j < 2) throw ValidationError("composition order must be >= 2");
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::vector<Composition>> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(alpha, beta, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<std::vector<int>> flat;
    std::vector<int> cur;
    gen_compositions(alpha + beta, j, j - 1, cur, flat);
    std::vector<Composition> comps;
    comps.reserve(flat.size());
    for (const auto& v : flat) {
        Composition c;
        c.xs.assign(v.begin(), v.begin() + alpha);
        c.ys.assign(v.begin() + alpha, v.end());
        comps.push_back(std::move(c));
    }
    return memo.emplace(key, std::move(comps)).first->second;
}

std::int64_t multinomial(int j, const Composition& c) {
    std::int64_t denom = 1;
    for (int x : c.xs) denom *= factorial(x);
    for (int y : c.ys) denom *= factorial(y);
    return factorial(j) / denom;
}

MomentTable::MomentTable(const RoutingTree& tree, int J) : J_(J) {
    if (J < 2) throw ValidationError("moment order J must be >= 2");
    if (J > kMaxOrder)
        throw ValidationError("moment order J capped at " + std::to_string(kMaxOrder));
    for (const Edge& e : tree.edges()) {
        std::vector<double> row(static_cast<std::size_t>(J) + 1, 0.0);
        row[0] = 1.0; // so product terms with exponent 0 need no special case
        table_.emplace(e, std::move(row));
    }
}

double MomentTable::get(const Edge& e, int j) const {
    auto it = table_.find(e);
    if (it == table_.end()) throw ValidationError("unknown edge in moment table");
    if (j < 0 || j > J_) throw ValidationError("moment order out of range");
    return it->second[static_cast<std::size_t>(j)];
}

void MomentTable::set(const Edge& e, int j, double value) {
    auto it = table_.find(e);
    if (it == table_.end()) throw ValidationError("unknown edge in moment table");
    if (j < 2 || j > J_) throw ValidationError("orders 0 and 1 are fixed");
    it->second[static_cast<std::size_t>(j)] = value;
}

double F_hat(const RoutingTree& tree, const MomentTable& table, int a, int b, int j) {
    auto [a_side, b_side] = tree.split_path(a, b);
    auto lookup = [&table](const Edge& e, int order) { return table.get(e, order); };
    return eval_F<double>(a_side, b_side, j, lookup);
}

double G_hat(const RoutingTree& tree, const MomentTable& table, int which, int a, int b, int j) {
    if (which != 1 && which != 2) throw ValidationError("G_hat which must be 1 or 2");
    auto [a_side, b_side] = tree.split_path(a, b);
    auto lookup = [&table](const Edge& e, int order) { return table.get(e, order); };
    return eval_G<double>(which, a_side, b_side, j, lookup);
}

namespace {

std::vector<std::pair<int, int>> pairs_for(const RoutingTree& tree, PairPolicy policy) {
    if (policy == PairPolicy::kShortPairs) {
        auto s = afi_required_pairs(tree);
        return {s.begin(), s.end()};
    }
    std::vector<std::pair<int, int>> out;
    const auto& ls = tree.leaves();
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = i + 1; j < ls.size(); ++j) out.emplace_back(ls[i], ls[j]);
    return out;
}

// One recursion round: estimate W^(j)(a,b) for the needed pairs, run the
// four-point step, store the per-edge moments.
void run_order(const PairStats& stats, const RoutingTree& tree, MomentTable& table, int j,
               const std::vector<std::pair<int, int>>& pairs, bool odd_via_phi) {
    std::map<std::pair<int, int>, double> w_hat;
    for (auto [a, b] : pairs) {
        double w;
        if (j % 2 == 0 || a == RoutingTree::kRoot || b == RoutingTree::kRoot) {
            // Even orders (and any pair touching the source, where the
            // gamma split has an empty side) use the delta route.
            w = stats.delta(a, b, j) - F_hat(tree, table, a, b, j);
        } else {
            if (!odd_via_phi)
                throw ValidationError("odd moment requested in symmetric mode");
            int c = tree.closest_leaf_above(a, b);
            w = stats.phi(a, b, c, j) -
                (G_hat(tree, table, 1, a, b, j) + G_hat(tree, table, 2, a, b, j));
        }
        w_hat[{a, b}] = w;
    }
    auto W = [&w_hat](int a, int b) {
        auto it = w_hat.find(a < b ? std::pair{a, b} : std::pair{b, a});
        if (it == w_hat.end()) throw ValidationError("pair not precomputed");
        return it->second;
    };
    for (const auto& [e, w] : afi(tree, W)) table.set(e, j, w);
}

void check_inputs(const SampleMatrix& samples, const RoutingTree& tree) {
    for (int l : tree.leaves()) samples.col_of(l); // throws on mismatch
}

} // namespace

MomentTable sym_er(const SampleMatrix& samples, const RoutingTree& tree, int J,
                   PairPolicy policy) {
    check_inputs(samples, tree);
    MomentTable table(tree, J);
    PairStats stats(samples);
    auto pairs = pairs_for(tree, policy);
    for (int j = 2; j <= J; j += 2) run_order(stats, tree, table, j, pairs, false);
    return table;
}

MomentTable er(const SampleMatrix& samples, const RoutingTree& tree, int J, PairPolicy policy) {
    check_inputs(samples, tree);
    MomentTable table(tree, J);
    PairStats stats(samples);
    auto pairs = pairs_for(tree, policy);
    for (int j = 2; j <= J; ++j) run_order(stats, tree, table, j, pairs, true);
    return table;
}

void write_moment_table_json(const MomentTable& t, const RoutingTree& tree, std::ostream& os) {
    os.precision(17);
    os << "{\"J\":" << t.max_order() << ",\"edges\":[";
    bool first = true;
    for (const auto& [e, row] : t.entries()) {
        // orient as (parent, child) toward the source
        int parent = tree.parent(e.u) == e.v ? e.v : e.u;
        int child = parent == e.u ? e.v : e.u;
        if (!first) os << ',';
        first = false;
        os << "{\"parent\":" << parent << ",\"child\":" << child << ",\"moments\":[";
        for (int j = 2; j <= t.max_order(); ++j) os << (j > 2 ? "," : "") << row[j];
        os << "]}";
    }
    os << "]}";
}

} // namespace tomo
