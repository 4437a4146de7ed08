#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "tomo/afi.hpp"
#include "tomo/stats.hpp"
#include "tomo/tree.hpp"

namespace tomo {

/// One term of the multinomial expansion over a split path: exponents x on
/// the a-side edges, y on the b-side, each in [0, j-1].
struct Composition {
    std::vector<int> xs;
    std::vector<int> ys;
};

/// All (x,y) in [0,j-1]^alpha x [0,j-1]^beta with sum j, lexicographic.
/// Results are memoized per (alpha, beta, j).
const std::vector<Composition>& enumerate_compositions(int alpha, int beta, int j);

/// j! / (prod x_i! prod y_i!) as an exact integer (j <= 12 is plenty here).
std::int64_t multinomial(int j, const Composition& c);

/// Per-edge central-moment estimates w_e^(j), 0 <= j <= J; order 0 is 1 and
/// order 1 is 0 on every edge.
class MomentTable {
public:
    static constexpr int kMaxOrder = 8; // factorial / blow-up guard

    MomentTable(const RoutingTree& tree, int J);

    int max_order() const { return J_; }
    double get(const Edge& e, int j) const;
    void set(const Edge& e, int j, double value);
    const std::map<Edge, std::vector<double>>& entries() const { return table_; }

private:
    int J_;
    std::map<Edge, std::vector<double>> table_;
};

/// Correction sum F_j(a,b): lower-order cross terms of the multinomial
/// expansion of E[(D_a - D_b - mean)^j] along the split path. Generic over
/// the scalar so the exact oracle reuses the same expansion.
template <typename S, typename MomentFn>
S eval_F(const std::vector<Edge>& a_side, const std::vector<Edge>& b_side, int j,
         const MomentFn& moment) {
    const auto& comps =
        enumerate_compositions(static_cast<int>(a_side.size()), static_cast<int>(b_side.size()), j);
    S total(0);
    for (const Composition& c : comps) {
        S term(multinomial(j, c));
        for (std::size_t i = 0; i < a_side.size(); ++i) {
            if (c.xs[i] == 0) continue;
            term *= moment(a_side[i], c.xs[i]);
        }
        int y_sum = 0;
        for (std::size_t i = 0; i < b_side.size(); ++i) {
            if (c.ys[i] == 0) continue;
            y_sum += c.ys[i];
            term *= moment(b_side[i], c.ys[i]);
        }
        if (y_sum % 2 == 1) term = -term;
        total += term;
    }
    return total;
}

/// Correction sum G_j^(which): the selected-edge expansion terms behind the
/// odd-moment identity. which = 1 selects the a-side (sign on the b-side
/// exponents); which = 2 swaps the roles of the two sides entirely,
/// including which side carries the sign. Per composition the coefficient
/// sum_{i*: x_{i*}>=1} x_{i*} (j-1)!/(prod x! prod y!) is accumulated as a
/// sum of true multinomials of j-1 (x_{i*} decremented) to stay integral.
template <typename S, typename MomentFn>
S eval_G(int which, const std::vector<Edge>& a_side, const std::vector<Edge>& b_side, int j,
         const MomentFn& moment) {
    const auto& sel = (which == 1) ? a_side : b_side;
    const auto& oth = (which == 1) ? b_side : a_side;
    const auto& comps =
        enumerate_compositions(static_cast<int>(sel.size()), static_cast<int>(oth.size()), j);
    S total(0);
    for (const Composition& c : comps) {
        std::int64_t coeff = 0;
        Composition dec = c;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            if (c.xs[i] == 0) continue;
            --dec.xs[i];
            coeff += multinomial(j - 1, dec);
            ++dec.xs[i];
        }
        if (coeff == 0) continue;
        S term(coeff);
        for (std::size_t i = 0; i < sel.size(); ++i) {
            if (c.xs[i] == 0) continue;
            term *= moment(sel[i], c.xs[i]);
        }
        int oth_sum = 0;
        for (std::size_t i = 0; i < oth.size(); ++i) {
            if (c.ys[i] == 0) continue;
            oth_sum += c.ys[i];
            term *= moment(oth[i], c.ys[i]);
        }
        if (oth_sum % 2 == 1) term = -term;
        total += term;
    }
    return total;
}

/// F_j(a,b) evaluated on a moment table (split at gamma_ab).
double F_hat(const RoutingTree& tree, const MomentTable& table, int a, int b, int j);

/// G_j^(1) or G_j^(2) evaluated on a moment table.
double G_hat(const RoutingTree& tree, const MomentTable& table, int which, int a, int b, int j);

enum class PairPolicy {
    kShortPairs, // only the pairs the four-point step reads (default)
    kAllPairs    // evaluate every leaf pair (comparison mode)
};

/// Even-moment recursion for delays symmetric about their mean: for even j
/// up to J, W^(j)(a,b) = delta_hat - F_hat, then the four-point step per
/// edge. Odd orders stay 0.
MomentTable sym_er(const SampleMatrix& samples, const RoutingTree& tree, int J,
                   PairPolicy policy = PairPolicy::kShortPairs);

/// General moment recursion: even orders via the delta route, odd orders
/// via phi_hat against the closest leaf above gamma_ab minus the G terms.
/// Lower orders feed higher ones.
MomentTable er(const SampleMatrix& samples, const RoutingTree& tree, int J,
               PairPolicy policy = PairPolicy::kShortPairs);

/// JSON: {"J":J, "edges":[{"parent":p,"child":c,"moments":[w2..wJ]}]}.
void write_moment_table_json(const MomentTable& t, const RoutingTree& tree, std::ostream& os);

} // namespace tomo
