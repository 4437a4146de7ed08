#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <vector>

#include "tomo/afi.hpp"
#include "tomo/delay.hpp"
#include "tomo/tree.hpp"

namespace tomo {

/// Exact arithmetic for the brute-force ground truth. Doubles convert
/// losslessly, so oracle instances built from double configs are exact.
using Rational = boost::multiprecision::cpp_rational;

/// Full joint distribution of the leaf delays of an all-discrete model:
/// every edge-delay combination enumerated with exact probabilities
/// (renormalized so the total mass is exactly 1).
class ExactJoint {
public:
    static constexpr std::size_t kSupportGuard = 10'000'000;

    ExactJoint(const DelayModel& model);

    const std::vector<int>& leaf_order() const { return leaf_order_; }
    const std::vector<std::pair<std::vector<Rational>, Rational>>& support() const {
        return support_;
    }

    std::size_t col_of(int leaf) const;

private:
    std::vector<int> leaf_order_;
    std::vector<std::pair<std::vector<Rational>, Rational>> support_;
};

ExactJoint exact_joint(const DelayModel& model);

/// Exact central moment of one edge-delay distribution (discrete only).
Rational exact_central_moment(const DelayDistribution& d, int j);

/// delta^(j)_{ab} = E[((D_a - D_b) - E[D_a - D_b])^j], exact.
Rational exact_delta(const ExactJoint& joint, int a, int b, int j);

/// phi^(j)_{ab|c}, exact; requires ab|c (caller's responsibility).
Rational exact_phi(const ExactJoint& joint, int a, int b, int c, int j);

/// Leaf function W(a,b) = sum of edge weights along P_ab (any sign).
AdditiveFunction exact_tree_metric(const RoutingTree& tree,
                                   const std::map<Edge, double>& weights);

struct IdentityReport {
    double max_even_residual = 0; // delta - F vs the signed path sums, all j
    double max_odd_residual = 0;  // phi - (G1+G2) vs W^(j), odd j, every valid c
    int pairs_checked = 0;
    int triples_checked = 0;
};

/// Evaluates both sides of the two moment recursions on an all-discrete
/// model, exactly: the delta/F identity for every leaf pair and 2 <= j <= J,
/// and the phi/G identity for every receiver pair, every admissible c and
/// every odd j <= J. Residuals are exact rationals reported as doubles.
IdentityReport check_lemma_identities(const DelayModel& model, int J);

} // namespace tomo
