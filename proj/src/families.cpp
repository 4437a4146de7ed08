#include "tomo/families.hpp"

#include <algorithm>
#include <cmath>

#include "tomo/error.hpp"

namespace tomo {

double psi_uniform(double w2_hat, const UniformFamilySpec& spec) {
    if (!(spec.theta_min > 0) || !(spec.theta_max > spec.theta_min))
        throw ValidationError("uniform family needs 0 < theta_min < theta_max");
    if (std::isnan(w2_hat)) throw ValidationError("moment estimate is NaN");
    double t2 = 12.0 * w2_hat;
    t2 = std::clamp(t2, spec.theta_min * spec.theta_min, spec.theta_max * spec.theta_max);
    return std::sqrt(t2);
}

std::vector<double> solve_dual_vandermonde(const std::vector<double>& nodes,
                                           std::vector<double> b) {
    const int n = static_cast<int>(nodes.size());
    if (static_cast<int>(b.size()) != n)
        throw ValidationError("Vandermonde system size mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j]) throw ValidationError("Vandermonde nodes must be distinct");
    for (int k = 0; k < n - 1; ++k)
        for (int i = n - 1; i >= k + 1; --i) b[i] -= nodes[k] * b[i - 1];
    for (int k = n - 2; k >= 0; --k) {
        for (int i = k + 1; i < n; ++i) b[i] /= nodes[i] - nodes[i - k - 1];
        for (int i = k; i < n - 1; ++i) b[i] -= b[i + 1];
    }
    return b;
}

DiscreteInversion psi_discrete(const std::vector<double>& central_moments,
                               const DiscreteFamilySpec& spec, int mu) {
    const int M = spec.max_value;
    if (M < 1 || M > DiscreteFamilySpec::kMaxM)
        throw ValidationError("discrete family M must be in [1, " +
                              std::to_string(DiscreteFamilySpec::kMaxM) + "]");
    if (mu < 0 || mu > M) throw ValidationError("integer mean mu outside [0, M]");
    // orders 2..2M are required; order 2M+1, when supplied, feeds the
    // redundant consistency equation
    const std::size_t need = static_cast<std::size_t>(2 * M - 1);
    if (central_moments.size() != need && central_moments.size() != need + 1)
        throw ValidationError("expected central moments of orders 2..2M (optionally 2M+1)");
    for (double w : central_moments)
        if (!std::isfinite(w)) throw ValidationError("moment estimate is not finite");

    std::vector<double> nodes, rhs;
    for (int i = -M; i <= M; ++i) nodes.push_back(i);
    rhs.push_back(1.0); // w^(0)
    rhs.push_back(0.0); // w^(1)
    for (std::size_t i = 0; i < need; ++i) rhs.push_back(central_moments[i]);
    std::vector<double> centered = solve_dual_vandermonde(nodes, rhs);

    DiscreteInversion out;
    out.consistency_residual = 0.0;
    if (central_moments.size() == need + 1) {
        double lhs = 0;
        for (int i = -M; i <= M; ++i)
            lhs += std::pow(static_cast<double>(i), 2 * M + 1) * centered[i + M];
        out.consistency_residual = std::abs(lhs - central_moments[need]);
    }

    out.probs.assign(static_cast<std::size_t>(M) + 1, 0.0);
    for (int i = 0; i <= M; ++i) out.probs[i] = centered[(i - mu) + M];
    double sum = 0;
    for (double& p : out.probs) {
        p = std::clamp(p, 0.0, 1.0);
        sum += p;
    }
    if (sum <= 0) throw ValidationError("discrete inversion produced an empty distribution");
    for (double& p : out.probs) p /= sum;
    return out;
}

bool discrete_family_member(const std::vector<double>& probs, const DiscreteFamilySpec& spec) {
    if (static_cast<int>(probs.size()) != spec.max_value + 1) return false;
    if (!(probs[0] > spec.theta0_min)) return false;
    double sum = 0, mean = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0 || probs[i] > 1) return false;
        sum += probs[i];
        mean += probs[i] * static_cast<double>(i);
    }
    return std::abs(sum - 1.0) <= 1e-9 && std::abs(mean - std::round(mean)) <= 1e-9;
}

} // namespace tomo
