#pragma once

#include <vector>

namespace tomo {

/// Uniform-on-[0,theta] family with theta confined to [theta_min, theta_max].
struct UniformFamilySpec {
    double theta_min;
    double theta_max;
};

/// Distributions on {0..M} with p0 > theta0_min and integer mean.
struct DiscreteFamilySpec {
    int max_value;      // M
    double theta0_min;  // lower bound on p0

    static constexpr int kMaxM = 6; // Vandermonde conditioning guard
};

/// Inverts the estimated variance: theta_hat^2 = clamp(12 w2, theta_min^2,
/// theta_max^2). Clamping absorbs any input, including negative estimates.
double psi_uniform(double w2_hat, const UniformFamilySpec& spec);

struct DiscreteInversion {
    std::vector<double> probs;       // recovered, clamped and renormalized
    double consistency_residual;     // the redundant order-(2M+1) equation
};

/// Inverts central moments w^(2)..w^(2M) of a discrete member with known
/// integer mean mu: solves the square Vandermonde system over nodes
/// -M..M for the centered weights, translates back by mu, clamps into
/// [0,1] and renormalizes. The order-(2M+1) equation is redundant for true
/// members and is reported as a consistency residual.
DiscreteInversion psi_discrete(const std::vector<double>& central_moments,
                               const DiscreteFamilySpec& spec, int mu);

/// True when p is an admissible member (p0 above the floor, integer mean);
/// used to validate declared model families before inversion.
bool discrete_family_member(const std::vector<double>& probs, const DiscreteFamilySpec& spec);

/// Solves sum_i nodes[i]^j x[i] = b[j], j = 0..n-1, for distinct nodes
/// (dual Vandermonde problem, Bjorck-Pereyra recurrences, O(n^2)).
std::vector<double> solve_dual_vandermonde(const std::vector<double>& nodes,
                                           std::vector<double> b);

} // namespace tomo
