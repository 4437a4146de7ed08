#pragma once

#include <iosfwd>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "tomo/delay.hpp"

namespace tomo {

/// Symmetric leaf-pair map into (0, +inf], accurate on short distances,
/// with its distortion parameters.
class DistortedMetric {
public:
    DistortedMetric(std::vector<int> leaves, double tau, double m_tilde);

    const std::vector<int>& leaves() const { return leaves_; }
    double tau() const { return tau_; }
    double m_tilde() const { return m_tilde_; }

    void set(int u, int v, double value);
    double at(int u, int v) const; // at(u,u) == 0

private:
    std::size_t index(int leaf) const;

    std::vector<int> leaves_; // sorted
    double tau_;
    double m_tilde_;
    std::vector<double> w_; // dense symmetric
};

/// Sample mean of D_a - D_b.
double delta1_hat(const SampleMatrix& samples, int a, int b);

/// Central-moment estimator of D_a - D_b: the unbiased k-1 normalizer for
/// j = 2, the plug-in 1/k normalizer for j >= 3 (deliberate asymmetry,
/// mirroring the two source formulas).
double delta_hat(const SampleMatrix& samples, int a, int b, int j);

/// Plug-in estimator of phi_{ab|c}^{(j)}; requires ab|c in the tree
/// (caller's responsibility).
double phi_hat(const SampleMatrix& samples, int a, int b, int c, int j);

/// Entry (a,b) = delta_hat(samples, a, b, 2) for every unordered leaf pair
/// in the matrix (the source column included, so the root edge stays
/// recoverable downstream).
DistortedMetric estimated_variance_metric(const SampleMatrix& samples, double tau,
                                          double m_tilde);

/// Memoizing wrapper around the pair statistics; safe for concurrent use.
class PairStats {
public:
    explicit PairStats(const SampleMatrix& samples) : samples_(samples) {}

    double delta1(int a, int b) const;
    double delta(int a, int b, int j) const;
    double phi(int a, int b, int c, int j) const;
    const SampleMatrix& samples() const { return samples_; }

private:
    const SampleMatrix& samples_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<int, int, int>, double> delta_memo_;
    mutable std::map<std::tuple<int, int, int, int>, double> phi_memo_;
};

/// CSV matrix with "+inf" tokens; first column and header carry leaf ids.
void write_metric_csv(const DistortedMetric& m, std::ostream& os);
DistortedMetric read_metric_csv(std::istream& is, double tau, double m_tilde);

} // namespace tomo
