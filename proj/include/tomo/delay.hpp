#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tomo/tree.hpp"

namespace tomo {

/// Uniform on [shift, shift + theta].
struct BoundedUniform {
    double theta;
    double shift = 0.0;
};

/// Integer support {0,..,M} translated by shift; probs[i] = P[d = i + shift].
struct BoundedDiscrete {
    std::vector<double> probs;
    double shift = 0.0;

    int max_value() const { return static_cast<int>(probs.size()) - 1; }
};

class DelayDistribution {
public:
    DelayDistribution(BoundedUniform u);   // NOLINT(google-explicit-constructor)
    DelayDistribution(BoundedDiscrete d);  // NOLINT(google-explicit-constructor)

    bool is_uniform() const { return std::holds_alternative<BoundedUniform>(v_); }
    const BoundedUniform& uniform() const { return std::get<BoundedUniform>(v_); }
    const BoundedDiscrete& discrete() const { return std::get<BoundedDiscrete>(v_); }

    double support_min() const;
    double support_max() const;
    double mean() const;
    /// Exact E[(d - E d)^j]; j=0 -> 1, j=1 -> 0.
    double central_moment(int j) const;
    double variance() const { return central_moment(2); }

    /// Same distribution translated by mu (central moments unchanged).
    DelayDistribution shifted(double mu) const;

    double sample(double u01) const; // inverse-CDF style draw from one uniform

private:
    std::variant<BoundedUniform, BoundedDiscrete> v_;
};

/// Per-edge delay assignment on a routing tree, with the global support
/// bound M and variance floor f validated at construction.
class DelayModel {
public:
    DelayModel(RoutingTree tree, std::map<Edge, DelayDistribution> dists, double bound,
               double variance_floor);

    const RoutingTree& tree() const { return tree_; }
    const DelayDistribution& dist(const Edge& e) const;
    const std::map<Edge, DelayDistribution>& dists() const { return dists_; }
    double bound() const { return bound_; }
    double variance_floor() const { return variance_floor_; }
    bool all_discrete() const;

    /// Translates each listed edge distribution; missing edges shift by 0.
    DelayModel shift_means(const std::map<Edge, double>& shifts) const;

private:
    RoutingTree tree_;
    std::map<Edge, DelayDistribution> dists_;
    double bound_;
    double variance_floor_;
};

/// k independent realizations of the leaf delays, one column per leaf
/// (the source column is identically 0).
struct SampleMatrix {
    std::vector<int> leaf_order; // sorted, includes the source
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // row-major k x leaf_order.size()

    std::size_t col_of(int leaf) const;
    double at(std::size_t row, std::size_t col) const { return values[row * leaf_order.size() + col]; }
};

/// Draws k replicas of the multicast delay process: independent per-edge
/// delays, each leaf observing the sum along its source path. Identical
/// (model, k, seed) give identical matrices; replicas use independently
/// derived streams.
SampleMatrix sample_delays(const DelayModel& model, std::size_t k, std::uint64_t seed);

/// CSV with a leaf-id header row, one row per replica, full precision.
void write_samples_csv(const SampleMatrix& m, std::ostream& os);
SampleMatrix read_samples_csv(std::istream& is);

} // namespace tomo
