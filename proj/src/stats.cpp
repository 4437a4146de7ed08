#include "tomo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tomo/error.hpp"

namespace tomo {

DistortedMetric::DistortedMetric(std::vector<int> leaves, double tau, double m_tilde)
    : leaves_(std::move(leaves)), tau_(tau), m_tilde_(m_tilde) {
    std::sort(leaves_.begin(), leaves_.end());
    if (leaves_.size() < 2) throw ValidationError("metric needs at least two leaves");
    if (std::adjacent_find(leaves_.begin(), leaves_.end()) != leaves_.end())
        throw ValidationError("duplicate leaf ids in metric");
    if (!(tau_ > 0) || !(m_tilde_ > 0))
        throw ValidationError("distortion parameters must be positive");
    w_.assign(leaves_.size() * leaves_.size(), 0.0);
}

std::size_t DistortedMetric::index(int leaf) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), leaf);
    if (it == leaves_.end() || *it != leaf)
        throw ValidationError("leaf " + std::to_string(leaf) + " not in metric");
    return static_cast<std::size_t>(it - leaves_.begin());
}

void DistortedMetric::set(int u, int v, double value) {
    if (u == v) throw ValidationError("metric diagonal is unused");
    if (std::isnan(value)) throw ValidationError("metric value is NaN");
    std::size_t i = index(u), j = index(v);
    w_[i * leaves_.size() + j] = value;
    w_[j * leaves_.size() + i] = value;
}

double DistortedMetric::at(int u, int v) const {
    std::size_t i = index(u), j = index(v);
    return w_[i * leaves_.size() + j];
}

namespace {

void check_pair(const SampleMatrix& s, int a, int b) {
    if (a == b) throw ValidationError("estimator endpoints must differ");
    if (s.k < 2) throw ValidationError("need k >= 2 samples");
    s.col_of(a);
    s.col_of(b);
}

} // namespace

double delta1_hat(const SampleMatrix& s, int a, int b) {
    check_pair(s, a, b);
    std::size_t ca = s.col_of(a), cb = s.col_of(b);
    double sum = 0;
    for (std::size_t i = 0; i < s.k; ++i) sum += s.at(i, ca) - s.at(i, cb);
    return sum / static_cast<double>(s.k);
}

double delta_hat(const SampleMatrix& s, int a, int b, int j) {
    if (j < 2) throw ValidationError("delta_hat needs j >= 2");
    check_pair(s, a, b);
    std::size_t ca = s.col_of(a), cb = s.col_of(b);
    const double mean = delta1_hat(s, a, b);
    double sum = 0;
    for (std::size_t i = 0; i < s.k; ++i) {
        double d = (s.at(i, ca) - s.at(i, cb)) - mean;
        double p = d;
        for (int e = 1; e < j; ++e) p *= d;
        sum += p;
    }
    double norm = (j == 2) ? static_cast<double>(s.k - 1) : static_cast<double>(s.k);
    double out = sum / norm;
    if (!std::isfinite(out)) throw ValidationError("estimator produced a non-finite value");
    return out;
}

double phi_hat(const SampleMatrix& s, int a, int b, int c, int j) {
    if (j < 2) throw ValidationError("phi_hat needs j >= 2");
    check_pair(s, a, b);
    s.col_of(c);
    if (c == a || c == b) throw ValidationError("phi_hat needs a third leaf");
    std::size_t ca = s.col_of(a), cb = s.col_of(b), cc = s.col_of(c);
    const double m_ab = delta1_hat(s, a, b);
    const double m_ac = delta1_hat(s, a, c);
    const double m_bc = delta1_hat(s, b, c);
    double sum = 0;
    for (std::size_t i = 0; i < s.k; ++i) {
        double dab = (s.at(i, ca) - s.at(i, cb)) - m_ab;
        double dac = (s.at(i, ca) - s.at(i, cc)) - m_ac;
        double dbc = (s.at(i, cb) - s.at(i, cc)) - m_bc;
        double p = 1.0;
        for (int e = 0; e < j - 1; ++e) p *= dab;
        sum += p * (dac + dbc);
    }
    double out = sum / static_cast<double>(s.k);
    if (!std::isfinite(out)) throw ValidationError("estimator produced a non-finite value");
    return out;
}

DistortedMetric estimated_variance_metric(const SampleMatrix& s, double tau, double m_tilde) {
    DistortedMetric m(s.leaf_order, tau, m_tilde);
    for (std::size_t i = 0; i < s.leaf_order.size(); ++i)
        for (std::size_t j = i + 1; j < s.leaf_order.size(); ++j)
            m.set(s.leaf_order[i], s.leaf_order[j],
                  delta_hat(s, s.leaf_order[i], s.leaf_order[j], 2));
    return m;
}

double PairStats::delta1(int a, int b) const { return delta(a, b, 1); }

double PairStats::delta(int a, int b, int j) const {
    if (b < a) {
        // delta1 is antisymmetric, higher orders flip sign with parity
        double v = delta(b, a, j);
        return (j % 2 == 1) ? -v : v;
    }
    std::tuple<int, int, int> key{a, b, j};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = delta_memo_.find(key);
        if (it != delta_memo_.end()) return it->second;
    }
    double v = (j == 1) ? delta1_hat(samples_, a, b) : delta_hat(samples_, a, b, j);
    std::lock_guard<std::mutex> lock(mu_);
    delta_memo_.emplace(key, v);
    return v;
}

double PairStats::phi(int a, int b, int c, int j) const {
    std::tuple<int, int, int, int> key{a, b, c, j};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = phi_memo_.find(key);
        if (it != phi_memo_.end()) return it->second;
    }
    double v = phi_hat(samples_, a, b, c, j);
    std::lock_guard<std::mutex> lock(mu_);
    phi_memo_.emplace(key, v);
    return v;
}

void write_metric_csv(const DistortedMetric& m, std::ostream& os) {
    os.precision(17);
    os << "leaf";
    for (int l : m.leaves()) os << ',' << l;
    os << '\n';
    for (int u : m.leaves()) {
        os << u;
        for (int v : m.leaves()) {
            os << ',';
            if (u == v) {
                os << 0;
            } else {
                double x = m.at(u, v);
                if (std::isinf(x)) os << "+inf";
                else os << x;
            }
        }
        os << '\n';
    }
}

DistortedMetric read_metric_csv(std::istream& is, double tau, double m_tilde) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty metric CSV");
    std::stringstream header(line);
    std::string cell;
    if (!std::getline(header, cell, ',') || cell != "leaf")
        throw ValidationError("metric CSV must start with a 'leaf' header column");
    std::vector<int> leaves;
    while (std::getline(header, cell, ',')) leaves.push_back(std::stoi(cell));
    DistortedMetric m(leaves, tau, m_tilde);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        if (!std::getline(row, cell, ',')) throw ValidationError("bad metric CSV row");
        int u = std::stoi(cell);
        std::size_t col = 0;
        while (std::getline(row, cell, ',')) {
            if (col >= leaves.size()) throw ValidationError("ragged metric CSV row");
            int v = leaves[col++];
            if (u != v) {
                double x = (cell == "+inf" || cell == "inf")
                               ? std::numeric_limits<double>::infinity()
                               : std::stod(cell);
                m.set(u, v, x);
            }
        }
        if (col != leaves.size()) throw ValidationError("ragged metric CSV row");
        ++rows;
    }
    if (rows != leaves.size()) throw ValidationError("metric CSV row count mismatch");
    return m;
}

} // namespace tomo
