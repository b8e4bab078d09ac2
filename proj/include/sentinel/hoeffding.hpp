#ifndef SENTINEL_HOEFFDING_HPP
#define SENTINEL_HOEFFDING_HPP

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "sentinel/common.hpp"

namespace sentinel::ml {

// epsilon = sqrt(R^2 ln(1/delta) / (2n))
double hoeffding_bound(double range, double delta, std::uint64_t n);

struct HoeffdingParams {
    double delta = 1e-7;        // split confidence
    std::uint64_t grace = 200;  // n_min: examples between split attempts
    // tau; sized just above eps(n_min) = 0.2007 so equally-good candidate
    // splits resolve at the first grace checkpoint instead of stalling on a
    // gap that never opens (byte statistics are heavily cross-correlated,
    // so the top features often tie)
    double tie_threshold = 0.205;
    int quantiles_per_class = 5; // candidate thresholds per class (<= 10 total)
};

// Binary-class Hoeffding tree (VFDT) with per-leaf class counts and
// per-class Gaussian sufficient statistics for numeric splits.
class HoeffdingTree {
public:
    explicit HoeffdingTree(HoeffdingParams params = {}) : params_(params) {}

    void learn_one(const std::vector<double>& x, int label01);
    // majority class at the routed leaf, Laplace-smoothed confidence
    std::pair<int, double> predict_one(const std::vector<double>& x) const;

    std::size_t node_count() const;
    std::size_t depth() const;
    // (feature, threshold) of the root split, or {-1, 0} while a leaf
    std::pair<int, double> root_split() const;

    std::string serialize() const;
    static HoeffdingTree deserialize(const std::string& text);

    struct GaussStat {
        std::uint64_t n = 0;
        double mean = 0, m2 = 0;
        void add(double x) {
            ++n;
            double d = x - mean;
            mean += d / static_cast<double>(n);
            m2 += d * (x - mean);
        }
        double stddev() const {
            return n > 1 ? std::sqrt(m2 / static_cast<double>(n)) : 0.0;
        }
        // class mass at or below threshold under the Gaussian model
        double mass_leq(double thr) const;
    };

    struct Node {
        // leaf state
        std::array<std::uint64_t, 2> class_counts{};
        std::vector<std::array<GaussStat, 2>> stats; // [feature][class]
        std::uint64_t since_eval = 0;
        // split state
        int split_feature = -1;
        double threshold = 0.0;
        std::unique_ptr<Node> left, right;
        bool is_leaf() const { return split_feature < 0; }
    };

    const Node& root() const { return root_; }
    const HoeffdingParams& params() const { return params_; }

private:
    void try_split(Node& leaf);

    HoeffdingParams params_;
    Node root_;
    std::size_t dim_ = 0;
};

} // namespace sentinel::ml

#endif
