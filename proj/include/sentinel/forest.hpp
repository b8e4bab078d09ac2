#ifndef SENTINEL_FOREST_HPP
#define SENTINEL_FOREST_HPP

#include "sentinel/cart.hpp"
#include "sentinel/common.hpp"

namespace sentinel::ml {

// Warm-start forest: every batch appends k freshly fitted trees (CART on
// bootstrap resamples of that batch only); earlier trees are never touched.
class WarmStartForest {
public:
    struct Params {
        std::size_t trees_per_batch = 10;
        int max_depth = 12;
        std::uint64_t seed = 0;
    };

    WarmStartForest() : WarmStartForest(Params{}) {}
    explicit WarmStartForest(Params params) : params_(params) {}

    void fit_batch(const std::vector<std::vector<double>>& X, const std::vector<int>& y);
    // majority vote over all trees; ties predict class 0
    int predict(const std::vector<double>& x) const;
    // vote fraction for class 1 (0.5 when no trees yet)
    double confidence(const std::vector<double>& x) const;

    std::size_t tree_count() const { return trees_.size(); }
    std::size_t batches_fitted() const { return batches_; }
    const std::vector<CartTree>& trees() const { return trees_; }

    std::string serialize() const;
    static WarmStartForest deserialize(const std::string& text);

private:
    Params params_;
    std::vector<CartTree> trees_;
    std::size_t batches_ = 0;
};

} // namespace sentinel::ml

#endif
