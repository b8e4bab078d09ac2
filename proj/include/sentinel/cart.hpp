#ifndef SENTINEL_CART_HPP
#define SENTINEL_CART_HPP

#include <string>
#include <vector>

#include "sentinel/common.hpp"

namespace sentinel::ml {

// Batch binary classification tree: exhaustive numeric splits by Gini
// impurity. Backs both the warm-start forest members and the batch
// baseline models.
class CartTree {
public:
    struct Params {
        int max_depth = 12;
        std::size_t min_leaf = 1;
    };

    void fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
             Params params);
    void fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y) {
        fit(X, y, Params{});
    }
    int predict(const std::vector<double>& x) const;

    bool fitted() const { return !nodes_.empty(); }
    std::size_t node_count() const { return nodes_.size(); }

    std::string serialize() const;
    static CartTree deserialize(const std::string& text);

    struct Node {
        int feature = -1; // -1: leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        int label = 0;
    };
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    int build(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
              std::vector<std::size_t>& idx, int depth, const Params& params);

    std::vector<Node> nodes_;
};

} // namespace sentinel::ml

#endif
