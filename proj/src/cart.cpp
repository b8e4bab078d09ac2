#include "sentinel/cart.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace sentinel::ml {

using json = nlohmann::json;

namespace {
double gini(double n0, double n1) {
    double n = n0 + n1;
    if (n <= 0.0) return 0.0;
    double p0 = n0 / n, p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}
} // namespace

int CartTree::build(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                    std::vector<std::size_t>& idx, int depth, const Params& params) {
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i : idx) (y[i] ? n1 : n0)++;

    Node node;
    node.label = n1 > n0 ? 1 : 0;
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    if (n0 == 0 || n1 == 0 || depth >= params.max_depth || idx.size() < 2 * params.min_leaf)
        return self;

    std::size_t dim = X[idx[0]].size();
    double best_impurity = gini(static_cast<double>(n0), static_cast<double>(n1));
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> column(idx.size());
    for (std::size_t f = 0; f < dim; ++f) {
        for (std::size_t i = 0; i < idx.size(); ++i) column[i] = {X[idx[i]][f], y[idx[i]]};
        std::sort(column.begin(), column.end());
        double l0 = 0, l1 = 0, r0 = static_cast<double>(n0), r1 = static_cast<double>(n1);
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            (column[i].second ? l1 : l0) += 1;
            (column[i].second ? r1 : r0) -= 1;
            if (column[i].first == column[i + 1].first) continue;
            std::size_t nl = i + 1, nr = column.size() - nl;
            if (nl < params.min_leaf || nr < params.min_leaf) continue;
            double impurity = (static_cast<double>(nl) * gini(l0, l1) +
                               static_cast<double>(nr) * gini(r0, r1)) /
                              static_cast<double>(column.size());
            if (impurity + 1e-12 < best_impurity) {
                best_impurity = impurity;
                best_feature = static_cast<int>(f);
                best_threshold = 0.5 * (column[i].first + column[i + 1].first);
            }
        }
    }

    if (best_feature < 0) return self;

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx)
        (X[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_idx : right_idx)
            .push_back(i);
    if (left_idx.empty() || right_idx.empty()) return self;

    nodes_[self].feature = best_feature;
    nodes_[self].threshold = best_threshold;
    nodes_[self].left = build(X, y, left_idx, depth + 1, params);
    nodes_[self].right = build(X, y, right_idx, depth + 1, params);
    return self;
}

void CartTree::fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   Params params) {
    if (X.empty() || X.size() != y.size()) throw UsageError("cart: empty or mismatched data");
    nodes_.clear();
    std::vector<std::size_t> idx(X.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    build(X, y, idx, 0, params);
}

int CartTree::predict(const std::vector<double>& x) const {
    if (nodes_.empty()) throw UsageError("cart: predict on unfitted tree");
    int cur = 0;
    while (nodes_[cur].feature >= 0)
        cur = x.at(static_cast<std::size_t>(nodes_[cur].feature)) <= nodes_[cur].threshold
                  ? nodes_[cur].left
                  : nodes_[cur].right;
    return nodes_[cur].label;
}

std::string CartTree::serialize() const {
    json arr = json::array();
    for (const auto& n : nodes_)
        arr.push_back(json{{"f", n.feature},
                           {"t", n.threshold},
                           {"l", n.left},
                           {"r", n.right},
                           {"c", n.label}});
    return json{{"format", "sentinel-cart"}, {"version", 1}, {"nodes", arr}}.dump();
}

CartTree CartTree::deserialize(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "sentinel-cart")
        throw ConfigError("cart: bad serialization format");
    CartTree t;
    for (const auto& n : j.at("nodes"))
        t.nodes_.push_back({n.at("f").get<int>(), n.at("t").get<double>(), n.at("l").get<int>(),
                            n.at("r").get<int>(), n.at("c").get<int>()});
    return t;
}

} // namespace sentinel::ml
