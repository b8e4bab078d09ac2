#include "sentinel/forest.hpp"

#include <nlohmann/json.hpp>

namespace sentinel::ml {

using json = nlohmann::json;

void WarmStartForest::fit_batch(const std::vector<std::vector<double>>& X,
                                const std::vector<int>& y) {
    if (X.empty() || X.size() != y.size())
        throw UsageError("forest: empty or mismatched batch");
    for (std::size_t t = 0; t < params_.trees_per_batch; ++t) {
        Rng rng = derive_rng(params_.seed, 0xf0 + batches_, t);
        std::vector<std::vector<double>> bx;
        std::vector<int> by;
        bx.reserve(X.size());
        by.reserve(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) {
            std::size_t pick = rng.uniform(X.size());
            bx.push_back(X[pick]);
            by.push_back(y[pick]);
        }
        CartTree tree;
        tree.fit(bx, by, {params_.max_depth, 1});
        trees_.push_back(std::move(tree));
    }
    ++batches_;
}

int WarmStartForest::predict(const std::vector<double>& x) const {
    std::size_t votes1 = 0;
    for (const auto& t : trees_) votes1 += static_cast<std::size_t>(t.predict(x));
    return 2 * votes1 > trees_.size() ? 1 : 0; // tie -> class 0
}

double WarmStartForest::confidence(const std::vector<double>& x) const {
    if (trees_.empty()) return 0.5;
    std::size_t votes1 = 0;
    for (const auto& t : trees_) votes1 += static_cast<std::size_t>(t.predict(x));
    return static_cast<double>(votes1) / static_cast<double>(trees_.size());
}

std::string WarmStartForest::serialize() const {
    json arr = json::array();
    for (const auto& t : trees_) arr.push_back(json::parse(t.serialize()));
    json j{{"format", "sentinel-forest"},
           {"version", 1},
           {"trees_per_batch", params_.trees_per_batch},
           {"max_depth", params_.max_depth},
           {"seed", params_.seed},
           {"batches", batches_},
           {"trees", arr}};
    return j.dump();
}

WarmStartForest WarmStartForest::deserialize(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "sentinel-forest")
        throw ConfigError("forest: bad serialization format");
    Params p;
    p.trees_per_batch = j.at("trees_per_batch").get<std::size_t>();
    p.max_depth = j.at("max_depth").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    WarmStartForest f(p);
    f.batches_ = j.at("batches").get<std::size_t>();
    for (const auto& t : j.at("trees")) f.trees_.push_back(CartTree::deserialize(t.dump()));
    return f;
}

} // namespace sentinel::ml
