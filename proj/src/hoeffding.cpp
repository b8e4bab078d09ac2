#include "sentinel/hoeffding.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace sentinel::ml {

using json = nlohmann::json;

double hoeffding_bound(double range, double delta, std::uint64_t n) {
    if (n < 1) throw UsageError("hoeffding_bound: n must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw UsageError("hoeffding_bound: delta must be in (0,1)");
    if (range <= 0.0) throw UsageError("hoeffding_bound: range must be > 0");
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

double HoeffdingTree::GaussStat::mass_leq(double thr) const {
    if (n == 0) return 0.0;
    double sd = stddev();
    if (sd <= 0.0) return mean <= thr ? static_cast<double>(n) : 0.0;
    double z = (thr - mean) / sd;
    double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    return cdf * static_cast<double>(n);
}

namespace {

double binary_entropy(double a, double b) {
    double total = a + b;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : {a, b}) {
        if (c <= 0.0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace

void HoeffdingTree::learn_one(const std::vector<double>& x, int label01) {
    if (dim_ == 0) dim_ = x.size();
    if (x.size() != dim_) throw UsageError("hoeffding tree: feature dimension mismatch");

    Node* node = &root_;
    while (!node->is_leaf())
        node = x[static_cast<std::size_t>(node->split_feature)] <= node->threshold
                   ? node->left.get()
                   : node->right.get();

    if (node->stats.empty()) node->stats.resize(dim_);
    ++node->class_counts[label01 ? 1 : 0];
    for (std::size_t f = 0; f < dim_; ++f) node->stats[f][label01 ? 1 : 0].add(x[f]);

    if (++node->since_eval >= params_.grace) {
        node->since_eval = 0;
        try_split(*node);
    }
}

void HoeffdingTree::try_split(Node& leaf) {
    std::uint64_t n0 = leaf.class_counts[0], n1 = leaf.class_counts[1];
    std::uint64_t n = n0 + n1;
    if (n0 == 0 || n1 == 0) return; // pure leaf: nothing to gain

    double parent_h = binary_entropy(static_cast<double>(n0), static_cast<double>(n1));
    double best_gain = 0.0, second_gain = 0.0; // null split has gain 0
    int best_feature = -1;
    double best_threshold = 0.0;

    for (std::size_t f = 0; f < leaf.stats.size(); ++f) {
        const auto& st = leaf.stats[f];
        // candidate thresholds: class-conditional Gaussian quantiles
        std::vector<double> candidates;
        for (int c = 0; c < 2; ++c) {
            if (st[c].n == 0) continue;
            double sd = st[c].stddev();
            if (sd <= 0.0) {
                candidates.push_back(st[c].mean);
            } else {
                for (double z : {-2.0, -1.0, 0.0, 1.0, 2.0})
                    candidates.push_back(st[c].mean + z * sd);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        double feature_gain = 0.0, feature_thr = 0.0;
        for (double thr : candidates) {
            double l0 = st[0].mass_leq(thr), l1 = st[1].mass_leq(thr);
            double r0 = static_cast<double>(n0) - l0, r1 = static_cast<double>(n1) - l1;
            double wl = l0 + l1, wr = r0 + r1;
            if (wl <= 0.0 || wr <= 0.0) continue;
            double child_h =
                (wl * binary_entropy(l0, l1) + wr * binary_entropy(r0, r1)) / static_cast<double>(n);
            double gain = parent_h - child_h;
            if (gain > feature_gain) {
                feature_gain = gain;
                feature_thr = thr;
            }
        }
        if (feature_gain > best_gain) {
            second_gain = best_gain;
            best_gain = feature_gain;
            best_feature = static_cast<int>(f);
            best_threshold = feature_thr;
        } else if (feature_gain > second_gain) {
            second_gain = feature_gain;
        }
    }

    if (best_feature < 0 || best_gain <= 1e-12) return;
    double eps = hoeffding_bound(1.0, params_.delta, n);
    if (best_gain - second_gain > eps || eps < params_.tie_threshold) {
        leaf.split_feature = best_feature;
        leaf.threshold = best_threshold;
        leaf.left = std::make_unique<Node>();
        leaf.right = std::make_unique<Node>();
        // seed the children with the Gaussian-estimated class mass on each
        // side so they predict sensibly before fresh examples arrive
        const auto& st = leaf.stats[static_cast<std::size_t>(best_feature)];
        for (int c = 0; c < 2; ++c) {
            auto below = static_cast<std::uint64_t>(std::llround(st[c].mass_leq(best_threshold)));
            below = std::min(below, leaf.class_counts[c]);
            leaf.left->class_counts[c] = below;
            leaf.right->class_counts[c] = leaf.class_counts[c] - below;
        }
        leaf.stats.clear();
        leaf.stats.shrink_to_fit();
    }
}

std::pair<int, double> HoeffdingTree::predict_one(const std::vector<double>& x) const {
    const Node* node = &root_;
    while (!node->is_leaf())
        node = x.at(static_cast<std::size_t>(node->split_feature)) <= node->threshold
                   ? node->left.get()
                   : node->right.get();
    std::uint64_t n0 = node->class_counts[0], n1 = node->class_counts[1];
    int cls = n1 > n0 ? 1 : 0;
    double conf = (static_cast<double>(cls ? n1 : n0) + 1.0) /
                  (static_cast<double>(n0 + n1) + 2.0);
    return {cls, conf};
}

namespace {
std::size_t count_nodes(const HoeffdingTree::Node& n) {
    if (n.is_leaf()) return 1;
    return 1 + count_nodes(*n.left) + count_nodes(*n.right);
}
std::size_t node_depth(const HoeffdingTree::Node& n) {
    if (n.is_leaf()) return 1;
    return 1 + std::max(node_depth(*n.left), node_depth(*n.right));
}

json stat_to_json(const HoeffdingTree::GaussStat& s) {
    return json{{"n", s.n}, {"mean", s.mean}, {"m2", s.m2}};
}
HoeffdingTree::GaussStat stat_from_json(const json& j) {
    HoeffdingTree::GaussStat s;
    s.n = j.at("n").get<std::uint64_t>();
    s.mean = j.at("mean").get<double>();
    s.m2 = j.at("m2").get<double>();
    return s;
}

json node_to_json(const HoeffdingTree::Node& n) {
    json j{{"counts", n.class_counts}, {"since_eval", n.since_eval}};
    if (n.is_leaf()) {
        json stats = json::array();
        for (const auto& fs : n.stats) stats.push_back(json::array({stat_to_json(fs[0]), stat_to_json(fs[1])}));
        j["stats"] = std::move(stats);
    } else {
        j["feature"] = n.split_feature;
        j["threshold"] = n.threshold;
        j["left"] = node_to_json(*n.left);
        j["right"] = node_to_json(*n.right);
    }
    return j;
}

void node_from_json(const json& j, HoeffdingTree::Node& n) {
    n.class_counts = j.at("counts").get<std::array<std::uint64_t, 2>>();
    n.since_eval = j.value("since_eval", 0ULL);
    if (j.contains("feature")) {
        n.split_feature = j.at("feature").get<int>();
        n.threshold = j.at("threshold").get<double>();
        n.left = std::make_unique<HoeffdingTree::Node>();
        n.right = std::make_unique<HoeffdingTree::Node>();
        node_from_json(j.at("left"), *n.left);
        node_from_json(j.at("right"), *n.right);
    } else {
        for (const auto& fs : j.at("stats")) {
            std::array<HoeffdingTree::GaussStat, 2> pair{stat_from_json(fs.at(0)),
                                                         stat_from_json(fs.at(1))};
            n.stats.push_back(pair);
        }
    }
}
} // namespace

std::size_t HoeffdingTree::node_count() const { return count_nodes(root_); }
std::size_t HoeffdingTree::depth() const { return node_depth(root_); }

std::pair<int, double> HoeffdingTree::root_split() const {
    return {root_.split_feature, root_.threshold};
}

std::string HoeffdingTree::serialize() const {
    json j{{"format", "sentinel-hoeffding"},
           {"version", 1},
           {"delta", params_.delta},
           {"grace", params_.grace},
           {"tie", params_.tie_threshold},
           {"dim", dim_},
           {"root", node_to_json(root_)}};
    return j.dump();
}

HoeffdingTree HoeffdingTree::deserialize(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "sentinel-hoeffding")
        throw ConfigError("hoeffding tree: bad serialization format");
    HoeffdingParams p;
    p.delta = j.at("delta").get<double>();
    p.grace = j.at("grace").get<std::uint64_t>();
    p.tie_threshold = j.at("tie").get<double>();
    HoeffdingTree t(p);
    t.dim_ = j.at("dim").get<std::size_t>();
    node_from_json(j.at("root"), t.root_);
    return t;
}

} // namespace sentinel::ml
