#include "sentinel/model.hpp"

#include <nlohmann/json.hpp>

namespace sentinel::ml {

using json = nlohmann::json;

namespace {

class LinearOnline final : public OnlineModel {
public:
    explicit LinearOnline(LinearAlgo algo) : model_(algo) {}
    LinearOnline(LinearModel model, Standardizer std)
        : model_(std::move(model)), standardizer_(std::move(std)) {}

    std::string name() const override { return algo_name(model_.algo()); }

    std::pair<int, double> predict_one(const std::vector<double>& x) const override {
        return model_.predict(standardizer_.transform(x));
    }

    void learn_one(const std::vector<double>& x, int label01) override {
        model_.update(standardizer_.transform_update(x), label01);
    }

    std::string serialize() const override {
        json j{{"format", "sentinel-model"},
               {"version", 1},
               {"kind", name()},
               {"inner", json::parse(model_.serialize())},
               {"standardizer",
                json{{"n", standardizer_.count()},
                     {"mean", standardizer_.means()},
                     {"m2", standardizer_.raw_m2()}}}};
        return j.dump();
    }

    std::unique_ptr<OnlineModel> clone() const override {
        return std::make_unique<LinearOnline>(*this);
    }

    static std::unique_ptr<OnlineModel> from_json(const json& j) {
        LinearModel m = LinearModel::deserialize(j.at("inner").dump());
        Standardizer s;
        const json& sj = j.at("standardizer");
        s.restore(sj.at("n").get<std::uint64_t>(), sj.at("mean").get<std::vector<double>>(),
                  sj.at("m2").get<std::vector<double>>());
        return std::make_unique<LinearOnline>(std::move(m), std::move(s));
    }

private:
    LinearModel model_;
    Standardizer standardizer_;
};

class HoeffdingOnline final : public OnlineModel {
public:
    HoeffdingOnline() = default;
    explicit HoeffdingOnline(HoeffdingTree tree) : tree_(std::move(tree)) {}

    std::string name() const override { return "hoeffding"; }
    std::pair<int, double> predict_one(const std::vector<double>& x) const override {
        return tree_.predict_one(x);
    }
    void learn_one(const std::vector<double>& x, int label01) override {
        tree_.learn_one(x, label01);
    }
    std::string serialize() const override {
        json j{{"format", "sentinel-model"},
               {"version", 1},
               {"kind", "hoeffding"},
               {"inner", json::parse(tree_.serialize())}};
        return j.dump();
    }
    std::unique_ptr<OnlineModel> clone() const override {
        return std::make_unique<HoeffdingOnline>(HoeffdingTree::deserialize(tree_.serialize()));
    }
    static std::unique_ptr<OnlineModel> from_json(const json& j) {
        return std::make_unique<HoeffdingOnline>(HoeffdingTree::deserialize(j.at("inner").dump()));
    }

private:
    HoeffdingTree tree_;
};

class ForestOnline final : public OnlineModel {
public:
    explicit ForestOnline(std::uint64_t seed) : forest_({10, 12, seed}) {}
    explicit ForestOnline(WarmStartForest forest) : forest_(std::move(forest)) {}

    std::string name() const override { return "forest"; }

    std::pair<int, double> predict_one(const std::vector<double>& x) const override {
        double c1 = forest_.confidence(x);
        int cls = forest_.predict(x);
        return {cls, cls ? c1 : 1.0 - c1};
    }

    void learn_one(const std::vector<double>& x, int label01) override {
        buffer_x_.push_back(x);
        buffer_y_.push_back(label01);
    }

    void end_batch() override {
        if (buffer_x_.empty()) return;
        forest_.fit_batch(buffer_x_, buffer_y_);
        buffer_x_.clear();
        buffer_y_.clear();
    }

    std::string serialize() const override {
        json j{{"format", "sentinel-model"},
               {"version", 1},
               {"kind", "forest"},
               {"inner", json::parse(forest_.serialize())}};
        return j.dump();
    }
    std::unique_ptr<OnlineModel> clone() const override {
        auto copy = std::make_unique<ForestOnline>(WarmStartForest::deserialize(forest_.serialize()));
        copy->buffer_x_ = buffer_x_;
        copy->buffer_y_ = buffer_y_;
        return copy;
    }
    static std::unique_ptr<OnlineModel> from_json(const json& j) {
        return std::make_unique<ForestOnline>(WarmStartForest::deserialize(j.at("inner").dump()));
    }

private:
    WarmStartForest forest_;
    std::vector<std::vector<double>> buffer_x_;
    std::vector<int> buffer_y_;
};

} // namespace

bool OnlineModel::is_model_name(const std::string& name) {
    return name == "sgd" || name == "perceptron" || name == "pa" || name == "hoeffding" ||
           name == "forest";
}

std::unique_ptr<OnlineModel> OnlineModel::create(const std::string& name, std::uint64_t seed) {
    if (name == "sgd") return std::make_unique<LinearOnline>(LinearAlgo::Sgd);
    if (name == "perceptron") return std::make_unique<LinearOnline>(LinearAlgo::Perceptron);
    if (name == "pa") return std::make_unique<LinearOnline>(LinearAlgo::Pa);
    if (name == "hoeffding") return std::make_unique<HoeffdingOnline>();
    if (name == "forest") return std::make_unique<ForestOnline>(seed);
    throw ConfigError("unknown model '" + name + "'");
}

std::unique_ptr<OnlineModel> OnlineModel::deserialize(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "sentinel-model")
        throw ConfigError("model: bad serialization format");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "hoeffding") return HoeffdingOnline::from_json(j);
    if (kind == "forest") return ForestOnline::from_json(j);
    if (kind == "sgd" || kind == "perceptron" || kind == "pa") return LinearOnline::from_json(j);
    throw ConfigError("model: unknown kind '" + kind + "'");
}

} // namespace sentinel::ml
