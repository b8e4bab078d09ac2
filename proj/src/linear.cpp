#include "sentinel/linear.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace sentinel::ml {

using json = nlohmann::json;

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
int sgn_neg_at_zero(double z) { return z > 0.0 ? 1 : -1; }
} // namespace

void LinearModel::ensure_dim(std::size_t dim) {
    if (weights_.empty()) weights_.assign(dim, 0.0);
    if (weights_.size() != dim) throw UsageError("linear model: feature dimension mismatch");
}

double LinearModel::score(const std::vector<double>& x) const {
    if (weights_.empty()) return bias_;
    if (weights_.size() != x.size()) throw UsageError("linear model: feature dimension mismatch");
    double s = bias_;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
    return s;
}

std::pair<int, double> LinearModel::predict(const std::vector<double>& x) const {
    double s = score(x);
    if (algo_ == LinearAlgo::Sgd) {
        double p = sigmoid(s);
        return p >= 0.5 ? std::pair{1, p} : std::pair{0, 1.0 - p};
    }
    int cls = sgn_neg_at_zero(s) > 0 ? 1 : 0;
    double conf = sigmoid(std::fabs(s));
    return {cls, conf};
}

double LinearModel::current_learning_rate() const {
    return alpha0 / (1.0 + alpha0 * lambda * static_cast<double>(t_));
}

bool LinearModel::update(const std::vector<double>& x, int label01) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    ensure_dim(x.size());

    switch (algo_) {
        case LinearAlgo::Sgd: {
            double alpha = current_learning_rate();
            double g = sigmoid(score(x)) - static_cast<double>(label01);
            for (std::size_t i = 0; i < x.size(); ++i) weights_[i] -= alpha * g * x[i];
            bias_ -= alpha * g;
            ++t_;
            return true;
        }
        case LinearAlgo::Perceptron: {
            double y = label01 ? 1.0 : -1.0;
            int pred = sgn_neg_at_zero(score(x));
            if (static_cast<double>(pred) == y) return true; // correct: no state change
            double step = perceptron_rate * (y - static_cast<double>(pred));
            for (std::size_t i = 0; i < x.size(); ++i) weights_[i] += step * x[i];
            bias_ += step;
            ++t_;
            return true;
        }
        case LinearAlgo::Pa: {
            double y = label01 ? 1.0 : -1.0;
            double norm2 = 0.0;
            for (double v : x) norm2 += v * v;
            double loss = std::max(0.0, 1.0 - y * score(x));
            if (loss == 0.0 || norm2 == 0.0) return true;
            double tau = std::min(pa_aggressiveness, loss / norm2);
            for (std::size_t i = 0; i < x.size(); ++i) weights_[i] += tau * y * x[i];
            ++t_;
            return true;
        }
    }
    return false;
}

std::string algo_name(LinearAlgo a) {
    switch (a) {
        case LinearAlgo::Sgd: return "sgd";
        case LinearAlgo::Perceptron: return "perceptron";
        case LinearAlgo::Pa: return "pa";
    }
    return "sgd";
}

LinearAlgo algo_from_name(const std::string& name) {
    if (name == "sgd") return LinearAlgo::Sgd;
    if (name == "perceptron") return LinearAlgo::Perceptron;
    if (name == "pa") return LinearAlgo::Pa;
    throw ConfigError("unknown linear algorithm '" + name + "'");
}

std::string LinearModel::serialize() const {
    json j{{"format", "sentinel-linear"},
           {"version", 1},
           {"algo", algo_name(algo_)},
           {"weights", weights_},
           {"bias", bias_},
           {"t", t_},
           {"alpha0", alpha0},
           {"lambda", lambda},
           {"C", pa_aggressiveness},
           {"perceptron_rate", perceptron_rate}};
    return j.dump();
}

LinearModel LinearModel::deserialize(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "sentinel-linear")
        throw ConfigError("linear model: bad serialization format");
    LinearModel m(algo_from_name(j.at("algo").get<std::string>()));
    m.weights_ = j.at("weights").get<std::vector<double>>();
    m.bias_ = j.at("bias").get<double>();
    m.t_ = j.at("t").get<std::uint64_t>();
    m.alpha0 = j.value("alpha0", 0.1);
    m.lambda = j.value("lambda", 1e-4);
    m.pa_aggressiveness = j.value("C", 1.0);
    m.perceptron_rate = j.value("perceptron_rate", 1.0);
    return m;
}

} // namespace sentinel::ml
