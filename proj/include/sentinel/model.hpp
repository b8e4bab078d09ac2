#ifndef SENTINEL_MODEL_HPP
#define SENTINEL_MODEL_HPP

#include <memory>

#include "sentinel/forest.hpp"
#include "sentinel/hoeffding.hpp"
#include "sentinel/linear.hpp"
#include "sentinel/standardizer.hpp"

namespace sentinel::ml {

// Uniform predict-one / learn-one surface over the online learners.
// Linear models consume standardized features (the standardizer is part of
// the model state); tree models consume raw features.
class OnlineModel {
public:
    virtual ~OnlineModel() = default;
    virtual std::string name() const = 0;
    // (class in {0,1}, confidence in [0.5, 1]); never mutates state
    virtual std::pair<int, double> predict_one(const std::vector<double>& x) const = 0;
    virtual void learn_one(const std::vector<double>& x, int label01) = 0;
    // called by the prequential harness after training on a batch; only the
    // warm-start forest acts on it
    virtual void end_batch() {}
    virtual std::string serialize() const = 0;
    virtual std::unique_ptr<OnlineModel> clone() const = 0;

    // name in {sgd, perceptron, pa, hoeffding, forest}
    static std::unique_ptr<OnlineModel> create(const std::string& name, std::uint64_t seed);
    static std::unique_ptr<OnlineModel> deserialize(const std::string& text);
    static bool is_model_name(const std::string& name);
};

} // namespace sentinel::ml

#endif
