#ifndef SENTINEL_LINEAR_HPP
#define SENTINEL_LINEAR_HPP

#include <string>
#include <vector>

#include "sentinel/common.hpp"

namespace sentinel::ml {

enum class LinearAlgo { Sgd, Perceptron, Pa };

// First-order online linear classifier. SGD uses logistic loss with the
// alpha0/(1 + alpha0*lambda*t) schedule; Perceptron is the mistake-driven
// (y - sgn(score)) rule with sgn(0) = -1; PA is PA-I with hinge loss.
// Classes are {0,1} at the surface; Perceptron/PA map to {-1,+1} internally.
class LinearModel {
public:
    explicit LinearModel(LinearAlgo algo) : algo_(algo) {}

    // returns false (state untouched) when x contains non-finite values
    bool update(const std::vector<double>& x, int label01);

    // class 1 iff score > 0 (sgn(0) = -1); confidence is the logistic
    // squash of the signed score toward the predicted class
    std::pair<int, double> predict(const std::vector<double>& x) const;

    double score(const std::vector<double>& x) const;

    LinearAlgo algo() const { return algo_; }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    std::uint64_t updates() const { return t_; }
    double current_learning_rate() const; // SGD schedule value for the next step

    // hyperparameters
    double alpha0 = 0.1;
    double lambda = 1e-4;
    double pa_aggressiveness = 1.0; // C
    double perceptron_rate = 1.0;

    std::string serialize() const;
    static LinearModel deserialize(const std::string& text);

private:
    void ensure_dim(std::size_t dim);

    LinearAlgo algo_;
    std::vector<double> weights_;
    double bias_ = 0.0;
    std::uint64_t t_ = 0; // effective updates taken
};

std::string algo_name(LinearAlgo a);
LinearAlgo algo_from_name(const std::string& name);

} // namespace sentinel::ml

#endif
