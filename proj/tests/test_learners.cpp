#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "sentinel/common.hpp"
#include "sentinel/forest.hpp"
#include "sentinel/hoeffding.hpp"
#include "sentinel/linear.hpp"
#include "sentinel/model.hpp"
#include "sentinel/standardizer.hpp"

using namespace sentinel;
using namespace sentinel::ml;

namespace {

std::vector<std::vector<double>> random_vectors(std::size_t n, std::size_t dim,
                                                std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (auto& v : out)
        for (auto& x : v) x = rng.uniform01() * 10.0 - 5.0;
    return out;
}

double hinge_loss(const LinearModel& m, const std::vector<double>& x, int label01) {
    double y = label01 ? 1.0 : -1.0;
    return std::max(0.0, 1.0 - y * m.score(x));
}

double logistic_loss(const LinearModel& m, const std::vector<double>& x, int label01) {
    double s = m.score(x);
    double p = 1.0 / (1.0 + std::exp(-s));
    return label01 ? -std::log(p) : -std::log(1.0 - p);
}

} // namespace

TEST_CASE("hoeffding bound closed forms") {
    CHECK(hoeffding_bound(1.0, 1e-7, 200) == doctest::Approx(0.2007).epsilon(5e-4));
    double e1 = hoeffding_bound(1.0, 1e-3, 100);
    double e2 = hoeffding_bound(1.0, 1e-3, 400);
    CHECK(e1 == doctest::Approx(2.0 * e2).epsilon(1e-12));
    CHECK(hoeffding_bound(1.0, 0.999999, 1000) < 1e-3);
    CHECK_THROWS_AS(hoeffding_bound(1.0, 0.0, 10), UsageError);
    CHECK_THROWS_AS(hoeffding_bound(1.0, 1.0, 10), UsageError);
    CHECK_THROWS_AS(hoeffding_bound(1.0, 0.5, 0), UsageError);
    CHECK_THROWS_AS(hoeffding_bound(0.0, 0.5, 10), UsageError);
}

TEST_CASE("first gradient step from the origin") {
    LinearModel m(LinearAlgo::Sgd);
    std::vector<double> x = {2.0, -1.0, 0.5};
    double alpha = m.current_learning_rate();
    CHECK(m.update(x, 1));
    // sigmoid(0) = 0.5, so the step is alpha * (y - 0.5) * x
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(m.weights()[i] == doctest::Approx(alpha * 0.5 * x[i]).epsilon(1e-12));
    CHECK(m.bias() == doctest::Approx(alpha * 0.5).epsilon(1e-12));

    LinearModel m0(LinearAlgo::Sgd);
    CHECK(m0.update({2.0, -1.0, 0.5}, 0));
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(m0.weights()[i] == doctest::Approx(-alpha * 0.5 * x[i]).epsilon(1e-12));
}

TEST_CASE("gradient descent on a fixed example decreases the loss") {
    LinearModel m(LinearAlgo::Sgd);
    std::vector<double> x = {1.0, 2.0};
    double prev = logistic_loss(m, x, 1);
    for (int i = 0; i < 50; ++i) {
        m.update(x, 1);
        double cur = logistic_loss(m, x, 1);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("learning rate schedule decays with updates") {
    LinearModel m(LinearAlgo::Sgd);
    double a0 = m.current_learning_rate();
    CHECK(a0 == doctest::Approx(m.alpha0).epsilon(1e-12));
    for (int i = 0; i < 100; ++i) m.update({1.0}, i % 2);
    CHECK(m.updates() == 100);
    CHECK(m.current_learning_rate() ==
          doctest::Approx(m.alpha0 / (1.0 + m.alpha0 * m.lambda * 100.0)).epsilon(1e-12));
    CHECK(m.current_learning_rate() < a0);
}

TEST_CASE("mistake-driven updates leave correct predictions untouched") {
    LinearModel m(LinearAlgo::Perceptron);
    CHECK(m.update({1.0, 0.0}, 1)); // mistake: score 0 predicts negative
    auto w = m.weights();
    double b = m.bias();
    // the step is rate * (y - sgn(score)) = 2 on a mistake from the origin
    CHECK(w[0] == doctest::Approx(2.0 * m.perceptron_rate).epsilon(1e-12));
    // now correctly classified: state must be bit-identical after update
    CHECK(m.update({1.0, 0.0}, 1));
    CHECK(m.weights() == w);
    CHECK(m.bias() == b);
    CHECK(m.updates() == 1);
}

TEST_CASE("zero score predicts the negative class deterministically") {
    LinearModel m(LinearAlgo::Perceptron);
    auto [cls, conf] = m.predict({1.0, 2.0});
    CHECK(cls == 0);
    CHECK(conf == doctest::Approx(0.5));
    // so a negative example at the origin is already correct: no update
    CHECK(m.update({3.0, -1.0}, 0));
    CHECK(m.updates() == 0);
    CHECK(m.bias() == 0.0);
}

TEST_CASE("passive-aggressive update annihilates the hinge loss") {
    SUBCASE("unit-norm example from the origin lands exactly on the margin") {
        LinearModel m(LinearAlgo::Pa);
        std::vector<double> x = {1.0, 0.0};
        CHECK(m.update(x, 1));
        CHECK(m.score(x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hinge_loss(m, x, 1) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("whenever the step is not clipped, post-update loss is zero") {
        Rng rng(404);
        LinearModel m(LinearAlgo::Pa);
        for (int i = 0; i < 500; ++i) {
            std::vector<double> x(4);
            for (auto& v : x) v = rng.uniform01() * 4.0 - 2.0;
            int label = rng.uniform(2) ? 1 : 0;
            double y = label ? 1.0 : -1.0;
            double norm2 = 0;
            for (double v : x) norm2 += v * v;
            double loss = std::max(0.0, 1.0 - y * m.score(x));
            bool clipped = norm2 == 0.0 || loss / norm2 >= m.pa_aggressiveness;
            m.update(x, label);
            if (!clipped) CHECK(hinge_loss(m, x, label) <= 1e-9);
        }
    }
    SUBCASE("margin already met: no change") {
        LinearModel m(LinearAlgo::Pa);
        m.update({2.0, 0.0}, 1); // score afterwards: 2 * tau * 2 ... >= 1
        auto w = m.weights();
        CHECK(m.score({2.0, 0.0}) >= 1.0);
        m.update({2.0, 0.0}, 1);
        CHECK(m.weights() == w);
    }
}

TEST_CASE("non-finite inputs are rejected without touching state") {
    for (LinearAlgo algo : {LinearAlgo::Sgd, LinearAlgo::Perceptron, LinearAlgo::Pa}) {
        LinearModel m(algo);
        m.update({1.0, 1.0}, 1);
        auto w = m.weights();
        double b = m.bias();
        CHECK(!m.update({std::numeric_limits<double>::quiet_NaN(), 1.0}, 1));
        CHECK(!m.update({std::numeric_limits<double>::infinity(), 1.0}, 0));
        CHECK(m.weights() == w);
        CHECK(m.bias() == b);
    }
}

TEST_CASE("tree splits on the informative feature of a separable stream") {
    // feature 0 separates perfectly (0 vs 1); features 1-2 are noise
    Rng rng(808);
    HoeffdingTree tree; // defaults: delta 1e-7, grace 200
    std::vector<std::pair<std::vector<double>, int>> stream;
    for (int i = 0; i < 1000; ++i) {
        int label = static_cast<int>(rng.uniform(2));
        stream.push_back({{static_cast<double>(label), rng.uniform01(), rng.uniform01()}, label});
    }
    for (const auto& [x, y] : stream) tree.learn_one(x, y);

    auto [feature, threshold] = tree.root_split();
    CHECK(feature == 0);
    CHECK(threshold >= 0.0);
    CHECK(threshold < 1.0);
    int correct = 0;
    for (const auto& [x, y] : stream)
        if (tree.predict_one(x).first == y) ++correct;
    CHECK(correct == 1000);
}

TEST_CASE("tree construction is deterministic and prediction is const") {
    auto build = [] {
        Rng rng(99);
        HoeffdingTree t;
        for (int i = 0; i < 600; ++i) {
            int label = static_cast<int>(rng.uniform(2));
            t.learn_one({label ? rng.uniform01() + 1.0 : rng.uniform01(), rng.uniform01()},
                        label);
        }
        return t;
    };
    HoeffdingTree a = build();
    HoeffdingTree b = build();
    CHECK(a.serialize() == b.serialize());

    std::string before = a.serialize();
    for (const auto& x : random_vectors(100, 2, 5)) a.predict_one(x);
    CHECK(a.serialize() == before);
}

TEST_CASE("fresh tree predicts the majority class with high confidence") {
    HoeffdingTree t;
    for (int i = 0; i < 10; ++i) t.learn_one({0.5}, 1);
    auto [cls, conf] = t.predict_one({0.5});
    CHECK(cls == 1);
    CHECK(conf > 0.9);
}

TEST_CASE("tree serialization round-trips") {
    Rng rng(123);
    HoeffdingTree t;
    for (int i = 0; i < 1000; ++i) {
        int label = static_cast<int>(rng.uniform(2));
        t.learn_one({label + rng.uniform01(), rng.uniform01() * 3.0}, label);
    }
    HoeffdingTree back = HoeffdingTree::deserialize(t.serialize());
    CHECK(back.serialize() == t.serialize());
    for (const auto& x : random_vectors(1000, 2, 7))
        CHECK(back.predict_one(x) == t.predict_one(x));
    CHECK_THROWS_AS(HoeffdingTree::deserialize("{\"format\":\"nope\"}"), ConfigError);
}

TEST_CASE("forest grows by a fixed number of trees per batch") {
    WarmStartForest::Params params;
    params.trees_per_batch = 10;
    WarmStartForest f(params);
    auto X = random_vectors(200, 3, 1);
    std::vector<int> y;
    for (std::size_t i = 0; i < X.size(); ++i) y.push_back(X[i][0] > 0 ? 1 : 0);
    for (int b = 0; b < 3; ++b) f.fit_batch(X, y);
    CHECK(f.tree_count() == 30);
    CHECK(f.batches_fitted() == 3);
}

TEST_CASE("earlier forest trees are immutable across later batches") {
    WarmStartForest f;
    auto X = random_vectors(150, 2, 2);
    std::vector<int> y;
    for (const auto& x : X) y.push_back(x[1] > 1.0 ? 1 : 0);
    f.fit_batch(X, y);
    std::vector<std::string> before;
    for (const auto& t : f.trees()) before.push_back(t.serialize());
    f.fit_batch(random_vectors(150, 2, 3), y);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(f.trees()[i].serialize() == before[i]);
}

TEST_CASE("single-class batch yields constant trees") {
    WarmStartForest f;
    auto X = random_vectors(50, 2, 9);
    f.fit_batch(X, std::vector<int>(50, 1));
    for (const auto& x : random_vectors(20, 2, 10)) CHECK(f.predict(x) == 1);
    CHECK_THROWS_AS(f.fit_batch({}, {}), UsageError);
}

TEST_CASE("forest serialization round-trips") {
    WarmStartForest f;
    auto X = random_vectors(300, 3, 21);
    std::vector<int> y;
    for (const auto& x : X) y.push_back(x[0] + x[1] > 0 ? 1 : 0);
    f.fit_batch(X, y);
    f.fit_batch(X, y);
    WarmStartForest back = WarmStartForest::deserialize(f.serialize());
    CHECK(back.tree_count() == f.tree_count());
    for (const auto& x : random_vectors(500, 3, 22)) CHECK(back.predict(x) == f.predict(x));
}

TEST_CASE("linear model serialization round-trips") {
    for (LinearAlgo algo : {LinearAlgo::Sgd, LinearAlgo::Perceptron, LinearAlgo::Pa}) {
        Rng rng(31);
        LinearModel m(algo);
        for (int i = 0; i < 200; ++i) {
            std::vector<double> x = {rng.uniform01() * 2 - 1, rng.uniform01() * 2 - 1};
            m.update(x, x[0] + x[1] > 0 ? 1 : 0);
        }
        LinearModel back = LinearModel::deserialize(m.serialize());
        CHECK(back.serialize() == m.serialize());
        for (const auto& x : random_vectors(200, 2, 32))
            CHECK(back.predict(x) == m.predict(x));
    }
}

TEST_CASE("model factory covers every learner and round-trips state") {
    for (const char* name : {"sgd", "perceptron", "pa", "hoeffding", "forest"}) {
        CHECK(OnlineModel::is_model_name(name));
        auto model = OnlineModel::create(name, 42);
        CHECK(model->name() == name);
        Rng rng(50);
        for (int i = 0; i < 300; ++i) {
            int label = static_cast<int>(rng.uniform(2));
            model->learn_one({label + rng.uniform01(), rng.uniform01() * 5.0}, label);
        }
        model->end_batch();
        auto back = OnlineModel::deserialize(model->serialize());
        CHECK(back->name() == model->name());
        for (const auto& x : random_vectors(1000, 2, 51))
            CHECK(back->predict_one(x) == model->predict_one(x));

        auto clone = model->clone();
        CHECK(clone->serialize() == model->serialize());
    }
    CHECK(!OnlineModel::is_model_name("xgboost"));
    CHECK_THROWS_AS(OnlineModel::create("xgboost", 1), ConfigError);
}

TEST_CASE("standardizer contracts") {
    Standardizer s;
    std::vector<double> first = {3.0, -2.0};
    CHECK(s.transform_update(first) == first); // cold start: identity
    CHECK_THROWS_AS(s.transform_update({1.0, 2.0, 3.0}), UsageError);

    // constant feature pins to zero after the first sample
    Standardizer c;
    c.transform_update({5.0, 1.0});
    auto out = c.transform_update({5.0, 2.0});
    CHECK(out[0] == 0.0);

    // a long stream approaches zero mean, unit variance
    Rng rng(60);
    Standardizer z;
    double sum = 0, sum2 = 0;
    std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
        // rough normal via CLT of 12 uniforms, shifted and scaled
        double g = -6.0;
        for (int k = 0; k < 12; ++k) g += rng.uniform01();
        auto t = z.transform_update({5.0 + 2.0 * g});
        if (i < 10) continue; // variance estimate is unusable before a few samples
        sum += t[0];
        sum2 += t[0] * t[0];
    }
    double mean = sum / static_cast<double>(n - 10);
    CHECK(std::fabs(mean) <= 0.05);
    CHECK(sum2 / static_cast<double>(n - 10) == doctest::Approx(1.0).epsilon(0.1));
}
