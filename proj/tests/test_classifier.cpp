#include <doctest.h>

#include <cmath>
#include <random>

#include "core/classifier.hpp"
#include "core/error.hpp"
#include "core/workload.hpp"

using namespace hybridchain;

namespace {

AttributeVector random_attrs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    return {u(rng) * 10.0, u(rng), std::floor(u(rng) * 50.0), u(rng), u(rng)};
}

WeightVector random_weights(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    WeightVector y;
    for (double& w : y.weights) w = u(rng);
    y.bias = u(rng);
    return y;  // identity standardization
}

}  // namespace

TEST_SUITE_BEGIN("classifier");

TEST_CASE("sigmoid and score basics") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(700.0) == doctest::Approx(1.0));
    CHECK(sigmoid(-700.0) == doctest::Approx(0.0));
    CHECK(sigmoid(700.0) > sigmoid(5.0));
    CHECK(sigmoid(5.0) > sigmoid(0.0));

    WeightVector zero;  // all-zero weights: margin 0 regardless of attributes
    CHECK(score({1, 2, 3, 0.5, 0.9}, zero) == 0.5);
}

TEST_CASE("score matches a long-double re-evaluation within 1e-12") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const AttributeVector a = random_attrs(rng);
        const WeightVector y = random_weights(rng);
        long double margin = y.bias;
        const auto raw = a.as_array();
        for (int k = 0; k < 5; ++k)
            margin += static_cast<long double>(raw[static_cast<std::size_t>(k)]) *
                      static_cast<long double>(y.weights[static_cast<std::size_t>(k)]);
        const long double expected = 1.0L / (1.0L + std::exp(-margin));
        CHECK(std::abs(score(a, y) - static_cast<double>(expected)) <= 1e-12);
    }
}

TEST_CASE("thresholds: midpoint case, exact band width, monotone limits") {
    WeightVector zero;
    auto [e1, e2] = thresholds({1, 1, 1, 1, 1}, zero, {1.0, 0.5});
    CHECK(e1 == 0.75);
    CHECK(e2 == 0.25);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const AttributeVector a = random_attrs(rng);
        const WeightVector y = random_weights(rng);
        auto [t1, t2] = thresholds(a, y, {1.0, 0.5});
        CHECK(t1 - t2 == 0.5);  // exact algebraic identity
        CHECK(t1 >= 0.5);       // saturated scores touch the bounds
        CHECK(t1 <= 1.0);
        CHECK(t2 >= 0.0);
        CHECK(t2 <= 0.5);
    }

    // a very valid-looking transaction approaches the laxest bar (0.5, 0)
    WeightVector strong;
    strong.weights = {50.0, 0, 0, 0, 0};
    auto [lax1, lax2] = thresholds({10.0, 1, 1, 1, 1}, strong, {1.0, 0.5});
    CHECK(lax1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(lax2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    // score is increasing in the margin, thresholds decreasing
    WeightVector inc;
    inc.weights = {1.0, 0, 0, 0, 0};
    double prev_score = -1.0, prev_eta1 = 2.0;
    for (double a1 = 0.5; a1 <= 10.0; a1 += 0.5) {
        const double s = score({a1, 0, 0, 0, 0}, inc);
        auto [h1, h2] = thresholds({a1, 0, 0, 0, 0}, inc, {1.0, 0.5});
        (void)h2;
        CHECK(s > prev_score);
        CHECK(h1 < prev_eta1);
        prev_score = s;
        prev_eta1 = h1;
    }
}

TEST_CASE("training separates a linearly separable toy set perfectly") {
    std::mt19937_64 rng(42);
    std::vector<TrainingExample> train_set, heldout;
    int i = 0;
    while (i < 400) {
        AttributeVector a = random_attrs(rng);
        if (std::abs(a.a2 - 0.4) < 0.05) continue;  // margin keeps it separable in practice
        const std::uint8_t label = a.a2 > 0.4 ? 1 : 0;
        (i < 300 ? train_set : heldout).push_back({a, label});
        ++i;
    }
    auto y = train(train_set, TrainOptions{});
    REQUIRE(y.has_value());
    long correct = 0;
    for (const TrainingExample& e : heldout)
        if ((score(e.attributes, *y) >= 0.5) == (e.label != 0)) ++correct;
    CHECK(correct == static_cast<long>(heldout.size()));
}

TEST_CASE("analytic gradient matches central finite differences (rel err < 1e-4)") {
    std::mt19937_64 rng(7);
    std::vector<TrainingExample> examples;
    for (int i = 0; i < 200; ++i)
        examples.push_back({random_attrs(rng), static_cast<std::uint8_t>(i % 2)});

    const double ridge = 1e-4;
    const double h = 1e-6;
    double worst = 0.0;
    for (int pt = 0; pt < 100; ++pt) {
        WeightVector y = random_weights(rng);
        const auto g = gradient(examples, y, ridge);
        for (int i = 0; i < 6; ++i) {
            WeightVector lo = y, hi = y;
            if (i < 5) {
                lo.weights[static_cast<std::size_t>(i)] -= h;
                hi.weights[static_cast<std::size_t>(i)] += h;
            } else {
                lo.bias -= h;
                hi.bias += h;
            }
            const double num = (loss(examples, hi, ridge) - loss(examples, lo, ridge)) / (2 * h);
            const double denom = std::max({std::abs(num), std::abs(g[static_cast<std::size_t>(i)]), 1e-8});
            worst = std::max(worst, std::abs(num - g[static_cast<std::size_t>(i)]) / denom);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("training is deterministic and its loss is non-increasing per iteration") {
    Rng rng = make_rng(11, stream::bootstrap);
    std::vector<TrainingExample> examples;
    for (int i = 0; i < 500; ++i)
        examples.push_back({sample_attributes(i % 2 == 0, rng), static_cast<std::uint8_t>(i % 2 == 0)});

    const TrainOptions opt;
    auto a = train(examples, opt);
    auto b = train(examples, opt);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->weights == b->weights);
    CHECK(a->bias == b->bias);
    CHECK(a->mean == b->mean);
    CHECK(a->scale == b->scale);

    // replay the descent path with the public loss/gradient pair
    WeightVector y = *a;
    y.weights = {};
    y.bias = 0.0;
    double prev = loss(examples, y, opt.ridge);
    for (int it = 0; it < 200; ++it) {
        const auto g = gradient(examples, y, opt.ridge);
        for (int i = 0; i < 5; ++i) y.weights[static_cast<std::size_t>(i)] -= opt.step * g[static_cast<std::size_t>(i)];
        y.bias -= opt.step * g[5];
        const double cur = loss(examples, y, opt.ridge);
        CHECK(cur <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
        prev = cur;
    }
}

TEST_CASE("degenerate training inputs are declined") {
    CHECK_FALSE(train({}, TrainOptions{}).has_value());
    std::vector<TrainingExample> one_class;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) one_class.push_back({random_attrs(rng), 1});
    CHECK_FALSE(train(one_class, TrainOptions{}).has_value());
}

TEST_CASE("retraining cadence gates the hook") {
    std::mt19937_64 rng(2);
    std::vector<TrainingExample> window;
    for (int i = 0; i < 40; ++i) window.push_back({random_attrs(rng), static_cast<std::uint8_t>(i % 2)});

    CHECK_FALSE(retrain_epoch_hook(window, 19, 20, TrainOptions{}).has_value());
    CHECK(retrain_epoch_hook(window, 20, 20, TrainOptions{}).has_value());
    CHECK_FALSE(retrain_epoch_hook({}, 20, 20, TrainOptions{}).has_value());  // empty window
    CHECK(retrain_epoch_hook(window, 3, 1, TrainOptions{}).has_value());      // cadence 1
    CHECK_THROWS_AS(retrain_epoch_hook(window, 3, 0, TrainOptions{}), ConfigError);
}

TEST_CASE("weight records round-trip exactly") {
    std::mt19937_64 rng(33);
    WeightVector y = random_weights(rng);
    y.mean = {0.1, 0.2, 0.3, 0.4, 0.5};
    y.scale = {1.5, 2.5, 3.5, 4.5, 5.5};
    const WeightVector back = WeightVector::from_record(y.to_record());
    CHECK(back.weights == y.weights);
    CHECK(back.bias == y.bias);
    CHECK(back.mean == y.mean);
    CHECK(back.scale == y.scale);
    CHECK_THROWS_AS(WeightVector::from_record("not numbers"), ConfigError);
}

TEST_SUITE_END();
