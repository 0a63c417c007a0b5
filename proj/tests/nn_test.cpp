#include <doctest.h>

#include <cmath>
#include <random>

#include "coachstyle/nn.hpp"
#include "coachstyle/util.hpp"
#include "oracles.hpp"

using namespace coachstyle;

namespace {

std::vector<double> random_input(std::size_t n, std::uint64_t seed, double lo = 0.1,
                                 double hi = 0.9) {
    std::mt19937_64 rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = util::uniform_range(rng, lo, hi);
    return x;
}

nn::AutoencoderModel zero_model(const std::vector<int>& dims) {
    auto model = nn::AutoencoderModel::init(dims, 0);
    for (auto& w : model.weights) std::fill(w.begin(), w.end(), 0.0);
    return model;
}

}  // namespace

TEST_CASE("zero model reconstructs 0.5 and encodes to zero") {
    const auto model = zero_model({4, 3, 2, 3, 4});
    const std::vector<double> x = {0.1, 0.7, 0.3, 0.9};
    const auto fw = nn::forward(model, x);
    for (double v : fw.reconstruction) CHECK(v == 0.5);
    for (double v : fw.encoding) CHECK(v == 0.0);
    CHECK(nn::encode(model, x) == fw.encoding);
}

TEST_CASE("reconstruction stays inside the sigmoid range") {
    const auto model = nn::AutoencoderModel::init({6, 3, 2, 3, 6}, 9);
    const auto fw = nn::forward(model, random_input(6, 1));
    for (double v : fw.reconstruction) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("forward and encode are deterministic and consistent") {
    const auto model = nn::AutoencoderModel::init({6, 4, 2, 4, 6}, 77);
    const auto x = random_input(6, 2);
    const auto fw1 = nn::forward(model, x);
    const auto fw2 = nn::forward(model, x);
    CHECK(fw1.reconstruction == fw2.reconstruction);
    CHECK(fw1.encoding == fw2.encoding);
    CHECK(nn::encode(model, x) == fw1.encoding);
    CHECK(fw1.encoding.size() == 2);
}

TEST_CASE("default shape is 70-32-5-32-70 with the documented activations") {
    const auto model = nn::AutoencoderModel::init(nn::AutoencoderModel::default_dims(), 1);
    CHECK(model.dims == std::vector<int>{70, 32, 5, 32, 70});
    CHECK(model.input_dim() == 70);
    CHECK(model.encoding_dim() == 5);
    REQUIRE(model.activations.size() == 4);
    CHECK(model.activations[0] == nn::Activation::Tanh);
    CHECK(model.activations[1] == nn::Activation::Identity);
    CHECK(model.activations[2] == nn::Activation::Tanh);
    CHECK(model.activations[3] == nn::Activation::Sigmoid);
}

TEST_CASE("mse basics") {
    const std::vector<double> a = {1.0, 2.0}, zeros = {0.0, 0.0}, ones = {1.0, 1.0};
    const std::vector<double> c = {0.0, 2.0}, one = {1.0};
    CHECK(nn::mse(a, a) == 0.0);
    CHECK(nn::mse(zeros, ones) == 1.0);
    CHECK(nn::mse(c, zeros) == 2.0);
    CHECK_THROWS_AS(nn::mse(one, a), DimensionMismatch);
}

TEST_CASE("analytic gradients match finite differences on the toy model") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const auto model = nn::AutoencoderModel::init({6, 3, 2, 3, 6}, seed);
        const auto result = oracle::gradient_check(model, random_input(6, seed + 50));
        CHECK(result.max_rel_err < 1e-4);
        CHECK(result.params_checked > 0);
    }
}

TEST_CASE("gradients vanish at an exact reconstruction") {
    const auto model = zero_model({4, 3, 2, 3, 4});
    const std::vector<double> x(4, 0.5);  // reconstruction is exactly 0.5
    const auto fw = nn::forward(model, x);
    CHECK(nn::mse(fw.reconstruction, x) == 0.0);
    const auto grads = nn::backward(model, x, fw.cache);
    for (const auto& layer : grads.weights) {
        for (double g : layer) CHECK(g == 0.0);
    }
    for (const auto& layer : grads.biases) {
        for (double g : layer) CHECK(g == 0.0);
    }
}

TEST_CASE("duplicating a sample leaves the mean gradient unchanged") {
    const auto model = nn::AutoencoderModel::init({5, 3, 2, 3, 5}, 3);
    const auto x = random_input(5, 4);
    const auto fw = nn::forward(model, x);
    const auto single = nn::backward(model, x, fw.cache);

    auto mean = nn::Gradients::zeros_like(model);
    mean.add_scaled(nn::backward(model, x, fw.cache), 0.5);
    mean.add_scaled(nn::backward(model, x, fw.cache), 0.5);
    for (std::size_t l = 0; l < single.weights.size(); ++l) {
        for (std::size_t i = 0; i < single.weights[l].size(); ++i) {
            CHECK(mean.weights[l][i] == doctest::Approx(single.weights[l][i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("stale cache is rejected") {
    const auto model = nn::AutoencoderModel::init({5, 3, 2, 3, 5}, 3);
    const auto other = nn::AutoencoderModel::init({7, 3, 2, 3, 7}, 3);
    const auto x = random_input(7, 4);
    const auto fw = nn::forward(other, x);
    CHECK_THROWS_AS(nn::backward(model, x, fw.cache), StaleCache);
}

TEST_CASE("adadelta single-step hand example") {
    auto model = zero_model({1, 1, 1});
    model.weights[0][0] = 1.0;
    auto state = nn::AdadeltaState::zeros_like(model, 0.95, 1e-6);
    auto grads = nn::Gradients::zeros_like(model);
    grads.weights[0][0] = 2.0;
    nn::adadelta_step(state, grads, model);
    // E[g^2] = 0.05 * 4; dx = -sqrt(1e-6)/sqrt(0.2 + 1e-6) * 2
    const double expect = -(std::sqrt(1e-6) / std::sqrt(0.05 * 4.0 + 1e-6)) * 2.0;
    CHECK(model.weights[0][0] - 1.0 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs((model.weights[0][0] - 1.0) - (-0.0044721)) < 1e-6);
}

TEST_CASE("zero gradient leaves parameters fixed while the accumulator decays") {
    auto model = zero_model({1, 1, 1});
    model.weights[0][0] = 0.7;
    auto state = nn::AdadeltaState::zeros_like(model, 0.95, 1e-6);
    state.grad_sq_w[0][0] = 1.0;
    auto grads = nn::Gradients::zeros_like(model);
    nn::adadelta_step(state, grads, model);
    CHECK(model.weights[0][0] == 0.7);
    CHECK(state.grad_sq_w[0][0] == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("parameters with identical gradients and state update identically") {
    auto model = zero_model({2, 2, 2});
    model.weights[0][0] = 0.4;
    model.weights[0][3] = 0.4;
    auto state = nn::AdadeltaState::zeros_like(model, 0.95, 1e-6);
    auto grads = nn::Gradients::zeros_like(model);
    grads.weights[0][0] = -1.5;
    grads.weights[0][3] = -1.5;
    nn::adadelta_step(state, grads, model);
    CHECK(model.weights[0][0] == model.weights[0][3]);
}

TEST_CASE("adadelta walks down a quadratic bowl") {
    // f(w) = w^2, gradient 2w, from w = 1. Budget and bound pinned from a
    // reference trajectory: |w| < 1e-6 after 500 steps, decreasing throughout.
    auto model = zero_model({1, 1, 1});
    model.weights[0][0] = 1.0;
    auto state = nn::AdadeltaState::zeros_like(model, 0.95, 1e-6);
    double prev = 1.0;
    for (int step = 0; step < 500; ++step) {
        auto grads = nn::Gradients::zeros_like(model);
        grads.weights[0][0] = 2.0 * model.weights[0][0];
        nn::adadelta_step(state, grads, model);
        const double now = std::abs(model.weights[0][0]);
        CHECK(now <= prev + 1e-15);
        prev = now;
    }
    CHECK(std::abs(model.weights[0][0]) < 1e-6);
}

TEST_CASE("training a repeated profile drives the loss to near zero") {
    const auto profile = random_input(70, 123, 0.0, 0.3);
    std::vector<std::vector<double>> corpus(10, profile);
    nn::TrainConfig cfg;
    const auto result = nn::train(corpus, cfg);
    CHECK(result.final_loss < 1e-3);
    CHECK(result.loss_history.size() == 3000);
    CHECK(result.final_loss < result.loss_history.front());
    for (double loss : result.loss_history) CHECK(std::isfinite(loss));
}

TEST_CASE("training is bit-deterministic in the seed") {
    std::vector<std::vector<double>> corpus;
    for (int i = 0; i < 6; ++i) corpus.push_back(random_input(12, 10 + i, 0.0, 1.0));
    nn::TrainConfig cfg;
    cfg.dims = {12, 6, 3, 6, 12};
    cfg.epochs = 200;
    const auto a = nn::train(corpus, cfg);
    const auto b = nn::train(corpus, cfg);
    CHECK(a.model.weights == b.model.weights);
    CHECK(a.model.biases == b.model.biases);
    CHECK(a.loss_history == b.loss_history);
    CHECK(a.final_loss == b.final_loss);

    cfg.seed += 1;
    const auto c = nn::train(corpus, cfg);
    CHECK(c.model.weights != a.model.weights);
}

TEST_CASE("train validates its corpus") {
    CHECK_THROWS_AS(nn::train({}, nn::TrainConfig{}), EmptyCorpus);
    std::vector<std::vector<double>> wrong = {std::vector<double>(3, 0.1)};
    CHECK_THROWS_AS(nn::train(wrong, nn::TrainConfig{}), DimensionMismatch);
}

TEST_CASE("encoding is continuous in the input") {
    const auto model = nn::AutoencoderModel::init({8, 4, 2, 4, 8}, 5);
    auto x = random_input(8, 6);
    const auto base = nn::encode(model, x);
    x[3] += 1e-6;
    const auto moved = nn::encode(model, x);
    double diff = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) diff += std::abs(moved[i] - base[i]);
    CHECK(diff > 0.0);
    CHECK(diff < 1e-4);  // O(delta) with moderate weights
}

TEST_CASE("weights file round-trips exactly") {
    const auto model = nn::AutoencoderModel::init({6, 3, 2, 3, 6}, 21);
    const auto path = std::filesystem::temp_directory_path() / "coachstyle_nn_test.json";
    nn::save_weights(model, path);
    const auto loaded = nn::load_weights(path);
    CHECK(loaded.dims == model.dims);
    CHECK(loaded.weights == model.weights);
    CHECK(loaded.biases == model.biases);
    CHECK(loaded.activations == model.activations);
    std::filesystem::remove(path);

    const auto x = random_input(6, 7);
    CHECK(nn::encode(loaded, x) == nn::encode(model, x));
}
