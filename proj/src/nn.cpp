#include "coachstyle/nn.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "coachstyle/errors.hpp"
#include "coachstyle/util.hpp"

namespace coachstyle::nn {

namespace {

double activate(Activation a, double z) {
    switch (a) {
        case Activation::Tanh: return std::tanh(z);
        case Activation::Identity: return z;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    }
    return z;
}

// Derivative expressed through the activation output.
double activate_grad(Activation a, double out) {
    switch (a) {
        case Activation::Tanh: return 1.0 - out * out;
        case Activation::Identity: return 1.0;
        case Activation::Sigmoid: return out * (1.0 - out);
    }
    return 1.0;
}

void check_dims(const AutoencoderModel& model) {
    if (model.dims.size() < 3) throw DimensionMismatch("autoencoder needs >= 3 layers");
    if (model.dims.front() != model.dims.back()) {
        throw DimensionMismatch("input and output widths differ");
    }
    if (model.weights.size() != model.dims.size() - 1 ||
        model.biases.size() != model.weights.size() ||
        model.activations.size() != model.weights.size()) {
        throw DimensionMismatch("layer arrays inconsistent with dims");
    }
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const auto rows = static_cast<std::size_t>(model.dims[l + 1]);
        const auto cols = static_cast<std::size_t>(model.dims[l]);
        if (model.weights[l].size() != rows * cols || model.biases[l].size() != rows) {
            throw DimensionMismatch("weight matrix shape mismatch at layer " + std::to_string(l));
        }
    }
}

}  // namespace

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "identity";
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "identity") return Activation::Identity;
    if (s == "sigmoid") return Activation::Sigmoid;
    throw Error("unknown activation: " + s);
}

AutoencoderModel AutoencoderModel::init(const std::vector<int>& dims, std::uint64_t seed) {
    AutoencoderModel model;
    model.dims = dims;
    model.init_seed = seed;
    const std::size_t layers = dims.size() - 1;
    const std::size_t bottleneck = dims.size() / 2;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < layers; ++l) {
        const auto fan_in = static_cast<std::size_t>(dims[l]);
        const auto fan_out = static_cast<std::size_t>(dims[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::vector<double> w(fan_out * fan_in);
        for (double& v : w) v = util::uniform_range(rng, -limit, limit);
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(fan_out, 0.0);
        Activation act = Activation::Tanh;
        if (l + 1 == bottleneck) act = Activation::Identity;
        if (l + 1 == layers) act = Activation::Sigmoid;
        model.activations.push_back(act);
    }
    check_dims(model);
    return model;
}

ForwardResult forward(const AutoencoderModel& model, std::span<const double> x) {
    check_dims(model);
    if (x.size() != static_cast<std::size_t>(model.input_dim())) {
        throw DimensionMismatch("input size does not match model");
    }
    ForwardResult result;
    result.cache.activations.reserve(model.layer_count() + 1);
    result.cache.activations.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        const auto& in = result.cache.activations.back();
        const auto rows = static_cast<std::size_t>(model.dims[l + 1]);
        const auto cols = static_cast<std::size_t>(model.dims[l]);
        std::vector<double> out(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            double z = model.biases[l][r];
            const double* w = &model.weights[l][r * cols];
            for (std::size_t c = 0; c < cols; ++c) z += w[c] * in[c];
            out[r] = activate(model.activations[l], z);
        }
        result.cache.activations.push_back(std::move(out));
    }
    result.reconstruction = result.cache.activations.back();
    result.encoding = result.cache.activations[model.bottleneck_layer()];
    return result;
}

std::vector<double> encode(const AutoencoderModel& model, std::span<const double> x) {
    check_dims(model);
    if (x.size() != static_cast<std::size_t>(model.input_dim())) {
        throw DimensionMismatch("input size does not match model");
    }
    std::vector<double> a(x.begin(), x.end());
    for (std::size_t l = 0; l < model.bottleneck_layer(); ++l) {
        const auto rows = static_cast<std::size_t>(model.dims[l + 1]);
        const auto cols = static_cast<std::size_t>(model.dims[l]);
        std::vector<double> out(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            double z = model.biases[l][r];
            const double* w = &model.weights[l][r * cols];
            for (std::size_t c = 0; c < cols; ++c) z += w[c] * a[c];
            out[r] = activate(model.activations[l], z);
        }
        a = std::move(out);
    }
    return a;
}

double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("mse requires equal lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

Gradients Gradients::zeros_like(const AutoencoderModel& model) {
    Gradients g;
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        g.weights.emplace_back(model.weights[l].size(), 0.0);
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

void Gradients::add_scaled(const Gradients& other, double factor) {
    if (weights.size() != other.weights.size()) throw ShapeMismatch("gradient layer mismatch");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (std::size_t i = 0; i < weights[l].size(); ++i) {
            weights[l][i] += factor * other.weights[l][i];
        }
        for (std::size_t i = 0; i < biases[l].size(); ++i) {
            biases[l][i] += factor * other.biases[l][i];
        }
    }
}

Gradients backward(const AutoencoderModel& model, std::span<const double> x,
                   const ForwardCache& cache) {
    check_dims(model);
    if (cache.activations.size() != model.layer_count() + 1 ||
        cache.activations.front().size() != x.size() ||
        x.size() != static_cast<std::size_t>(model.input_dim())) {
        throw StaleCache("cache inconsistent with model and input");
    }
    Gradients grads = Gradients::zeros_like(model);
    const auto& y = cache.activations.back();
    const double inv_n = 1.0 / static_cast<double>(y.size());

    // delta holds dL/d(layer output) walking backward.
    std::vector<double> delta(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) delta[i] = 2.0 * (y[i] - x[i]) * inv_n;

    for (std::size_t l = model.layer_count(); l-- > 0;) {
        const auto rows = static_cast<std::size_t>(model.dims[l + 1]);
        const auto cols = static_cast<std::size_t>(model.dims[l]);
        const auto& out = cache.activations[l + 1];
        const auto& in = cache.activations[l];
        // through the activation
        for (std::size_t r = 0; r < rows; ++r) {
            delta[r] *= activate_grad(model.activations[l], out[r]);
        }
        // parameter gradients
        for (std::size_t r = 0; r < rows; ++r) {
            double* gw = &grads.weights[l][r * cols];
            for (std::size_t c = 0; c < cols; ++c) gw[c] = delta[r] * in[c];
            grads.biases[l][r] = delta[r];
        }
        if (l == 0) break;
        // propagate to the previous layer's output
        std::vector<double> prev(cols, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* w = &model.weights[l][r * cols];
            for (std::size_t c = 0; c < cols; ++c) prev[c] += w[c] * delta[r];
        }
        delta = std::move(prev);
    }
    return grads;
}

AdadeltaState AdadeltaState::zeros_like(const AutoencoderModel& model, double rho, double eps) {
    AdadeltaState s;
    s.rho = rho;
    s.eps = eps;
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        s.grad_sq_w.emplace_back(model.weights[l].size(), 0.0);
        s.grad_sq_b.emplace_back(model.biases[l].size(), 0.0);
        s.update_sq_w.emplace_back(model.weights[l].size(), 0.0);
        s.update_sq_b.emplace_back(model.biases[l].size(), 0.0);
    }
    return s;
}

namespace {

void adadelta_apply(std::span<double> params, std::span<const double> grads,
                    std::span<double> grad_sq, std::span<double> update_sq, double rho,
                    double eps) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        grad_sq[i] = rho * grad_sq[i] + (1.0 - rho) * g * g;
        const double dx = -(std::sqrt(update_sq[i] + eps) / std::sqrt(grad_sq[i] + eps)) * g;
        update_sq[i] = rho * update_sq[i] + (1.0 - rho) * dx * dx;
        params[i] += dx;
    }
}

}  // namespace

void adadelta_step(AdadeltaState& state, const Gradients& grads, AutoencoderModel& model) {
    if (state.grad_sq_w.size() != model.layer_count() ||
        grads.weights.size() != model.layer_count()) {
        throw ShapeMismatch("adadelta state/gradient shape mismatch");
    }
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        if (grads.weights[l].size() != model.weights[l].size() ||
            grads.biases[l].size() != model.biases[l].size()) {
            throw ShapeMismatch("gradient shape mismatch at layer " + std::to_string(l));
        }
        adadelta_apply(model.weights[l], grads.weights[l], state.grad_sq_w[l],
                       state.update_sq_w[l], state.rho, state.eps);
        adadelta_apply(model.biases[l], grads.biases[l], state.grad_sq_b[l],
                       state.update_sq_b[l], state.rho, state.eps);
    }
}

TrainResult train(std::span<const std::vector<double>> inputs, const TrainConfig& config) {
    if (inputs.empty()) throw EmptyCorpus("train requires inputs");
    if (config.epochs < 1) throw Error("epochs must be >= 1");
    const auto dim = static_cast<std::size_t>(config.dims.front());
    for (const auto& v : inputs) {
        if (v.size() != dim) throw DimensionMismatch("input width does not match dims");
    }

    TrainResult result;
    result.model = AutoencoderModel::init(config.dims, config.seed);
    AdadeltaState state = AdadeltaState::zeros_like(result.model, config.rho, config.eps);
    const double inv_batch = 1.0 / static_cast<double>(inputs.size());

    auto batch_loss = [&](const AutoencoderModel& m) {
        double loss = 0.0;
        for (const auto& v : inputs) loss += mse(forward(m, v).reconstruction, v);
        return loss * inv_batch;
    };

    result.loss_history.reserve(static_cast<std::size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Gradients batch = Gradients::zeros_like(result.model);
        double loss = 0.0;
        for (const auto& v : inputs) {
            ForwardResult fw = forward(result.model, v);
            loss += mse(fw.reconstruction, v);
            batch.add_scaled(backward(result.model, v, fw.cache), inv_batch);
        }
        loss *= inv_batch;
        if (!std::isfinite(loss)) {
            throw NonFiniteLoss("training diverged at epoch " + std::to_string(epoch) +
                                " (loss not finite)");
        }
        result.loss_history.push_back(loss);
        adadelta_step(state, batch, result.model);
    }
    result.final_loss = batch_loss(result.model);
    if (!std::isfinite(result.final_loss)) {
        throw NonFiniteLoss("final loss not finite");
    }
    return result;
}

void save_weights(const AutoencoderModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json rec;
    rec["format"] = "coachstyle.autoencoder";
    rec["version"] = 1;
    rec["dims"] = model.dims;
    std::vector<std::string> acts;
    for (Activation a : model.activations) acts.emplace_back(to_string(a));
    rec["activations"] = acts;
    rec["init_seed"] = model.init_seed;
    rec["weights"] = model.weights;
    rec["biases"] = model.biases;
    util::write_file(path, rec.dump() + "\n");
}

AutoencoderModel load_weights(const std::filesystem::path& path) {
    const auto rec = nlohmann::json::parse(util::read_file(path));
    if (rec.value("format", "") != "coachstyle.autoencoder") {
        throw IoError("not an autoencoder weights file: " + path.string());
    }
    AutoencoderModel model;
    model.dims = rec.at("dims").get<std::vector<int>>();
    for (const auto& a : rec.at("activations")) {
        model.activations.push_back(activation_from_string(a.get<std::string>()));
    }
    model.init_seed = rec.at("init_seed").get<std::uint64_t>();
    model.weights = rec.at("weights").get<std::vector<std::vector<double>>>();
    model.biases = rec.at("biases").get<std::vector<std::vector<double>>>();
    check_dims(model);
    return model;
}

}  // namespace coachstyle::nn
