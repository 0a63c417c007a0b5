#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace coachstyle::nn {

enum class Activation { Tanh, Identity, Sigmoid };
const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Dense autoencoder. Default shape 70-32-5-32-70: tanh hidden layers, an
// identity bottleneck, sigmoid output for inputs living in [0,1].
struct AutoencoderModel {
    std::vector<int> dims;                      // layer widths, first == last
    std::vector<std::vector<double>> weights;   // per affine layer, row-major out x in
    std::vector<std::vector<double>> biases;    // per affine layer
    std::vector<Activation> activations;        // per affine layer
    std::uint64_t init_seed = 0;

    std::size_t layer_count() const { return weights.size(); }
    // Affine layer whose output is the encoding.
    std::size_t bottleneck_layer() const { return dims.size() / 2; }
    int input_dim() const { return dims.front(); }
    int encoding_dim() const { return dims[bottleneck_layer()]; }

    // Glorot-uniform weights, zero biases, deterministic in the seed.
    static AutoencoderModel init(const std::vector<int>& dims, std::uint64_t seed);
    static std::vector<int> default_dims() { return {70, 32, 5, 32, 70}; }
};

struct ForwardCache {
    // activations[0] is the input; activations[l+1] the output of layer l.
    std::vector<std::vector<double>> activations;
};

struct ForwardResult {
    std::vector<double> reconstruction;
    std::vector<double> encoding;
    ForwardCache cache;
};

ForwardResult forward(const AutoencoderModel& model, std::span<const double> x);
std::vector<double> encode(const AutoencoderModel& model, std::span<const double> x);

double mse(std::span<const double> a, std::span<const double> b);

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static Gradients zeros_like(const AutoencoderModel& model);
    void add_scaled(const Gradients& other, double factor);
};

// Analytic gradients of MSE(x, reconstruction(x)) for every weight and bias.
Gradients backward(const AutoencoderModel& model, std::span<const double> x,
                   const ForwardCache& cache);

struct AdadeltaState {
    std::vector<std::vector<double>> grad_sq_w, grad_sq_b;      // E[g^2]
    std::vector<std::vector<double>> update_sq_w, update_sq_b;  // E[dx^2]
    double rho = 0.95;
    double eps = 1e-6;

    static AdadeltaState zeros_like(const AutoencoderModel& model, double rho, double eps);
};

// E[g^2] <- rho E[g^2] + (1-rho) g^2
// dx = -sqrt(E[dx^2]+eps)/sqrt(E[g^2]+eps) * g
// E[dx^2] <- rho E[dx^2] + (1-rho) dx^2
void adadelta_step(AdadeltaState& state, const Gradients& grads, AutoencoderModel& model);

struct TrainConfig {
    int epochs = 3000;
    double rho = 0.95;
    double eps = 1e-6;
    std::uint64_t seed = 42;
    std::vector<int> dims = AutoencoderModel::default_dims();
};

struct TrainResult {
    AutoencoderModel model;
    std::vector<double> loss_history;  // batch MSE at the start of each epoch
    double final_loss = 0.0;           // batch MSE after the last update
};

// Full-batch training: one mean gradient and one Adadelta step per epoch.
// Single-threaded and deterministic in the seed.
TrainResult train(std::span<const std::vector<double>> inputs, const TrainConfig& config);

void save_weights(const AutoencoderModel& model, const std::filesystem::path& path);
AutoencoderModel load_weights(const std::filesystem::path& path);

}  // namespace coachstyle::nn
