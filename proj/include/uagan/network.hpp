#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uagan/matrix.hpp"

namespace uagan {

enum class Activation : std::uint8_t {
    linear = 0,
    leaky_relu = 1,  // slope 0.2 below zero
    tanh = 2,
    sigmoid = 3,
};

inline constexpr double kLeakySlope = 0.2;

const char* to_string(Activation a) noexcept;
// Throws FormatError(malformed) for codes outside the enum.
Activation activation_from_code(std::uint8_t code);

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 1;
    bool is_vector = false;

    [[nodiscard]] std::size_t size() const noexcept { return rows * cols; }
    bool operator==(const Shape&) const = default;
};

// Named parameter array with a gradient buffer of identical shape.
struct ParamTensor {
    std::string name;
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;

    ParamTensor() = default;
    ParamTensor(std::string n, Shape s)
        : name(std::move(n)), shape(s), values(s.size(), 0.0), grad(s.size(), 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

struct Layer {
    ParamTensor weight;  // out x in, row-major
    ParamTensor bias;    // out
    Activation activation = Activation::linear;

    [[nodiscard]] std::size_t in_dim() const noexcept { return weight.shape.cols; }
    [[nodiscard]] std::size_t out_dim() const noexcept { return weight.shape.rows; }
};

struct LayerSpec {
    std::size_t in = 0;
    std::size_t out = 0;
    Activation activation = Activation::linear;

    bool operator==(const LayerSpec&) const = default;
};

using NetSpec = std::vector<LayerSpec>;

// Chains in_dim -> hidden... -> out_dim; hidden layers use `hidden`, the last
// layer uses `output`.
NetSpec mlp_spec(std::size_t in_dim, std::span<const std::size_t> hidden, std::size_t out_dim,
                 Activation hidden_act, Activation output_act);

class Network {
public:
    Network() = default;
    // Zero-valued parameters; throws ConfigError on zero-sized or unchained layers.
    explicit Network(const NetSpec& spec);

    std::vector<Layer> layers;
    // A frozen network rejects parameter-gradient writes and optimizer steps.
    bool frozen = false;

    [[nodiscard]] std::size_t in_dim() const;
    [[nodiscard]] std::size_t out_dim() const;
    [[nodiscard]] NetSpec spec() const;
    [[nodiscard]] std::size_t parameter_count() const;

    // Weights then bias for each layer, in layer order.
    std::vector<ParamTensor*> parameters();
    std::vector<const ParamTensor*> parameters() const;

    void zero_grad();
};

void validate_spec(const NetSpec& spec);

// Glorot-uniform weights in [-s, s), s = sqrt(6 / (in + out)); zero biases.
Network init_params(const NetSpec& spec, std::uint64_t seed);

// Intermediate activations of one forward pass: inputs[k] is the input to
// layer k, and inputs.back() is the network output.
struct Tape {
    std::vector<Matrix> inputs;

    [[nodiscard]] bool empty() const noexcept { return inputs.empty(); }
    [[nodiscard]] const Matrix& output() const { return inputs.back(); }
};

// Pure with respect to `net`; safe to call concurrently on a shared network.
// Throws ConfigError on a dimension mismatch, NumericError on non-finite input.
Matrix forward(const Network& net, const Matrix& x, Tape* tape = nullptr);

// Overwrites every parameter gradient with d(loss)/d(param) summed over the
// batch and returns d(loss)/d(input). `upstream` is d(loss)/d(output).
// Throws StateError if `tape` is empty or does not belong to `net`, and
// InvariantViolation if `net` is frozen.
Matrix backward(Network& net, const Tape& tape, const Matrix& upstream);

// Input gradient only; parameter gradients are left untouched.
Matrix input_gradient(const Network& net, const Tape& tape, const Matrix& upstream);

}  // namespace uagan
