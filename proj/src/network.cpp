#include "uagan/network.hpp"

#include <cmath>
#include <string>

#include "uagan/errors.hpp"
#include "uagan/rng.hpp"
#include "uagan/simd/kernels.hpp"

namespace uagan {

const char* to_string(Activation a) noexcept {
    switch (a) {
        case Activation::linear: return "linear";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
    }
    return "unknown";
}

Activation activation_from_code(std::uint8_t code) {
    if (code > static_cast<std::uint8_t>(Activation::sigmoid)) {
        throw FormatError(FormatErrorCode::malformed, "unknown activation code " + std::to_string(code));
    }
    return static_cast<Activation>(code);
}

NetSpec mlp_spec(std::size_t in_dim, std::span<const std::size_t> hidden, std::size_t out_dim,
                 Activation hidden_act, Activation output_act) {
    NetSpec spec;
    std::size_t prev = in_dim;
    for (std::size_t width : hidden) {
        spec.push_back({prev, width, hidden_act});
        prev = width;
    }
    spec.push_back({prev, out_dim, output_act});
    return spec;
}

void validate_spec(const NetSpec& spec) {
    if (spec.empty()) throw ConfigError("network needs at least one layer");
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (spec[k].in == 0 || spec[k].out == 0) {
            throw ConfigError("layer " + std::to_string(k) + " has a zero dimension");
        }
        if (k > 0 && spec[k - 1].out != spec[k].in) {
            throw ConfigError("layer " + std::to_string(k) + " input " + std::to_string(spec[k].in) +
                              " does not chain with previous output " + std::to_string(spec[k - 1].out));
        }
    }
}

Network::Network(const NetSpec& spec) {
    validate_spec(spec);
    layers.reserve(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const auto& s = spec[k];
        Layer layer;
        layer.weight = ParamTensor("layer" + std::to_string(k) + ".weight", Shape{s.out, s.in, false});
        layer.bias = ParamTensor("layer" + std::to_string(k) + ".bias", Shape{s.out, 1, true});
        layer.activation = s.activation;
        layers.push_back(std::move(layer));
    }
}

std::size_t Network::in_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
std::size_t Network::out_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

NetSpec Network::spec() const {
    NetSpec s;
    for (const auto& l : layers) s.push_back({l.in_dim(), l.out_dim(), l.activation});
    return s;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
}

std::vector<ParamTensor*> Network::parameters() {
    std::vector<ParamTensor*> out;
    for (auto& l : layers) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

std::vector<const ParamTensor*> Network::parameters() const {
    std::vector<const ParamTensor*> out;
    for (const auto& l : layers) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

void Network::zero_grad() {
    for (auto* p : parameters()) std::fill(p->grad.begin(), p->grad.end(), 0.0);
}

Network init_params(const NetSpec& spec, std::uint64_t seed) {
    Network net(spec);
    Rng rng(seed);
    for (auto& layer : net.layers) {
        const double s = std::sqrt(6.0 / static_cast<double>(layer.in_dim() + layer.out_dim()));
        for (double& w : layer.weight.values) w = rng.uniform(-s, s);
    }
    return net;
}

namespace {

double activate(Activation a, double z) {
    switch (a) {
        case Activation::linear: return z;
        case Activation::leaky_relu: return z > 0.0 ? z : kLeakySlope * z;
        case Activation::tanh: return std::tanh(z);
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    }
    return z;
}

// Derivative expressed through the activation output y.
double activation_slope(Activation a, double y) {
    switch (a) {
        case Activation::linear: return 1.0;
        case Activation::leaky_relu: return y > 0.0 ? 1.0 : kLeakySlope;
        case Activation::tanh: return 1.0 - y * y;
        case Activation::sigmoid: return y * (1.0 - y);
    }
    return 1.0;
}

void check_tape(const Network& net, const Tape& tape, const Matrix& upstream) {
    if (tape.empty()) throw StateError("backward called without a recorded forward pass");
    if (tape.inputs.size() != net.layers.size() + 1) {
        throw StateError("tape does not belong to this network (layer count differs)");
    }
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        if (tape.inputs[k].cols != net.layers[k].in_dim()) {
            throw StateError("tape does not belong to this network (layer " + std::to_string(k) + ")");
        }
    }
    const Matrix& out = tape.output();
    if (upstream.rows != out.rows || upstream.cols != out.cols) {
        throw ConfigError("upstream gradient shape " + std::to_string(upstream.rows) + "x" +
                          std::to_string(upstream.cols) + " does not match output " +
                          std::to_string(out.rows) + "x" + std::to_string(out.cols));
    }
}

Matrix run_backward(const Network& net, const Tape& tape, const Matrix& upstream, Network* grads_into) {
    const auto& k = simd::active();
    Matrix delta = upstream;
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const Layer& layer = net.layers[li];
        const Matrix& x = tape.inputs[li];
        const Matrix& y = tape.inputs[li + 1];
        const std::size_t n = x.rows;
        const std::size_t in = layer.in_dim();
        const std::size_t out = layer.out_dim();

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t o = 0; o < out; ++o) delta(i, o) *= activation_slope(layer.activation, y(i, o));
        }

        if (grads_into != nullptr) {
            Layer& target = grads_into->layers[li];
            std::fill(target.weight.grad.begin(), target.weight.grad.end(), 0.0);
            std::fill(target.bias.grad.begin(), target.bias.grad.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double* xi = x.data.data() + i * in;
                for (std::size_t o = 0; o < out; ++o) {
                    const double d = delta(i, o);
                    k.axpy(d, xi, target.weight.grad.data() + o * in, in);
                    target.bias.grad[o] += d;
                }
            }
        }

        Matrix dx(n, in);
        for (std::size_t i = 0; i < n; ++i) {
            double* dxi = dx.data.data() + i * in;
            for (std::size_t o = 0; o < out; ++o) {
                k.axpy(delta(i, o), layer.weight.values.data() + o * in, dxi, in);
            }
        }
        delta = std::move(dx);
    }
    return delta;
}

}  // namespace

Matrix forward(const Network& net, const Matrix& x, Tape* tape) {
    if (net.layers.empty()) throw ConfigError("forward on an empty network");
    if (x.cols != net.in_dim()) {
        throw ConfigError("input has " + std::to_string(x.cols) + " columns, network expects " +
                          std::to_string(net.in_dim()));
    }
    for (double v : x.data) {
        if (!std::isfinite(v)) throw NumericError("non-finite value in forward input");
    }
    const auto& k = simd::active();
    if (tape != nullptr) {
        tape->inputs.clear();
        tape->inputs.reserve(net.layers.size() + 1);
        tape->inputs.push_back(x);
    }
    Matrix cur = x;
    for (const auto& layer : net.layers) {
        const std::size_t in = layer.in_dim();
        const std::size_t out = layer.out_dim();
        Matrix next(cur.rows, out);
        for (std::size_t i = 0; i < cur.rows; ++i) {
            const double* xi = cur.data.data() + i * in;
            for (std::size_t o = 0; o < out; ++o) {
                const double z = layer.bias.values[o] + k.dot(layer.weight.values.data() + o * in, xi, in);
                next(i, o) = activate(layer.activation, z);
            }
        }
        if (tape != nullptr) tape->inputs.push_back(next);
        cur = std::move(next);
    }
    return cur;
}

Matrix backward(Network& net, const Tape& tape, const Matrix& upstream) {
    if (net.frozen) throw InvariantViolation("attempted to write gradients of a frozen network");
    check_tape(net, tape, upstream);
    return run_backward(net, tape, upstream, &net);
}

Matrix input_gradient(const Network& net, const Tape& tape, const Matrix& upstream) {
    check_tape(net, tape, upstream);
    return run_backward(net, tape, upstream, nullptr);
}

}  // namespace uagan
