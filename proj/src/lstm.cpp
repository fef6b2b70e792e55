#include "imgqa/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "imgqa/error.hpp"
#include "imgqa/numerics.hpp"

namespace imgqa {

const char* const LstmCell::kGateNames[4] = {"i", "f", "o", "g"};

LstmCell::LstmCell(ParameterStore& store, std::string prefix, std::size_t input_dim,
                   std::size_t hidden_dim, Rng& init, double scale)
    : prefix_(std::move(prefix)), input_dim_(input_dim), hidden_dim_(hidden_dim) {
    if (!(scale > 0.0)) throw InputError("lstm init: scale must be positive");
    auto fill = [&](Matrix& m) {
        for (double& x : m.data) x = init.uniform(-scale, scale);
    };
    // Fixed draw order: W_vi, W_vf, W_vo, W_vg, W_hi, ..., then biases.
    for (int gate = 0; gate < 4; ++gate) {
        Matrix w(hidden_dim_, input_dim_);
        fill(w);
        store.add(prefix_ + ".W_v" + kGateNames[gate], std::move(w));
    }
    for (int gate = 0; gate < 4; ++gate) {
        Matrix w(hidden_dim_, hidden_dim_);
        fill(w);
        store.add(prefix_ + ".W_h" + kGateNames[gate], std::move(w));
    }
    for (int gate = 0; gate < 4; ++gate) {
        store.add(prefix_ + ".b_" + kGateNames[gate], Matrix(hidden_dim_, 1));
    }
    attach(store);
}

LstmCell::LstmCell(ParameterStore& store, std::string prefix, std::size_t input_dim,
                   std::size_t hidden_dim)
    : prefix_(std::move(prefix)), input_dim_(input_dim), hidden_dim_(hidden_dim) {
    attach(store);
}

void LstmCell::attach(ParameterStore& store) {
    for (int gate = 0; gate < 4; ++gate) {
        auto& wv = store.entry(prefix_ + ".W_v" + kGateNames[gate]);
        auto& wh = store.entry(prefix_ + ".W_h" + kGateNames[gate]);
        auto& b = store.entry(prefix_ + ".b_" + kGateNames[gate]);
        if (wv.value.rows != hidden_dim_ || wv.value.cols != input_dim_ ||
            wh.value.rows != hidden_dim_ || wh.value.cols != hidden_dim_ ||
            b.value.rows != hidden_dim_ || b.value.cols != 1) {
            throw ShapeError("lstm attach: parameter shapes do not match H=" +
                             std::to_string(hidden_dim_) + " D=" + std::to_string(input_dim_));
        }
        w_v_[gate] = &wv.value;
        w_h_[gate] = &wh.value;
        b_[gate] = &b.value;
        g_w_v_[gate] = &wv.grad;
        g_w_h_[gate] = &wh.grad;
        g_b_[gate] = &b.grad;
    }
}

LstmState LstmCell::initial_state() const {
    return LstmState{std::vector<double>(hidden_dim_, 0.0),
                     std::vector<double>(hidden_dim_, 0.0)};
}

LstmState LstmCell::step(const std::vector<double>& input, const LstmState& prev,
                         LstmStepCache* cache) const {
    if (input.size() != input_dim_) {
        throw ShapeError("lstm step: input length " + std::to_string(input.size()) +
                         ", expected " + std::to_string(input_dim_));
    }
    if (prev.h.size() != hidden_dim_ || prev.c.size() != hidden_dim_) {
        throw ShapeError("lstm step: state length " + std::to_string(prev.h.size()) +
                         "/" + std::to_string(prev.c.size()) + ", expected " +
                         std::to_string(hidden_dim_));
    }

    std::vector<double> pre[4];
    for (int gate = 0; gate < 4; ++gate) {
        pre[gate] = b_[gate]->data;  // H x 1 bias column
        matvec_accumulate(*w_v_[gate], input, pre[gate]);
        matvec_accumulate(*w_h_[gate], prev.h, pre[gate]);
    }
    const std::vector<double> gate_i = sigmoid(pre[0]);
    const std::vector<double> gate_f = sigmoid(pre[1]);
    const std::vector<double> gate_o = sigmoid(pre[2]);
    const std::vector<double> gate_g = tanh(pre[3]);

    LstmState next;
    next.c.resize(hidden_dim_);
    next.h.resize(hidden_dim_);
    std::vector<double> cell_tanh(hidden_dim_);
    for (std::size_t j = 0; j < hidden_dim_; ++j) {
        next.c[j] = gate_f[j] * prev.c[j] + gate_i[j] * gate_g[j];
        cell_tanh[j] = std::tanh(next.c[j]);
        next.h[j] = gate_o[j] * cell_tanh[j];
    }

    if (cache != nullptr) {
        cache->input = input;
        cache->prev_h = prev.h;
        cache->prev_c = prev.c;
        cache->gate_i = gate_i;
        cache->gate_f = gate_f;
        cache->gate_o = gate_o;
        cache->gate_g = gate_g;
        cache->cell = next.c;
        cache->cell_tanh = std::move(cell_tanh);
    }
    return next;
}

std::pair<std::vector<LstmState>, std::vector<LstmStepCache>> LstmCell::forward(
    const std::vector<std::vector<double>>& inputs, const LstmState& initial) const {
    if (inputs.empty()) throw std::domain_error("lstm forward: empty input sequence");
    std::vector<LstmState> states;
    std::vector<LstmStepCache> caches(inputs.size());
    states.reserve(inputs.size());
    LstmState current = initial;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        current = step(inputs[t], current, &caches[t]);
        states.push_back(current);
    }
    return {std::move(states), std::move(caches)};
}

std::vector<std::vector<double>> LstmCell::backward(
    const std::vector<std::vector<double>>& grad_h,
    const std::vector<LstmStepCache>& caches) const {
    if (grad_h.size() != caches.size()) {
        throw ShapeError("lstm backward: " + std::to_string(grad_h.size()) +
                         " upstream gradients vs " + std::to_string(caches.size()) +
                         " cached steps");
    }
    const std::size_t steps = caches.size();
    std::vector<std::vector<double>> grad_inputs(steps,
                                                 std::vector<double>(input_dim_, 0.0));

    std::vector<double> dh_carry(hidden_dim_, 0.0);
    std::vector<double> dc_carry(hidden_dim_, 0.0);
    std::vector<double> da[4];
    for (auto& v : da) v.resize(hidden_dim_);

    for (std::size_t t = steps; t-- > 0;) {
        const LstmStepCache& cc = caches[t];
        if (grad_h[t].size() != hidden_dim_) {
            throw ShapeError("lstm backward: upstream gradient at step " + std::to_string(t) +
                             " has length " + std::to_string(grad_h[t].size()));
        }
        for (std::size_t j = 0; j < hidden_dim_; ++j) {
            const double dh = grad_h[t][j] + dh_carry[j];
            const double i = cc.gate_i[j];
            const double f = cc.gate_f[j];
            const double o = cc.gate_o[j];
            const double g = cc.gate_g[j];
            const double tc = cc.cell_tanh[j];

            const double d_o = dh * tc;
            const double dc = dc_carry[j] + dh * o * (1.0 - tc * tc);
            const double d_i = dc * g;
            const double d_g = dc * i;
            const double d_f = dc * cc.prev_c[j];
            dc_carry[j] = dc * f;

            da[0][j] = d_i * i * (1.0 - i);
            da[1][j] = d_f * f * (1.0 - f);
            da[2][j] = d_o * o * (1.0 - o);
            da[3][j] = d_g * (1.0 - g * g);
        }
        std::fill(dh_carry.begin(), dh_carry.end(), 0.0);
        for (int gate = 0; gate < 4; ++gate) {
            add_outer(*g_w_v_[gate], da[gate], cc.input);
            add_outer(*g_w_h_[gate], da[gate], cc.prev_h);
            for (std::size_t j = 0; j < hidden_dim_; ++j) g_b_[gate]->data[j] += da[gate][j];
            matvec_transpose_accumulate(*w_v_[gate], da[gate], grad_inputs[t]);
            matvec_transpose_accumulate(*w_h_[gate], da[gate], dh_carry);
        }
    }
    return grad_inputs;
}

}  // namespace imgqa
