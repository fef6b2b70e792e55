#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "imgqa/param_store.hpp"
#include "imgqa/rng.hpp"

namespace imgqa {

struct LstmState {
    std::vector<double> h;  // hidden state
    std::vector<double> c;  // memory cell
};

/// Everything the backward pass needs from one forward step.
struct LstmStepCache {
    std::vector<double> input;
    std::vector<double> prev_h;
    std::vector<double> prev_c;
    std::vector<double> gate_i;
    std::vector<double> gate_f;
    std::vector<double> gate_o;
    std::vector<double> gate_g;
    std::vector<double> cell;       // c_t before the output tanh
    std::vector<double> cell_tanh;  // tanh(c_t)
};

/// Single-layer LSTM. Four input weight matrices (H x D), four recurrent
/// weight matrices (H x H) and four bias vectors live in the given
/// ParameterStore under "<prefix>.W_vi", "<prefix>.W_hi", "<prefix>.b_i"
/// and so on; the cell keeps pointers into the store.
///
/// Update rule per step, with sigmoid gates and tanh modulation:
///   i = sigmoid(W_vi v + W_hi h_prev + b_i)
///   f = sigmoid(W_vf v + W_hf h_prev + b_f)
///   o = sigmoid(W_vo v + W_ho h_prev + b_o)
///   g = tanh   (W_vg v + W_hg h_prev + b_g)
///   c = f * c_prev + i * g
///   h = o * tanh(c)
class LstmCell {
public:
    /// Registers fresh parameters: weights uniform in [-scale, scale] drawn
    /// in a fixed order from the given generator, biases exactly zero.
    LstmCell(ParameterStore& store, std::string prefix, std::size_t input_dim,
             std::size_t hidden_dim, Rng& init, double scale);

    /// Attaches to parameters already present in the store (checkpoint
    /// load). Shapes are validated.
    LstmCell(ParameterStore& store, std::string prefix, std::size_t input_dim,
             std::size_t hidden_dim);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t hidden_dim() const { return hidden_dim_; }
    const std::string& prefix() const { return prefix_; }

    LstmState initial_state() const;  // h = c = 0

    /// One step of the recurrence. Throws ShapeError on a dimension
    /// mismatch. cache may be null when no backward pass will follow.
    LstmState step(const std::vector<double>& input, const LstmState& prev,
                   LstmStepCache* cache) const;

    /// Runs the recurrence over a whole sequence starting from `initial`.
    /// Throws std::domain_error on an empty sequence.
    std::pair<std::vector<LstmState>, std::vector<LstmStepCache>> forward(
        const std::vector<std::vector<double>>& inputs, const LstmState& initial) const;

    /// Reverse-mode gradients of the recurrence. grad_h[t] is dLoss/dh_t
    /// from outside the recurrence (one entry per forward step). Parameter
    /// gradients are accumulated into the store's buffers; the return value
    /// is dLoss/dinput_t per step. Throws ShapeError when grad_h and caches
    /// disagree in length.
    std::vector<std::vector<double>> backward(
        const std::vector<std::vector<double>>& grad_h,
        const std::vector<LstmStepCache>& caches) const;

    static const char* const kGateNames[4];  // "i", "f", "o", "g"

private:
    void attach(ParameterStore& store);

    std::string prefix_;
    std::size_t input_dim_ = 0;
    std::size_t hidden_dim_ = 0;

    // Pointers into the owning ParameterStore, indexed by gate (i, f, o, g).
    Matrix* w_v_[4] = {};
    Matrix* w_h_[4] = {};
    Matrix* b_[4] = {};
    Matrix* g_w_v_[4] = {};
    Matrix* g_w_h_[4] = {};
    Matrix* g_b_[4] = {};
};

}  // namespace imgqa
