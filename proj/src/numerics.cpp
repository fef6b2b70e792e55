#include "imgqa/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "imgqa/error.hpp"

namespace imgqa {

std::vector<double> sigmoid(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-v[i]));
    return out;
}

std::vector<double> tanh(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw std::domain_error("softmax: empty input");
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        total += out[i];
    }
    for (double& p : out) p /= total;
    return out;
}

double cross_entropy_masked(const std::vector<std::vector<double>>& probabilities,
                            const std::vector<std::size_t>& targets,
                            const std::vector<int>& mask) {
    if (probabilities.size() != targets.size() || probabilities.size() != mask.size()) {
        throw ShapeError("cross_entropy_masked: lengths disagree: " +
                         std::to_string(probabilities.size()) + " probabilities, " +
                         std::to_string(targets.size()) + " targets, " +
                         std::to_string(mask.size()) + " mask entries");
    }
    double total = 0.0;
    std::size_t supervised = 0;
    for (std::size_t t = 0; t < probabilities.size(); ++t) {
        if (mask[t] == 0) continue;
        if (targets[t] >= probabilities[t].size()) {
            throw std::domain_error("cross_entropy_masked: target index " +
                                    std::to_string(targets[t]) + " out of range at position " +
                                    std::to_string(t));
        }
        total += -std::log(probabilities[t][targets[t]]);
        ++supervised;
    }
    if (supervised == 0)
        throw std::domain_error("cross_entropy_masked: mask selects no positions");
    return total / static_cast<double>(supervised);
}

}  // namespace imgqa
