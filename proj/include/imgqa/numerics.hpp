#pragma once

#include <cstddef>
#include <vector>

namespace imgqa {

/// Elementwise logistic function, 1 / (1 + exp(-v)).
std::vector<double> sigmoid(const std::vector<double>& v);

/// Elementwise hyperbolic tangent. Satisfies tanh(v) = 2*sigmoid(2v) - 1.
std::vector<double> tanh(const std::vector<double>& v);

/// Probability vector from logits, computed with max-subtraction. The shift
/// does not change the result and keeps exp() away from overflow.
/// Throws std::domain_error on an empty input.
std::vector<double> softmax(const std::vector<double>& logits);

/// Mean of -ln p(target) over positions with mask = 1. Positions with
/// mask = 0 contribute nothing. Throws ShapeError when the three sequences
/// disagree in length and std::domain_error when the mask is all zero or a
/// target index is out of range.
double cross_entropy_masked(const std::vector<std::vector<double>>& probabilities,
                            const std::vector<std::size_t>& targets,
                            const std::vector<int>& mask);

}  // namespace imgqa
