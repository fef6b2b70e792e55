#pragma once

#include <functional>
#include <string>
#include <vector>

#include "imgqa/param_store.hpp"

namespace imgqa {

struct GradCheckParameterReport {
    std::string name;
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckParameterReport> per_parameter;
    double max_rel_error = 0.0;
    std::string worst_parameter;
    double epsilon = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Central-difference gradient oracle. For every scalar entry w of every
/// parameter, compares (L(w+eps) - L(w-eps)) / (2 eps) against the analytic
/// gradient already present in the store's gradient buffers. The relative
/// error is |analytic - numeric| / max(|analytic|, |numeric|, 1), so the
/// check is relative for O(1) gradients and absolute near zero, where
/// finite differences carry roundoff noise.
///
/// loss_fn must be a deterministic, pure function of the store's values;
/// the oracle evaluates it twice at the unperturbed point and throws
/// OracleError when the results differ bitwise. epsilon <= 0 is also an
/// OracleError.
GradCheckReport finite_difference_check(const std::function<double()>& loss_fn,
                                        ParameterStore& store, double epsilon,
                                        double tolerance);

}  // namespace imgqa
