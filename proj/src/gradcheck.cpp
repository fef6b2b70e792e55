#include "imgqa/gradcheck.hpp"

#include <cmath>

#include "imgqa/error.hpp"

namespace imgqa {

GradCheckReport finite_difference_check(const std::function<double()>& loss_fn,
                                        ParameterStore& store, double epsilon,
                                        double tolerance) {
    if (!(epsilon > 0.0)) {
        throw OracleError("finite_difference_check: epsilon must be positive, got " +
                          std::to_string(epsilon));
    }
    const double base_a = loss_fn();
    const double base_b = loss_fn();
    if (base_a != base_b) {
        throw OracleError("finite_difference_check: loss_fn is not deterministic (" +
                          std::to_string(base_a) + " vs " + std::to_string(base_b) + ")");
    }

    GradCheckReport report;
    report.epsilon = epsilon;
    report.tolerance = tolerance;

    for (auto& [name, entry] : store) {
        GradCheckParameterReport param;
        param.name = name;
        for (std::size_t i = 0; i < entry.value.data.size(); ++i) {
            const double saved = entry.value.data[i];
            entry.value.data[i] = saved + epsilon;
            const double up = loss_fn();
            entry.value.data[i] = saved - epsilon;
            const double down = loss_fn();
            entry.value.data[i] = saved;

            const double numeric = (up - down) / (2.0 * epsilon);
            const double analytic = entry.grad.data[i];
            const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1.0});
            const double rel = std::fabs(analytic - numeric) / scale;
            if (rel >= param.max_rel_error) {
                param.max_rel_error = rel;
                param.worst_index = i;
                param.analytic_at_worst = analytic;
                param.numeric_at_worst = numeric;
            }
        }
        if (param.max_rel_error >= report.max_rel_error) {
            report.max_rel_error = param.max_rel_error;
            report.worst_parameter = name;
        }
        report.per_parameter.push_back(std::move(param));
    }

    report.passed = report.max_rel_error < tolerance;
    return report;
}

}  // namespace imgqa
