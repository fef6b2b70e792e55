#include "imgqa/param_store.hpp"

#include <cmath>

#include "imgqa/error.hpp"

namespace imgqa {

ParameterStore::Entry& ParameterStore::add(const std::string& name, Matrix initial) {
    auto [it, inserted] = entries_.try_emplace(name);
    if (!inserted) throw InputError("parameter already registered: " + name);
    Entry& e = it->second;
    e.grad = Matrix(initial.rows, initial.cols);
    e.value = std::move(initial);
    return e;
}

ParameterStore::Entry& ParameterStore::entry(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw InputError("unknown parameter: " + name);
    return it->second;
}

const ParameterStore::Entry& ParameterStore::entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw InputError("unknown parameter: " + name);
    return it->second;
}

bool ParameterStore::contains(const std::string& name) const {
    return entries_.count(name) != 0;
}

std::size_t ParameterStore::parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, e] : entries_) n += e.value.size();
    return n;
}

std::vector<std::string> ParameterStore::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
}

void ParameterStore::zero_grads() {
    for (auto& [name, e] : entries_)
        std::fill(e.grad.data.begin(), e.grad.data.end(), 0.0);
}

double ParameterStore::grad_norm() const {
    double sq = 0.0;
    for (const auto& [name, e] : entries_)
        for (double g : e.grad.data) sq += g * g;
    return std::sqrt(sq);
}

void ParameterStore::scale_grads(double factor) {
    for (auto& [name, e] : entries_)
        for (double& g : e.grad.data) g *= factor;
}

}  // namespace imgqa
