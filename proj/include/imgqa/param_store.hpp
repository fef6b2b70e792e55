#pragma once

#include <map>
#include <string>
#include <vector>

#include "imgqa/matrix.hpp"

namespace imgqa {

/// Named trainable parameters, each paired with a gradient buffer of the
/// same shape. The map is node-based, so references stay valid while new
/// entries are added. Iteration is always in name order, which fixes the
/// summation order of global reductions.
class ParameterStore {
public:
    struct Entry {
        Matrix value;
        Matrix grad;
    };

    /// Registers a parameter and returns its entry. Throws InputError on a
    /// duplicate name.
    Entry& add(const std::string& name, Matrix initial);

    Entry& entry(const std::string& name);
    const Entry& entry(const std::string& name) const;
    bool contains(const std::string& name) const;

    std::size_t parameter_count() const;  // total scalar entries
    std::vector<std::string> names() const;

    void zero_grads();

    /// L2 norm over all gradient buffers, accumulated in name order.
    double grad_norm() const;
    void scale_grads(double factor);

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, Entry> entries_;
};

}  // namespace imgqa
