#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace imgqa {

// Seeded generator with explicit output mappings. std::shuffle and the
// std distributions are implementation-defined, so every draw here is
// spelled out to keep runs reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [lo, hi) built from the top 53 bits.
    double uniform(double lo, double hi) {
        const double unit = static_cast<double>(gen_() >> 11) * 0x1p-53;
        return lo + (hi - lo) * unit;
    }

    // Uniform integer in [0, n). Modulo bias is irrelevant at our scales
    // and keeps the draw count per call fixed.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        // Fisher-Yates with our own index draw.
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Weighted pick: index i with probability weights[i] / sum(weights).
    std::size_t pick_weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        const double r = uniform(0.0, total);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (r < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace imgqa
