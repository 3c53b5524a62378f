#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace vifrag::util {

/// Deterministic RNG used everywhere randomness is needed. mt19937_64's raw
/// output sequence is fixed by the standard, and the bounded draw below uses
/// rejection sampling instead of std::uniform_int_distribution (whose mapping
/// is implementation-defined), so seeded runs reproduce across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    /// Uniform draw in [0, n). n must be > 0.
    uint64_t bounded(uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::bounded: n must be > 0");
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Derives an independent stream for a named sub-task.
    Rng fork(uint64_t stream_id) {
        uint64_t s = engine_() ^ (stream_id * 0x9E3779B97F4A7C15ull);
        return Rng(s);
    }

private:
    std::mt19937_64 engine_;
};

/// k distinct indices from [0, n), order of selection preserved.
inline std::vector<size_t> sample_indices(Rng& rng, size_t n, size_t k) {
    if (k > n) throw std::invalid_argument("sample_indices: k > n");
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<size_t> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(rng.bounded(n - i));
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.bounded(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace vifrag::util
