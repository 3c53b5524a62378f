#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "vifrag/util/strings.hpp"

namespace vifrag::retrieval {

/// Query/passage encoder interface. Implementations must be deterministic
/// per input text for reproducible retrieval.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual size_t dim() const = 0;
    virtual std::vector<float> embed_query(const std::string& text) const = 0;
    virtual std::vector<float> embed_passage(const std::string& text) const = 0;
};

/// Feature-hashed bag of words with L2 normalization: tokens are lowercased
/// alnum runs, each token lands in bucket fnv1a64(token) % dim with a sign
/// from the hash's high bit. No model weights, fully deterministic; meant for
/// tests and desk-scale runs.
class HashedEmbedder : public Embedder {
public:
    explicit HashedEmbedder(size_t dim = 256) : dim_(dim) {}

    size_t dim() const override { return dim_; }

    std::vector<float> embed_query(const std::string& text) const override {
        return embed(text);
    }
    std::vector<float> embed_passage(const std::string& text) const override {
        return embed(text);
    }

private:
    std::vector<float> embed(const std::string& text) const {
        std::vector<double> acc(dim_, 0.0);
        std::string token;
        auto flush = [&] {
            if (token.empty()) return;
            uint64_t h = util::fnv1a64(token);
            size_t bucket = static_cast<size_t>(h % dim_);
            double sign = (h >> 63) ? -1.0 : 1.0;
            acc[bucket] += sign;
            token.clear();
        };
        for (char c : text) {
            if (util::is_ascii_alpha(c) || util::is_ascii_digit(c)) {
                token += util::to_lower(c);
            } else {
                flush();
            }
        }
        flush();

        double norm = 0.0;
        for (double v : acc) norm += v * v;
        norm = std::sqrt(norm);
        std::vector<float> out(dim_, 0.0f);
        if (norm > 0.0) {
            for (size_t i = 0; i < dim_; ++i)
                out[i] = static_cast<float>(acc[i] / norm);
        }
        return out;
    }

    size_t dim_;
};

inline double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace vifrag::retrieval
