#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "vifrag/compose/conflicts.hpp"
#include "vifrag/compose/templates.hpp"
#include "vifrag/core/types.hpp"
#include "vifrag/util/rng.hpp"

namespace vifrag::compose {

class PoolTooSmallError : public std::runtime_error {
public:
    PoolTooSmallError(size_t pool, size_t needed)
        : std::runtime_error("instruction pool of " + std::to_string(pool) +
                             " is too small for arity " + std::to_string(needed)) {}
};

class ComposeExhaustedError : public std::runtime_error {
public:
    explicit ComposeExhaustedError(int attempts)
        : std::runtime_error("no conflict-free combination found after " +
                             std::to_string(attempts) + " attempts") {}
};

struct ComposerOptions {
    std::vector<CompositionTemplate> templates = builtin_templates();
    int max_conflict_redraws = 20;
};

namespace detail {

inline core::ComposedInstruction compose_draw(const std::vector<core::ComposedInstruction>& pool,
                                              core::ComposeMode mode, size_t arity,
                                              util::Rng& rng, const ComposerOptions& opts) {
    if (pool.size() < arity) throw PoolTooSmallError(pool.size(), arity);

    for (int attempt = 0; attempt < std::max(1, opts.max_conflict_redraws); ++attempt) {
        auto indices = util::sample_indices(rng, pool.size(), arity);

        std::vector<core::AtomicInstructionInstance> parts;
        std::vector<std::string> slot_texts;
        std::vector<std::string> families;
        std::vector<std::string> source_ids;
        for (size_t idx : indices) {
            const auto& src = pool[idx];
            slot_texts.push_back(src.text);
            for (const auto& p : src.parts) parts.push_back(p);
            for (const auto& f : src.families)
                if (std::find(families.begin(), families.end(), f) == families.end())
                    families.push_back(f);
            source_ids.push_back(src.id);
        }

        if (!static_conflict_check(parts).empty()) continue;

        core::ComposedInstruction out;
        out.mode = mode;
        out.parts = std::move(parts);
        out.text = render_template(select_template(opts.templates, mode, arity), slot_texts);
        out.provenance = core::Provenance::Composed;
        out.families = std::move(families);
        out.source_ids = std::move(source_ids);
        return out;
    }
    throw ComposeExhaustedError(opts.max_conflict_redraws);
}

}  // namespace detail

/// Draws `arity` (2 or 3) distinct pool entries without replacement and
/// renders them through a multiple-constraint template. Statically
/// conflicting draws are re-drawn up to opts.max_conflict_redraws times.
/// Deterministic for a fixed (pool, rng state).
inline core::ComposedInstruction compose_multiple(
    const std::vector<core::ComposedInstruction>& pool, size_t arity, util::Rng& rng,
    const ComposerOptions& opts = {}) {
    if (arity != 2 && arity != 3)
        throw std::invalid_argument("multiple-constraint arity must be 2 or 3");
    return detail::compose_draw(pool, core::ComposeMode::Multiple, arity, rng, opts);
}

/// Sequential-conditional chain of n >= 2 tasks; part order matches the
/// rendering order.
inline core::ComposedInstruction compose_chain(const std::vector<core::ComposedInstruction>& pool,
                                               size_t n, util::Rng& rng,
                                               const ComposerOptions& opts = {}) {
    if (n < 2) throw std::invalid_argument("chain needs n >= 2 tasks");
    return detail::compose_draw(pool, core::ComposeMode::Chain, n, rng, opts);
}

}  // namespace vifrag::compose
