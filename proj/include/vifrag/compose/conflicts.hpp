#pragma once

#include <string>
#include <vector>

#include "vifrag/core/types.hpp"
#include "vifrag/util/strings.hpp"

namespace vifrag::compose {

struct Conflict {
    std::string spec_a;
    std::string spec_b;
    std::string reason;
};

inline std::vector<std::string> all_param_strings(const core::AtomicInstructionInstance& inst) {
    std::vector<std::string> out;
    for (const auto& [key, value] : inst.params) {
        if (std::holds_alternative<std::string>(value)) {
            out.push_back(std::get<std::string>(value));
        } else if (std::holds_alternative<std::vector<std::string>>(value)) {
            for (const auto& s : std::get<std::vector<std::string>>(value)) out.push_back(s);
        }
    }
    return out;
}

inline bool param_strings_contain_comma(const core::AtomicInstructionInstance& inst) {
    for (const auto& s : all_param_strings(inst))
        if (s.find(',') != std::string::npos || s.find("\xEF\xBC\x8C") != std::string::npos)
            return true;
    return false;
}

namespace detail {

inline std::vector<std::string> instance_keywords(const core::AtomicInstructionInstance& inst) {
    std::vector<std::string> out;
    if (inst.spec_id == "keywords:inclusion" || inst.spec_id == "keywords:exclusion") {
        for (const auto& kw : core::param_string_list(inst.params, "keywords"))
            out.push_back(util::lower_ascii(kw));
    } else if (inst.spec_id == "keywords:frequency") {
        out.push_back(util::lower_ascii(core::param_string(inst.params, "keyword")));
    }
    return out;
}

/// Frequency instances that force the keyword to appear at least once.
inline bool frequency_forces_presence(const core::AtomicInstructionInstance& inst) {
    if (inst.spec_id != "keywords:frequency") return false;
    core::Relation r = core::param_relation(inst.params);
    int64_t n = core::param_int(inst.params, "n");
    return (r == core::Relation::AtLeast || r == core::Relation::Exactly) && n >= 1;
}

/// Contradictory (relation, n) pairs over the same counted quantity.
inline bool counts_contradict(core::Relation ra, int64_t na, core::Relation rb, int64_t nb) {
    using R = core::Relation;
    if (ra == R::AtMost && rb == R::AtLeast) return nb > na;
    if (ra == R::AtLeast && rb == R::AtMost) return na > nb;
    if (ra == R::Exactly && rb == R::Exactly) return na != nb;
    if (ra == R::Exactly && rb == R::AtLeast) return nb > na;
    if (ra == R::AtLeast && rb == R::Exactly) return na > nb;
    if (ra == R::Exactly && rb == R::AtMost) return na > nb;
    if (ra == R::AtMost && rb == R::Exactly) return nb > na;
    return false;
}

inline bool pair_conflicts(const core::AtomicInstructionInstance& a,
                           const core::AtomicInstructionInstance& b, std::string& reason) {
    auto is_pair = [&](const char* x, const char* y) {
        return (a.spec_id == x && b.spec_id == y) || (a.spec_id == y && b.spec_id == x);
    };

    if (is_pair("cases:uppercase", "cases:lowercase")) {
        reason = "uppercase and lowercase are mutually exclusive";
        return true;
    }
    if (is_pair("format:json", "format:quotation")) {
        reason = "a JSON value cannot also be wrapped in bare double quotes";
        return true;
    }
    if (a.spec_id == "format:no_commas" || b.spec_id == "format:no_commas") {
        const auto& other = (a.spec_id == "format:no_commas") ? b : a;
        if (param_strings_contain_comma(other)) {
            reason = "no_commas conflicts with a parameter string containing a comma";
            return true;
        }
    }

    // exclusion k vs anything that forces k to appear
    for (int dir = 0; dir < 2; ++dir) {
        const auto& excl = dir == 0 ? a : b;
        const auto& incl = dir == 0 ? b : a;
        if (excl.spec_id != "keywords:exclusion") continue;
        bool forces = incl.spec_id == "keywords:inclusion" || frequency_forces_presence(incl);
        if (!forces) continue;
        for (const auto& ek : instance_keywords(excl)) {
            for (const auto& ik : instance_keywords(incl)) {
                if (ek == ik) {
                    reason = "keyword \"" + ek + "\" is both excluded and required";
                    return true;
                }
            }
        }
    }

    // same counted spec with unsatisfiable (relation, n) pair
    if (a.spec_id == b.spec_id && core::spec_is_counted(core::spec_by_id(a.spec_id))) {
        core::Relation ra = core::param_relation(a.params);
        core::Relation rb = core::param_relation(b.params);
        int64_t na = core::param_int(a.params, "n");
        int64_t nb = core::param_int(b.params, "n");
        if (counts_contradict(ra, na, rb, nb)) {
            reason = a.spec_id + " count constraints are unsatisfiable together";
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// All pairwise rule hits among `instances`. Rules are symmetric:
/// rule(a,b) == rule(b,a) by construction.
inline std::vector<Conflict> static_conflict_check(
    const std::vector<core::AtomicInstructionInstance>& instances) {
    std::vector<Conflict> conflicts;
    for (size_t i = 0; i < instances.size(); ++i) {
        for (size_t j = i + 1; j < instances.size(); ++j) {
            std::string reason;
            if (detail::pair_conflicts(instances[i], instances[j], reason)) {
                conflicts.push_back({instances[i].spec_id, instances[j].spec_id, reason});
            }
        }
    }
    return conflicts;
}

}  // namespace vifrag::compose
