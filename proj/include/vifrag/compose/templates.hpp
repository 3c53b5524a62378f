#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vifrag/core/types.hpp"
#include "vifrag/util/strings.hpp"

namespace vifrag::compose {

/// A constraint template with numbered slots `{1}`, `{2}`, ... Arity equals
/// the highest slot number; rendering fills slot i with part i's text.
struct CompositionTemplate {
    core::ComposeMode mode = core::ComposeMode::Multiple;
    std::string pattern;
    size_t arity = 0;
};

inline size_t pattern_arity(const std::string& pattern) {
    size_t arity = 0;
    for (size_t slot = 1; slot <= 16; ++slot) {
        if (pattern.find("{" + std::to_string(slot) + "}") != std::string::npos) arity = slot;
    }
    return arity;
}

inline CompositionTemplate make_template(core::ComposeMode mode, std::string pattern) {
    CompositionTemplate t;
    t.mode = mode;
    t.arity = pattern_arity(pattern);
    t.pattern = std::move(pattern);
    if (t.arity < 2) throw std::invalid_argument("composition template needs >= 2 slots");
    return t;
}

inline std::string render_template(const CompositionTemplate& t,
                                   const std::vector<std::string>& slot_texts) {
    if (slot_texts.size() != t.arity)
        throw std::invalid_argument("template arity mismatch: expected " +
                                    std::to_string(t.arity) + " slots");
    std::string out = t.pattern;
    for (size_t i = 0; i < slot_texts.size(); ++i) {
        out = util::replace_all(std::move(out), "{" + std::to_string(i + 1) + "}",
                                slot_texts[i]);
    }
    return out;
}

inline std::vector<CompositionTemplate> builtin_templates() {
    std::vector<CompositionTemplate> t;
    t.push_back(make_template(core::ComposeMode::Multiple, "{1} In addition, {2}"));
    t.push_back(make_template(core::ComposeMode::Multiple, "{1} In addition, {2} Finally, {3}"));
    t.push_back(make_template(core::ComposeMode::Chain, "First, {1} Then, {2}"));
    t.push_back(make_template(core::ComposeMode::Chain, "First, {1} Then, {2} Then, {3}"));
    t.push_back(
        make_template(core::ComposeMode::Chain, "First, {1} Then, {2} Then, {3} Finally, {4}"));
    return t;
}

/// File format: one template per line, `multiple\t<pattern>` or
/// `chain\t<pattern>`. Blank lines and lines starting with '#' are skipped.
inline std::vector<CompositionTemplate> load_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open template file: " + path.string());
    std::vector<CompositionTemplate> templates;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = util::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        size_t tab = trimmed.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected '<mode>\\t<pattern>'");
        std::string mode = trimmed.substr(0, tab);
        std::string pattern = trimmed.substr(tab + 1);
        templates.push_back(make_template(core::compose_mode_from_string(mode), pattern));
    }
    if (templates.empty())
        throw std::runtime_error("template file has no templates: " + path.string());
    return templates;
}

/// Sequential-conditional pattern for an arbitrary chain length.
inline std::string chain_pattern(size_t n) {
    std::string pattern = "First, {1}";
    for (size_t i = 2; i < n; ++i) pattern += " Then, {" + std::to_string(i) + "}";
    if (n >= 2) pattern += " Finally, {" + std::to_string(n) + "}";
    return pattern;
}

/// Picks the first template matching (mode, arity). Chains of a length not in
/// the pool fall back to the generated sequential pattern.
inline CompositionTemplate select_template(const std::vector<CompositionTemplate>& pool,
                                           core::ComposeMode mode, size_t arity) {
    for (const auto& t : pool)
        if (t.mode == mode && t.arity == arity) return t;
    if (mode == core::ComposeMode::Chain && arity >= 2)
        return make_template(mode, chain_pattern(arity));
    throw std::runtime_error("no template for mode " + std::string(core::to_string(mode)) +
                             " arity " + std::to_string(arity));
}

}  // namespace vifrag::compose
