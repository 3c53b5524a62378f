#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/core/types.hpp"
#include "vifrag/util/strings.hpp"
#include "vifrag/verify/language.hpp"
#include "vifrag/verify/transforms.hpp"

// Deterministic verifiers for the 22 atomic constraint types. All of them are
// pure text -> bool with documented, abbreviation-naive tokenization rules:
//   word      = whitespace-delimited token
//   sentence  = segment closed by a run of '.', '!' or '?'
//   paragraph = maximal block of non-blank lines
// Case checks use ASCII letters. Keyword matching is case-insensitive and
// whole-word (word chars are ASCII alnum + '_').

namespace vifrag::verify {

struct VerificationOutcome {
    std::string spec_id;
    bool strict_pass = false;
    bool loose_pass = false;
    std::string detail;
};

// ---- shared text measures ---------------------------------------------------

inline size_t word_count(const std::string& text) {
    return util::whitespace_tokens(text).size();
}

inline size_t sentence_count(const std::string& text) {
    size_t count = 0;
    bool have_content = false;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            if (have_content) {
                ++count;
                have_content = false;
            }
            while (i < text.size() && (text[i] == '.' || text[i] == '!' || text[i] == '?')) ++i;
            continue;
        }
        if (!util::is_space(c)) have_content = true;
        ++i;
    }
    return count;
}

inline std::vector<std::string> split_paragraphs(const std::string& text) {
    std::vector<std::string> paragraphs;
    std::vector<std::string> current;
    for (const auto& line : util::split_lines(text)) {
        if (util::trim(line).empty()) {
            if (!current.empty()) {
                paragraphs.push_back(util::join_lines(current));
                current.clear();
            }
        } else {
            current.push_back(line);
        }
    }
    if (!current.empty()) paragraphs.push_back(util::join_lines(current));
    return paragraphs;
}

inline size_t paragraph_count(const std::string& text) {
    return split_paragraphs(text).size();
}

/// Non-overlapping case-insensitive whole-word occurrences of `keyword`.
/// A match counts when the characters adjacent to it are not word chars, so
/// "cat" does not match inside "concatenate".
inline size_t whole_word_count(const std::string& text, const std::string& keyword) {
    if (keyword.empty()) return 0;
    const std::string hay = util::lower_ascii(text);
    const std::string needle = util::lower_ascii(keyword);
    size_t count = 0;
    size_t pos = 0;
    while (pos + needle.size() <= hay.size()) {
        size_t found = hay.find(needle, pos);
        if (found == std::string::npos) break;
        bool left_ok = found == 0 || !util::is_word_char(hay[found - 1]);
        size_t end = found + needle.size();
        bool right_ok = end == hay.size() || !util::is_word_char(hay[end]);
        if (left_ok && right_ok) {
            ++count;
            pos = end;
        } else {
            pos = found + 1;
        }
    }
    return count;
}

/// Counts `*text*` and `**text**` spans. Left-to-right non-overlapping scan;
/// span content must be non-empty and stay on one line with no inner '*'.
inline size_t highlight_count(const std::string& text) {
    size_t count = 0;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        if (text[i] != '*') {
            ++i;
            continue;
        }
        if (i + 1 < n && text[i + 1] == '*') {
            size_t k = i + 2;
            while (k < n && text[k] != '*' && text[k] != '\n') ++k;
            if (k > i + 2 && k + 1 < n && text[k] == '*' && text[k + 1] == '*') {
                ++count;
                i = k + 2;
                continue;
            }
        }
        size_t k = i + 1;
        while (k < n && text[k] != '*' && text[k] != '\n') ++k;
        if (k > i + 1 && k < n && text[k] == '*') {
            ++count;
            i = k + 1;
            continue;
        }
        ++i;
    }
    return count;
}

inline size_t bullet_count(const std::string& text) {
    size_t count = 0;
    for (const auto& line : util::split_lines(text)) {
        std::string t = util::ltrim(line);
        if (t.rfind("- ", 0) == 0 || t.rfind("* ", 0) == 0) ++count;
    }
    return count;
}

/// Counts `[...]` spans with non-empty bracket-free content.
inline size_t placeholder_count(const std::string& text) {
    size_t count = 0;
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '[') {
            ++i;
            continue;
        }
        size_t k = i + 1;
        while (k < text.size() && text[k] != '[' && text[k] != ']') ++k;
        if (k < text.size() && text[k] == ']' && k > i + 1) {
            ++count;
            i = k + 1;
        } else {
            ++i;
        }
    }
    return count;
}

inline size_t section_count(const std::string& text, const std::string& splitter) {
    if (splitter.empty()) return 0;
    size_t count = 0;
    for (const auto& line : util::split_lines(text))
        if (line.rfind(splitter, 0) == 0) ++count;
    return count;
}

inline size_t capital_word_count(const std::string& text) {
    size_t count = 0;
    for (const auto& tok : util::whitespace_tokens(text)) {
        size_t letters = 0;
        bool has_lower = false;
        for (char c : tok) {
            if (util::is_ascii_alpha(c)) {
                ++letters;
                if (util::is_ascii_lower(c)) has_lower = true;
            }
        }
        if (letters >= 2 && !has_lower) ++count;
    }
    return count;
}

// ---- per-family checks --------------------------------------------------------

inline bool check_keywords(const std::string& spec_id, const std::string& text,
                           const core::ParamMap& params) {
    if (spec_id == "keywords:inclusion") {
        for (const auto& kw : core::param_string_list(params, "keywords"))
            if (whole_word_count(text, kw) == 0) return false;
        return true;
    }
    if (spec_id == "keywords:exclusion") {
        for (const auto& kw : core::param_string_list(params, "keywords"))
            if (whole_word_count(text, kw) > 0) return false;
        return true;
    }
    // keywords:frequency
    size_t count = whole_word_count(text, core::param_string(params, "keyword"));
    return core::relation_satisfied(core::param_relation(params), static_cast<int64_t>(count),
                                    core::param_int(params, "n"));
}

inline bool check_length(const std::string& spec_id, const std::string& text,
                         const core::ParamMap& params) {
    size_t count = 0;
    if (spec_id == "length:words") count = word_count(text);
    else if (spec_id == "length:sentences") count = sentence_count(text);
    else count = paragraph_count(text);
    return core::relation_satisfied(core::param_relation(params), static_cast<int64_t>(count),
                                    core::param_int(params, "n"));
}

inline bool check_format(const std::string& spec_id, const std::string& text,
                         const core::ParamMap& params, const LanguageDetector& detector) {
    if (spec_id == "format:json") {
        return nlohmann::json::accept(util::trim(text));
    }
    if (spec_id == "format:quotation") {
        std::string t = util::trim(text);
        return t.size() >= 2 && t.front() == '"' && t.back() == '"';
    }
    if (spec_id == "format:no_commas") {
        return text.find(',') == std::string::npos &&
               text.find("\xEF\xBC\x8C") == std::string::npos;  // fullwidth comma
    }
    if (spec_id == "format:language") {
        return detector.matches(text, core::param_string(params, "language"));
    }
    // format:repeat_question -- prefix match after whitespace normalization
    std::string norm_response = util::collapse_whitespace(text);
    std::string norm_question = util::collapse_whitespace(core::param_string(params, "question"));
    if (norm_question.empty()) return false;
    return norm_response.rfind(norm_question, 0) == 0;
}

inline bool check_structure(const std::string& spec_id, const std::string& text,
                            const core::ParamMap& params) {
    if (spec_id == "structure:title") {
        for (const auto& line : util::split_lines(text)) {
            std::string t = util::trim(line);
            if (t.size() >= 5 && t.rfind("<<", 0) == 0 && t.substr(t.size() - 2) == ">>")
                return true;
        }
        return false;
    }
    size_t count = 0;
    if (spec_id == "structure:sections")
        count = section_count(text, core::param_string(params, "splitter"));
    else if (spec_id == "structure:highlights")
        count = highlight_count(text);
    else if (spec_id == "structure:bullets")
        count = bullet_count(text);
    else
        count = placeholder_count(text);
    return core::relation_satisfied(core::param_relation(params), static_cast<int64_t>(count),
                                    core::param_int(params, "n"));
}

inline bool check_case(const std::string& spec_id, const std::string& text,
                       const core::ParamMap& params) {
    if (spec_id == "cases:uppercase") {
        for (char c : text)
            if (util::is_ascii_lower(c)) return false;
        return true;
    }
    if (spec_id == "cases:lowercase") {
        for (char c : text)
            if (util::is_ascii_upper(c)) return false;
        return true;
    }
    return core::relation_satisfied(core::param_relation(params),
                                    static_cast<int64_t>(capital_word_count(text)),
                                    core::param_int(params, "n"));
}

inline bool check_position(const std::string& spec_id, const std::string& text,
                           const core::ParamMap& params) {
    if (spec_id == "position:end_with") {
        std::string t = text;
        size_t e = t.size();
        while (e > 0 && (util::is_space(t[e - 1]) || t[e - 1] == '"')) --e;
        t = t.substr(0, e);
        const std::string& suffix = core::param_string(params, "suffix");
        if (suffix.empty() || t.size() < suffix.size()) return false;
        return t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0;
    }
    if (spec_id == "position:postscript") {
        const std::string& marker = core::param_string(params, "marker");
        auto lines = util::split_lines(text);
        for (size_t i = 1; i < lines.size(); ++i)
            if (util::ltrim(lines[i]).rfind(marker, 0) == 0) return true;
        return false;
    }
    // position:first_word -- n is a 1-based paragraph index; out of range is a
    // plain fail, not an error.
    auto paragraphs = split_paragraphs(text);
    int64_t idx = core::param_int(params, "n");
    if (idx < 1 || static_cast<size_t>(idx) > paragraphs.size()) return false;
    auto tokens = util::whitespace_tokens(paragraphs[static_cast<size_t>(idx) - 1]);
    if (tokens.empty()) return false;
    return util::lower_ascii(tokens[0]) == util::lower_ascii(core::param_string(params, "word"));
}

// ---- dispatch ---------------------------------------------------------------------

/// Single-variant check. Params must already be validated/normalized.
inline bool check_once(const std::string& text, const core::AtomicInstructionInstance& inst,
                       const LanguageDetector& detector = default_language_detector()) {
    const auto& spec = core::spec_by_id(inst.spec_id);
    switch (spec.family) {
        case core::Family::Keywords: return check_keywords(inst.spec_id, text, inst.params);
        case core::Family::Length: return check_length(inst.spec_id, text, inst.params);
        case core::Family::Format: return check_format(inst.spec_id, text, inst.params, detector);
        case core::Family::Structure: return check_structure(inst.spec_id, text, inst.params);
        case core::Family::Cases: return check_case(inst.spec_id, text, inst.params);
        case core::Family::Position: return check_position(inst.spec_id, text, inst.params);
    }
    return false;
}

/// Strict verdict on the raw response; loose verdict is the OR over the
/// loose-variant lattice (which includes the identity, so strict implies
/// loose by construction).
inline VerificationOutcome verify(const std::string& response,
                                  const core::AtomicInstructionInstance& inst,
                                  const LanguageDetector& detector = default_language_detector()) {
    VerificationOutcome out;
    out.spec_id = inst.spec_id;
    out.strict_pass = check_once(response, inst, detector);
    if (out.strict_pass) {
        out.loose_pass = true;
    } else {
        for (const auto& variant : loose_variants(response)) {
            if (check_once(variant, inst, detector)) {
                out.loose_pass = true;
                break;
            }
        }
    }
    out.detail = out.strict_pass  ? "strict pass"
                 : out.loose_pass ? "loose pass via transform"
                                  : "fail";
    return out;
}

}  // namespace vifrag::verify
