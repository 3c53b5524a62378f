#pragma once

// Naive, independent re-implementations of the constraint checks, written
// against std::regex / std::getline rather than the library's scanners. The
// oracle-agreement suites compare these against the shipped verifiers on
// randomized corpora.

#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "vifrag/core/types.hpp"

namespace oracles {

inline std::string regex_escape(const std::string& s) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(s, special, R"(\$&)");
}

inline size_t keyword_count(const std::string& text, const std::string& keyword) {
    std::regex re("\\b" + regex_escape(keyword) + "\\b", std::regex::icase);
    auto begin = std::sregex_iterator(text.begin(), text.end(), re);
    return static_cast<size_t>(std::distance(begin, std::sregex_iterator()));
}

inline size_t word_count(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    size_t n = 0;
    while (in >> tok) ++n;
    return n;
}

inline size_t sentence_count(const std::string& text) {
    static const std::regex re(R"(([^.!?]+)([.!?]+))");
    size_t n = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        const std::string& body = (*it)[1].str();
        if (body.find_first_not_of(" \t\r\n") != std::string::npos) ++n;
    }
    return n;
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (text.empty()) lines.push_back("");
    return lines;
}

inline std::vector<std::string> paragraphs_of(const std::string& text) {
    static const std::regex blank(R"(^\s*$)");
    std::vector<std::string> paragraphs;
    std::string current;
    bool in_para = false;
    for (const auto& line : lines_of(text)) {
        if (std::regex_match(line, blank)) {
            if (in_para) paragraphs.push_back(current);
            current.clear();
            in_para = false;
        } else {
            if (in_para) current += "\n";
            current += line;
            in_para = true;
        }
    }
    if (in_para) paragraphs.push_back(current);
    return paragraphs;
}

inline size_t paragraph_count(const std::string& text) { return paragraphs_of(text).size(); }

inline size_t bullet_count(const std::string& text) {
    static const std::regex re(R"(^[ \t]*(- |\* ))");
    size_t n = 0;
    for (const auto& line : lines_of(text))
        if (std::regex_search(line, re)) ++n;
    return n;
}

inline size_t highlight_count(const std::string& text) {
    static const std::regex bold(R"(\*\*[^*\n]+\*\*)");
    static const std::regex italic(R"(\*[^*\n]+\*)");
    size_t n = 0;
    std::string remaining = text;
    std::smatch m;
    while (std::regex_search(remaining, m, bold)) {
        ++n;
        remaining = m.prefix().str() + " " + m.suffix().str();
    }
    while (std::regex_search(remaining, m, italic)) {
        ++n;
        remaining = m.prefix().str() + " " + m.suffix().str();
    }
    return n;
}

inline size_t placeholder_count(const std::string& text) {
    static const std::regex re(R"(\[[^\[\]]+\])");
    auto begin = std::sregex_iterator(text.begin(), text.end(), re);
    return static_cast<size_t>(std::distance(begin, std::sregex_iterator()));
}

inline size_t section_count(const std::string& text, const std::string& splitter) {
    size_t n = 0;
    for (const auto& line : lines_of(text))
        if (line.size() >= splitter.size() && line.compare(0, splitter.size(), splitter) == 0) ++n;
    return n;
}

inline size_t capital_word_count(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    size_t n = 0;
    static const std::regex no_lower(R"(^[^a-z]*$)");
    while (in >> tok) {
        size_t letters = 0;
        for (char c : tok)
            if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) ++letters;
        if (letters >= 2 && std::regex_match(tok, no_lower)) ++n;
    }
    return n;
}

inline bool has_title_line(const std::string& text) {
    static const std::regex re(R"(^\s*<<.+>>\s*$)");
    for (const auto& line : lines_of(text))
        if (std::regex_match(line, re)) return true;
    return false;
}

inline bool all_uppercase(const std::string& text) {
    static const std::regex lower("[a-z]");
    return !std::regex_search(text, lower);
}

inline bool all_lowercase(const std::string& text) {
    static const std::regex upper("[A-Z]");
    return !std::regex_search(text, upper);
}

inline bool quotation_wrapped(const std::string& text) {
    static const std::regex re(R"(^\s*"[\s\S]*"\s*$)");
    return std::regex_match(text, re) &&
           text.find_first_not_of(" \t\r\n") != text.find_last_not_of(" \t\r\n");
}

inline bool comma_free(const std::string& text) {
    return text.find(',') == std::string::npos &&
           text.find("\xEF\xBC\x8C") == std::string::npos;
}

inline bool ends_with_suffix(const std::string& text, const std::string& suffix) {
    std::string t = text;
    while (!t.empty() && (std::isspace(static_cast<unsigned char>(t.back())) || t.back() == '"'))
        t.pop_back();
    if (suffix.empty() || t.size() < suffix.size()) return false;
    return t.rfind(suffix) == t.size() - suffix.size();
}

inline bool has_postscript(const std::string& text, const std::string& marker) {
    auto lines = lines_of(text);
    std::regex re("^\\s*" + regex_escape(marker));
    for (size_t i = 1; i < lines.size(); ++i)
        if (std::regex_search(lines[i], re)) return true;
    return false;
}

inline bool first_word_matches(const std::string& text, size_t paragraph_index,
                               const std::string& word) {
    auto paragraphs = paragraphs_of(text);
    if (paragraph_index < 1 || paragraph_index > paragraphs.size()) return false;
    std::istringstream in(paragraphs[paragraph_index - 1]);
    std::string tok;
    if (!(in >> tok)) return false;
    auto lower = [](std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    return lower(tok) == lower(word);
}

/// Oracle verdict for the recount-style types. Construction-truth types
/// (json, language, repeat_question) are handled by their generators.
inline bool check(const std::string& spec_id, const std::string& text,
                  const vifrag::core::AtomicInstructionInstance& inst) {
    using vifrag::core::param_int;
    using vifrag::core::param_relation;
    using vifrag::core::param_string;
    using vifrag::core::param_string_list;
    using vifrag::core::relation_satisfied;
    const auto& p = inst.params;

    if (spec_id == "keywords:inclusion") {
        for (const auto& kw : param_string_list(p, "keywords"))
            if (keyword_count(text, kw) == 0) return false;
        return true;
    }
    if (spec_id == "keywords:exclusion") {
        for (const auto& kw : param_string_list(p, "keywords"))
            if (keyword_count(text, kw) > 0) return false;
        return true;
    }
    if (spec_id == "keywords:frequency")
        return relation_satisfied(param_relation(p),
                                  static_cast<int64_t>(keyword_count(text, param_string(p, "keyword"))),
                                  param_int(p, "n"));
    if (spec_id == "length:words")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(word_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "length:sentences")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(sentence_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "length:paragraphs")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(paragraph_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "format:quotation") return quotation_wrapped(text);
    if (spec_id == "format:no_commas") return comma_free(text);
    if (spec_id == "structure:title") return has_title_line(text);
    if (spec_id == "structure:sections")
        return relation_satisfied(param_relation(p),
                                  static_cast<int64_t>(section_count(text, param_string(p, "splitter"))),
                                  param_int(p, "n"));
    if (spec_id == "structure:highlights")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(highlight_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "structure:bullets")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(bullet_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "structure:placeholder")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(placeholder_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "cases:uppercase") return all_uppercase(text);
    if (spec_id == "cases:lowercase") return all_lowercase(text);
    if (spec_id == "cases:capital_words")
        return relation_satisfied(param_relation(p), static_cast<int64_t>(capital_word_count(text)),
                                  param_int(p, "n"));
    if (spec_id == "position:end_with") return ends_with_suffix(text, param_string(p, "suffix"));
    if (spec_id == "position:postscript") return has_postscript(text, param_string(p, "marker"));
    if (spec_id == "position:first_word")
        return first_word_matches(text, static_cast<size_t>(param_int(p, "n")),
                                  param_string(p, "word"));
    throw std::logic_error("no recount oracle for " + spec_id);
}

}  // namespace oracles
