#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/util/jsonl.hpp"
#include "vifrag/util/strings.hpp"

namespace vifrag::bench {

struct ContaminationReport {
    size_t train_size = 0;
    size_t test_size = 0;
    // Model-based rephrase detection needs an external detector; reported as
    // unavailable rather than zero.
    std::optional<size_t> rephrase_count;
    double percentage = 0.0;         // % of test samples sharing >=1 n-gram with train
    double ngram_overlap_pct = 0.0;  // % of distinct test n-grams present in train
    size_t ngram = 13;
};

namespace detail {

/// Every string value in the record, depth-first, joined with spaces. Keeps
/// the check schema-agnostic across training and benchmark record shapes.
inline void collect_strings(const nlohmann::json& j, std::string& out) {
    if (j.is_string()) {
        if (!out.empty()) out += ' ';
        out += j.get<std::string>();
    } else if (j.is_array()) {
        for (const auto& e : j) collect_strings(e, out);
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) collect_strings(it.value(), out);
    }
}

/// Case-folded alphanumeric word tokens.
inline std::vector<std::string> tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (util::is_ascii_alpha(c) || util::is_ascii_digit(c)) {
            current += util::to_lower(c);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

inline std::set<std::string> ngrams(const std::vector<std::string>& toks, size_t n) {
    std::set<std::string> grams;
    if (toks.size() < n) return grams;
    for (size_t i = 0; i + n <= toks.size(); ++i) {
        std::string gram;
        for (size_t k = 0; k < n; ++k) {
            if (k) gram += '\x1f';
            gram += toks[i + k];
        }
        grams.insert(std::move(gram));
    }
    return grams;
}

}  // namespace detail

/// Rule-based n-gram contamination between two JSONL sets. A test sample is
/// contaminated when it shares at least one n-gram (over case-folded word
/// tokens) with any training sample.
inline ContaminationReport contamination_check(const std::vector<std::string>& train_texts,
                                               const std::vector<std::string>& test_texts,
                                               size_t n_gram = 13) {
    if (train_texts.empty() || test_texts.empty())
        throw std::invalid_argument("contamination_check requires non-empty train and test sets");

    ContaminationReport report;
    report.ngram = n_gram;
    report.train_size = train_texts.size();
    report.test_size = test_texts.size();

    std::set<std::string> train_grams;
    for (const auto& text : train_texts) {
        auto grams = detail::ngrams(detail::tokens(text), n_gram);
        train_grams.insert(grams.begin(), grams.end());
    }

    size_t contaminated = 0;
    std::set<std::string> test_grams_all;
    size_t test_grams_hit = 0;
    for (const auto& text : test_texts) {
        auto grams = detail::ngrams(detail::tokens(text), n_gram);
        bool hit = false;
        for (const auto& g : grams) {
            bool in_train = train_grams.count(g) > 0;
            auto inserted = test_grams_all.insert(g);
            if (inserted.second && in_train) ++test_grams_hit;
            hit = hit || in_train;
        }
        if (hit) ++contaminated;
    }

    report.percentage = 100.0 * static_cast<double>(contaminated) /
                        static_cast<double>(test_texts.size());
    report.ngram_overlap_pct =
        test_grams_all.empty()
            ? 0.0
            : 100.0 * static_cast<double>(test_grams_hit) /
                  static_cast<double>(test_grams_all.size());
    return report;
}

/// Convenience wrapper over two JSONL files; each record's text is the join
/// of all its string fields.
inline ContaminationReport contamination_check_files(const std::filesystem::path& train_path,
                                                     const std::filesystem::path& test_path,
                                                     size_t n_gram = 13) {
    auto load_texts = [](const std::filesystem::path& path) {
        auto rows = util::read_jsonl<std::string>(path, [](const nlohmann::json& j) {
            std::string text;
            detail::collect_strings(j, text);
            return text;
        });
        return rows.records;
    };
    return contamination_check(load_texts(train_path), load_texts(test_path), n_gram);
}

inline nlohmann::json to_json(const ContaminationReport& r) {
    nlohmann::json j;
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["ngram"] = r.ngram;
    if (r.rephrase_count) j["rephrase_count"] = *r.rephrase_count;
    else j["rephrase_count"] = "unavailable";
    j["percentage"] = r.percentage;
    j["ngram_overlap_pct"] = r.ngram_overlap_pct;
    return j;
}

}  // namespace vifrag::bench
