#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/core/types.hpp"
#include "vifrag/util/jsonl.hpp"

namespace vifrag::retrieval {

struct QaLoadResult {
    std::vector<core::QaRecord> records;
    std::vector<util::LineDiagnostic> diagnostics;
};

namespace detail {

/// NQ / TriviaQA / HotpotQA / WebQSP all arrive pre-linearized as
/// {question, answers[], id?}.
inline core::QaRecord parse_qa_native(const nlohmann::json& j, core::Dataset dataset,
                                      size_t ordinal) {
    util::check_object_fields(j, {"question", "answers"}, {"id"}, "qa line");
    core::QaRecord q;
    q.dataset = dataset;
    q.id = j.contains("id") ? j.at("id").get<std::string>()
                            : std::string(core::to_string(dataset)) + ":" + std::to_string(ordinal);
    q.question = j.at("question").get<std::string>();
    q.gold_answers = j.at("answers").get<std::vector<std::string>>();
    core::check_invariants(q);
    return q;
}

/// ShareGPT conversations: the first human turn becomes the query; dialogue
/// data has no gold answers.
inline core::QaRecord parse_sharegpt(const nlohmann::json& j, size_t ordinal) {
    util::check_object_fields(j, {"conversations"}, {"id"}, "sharegpt line");
    core::QaRecord q;
    q.dataset = core::Dataset::ShareGPT;
    q.id = j.contains("id") ? j.at("id").get<std::string>()
                            : "sharegpt:" + std::to_string(ordinal);
    for (const auto& turn : j.at("conversations")) {
        std::string from = turn.value("from", "");
        if (from == "human" || from == "user") {
            q.question = turn.value("value", "");
            break;
        }
    }
    if (q.question.empty()) throw util::SchemaError("conversation has no human turn");
    return q;
}

}  // namespace detail

/// Dataset adapter: maps native JSONL rows onto QaRecord. Unknown kinds
/// throw; per-record failures are counted as diagnostics, not fatal.
inline QaLoadResult load_qa(const std::filesystem::path& path, const std::string& dataset_kind) {
    core::Dataset dataset = core::dataset_from_string(dataset_kind);
    size_t ordinal = 0;
    auto parse = [&](const nlohmann::json& j) -> core::QaRecord {
        ++ordinal;
        if (dataset == core::Dataset::ShareGPT) return detail::parse_sharegpt(j, ordinal);
        return detail::parse_qa_native(j, dataset, ordinal);
    };
    auto result = util::read_jsonl<core::QaRecord>(path, parse, /*strict=*/false);
    return {std::move(result.records), std::move(result.diagnostics)};
}

}  // namespace vifrag::retrieval
