#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/core/schemas.hpp"
#include "vifrag/gateway/gateway.hpp"
#include "vifrag/util/rng.hpp"
#include "vifrag/verify/verifiers.hpp"

namespace vifrag::bench {

struct ModelOutput {
    std::string sample_id;
    std::string output;
};

inline ModelOutput model_output_from_json(const nlohmann::json& j) {
    util::check_object_fields(j, {"sample_id", "output"}, {}, "model output");
    return {j.at("sample_id").get<std::string>(), j.at("output").get<std::string>()};
}

struct AtomicTally {
    size_t occurrences = 0;
    size_t strict_passes = 0;
    size_t loose_passes = 0;
};

/// Instruction-following + RAG scores for one dataset slice. All rates are
/// fractions in [0, 1]; the rendered report converts to percentages.
struct DatasetScores {
    size_t sample_count = 0;
    size_t missing_outputs = 0;
    size_t instruction_total = 0;
    size_t instruction_strict = 0;
    size_t instruction_loose = 0;
    size_t prompt_strict = 0;
    size_t prompt_loose = 0;
    std::map<std::string, AtomicTally> per_atomic;

    size_t judged_count = 0;
    size_t judge_errors = 0;
    double rag_sum = 0.0;
    bool rag_available = false;

    double if_prompt_strict() const {
        return sample_count ? static_cast<double>(prompt_strict) / sample_count : 0.0;
    }
    double if_prompt_loose() const {
        return sample_count ? static_cast<double>(prompt_loose) / sample_count : 0.0;
    }
    double if_instruction_strict() const {
        return instruction_total ? static_cast<double>(instruction_strict) / instruction_total
                                 : 0.0;
    }
    double if_instruction_loose() const {
        return instruction_total ? static_cast<double>(instruction_loose) / instruction_total
                                 : 0.0;
    }
    std::optional<double> rag_score() const {
        if (!rag_available || judged_count == 0) return std::nullopt;
        return rag_sum / static_cast<double>(judged_count);
    }
};

struct EvalReport {
    std::map<std::string, DatasetScores> per_dataset;  // keyed by dataset name
    DatasetScores all;
    size_t judge_error_count = 0;
};

// ---- one-decimal percentage arithmetic -------------------------------------------

/// Rounds a percentage to one decimal, half away from zero, robust to the
/// usual binary representation error at exact .x5 boundaries.
inline int64_t percent_to_tenths(double pct) {
    return std::llround(pct * 10.0);
}

inline double round_one_decimal(double pct) {
    return static_cast<double>(percent_to_tenths(pct)) / 10.0;
}

/// AVG column rule: the arithmetic mean of the IF and RAG percentages,
/// rounded to one decimal with half-up at the midpoint. Computed in integer
/// tenths so (42.7, 78.0) -> 60.35 -> 60.4 exactly.
inline double avg_one_decimal(double if_pct, double rag_pct) {
    int64_t sum_tenths = percent_to_tenths(if_pct) + percent_to_tenths(rag_pct);
    int64_t avg_tenths = sum_tenths >= 0 ? (sum_tenths + 1) / 2 : -((-sum_tenths + 1) / 2);
    if (sum_tenths % 2 == 0) avg_tenths = sum_tenths / 2;
    return static_cast<double>(avg_tenths) / 10.0;
}

inline std::string format_one_decimal(double pct) {
    int64_t tenths = percent_to_tenths(pct);
    std::string sign = tenths < 0 ? "-" : "";
    if (tenths < 0) tenths = -tenths;
    return sign + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

// ---- instruction-following evaluation ----------------------------------------------

/// Strict/loose instruction- and prompt-level scores via the deterministic
/// verifiers. Outputs align to samples by id; a missing output counts as
/// all-fail, never as a skip.
inline EvalReport eval_if(const std::vector<core::BenchSample>& samples,
                          const std::vector<ModelOutput>& outputs) {
    std::map<std::string, const std::string*> by_id;
    for (const auto& o : outputs) by_id[o.sample_id] = &o.output;

    EvalReport report;
    for (const auto& sample : samples) {
        const std::string dataset = core::to_string(sample.source.dataset);
        auto it = by_id.find(sample.sample_id);
        const std::string output = it != by_id.end() ? *it->second : std::string();

        bool all_strict = true;
        bool all_loose = true;
        std::vector<std::pair<std::string, std::pair<bool, bool>>> outcomes;
        for (const auto& inst : sample.instances) {
            verify::VerificationOutcome v = verify::verify(output, inst);
            outcomes.push_back({inst.spec_id, {v.strict_pass, v.loose_pass}});
            all_strict = all_strict && v.strict_pass;
            all_loose = all_loose && v.loose_pass;
        }

        for (DatasetScores* scores : {&report.per_dataset[dataset], &report.all}) {
            scores->sample_count++;
            if (it == by_id.end()) scores->missing_outputs++;
            if (all_strict) scores->prompt_strict++;
            if (all_loose) scores->prompt_loose++;
            for (const auto& [spec_id, sl] : outcomes) {
                scores->instruction_total++;
                auto& tally = scores->per_atomic[spec_id];
                tally.occurrences++;
                if (sl.first) {
                    scores->instruction_strict++;
                    tally.strict_passes++;
                }
                if (sl.second) {
                    scores->instruction_loose++;
                    tally.loose_passes++;
                }
            }
        }
    }
    return report;
}

// ---- RAG judging ------------------------------------------------------------------------

/// LLM-judged answer correctness on a deterministic subsample per dataset.
/// Judge errors are excluded from the mean and counted; missing outputs score
/// 0 (a benchmark must not reward truncated output files).
inline void eval_rag(EvalReport& report, const std::vector<core::BenchSample>& samples,
                     const std::vector<ModelOutput>& outputs, gateway::Gateway& gw,
                     size_t subsample_per_dataset = 100, uint64_t rng_seed = 42) {
    std::map<std::string, const std::string*> by_id;
    for (const auto& o : outputs) by_id[o.sample_id] = &o.output;

    std::map<std::string, std::vector<size_t>> dataset_indices;
    for (size_t i = 0; i < samples.size(); ++i)
        dataset_indices[core::to_string(samples[i].source.dataset)].push_back(i);

    for (auto& [dataset, indices] : dataset_indices) {
        util::Rng rng(rng_seed ^ util::fnv1a64("judge:" + dataset));
        std::vector<size_t> selected = indices;
        if (subsample_per_dataset > 0 && selected.size() > subsample_per_dataset) {
            util::shuffle(selected, rng);
            selected.resize(subsample_per_dataset);
            std::sort(selected.begin(), selected.end());
        }

        auto& scores = report.per_dataset[dataset];
        scores.rag_available = true;
        report.all.rag_available = true;
        for (size_t idx : selected) {
            const auto& sample = samples[idx];
            if (sample.source.gold_answers.empty()) continue;
            auto it = by_id.find(sample.sample_id);
            if (it == by_id.end()) {
                // missing output = completely incorrect
                scores.judged_count++;
                report.all.judged_count++;
                continue;
            }
            auto outcome =
                gw.judge_rag(sample.source.question, sample.source.gold_answers, *it->second);
            if (!outcome.score) {
                scores.judge_errors++;
                report.all.judge_errors++;
                report.judge_error_count++;
                continue;
            }
            scores.judged_count++;
            scores.rag_sum += *outcome.score;
            report.all.judged_count++;
            report.all.rag_sum += *outcome.score;
        }
    }
}

// ---- report rendering ----------------------------------------------------------------------

inline nlohmann::json report_to_json(const EvalReport& report) {
    auto dataset_json = [](const DatasetScores& s) {
        nlohmann::json j;
        j["samples"] = s.sample_count;
        j["missing_outputs"] = s.missing_outputs;
        j["if_prompt_strict"] = s.if_prompt_strict();
        j["if_prompt_loose"] = s.if_prompt_loose();
        j["if_instruction_strict"] = s.if_instruction_strict();
        j["if_instruction_loose"] = s.if_instruction_loose();
        nlohmann::json atomic = nlohmann::json::object();
        for (const auto& [spec_id, tally] : s.per_atomic) {
            atomic[spec_id] = {
                {"occurrences", tally.occurrences},
                {"strict_rate", tally.occurrences
                                    ? static_cast<double>(tally.strict_passes) / tally.occurrences
                                    : 0.0},
                {"loose_rate", tally.occurrences
                                   ? static_cast<double>(tally.loose_passes) / tally.occurrences
                                   : 0.0}};
        }
        j["per_atomic"] = atomic;
        if (auto rag = s.rag_score()) {
            j["rag_score"] = *rag;
            double if_pct = s.if_instruction_loose() * 100.0;
            double rag_pct = *rag * 100.0;
            j["avg"] = avg_one_decimal(if_pct, rag_pct);
        }
        j["judged"] = s.judged_count;
        j["judge_errors"] = s.judge_errors;
        return j;
    };

    nlohmann::json j;
    nlohmann::json datasets = nlohmann::json::object();
    for (const auto& [name, scores] : report.per_dataset) datasets[name] = dataset_json(scores);
    j["datasets"] = datasets;
    j["all"] = dataset_json(report.all);
    j["judge_error_count"] = report.judge_error_count;
    return j;
}

/// Text table in the main-results layout: IF | RAG | AVG per dataset plus
/// ALL, all at one decimal. IF is the loose instruction score (the headline
/// metric); the detailed strict/loose split follows underneath.
inline std::string render_table(const EvalReport& report) {
    std::string out;
    auto row = [&](const std::string& name, const DatasetScores& s) {
        double if_pct = s.if_instruction_loose() * 100.0;
        out += name;
        out.resize(out.size() + (name.size() < 10 ? 10 - name.size() : 1), ' ');
        out += format_one_decimal(if_pct);
        if (auto rag = s.rag_score()) {
            double rag_pct = *rag * 100.0;
            out += " | " + format_one_decimal(rag_pct) + " | " +
                   format_one_decimal(avg_one_decimal(if_pct, rag_pct));
        } else {
            out += " | -    | -";
        }
        out += "\n";
    };
    out += "dataset   IF    | RAG  | AVG\n";
    for (const auto& [name, scores] : report.per_dataset) row(name, scores);
    row("ALL", report.all);

    out += "\ndetail    Pr(S) | Pr(L) | Ins(S) | Ins(L)\n";
    auto detail = [&](const std::string& name, const DatasetScores& s) {
        out += name;
        out.resize(out.size() + (name.size() < 10 ? 10 - name.size() : 1), ' ');
        out += format_one_decimal(s.if_prompt_strict() * 100.0) + " | " +
               format_one_decimal(s.if_prompt_loose() * 100.0) + " | " +
               format_one_decimal(s.if_instruction_strict() * 100.0) + " | " +
               format_one_decimal(s.if_instruction_loose() * 100.0) + "\n";
    };
    for (const auto& [name, scores] : report.per_dataset) detail(name, scores);
    detail("ALL", report.all);
    return out;
}

}  // namespace vifrag::bench
