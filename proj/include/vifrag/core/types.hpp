#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vifrag/core/registry.hpp"

namespace vifrag::core {

/// Concrete use of a constraint spec: validated params plus the natural
/// language phrasing shown to the model.
struct AtomicInstructionInstance {
    std::string spec_id;
    ParamMap params;
    std::string rendered_text;
};

inline AtomicInstructionInstance make_instance(const std::string& spec_id, ParamMap params,
                                               std::string rendered_text = {}) {
    const auto& spec = spec_by_id(spec_id);
    AtomicInstructionInstance inst;
    inst.spec_id = spec_id;
    inst.params = validate_params(spec, std::move(params));
    inst.rendered_text = std::move(rendered_text);
    return inst;
}

enum class ComposeMode { Single, Multiple, Chain };

inline const char* to_string(ComposeMode m) {
    switch (m) {
        case ComposeMode::Single: return "single";
        case ComposeMode::Multiple: return "multiple";
        case ComposeMode::Chain: return "chain";
    }
    return "single";
}

inline ComposeMode compose_mode_from_string(const std::string& s) {
    if (s == "single") return ComposeMode::Single;
    if (s == "multiple") return ComposeMode::Multiple;
    if (s == "chain") return ComposeMode::Chain;
    throw util::SchemaError("unknown compose mode \"" + s + "\"");
}

enum class Provenance { Seed, Composed, Rewritten };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Seed: return "seed";
        case Provenance::Composed: return "composed";
        case Provenance::Rewritten: return "rewritten";
    }
    return "seed";
}

inline Provenance provenance_from_string(const std::string& s) {
    if (s == "seed") return Provenance::Seed;
    if (s == "composed") return Provenance::Composed;
    if (s == "rewritten") return Provenance::Rewritten;
    throw util::SchemaError("unknown provenance \"" + s + "\"");
}

/// An instruction as it flows through the synthesis pipeline. `parts` holds
/// the structurally known atomic constraints; seeds without a verifiable
/// binding carry none. `families` / `source_ids` track seed lineage for the
/// funnel report.
struct ComposedInstruction {
    std::string id;
    ComposeMode mode = ComposeMode::Single;
    std::vector<AtomicInstructionInstance> parts;
    std::string text;
    Provenance provenance = Provenance::Seed;
    std::optional<int> consistency_score;
    std::vector<std::string> families;
    std::vector<std::string> source_ids;
};

inline void check_invariants(const ComposedInstruction& ins) {
    switch (ins.mode) {
        case ComposeMode::Single:
            if (ins.parts.size() > 1)
                throw util::SchemaError("single instruction with " +
                                        std::to_string(ins.parts.size()) + " parts");
            break;
        case ComposeMode::Multiple:
            if (ins.parts.size() < 2 || ins.parts.size() > 3)
                throw util::SchemaError("multiple instruction must have 2 or 3 parts");
            break;
        case ComposeMode::Chain:
            if (ins.parts.size() < 2)
                throw util::SchemaError("chain instruction must have >= 2 tasks");
            break;
    }
    if (ins.consistency_score && (*ins.consistency_score < 1 || *ins.consistency_score > 10))
        throw util::SchemaError("consistency score out of 1..10");
}

struct Passage {
    std::string id;
    std::string title;
    std::string text;
    std::optional<double> score;
};

enum class Dataset { NQ, TQA, HQA, WebQSP, ShareGPT, Custom };

inline const char* to_string(Dataset d) {
    switch (d) {
        case Dataset::NQ: return "nq";
        case Dataset::TQA: return "tqa";
        case Dataset::HQA: return "hqa";
        case Dataset::WebQSP: return "webqsp";
        case Dataset::ShareGPT: return "sharegpt";
        case Dataset::Custom: return "custom";
    }
    return "custom";
}

inline Dataset dataset_from_string(const std::string& s) {
    if (s == "nq") return Dataset::NQ;
    if (s == "tqa") return Dataset::TQA;
    if (s == "hqa") return Dataset::HQA;
    if (s == "webqsp") return Dataset::WebQSP;
    if (s == "sharegpt") return Dataset::ShareGPT;
    if (s == "custom") return Dataset::Custom;
    throw util::SchemaError("unknown dataset \"" + s + "\"");
}

/// True for the four gold-answer QA sources (dialogue sources have no golds).
inline bool dataset_requires_golds(Dataset d) {
    return d == Dataset::NQ || d == Dataset::TQA || d == Dataset::HQA || d == Dataset::WebQSP;
}

struct QaRecord {
    std::string id;
    Dataset dataset = Dataset::Custom;
    std::string question;
    std::vector<std::string> gold_answers;
};

inline void check_invariants(const QaRecord& q) {
    if (q.question.empty()) throw util::SchemaError("QA record with empty question");
    if (dataset_requires_golds(q.dataset) && q.gold_answers.empty())
        throw util::SchemaError("QA record \"" + q.id + "\" requires gold answers");
}

enum class Verdict { Pending, Kept, DiscardedExecutor, DiscardedConsistency };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pending: return "pending";
        case Verdict::Kept: return "kept";
        case Verdict::DiscardedExecutor: return "discarded_executor";
        case Verdict::DiscardedConsistency: return "discarded_consistency";
    }
    return "pending";
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "pending") return Verdict::Pending;
    if (s == "kept") return Verdict::Kept;
    if (s == "discarded_executor") return Verdict::DiscardedExecutor;
    if (s == "discarded_consistency") return Verdict::DiscardedConsistency;
    throw util::SchemaError("unknown verdict \"" + s + "\"");
}

/// One instruction-query record as it moves through rejection sampling and
/// dual verification.
struct SynthSample {
    std::string sample_id;
    ComposedInstruction instruction;
    QaRecord query;
    std::vector<Passage> passages;
    std::vector<std::string> responses;
    std::vector<double> per_response_acc_case;
    std::optional<std::string> chosen_response;
    std::optional<int> consistency_score;
    Verdict verdict = Verdict::Pending;
};

inline void check_invariants(const SynthSample& s) {
    if (s.per_response_acc_case.size() != s.responses.size())
        throw util::SchemaError("per_response_acc_case length mismatch");
    if (s.verdict == Verdict::Kept) {
        if (!s.chosen_response) throw util::SchemaError("kept sample without chosen response");
        double best = 0.0;
        for (double a : s.per_response_acc_case) best = std::max(best, a);
        if (!(best > 0.5)) throw util::SchemaError("kept sample with acc_case <= 0.5");
    }
}

/// A FollowRAG-style benchmark sample.
struct BenchSample {
    std::string sample_id;
    QaRecord source;
    std::vector<AtomicInstructionInstance> instances;  // 1..4
    std::string blended_prompt;
    std::vector<Passage> passages;
    bool blended = true;  // false when the template fallback was used
};

/// Seed files group instructions under the four handwritten constraint
/// themes, which are distinct from the six verifier families.
enum class SeedFamily { Format, Semantic, Knowledge, Lexical };

inline const char* to_string(SeedFamily f) {
    switch (f) {
        case SeedFamily::Format: return "format";
        case SeedFamily::Semantic: return "semantic";
        case SeedFamily::Knowledge: return "knowledge";
        case SeedFamily::Lexical: return "lexical";
    }
    return "format";
}

inline SeedFamily seed_family_from_string(const std::string& s) {
    if (s == "format") return SeedFamily::Format;
    if (s == "semantic") return SeedFamily::Semantic;
    if (s == "knowledge") return SeedFamily::Knowledge;
    if (s == "lexical") return SeedFamily::Lexical;
    throw util::SchemaError("unknown seed family \"" + s + "\"");
}

/// One handwritten seed instruction. `binding`, when present, ties the seed
/// to a verifiable constraint spec with concrete parameters.
struct SeedRecord {
    std::string id;
    SeedFamily family = SeedFamily::Format;
    std::string text;
    std::optional<AtomicInstructionInstance> binding;
};

}  // namespace vifrag::core
