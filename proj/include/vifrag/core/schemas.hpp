#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "vifrag/core/types.hpp"
#include "vifrag/util/jsonl.hpp"

// JSONL record schemas. Every parser rejects unknown fields by name; JSONL
// readers add line numbers on top (see util/jsonl.hpp). Serialization uses
// nlohmann's default (key-sorted) object dump, so emitted files are
// byte-stable for identical inputs.

namespace vifrag::core {

using nlohmann::json;

// ---- params ----------------------------------------------------------------

inline ParamMap params_from_json(const json& j, const std::string& what) {
    if (!j.is_object()) throw util::SchemaError(what + ": params must be an object");
    ParamMap out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (it.key() == "relation") {
            if (!v.is_string()) throw util::SchemaError(what + ": relation must be a string");
            out[it.key()] = relation_from_string(v.get<std::string>());
        } else if (v.is_number_integer() || v.is_number_unsigned()) {
            out[it.key()] = v.get<int64_t>();
        } else if (v.is_string()) {
            out[it.key()] = v.get<std::string>();
        } else if (v.is_array()) {
            std::vector<std::string> items;
            for (const auto& e : v) {
                if (!e.is_string())
                    throw util::SchemaError(what + ": list param \"" + it.key() +
                                            "\" must hold strings");
                items.push_back(e.get<std::string>());
            }
            out[it.key()] = std::move(items);
        } else {
            throw util::SchemaError(what + ": unsupported param type for \"" + it.key() + "\"");
        }
    }
    return out;
}

// ---- AtomicInstructionInstance ----------------------------------------------

inline json to_json(const AtomicInstructionInstance& inst) {
    json j;
    j["spec_id"] = inst.spec_id;
    j["kwargs"] = params_to_json(inst.params);
    if (!inst.rendered_text.empty()) j["text"] = inst.rendered_text;
    return j;
}

inline AtomicInstructionInstance instance_from_json(const json& j) {
    util::check_object_fields(j, {"spec_id", "kwargs"}, {"text"}, "instruction instance");
    AtomicInstructionInstance inst;
    inst.spec_id = j.at("spec_id").get<std::string>();
    ParamMap raw = params_from_json(j.at("kwargs"), inst.spec_id);
    inst.params = validate_params(spec_by_id(inst.spec_id), raw);
    if (j.contains("text")) inst.rendered_text = j.at("text").get<std::string>();
    return inst;
}

// ---- ComposedInstruction ----------------------------------------------------

inline json to_json(const ComposedInstruction& ins) {
    json j;
    if (!ins.id.empty()) j["id"] = ins.id;
    j["mode"] = to_string(ins.mode);
    j["text"] = ins.text;
    j["provenance"] = to_string(ins.provenance);
    json parts = json::array();
    for (const auto& p : ins.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
    if (ins.consistency_score) j["consistency_score"] = *ins.consistency_score;
    if (!ins.families.empty()) j["families"] = ins.families;
    if (!ins.source_ids.empty()) j["source_ids"] = ins.source_ids;
    return j;
}

inline ComposedInstruction instruction_from_json(const json& j) {
    util::check_object_fields(
        j, {"mode", "text", "provenance", "parts"},
        {"id", "consistency_score", "families", "source_ids"}, "instruction");
    ComposedInstruction ins;
    if (j.contains("id")) ins.id = j.at("id").get<std::string>();
    ins.mode = compose_mode_from_string(j.at("mode").get<std::string>());
    ins.text = j.at("text").get<std::string>();
    ins.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    for (const auto& p : j.at("parts")) ins.parts.push_back(instance_from_json(p));
    if (j.contains("consistency_score")) ins.consistency_score = j.at("consistency_score").get<int>();
    if (j.contains("families")) ins.families = j.at("families").get<std::vector<std::string>>();
    if (j.contains("source_ids")) ins.source_ids = j.at("source_ids").get<std::vector<std::string>>();
    check_invariants(ins);
    return ins;
}

// ---- Passage -----------------------------------------------------------------

inline json to_json(const Passage& p) {
    json j;
    j["id"] = p.id;
    j["title"] = p.title;
    j["text"] = p.text;
    if (p.score) j["score"] = *p.score;
    return j;
}

inline Passage passage_from_json(const json& j) {
    util::check_object_fields(j, {"id", "title", "text"}, {"score"}, "passage");
    Passage p;
    p.id = j.at("id").get<std::string>();
    p.title = j.at("title").get<std::string>();
    p.text = j.at("text").get<std::string>();
    if (p.text.empty()) throw util::SchemaError("passage \"" + p.id + "\" has empty text");
    if (j.contains("score")) p.score = j.at("score").get<double>();
    return p;
}

// ---- QaRecord ------------------------------------------------------------------

inline json to_json(const QaRecord& q) {
    json j;
    j["id"] = q.id;
    j["dataset"] = to_string(q.dataset);
    j["question"] = q.question;
    j["answers"] = q.gold_answers;
    return j;
}

inline QaRecord qa_from_json(const json& j) {
    util::check_object_fields(j, {"id", "dataset", "question", "answers"}, {}, "qa record");
    QaRecord q;
    q.id = j.at("id").get<std::string>();
    q.dataset = dataset_from_string(j.at("dataset").get<std::string>());
    q.question = j.at("question").get<std::string>();
    q.gold_answers = j.at("answers").get<std::vector<std::string>>();
    check_invariants(q);
    return q;
}

// ---- SynthSample ----------------------------------------------------------------

inline json to_json(const SynthSample& s) {
    json j;
    j["sample_id"] = s.sample_id;
    j["instruction"] = to_json(s.instruction);
    j["query"] = to_json(s.query);
    json passages = json::array();
    for (const auto& p : s.passages) passages.push_back(to_json(p));
    j["passages"] = passages;
    j["responses"] = s.responses;
    j["per_response_acc_case"] = s.per_response_acc_case;
    if (s.chosen_response) j["chosen_response"] = *s.chosen_response;
    if (s.consistency_score) j["consistency_score"] = *s.consistency_score;
    j["verdict"] = to_string(s.verdict);
    return j;
}

inline SynthSample synth_sample_from_json(const json& j) {
    util::check_object_fields(
        j, {"sample_id", "instruction", "query", "passages", "responses",
            "per_response_acc_case", "verdict"},
        {"chosen_response", "consistency_score"}, "synth sample");
    SynthSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.instruction = instruction_from_json(j.at("instruction"));
    s.query = qa_from_json(j.at("query"));
    for (const auto& p : j.at("passages")) s.passages.push_back(passage_from_json(p));
    s.responses = j.at("responses").get<std::vector<std::string>>();
    s.per_response_acc_case = j.at("per_response_acc_case").get<std::vector<double>>();
    if (j.contains("chosen_response")) s.chosen_response = j.at("chosen_response").get<std::string>();
    if (j.contains("consistency_score")) s.consistency_score = j.at("consistency_score").get<int>();
    s.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    check_invariants(s);
    return s;
}

// ---- BenchSample ----------------------------------------------------------------

inline json to_json(const BenchSample& b) {
    json j;
    j["sample_id"] = b.sample_id;
    j["dataset"] = to_string(b.source.dataset);
    j["question"] = b.source.question;
    j["prompt"] = b.blended_prompt;
    json ids = json::array();
    json kwargs = json::array();
    for (const auto& inst : b.instances) {
        ids.push_back(inst.spec_id);
        kwargs.push_back(params_to_json(inst.params));
    }
    j["instruction_id_list"] = ids;
    j["kwargs"] = kwargs;
    json passages = json::array();
    for (const auto& p : b.passages) passages.push_back(to_json(p));
    j["passages"] = passages;
    j["golds"] = b.source.gold_answers;
    j["blended"] = b.blended;
    return j;
}

inline BenchSample bench_sample_from_json(const json& j) {
    util::check_object_fields(
        j, {"sample_id", "dataset", "question", "prompt", "instruction_id_list", "kwargs",
            "passages", "golds"},
        {"blended"}, "bench sample");
    BenchSample b;
    b.sample_id = j.at("sample_id").get<std::string>();
    b.source.id = b.sample_id;
    b.source.dataset = dataset_from_string(j.at("dataset").get<std::string>());
    b.source.question = j.at("question").get<std::string>();
    b.source.gold_answers = j.at("golds").get<std::vector<std::string>>();
    b.blended_prompt = j.at("prompt").get<std::string>();
    const auto& ids = j.at("instruction_id_list");
    const auto& kwargs = j.at("kwargs");
    if (ids.size() != kwargs.size())
        throw util::SchemaError("bench sample: instruction_id_list/kwargs length mismatch");
    if (ids.empty() || ids.size() > 4)
        throw util::SchemaError("bench sample: must carry 1..4 instructions");
    for (size_t i = 0; i < ids.size(); ++i) {
        AtomicInstructionInstance inst;
        inst.spec_id = ids[i].get<std::string>();
        inst.params = validate_params(spec_by_id(inst.spec_id),
                                      params_from_json(kwargs[i], inst.spec_id));
        b.instances.push_back(std::move(inst));
    }
    for (const auto& p : j.at("passages")) b.passages.push_back(passage_from_json(p));
    if (j.contains("blended")) b.blended = j.at("blended").get<bool>();
    return b;
}

// ---- SeedRecord ------------------------------------------------------------------

inline json to_json(const SeedRecord& s) {
    json j;
    j["id"] = s.id;
    j["family"] = to_string(s.family);
    j["text"] = s.text;
    if (s.binding) {
        json params = params_to_json(s.binding->params);
        params["spec_id"] = s.binding->spec_id;
        j["params"] = params;
    }
    return j;
}

inline SeedRecord seed_from_json(const json& j) {
    util::check_object_fields(j, {"id", "family", "text"}, {"params"}, "seed instruction");
    SeedRecord s;
    s.id = j.at("id").get<std::string>();
    s.family = seed_family_from_string(j.at("family").get<std::string>());
    s.text = j.at("text").get<std::string>();
    if (s.text.empty()) throw util::SchemaError("seed \"" + s.id + "\" has empty text");
    if (j.contains("params")) {
        json params = j.at("params");
        if (!params.is_object() || !params.contains("spec_id"))
            throw util::SchemaError("seed \"" + s.id + "\": params must carry spec_id");
        std::string spec_id = params.at("spec_id").get<std::string>();
        params.erase("spec_id");
        AtomicInstructionInstance inst;
        inst.spec_id = spec_id;
        inst.params = validate_params(spec_by_id(spec_id), params_from_json(params, spec_id));
        inst.rendered_text = s.text;
        s.binding = std::move(inst);
    }
    return s;
}

// ---- emitted dataset record -----------------------------------------------------

/// Flattened export format for kept samples: enough metadata to re-check the
/// three gates offline against the replay store.
inline json to_export_json(const SynthSample& s) {
    json j;
    j["instruction"] = s.instruction.text;
    j["query"] = s.query.question;
    json passages = json::array();
    for (const auto& p : s.passages) {
        json pj;
        pj["id"] = p.id;
        pj["title"] = p.title;
        pj["text"] = p.text;
        passages.push_back(pj);
    }
    j["passages"] = passages;
    j["response"] = s.chosen_response ? *s.chosen_response : "";
    json meta;
    meta["sample_id"] = s.sample_id;
    meta["instruction_id"] = s.instruction.id;
    meta["dataset"] = to_string(s.query.dataset);
    json verdicts;
    verdicts["final"] = to_string(s.verdict);
    json scores;
    scores["per_response_acc_case"] = s.per_response_acc_case;
    double best = 0.0;
    size_t best_idx = 0;
    for (size_t i = 0; i < s.per_response_acc_case.size(); ++i) {
        if (s.per_response_acc_case[i] > best) {
            best = s.per_response_acc_case[i];
            best_idx = i;
        }
    }
    scores["chosen_acc_case"] = best;
    scores["chosen_index"] = best_idx;
    if (s.consistency_score) scores["consistency"] = *s.consistency_score;
    meta["verdicts"] = verdicts;
    meta["scores"] = scores;
    j["meta"] = meta;
    return j;
}

// ---- schema dispatch --------------------------------------------------------------

/// Generic deserialize keyed by schema id ("seed", "passage", "qa",
/// "instruction", "synth_sample", "bench_sample"): validates and returns the
/// canonical serialization. Typed callers use the from_json functions above.
inline json parse_record(const std::string& schema_id, const json& j) {
    if (schema_id == "seed") return to_json(seed_from_json(j));
    if (schema_id == "passage") return to_json(passage_from_json(j));
    if (schema_id == "qa") return to_json(qa_from_json(j));
    if (schema_id == "instruction") return to_json(instruction_from_json(j));
    if (schema_id == "synth_sample") return to_json(synth_sample_from_json(j));
    if (schema_id == "bench_sample") return to_json(bench_sample_from_json(j));
    throw util::SchemaError("unknown schema id \"" + schema_id + "\"");
}

}  // namespace vifrag::core
