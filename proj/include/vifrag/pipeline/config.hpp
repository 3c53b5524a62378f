#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/gateway/gateway.hpp"
#include "vifrag/sandbox/executor.hpp"
#include "vifrag/util/jsonl.hpp"
#include "vifrag/util/log.hpp"

namespace vifrag::pipeline {

struct QaSource {
    std::string path;
    std::string dataset;  // nq | tqa | hqa | webqsp | sharegpt | custom
};

struct ComposeConfig {
    size_t count = 60;              // composed candidates to attempt
    double multiple_fraction = 0.5;  // Multiple vs Chain mix (unstated in the source method)
    size_t chain_max_n = 4;          // chain length drawn uniformly from 2..chain_max_n
    int max_conflict_redraws = 20;
    std::string templates_path;  // optional override of the built-ins
};

struct Thresholds {
    double acc = 0.5;      // strict ">" gates everywhere
    int consistency = 8;   // keep iff score >= consistency
};

struct TargetCounts {
    size_t general = 60000;
    size_t rag = 40000;
};

/// Full synthesis-run configuration. The paper's overloaded K appears here as
/// four separately named knobs.
struct PipelineConfig {
    std::string seeds_path;
    uint64_t rng_seed = 42;
    int k_rewrite_rounds = 1;
    int k_verification = 3;
    int k_queries_per_instruction = 0;  // 0 = derive from targets
    int k_responses = 4;
    size_t retrieval_k = 3;
    ComposeConfig compose;
    Thresholds thresholds;
    sandbox::FilterMode filter_mode = sandbox::FilterMode::Any;
    TargetCounts targets;
    std::vector<QaSource> rag_sources;
    std::optional<QaSource> general_source;
    std::string corpus_path;  // chunk + embed at combine time...
    std::string index_dir;    // ...or load a prebuilt index
    size_t embedder_dim = 256;
    sandbox::SandboxPolicy sandbox_policy;
    gateway::GatewayOptions gateway_options;
    std::string gateway_key_namespace = "default";
    int jobs = 1;
};

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
    util::check_object_fields(
        j,
        {"seeds_path"},
        {"rng_seed", "k_rewrite_rounds", "k_verification", "k_queries_per_instruction",
         "k_responses", "retrieval_k", "compose", "thresholds", "filter_mode", "targets",
         "rag_sources", "general_source", "corpus_path", "index_dir", "embedder_dim", "sandbox",
         "gateway", "jobs"},
        "pipeline config");
    PipelineConfig c;
    c.seeds_path = j.at("seeds_path").get<std::string>();
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.k_rewrite_rounds = j.value("k_rewrite_rounds", c.k_rewrite_rounds);
    c.k_verification = j.value("k_verification", c.k_verification);
    c.k_queries_per_instruction = j.value("k_queries_per_instruction", 0);
    c.k_responses = j.value("k_responses", c.k_responses);
    c.retrieval_k = j.value("retrieval_k", c.retrieval_k);
    if (j.contains("compose")) {
        const auto& cj = j.at("compose");
        util::check_object_fields(
            cj, {}, {"count", "multiple_fraction", "chain_max_n", "max_conflict_redraws",
                     "templates_path"},
            "compose config");
        c.compose.count = cj.value("count", c.compose.count);
        c.compose.multiple_fraction = cj.value("multiple_fraction", c.compose.multiple_fraction);
        c.compose.chain_max_n = cj.value("chain_max_n", c.compose.chain_max_n);
        c.compose.max_conflict_redraws =
            cj.value("max_conflict_redraws", c.compose.max_conflict_redraws);
        c.compose.templates_path = cj.value("templates_path", std::string());
    }
    if (j.contains("thresholds")) {
        const auto& tj = j.at("thresholds");
        util::check_object_fields(tj, {}, {"acc", "consistency"}, "thresholds");
        c.thresholds.acc = tj.value("acc", c.thresholds.acc);
        c.thresholds.consistency = tj.value("consistency", c.thresholds.consistency);
        // The two numeric gates are fixed by the method; overriding them is
        // allowed but never silent.
        if (c.thresholds.acc != 0.5)
            util::log_warn("threshold_override", {{"acc", c.thresholds.acc}});
        if (c.thresholds.consistency != 8)
            util::log_warn("threshold_override", {{"consistency", c.thresholds.consistency}});
    }
    if (j.contains("filter_mode")) {
        std::string mode = j.at("filter_mode").get<std::string>();
        if (mode == "any") c.filter_mode = sandbox::FilterMode::Any;
        else if (mode == "all") c.filter_mode = sandbox::FilterMode::All;
        else throw util::SchemaError("filter_mode must be \"any\" or \"all\"");
    }
    if (j.contains("targets")) {
        const auto& tj = j.at("targets");
        util::check_object_fields(tj, {}, {"general", "rag"}, "targets");
        c.targets.general = tj.value("general", c.targets.general);
        c.targets.rag = tj.value("rag", c.targets.rag);
    }
    if (j.contains("rag_sources")) {
        for (const auto& sj : j.at("rag_sources")) {
            util::check_object_fields(sj, {"path", "dataset"}, {}, "rag source");
            c.rag_sources.push_back({sj.at("path").get<std::string>(),
                                     sj.at("dataset").get<std::string>()});
        }
    }
    if (j.contains("general_source")) {
        const auto& sj = j.at("general_source");
        util::check_object_fields(sj, {"path", "dataset"}, {}, "general source");
        c.general_source =
            QaSource{sj.at("path").get<std::string>(), sj.at("dataset").get<std::string>()};
    }
    c.corpus_path = j.value("corpus_path", std::string());
    c.index_dir = j.value("index_dir", std::string());
    c.embedder_dim = j.value("embedder_dim", c.embedder_dim);
    if (j.contains("sandbox")) {
        const auto& sj = j.at("sandbox");
        util::check_object_fields(
            sj, {}, {"interpreter", "timeout_ms", "max_output_bytes", "cpu_seconds", "memory_bytes"},
            "sandbox config");
        if (sj.contains("interpreter"))
            c.sandbox_policy.interpreter_command =
                sj.at("interpreter").get<std::vector<std::string>>();
        if (sj.contains("timeout_ms"))
            c.sandbox_policy.wall_timeout =
                std::chrono::milliseconds(sj.at("timeout_ms").get<int64_t>());
        if (sj.contains("max_output_bytes"))
            c.sandbox_policy.max_output_bytes = sj.at("max_output_bytes").get<size_t>();
        if (sj.contains("cpu_seconds"))
            c.sandbox_policy.cpu_seconds_limit = sj.at("cpu_seconds").get<long>();
        if (sj.contains("memory_bytes"))
            c.sandbox_policy.memory_bytes_limit = sj.at("memory_bytes").get<long>();
        c.sandbox_policy.check();
    }
    if (j.contains("gateway")) {
        const auto& gj = j.at("gateway");
        util::check_object_fields(
            gj, {},
            {"model", "max_output_tokens", "key_namespace", "max_attempts", "base_delay_ms",
             "requests_per_minute", "max_in_flight", "temp_rewrite", "temp_sampling",
             "temp_judge", "temp_consistency", "temp_reform", "temp_blend"},
            "gateway config");
        auto& g = c.gateway_options;
        g.model_name = gj.value("model", g.model_name);
        g.max_output_tokens = gj.value("max_output_tokens", g.max_output_tokens);
        g.retry.max_attempts = gj.value("max_attempts", g.retry.max_attempts);
        g.retry.base_delay_ms = gj.value("base_delay_ms", g.retry.base_delay_ms);
        g.rate.requests_per_minute = gj.value("requests_per_minute", g.rate.requests_per_minute);
        g.rate.max_in_flight = gj.value("max_in_flight", g.rate.max_in_flight);
        g.temp_rewrite = gj.value("temp_rewrite", g.temp_rewrite);
        g.temp_sampling = gj.value("temp_sampling", g.temp_sampling);
        g.temp_judge = gj.value("temp_judge", g.temp_judge);
        g.temp_consistency = gj.value("temp_consistency", g.temp_consistency);
        g.temp_reform = gj.value("temp_reform", g.temp_reform);
        g.temp_blend = gj.value("temp_blend", g.temp_blend);
        c.gateway_key_namespace = gj.value("key_namespace", c.gateway_key_namespace);
    }
    c.jobs = j.value("jobs", c.jobs);
    return c;
}

inline nlohmann::json pipeline_config_to_json(const PipelineConfig& c) {
    nlohmann::json j;
    j["seeds_path"] = c.seeds_path;
    j["rng_seed"] = c.rng_seed;
    j["k_rewrite_rounds"] = c.k_rewrite_rounds;
    j["k_verification"] = c.k_verification;
    j["k_queries_per_instruction"] = c.k_queries_per_instruction;
    j["k_responses"] = c.k_responses;
    j["retrieval_k"] = c.retrieval_k;
    j["compose"] = {{"count", c.compose.count},
                    {"multiple_fraction", c.compose.multiple_fraction},
                    {"chain_max_n", c.compose.chain_max_n},
                    {"max_conflict_redraws", c.compose.max_conflict_redraws},
                    {"templates_path", c.compose.templates_path}};
    j["thresholds"] = {{"acc", c.thresholds.acc}, {"consistency", c.thresholds.consistency}};
    j["filter_mode"] = c.filter_mode == sandbox::FilterMode::Any ? "any" : "all";
    j["targets"] = {{"general", c.targets.general}, {"rag", c.targets.rag}};
    nlohmann::json sources = nlohmann::json::array();
    for (const auto& s : c.rag_sources)
        sources.push_back({{"path", s.path}, {"dataset", s.dataset}});
    j["rag_sources"] = sources;
    if (c.general_source)
        j["general_source"] = {{"path", c.general_source->path},
                               {"dataset", c.general_source->dataset}};
    j["corpus_path"] = c.corpus_path;
    j["index_dir"] = c.index_dir;
    j["embedder_dim"] = c.embedder_dim;
    j["sandbox"] = {
        {"interpreter", c.sandbox_policy.interpreter_command},
        {"timeout_ms", c.sandbox_policy.wall_timeout.count()},
        {"max_output_bytes", c.sandbox_policy.max_output_bytes},
        {"cpu_seconds", c.sandbox_policy.cpu_seconds_limit},
        {"memory_bytes", c.sandbox_policy.memory_bytes_limit}};
    j["gateway"] = {{"model", c.gateway_options.model_name},
                    {"max_output_tokens", c.gateway_options.max_output_tokens},
                    {"key_namespace", c.gateway_key_namespace},
                    {"max_attempts", c.gateway_options.retry.max_attempts},
                    {"base_delay_ms", c.gateway_options.retry.base_delay_ms},
                    {"requests_per_minute", c.gateway_options.rate.requests_per_minute},
                    {"max_in_flight", c.gateway_options.rate.max_in_flight},
                    {"temp_rewrite", c.gateway_options.temp_rewrite},
                    {"temp_sampling", c.gateway_options.temp_sampling},
                    {"temp_judge", c.gateway_options.temp_judge},
                    {"temp_consistency", c.gateway_options.temp_consistency},
                    {"temp_reform", c.gateway_options.temp_reform},
                    {"temp_blend", c.gateway_options.temp_blend}};
    j["jobs"] = c.jobs;
    return j;
}

}  // namespace vifrag::pipeline
