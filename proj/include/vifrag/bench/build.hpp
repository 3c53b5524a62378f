#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vifrag/compose/conflicts.hpp"
#include "vifrag/core/render.hpp"
#include "vifrag/core/schemas.hpp"
#include "vifrag/gateway/gateway.hpp"
#include "vifrag/retrieval/chunk.hpp"
#include "vifrag/retrieval/embed.hpp"
#include "vifrag/retrieval/index.hpp"
#include "vifrag/retrieval/qa.hpp"
#include "vifrag/util/rng.hpp"

namespace vifrag::bench {

struct BenchSource {
    std::string path;
    std::string dataset;
    size_t count = 0;  // 0 = take every question in the file
};

struct BenchBuildConfig {
    std::vector<BenchSource> sources;
    // Ratio of samples carrying 1/2/3/4 atomic instructions. The default
    // mirrors the published difficulty mix (0.9K : 0.9K : 0.5K : 0.5K).
    std::array<double, 4> n_ratios = {0.9, 0.9, 0.5, 0.5};
    size_t retrieval_k = 3;
    uint64_t rng_seed = 42;
    std::string corpus_path;
    std::string index_dir;
    size_t embedder_dim = 256;
    int max_conflict_redraws = 20;
};

inline BenchBuildConfig bench_config_from_json(const nlohmann::json& j) {
    util::check_object_fields(j, {"sources"},
                              {"n_ratios", "retrieval_k", "rng_seed", "corpus_path", "index_dir",
                               "embedder_dim", "max_conflict_redraws"},
                              "bench config");
    BenchBuildConfig c;
    for (const auto& sj : j.at("sources")) {
        util::check_object_fields(sj, {"path", "dataset"}, {"count"}, "bench source");
        c.sources.push_back({sj.at("path").get<std::string>(),
                             sj.at("dataset").get<std::string>(), sj.value("count", size_t{0})});
    }
    if (j.contains("n_ratios")) {
        auto ratios = j.at("n_ratios").get<std::vector<double>>();
        if (ratios.size() != 4) throw util::SchemaError("n_ratios must have 4 entries");
        for (size_t i = 0; i < 4; ++i) c.n_ratios[i] = ratios[i];
    }
    c.retrieval_k = j.value("retrieval_k", c.retrieval_k);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.corpus_path = j.value("corpus_path", std::string());
    c.index_dir = j.value("index_dir", std::string());
    c.embedder_dim = j.value("embedder_dim", c.embedder_dim);
    c.max_conflict_redraws = j.value("max_conflict_redraws", c.max_conflict_redraws);
    return c;
}

/// Exact per-n sample counts from the ratios via largest remainder, so the
/// counts always sum to `total`.
inline std::array<size_t, 4> allocate_counts(const std::array<double, 4>& ratios, size_t total) {
    double sum = ratios[0] + ratios[1] + ratios[2] + ratios[3];
    if (sum <= 0.0) throw std::invalid_argument("n_ratios must sum to a positive value");
    std::array<size_t, 4> counts{};
    std::array<double, 4> remainders{};
    size_t assigned = 0;
    for (size_t i = 0; i < 4; ++i) {
        double exact = static_cast<double>(total) * ratios[i] / sum;
        counts[i] = static_cast<size_t>(exact);
        remainders[i] = exact - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    while (assigned < total) {
        size_t best = 0;
        for (size_t i = 1; i < 4; ++i)
            if (remainders[i] > remainders[best]) best = i;
        counts[best]++;
        remainders[best] = -1.0;
        ++assigned;
    }
    return counts;
}

namespace detail {

/// Placeholder instance used for draw-time conflict checking and as the
/// fallback when reforming fails or conflicts. The salt keeps keyword
/// placeholders distinct across the sample's instances.
inline core::AtomicInstructionInstance default_instance(const core::AtomicInstructionSpec& spec,
                                                        const std::string& question,
                                                        uint64_t salt) {
    core::ParamMap params;
    const std::string& id = spec.id;
    auto word = [&](uint64_t offset) {
        static const std::vector<std::string> pool = {"journey", "pattern", "signal",  "harvest",
                                                      "orchard", "council", "archive", "beacon"};
        return pool[(salt + offset) % pool.size()];
    };
    if (id == "keywords:inclusion") params["keywords"] = std::vector<std::string>{word(0), word(3)};
    else if (id == "keywords:exclusion") params["keywords"] = std::vector<std::string>{word(5)};
    else if (id == "keywords:frequency") {
        params["keyword"] = word(1);
        params["n"] = int64_t{2};
    } else if (id == "length:words") params["n"] = int64_t{40};
    else if (id == "length:sentences") params["n"] = int64_t{3};
    else if (id == "length:paragraphs") {
        params["relation"] = core::Relation::Exactly;
        params["n"] = int64_t{2};
    } else if (id == "format:language") params["language"] = std::string("en");
    else if (id == "format:repeat_question") params["question"] = question;
    else if (id == "structure:sections") params["n"] = int64_t{2};
    else if (id == "structure:highlights") params["n"] = int64_t{2};
    else if (id == "structure:bullets") {
        params["relation"] = core::Relation::Exactly;
        params["n"] = int64_t{3};
    } else if (id == "structure:placeholder") params["n"] = int64_t{1};
    else if (id == "cases:capital_words") params["n"] = int64_t{2};
    else if (id == "position:end_with") params["suffix"] = std::string("Any other questions?");
    else if (id == "position:first_word") {
        params["n"] = int64_t{1};
        params["word"] = word(2);
    }
    core::AtomicInstructionInstance inst;
    inst.spec_id = id;
    inst.params = core::validate_params(spec, params);
    inst.rendered_text = core::render_default_text(inst);
    return inst;
}

inline const std::vector<std::string>& reform_demos(const std::string& spec_id) {
    static std::map<std::string, std::vector<std::string>> demos = [] {
        std::map<std::string, std::vector<std::string>> d;
        for (const auto& spec : core::registry()) {
            core::AtomicInstructionInstance a = default_instance(spec, "What is the capital?", 1);
            core::AtomicInstructionInstance b = default_instance(spec, "Who wrote the novel?", 4);
            d[spec.id] = {core::render_default_text(a), core::render_default_text(b)};
        }
        return d;
    }();
    return demos.at(spec_id);
}

}  // namespace detail

struct BenchBuildResult {
    std::vector<core::BenchSample> samples;
    size_t reform_fallbacks = 0;   // reform failed; draw-time default used
    size_t reform_skipped = 0;     // reform conflicted; spec dropped from sample
    size_t blend_fallbacks = 0;
};

/// Builds FollowRAG-style samples: draw n specs (conflict-checked, bounded
/// redraw), reform each through the gateway, blend with the question, attach
/// exactly top-k passages. kwargs survive verbatim on each sample for
/// evaluation.
inline BenchBuildResult build_bench(const std::vector<core::QaRecord>& questions,
                                    const BenchBuildConfig& config, gateway::Gateway& gw,
                                    const retrieval::EmbeddingStore& store,
                                    const retrieval::Embedder& embedder) {
    BenchBuildResult result;
    const auto& specs = core::registry();
    util::Rng rng(config.rng_seed ^ util::fnv1a64("bench"));

    // Exact counts per n, shuffled so every dataset sees every difficulty.
    auto counts = allocate_counts(config.n_ratios, questions.size());
    std::vector<size_t> n_for_sample;
    for (size_t n = 0; n < 4; ++n)
        n_for_sample.insert(n_for_sample.end(), counts[n], n + 1);
    util::shuffle(n_for_sample, rng);

    for (size_t qi = 0; qi < questions.size(); ++qi) {
        const auto& question = questions[qi];
        size_t n = n_for_sample[qi];

        // draw n distinct specs; re-draw the whole set while conflicting
        std::vector<size_t> chosen;
        std::vector<core::AtomicInstructionInstance> defaults;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= config.max_conflict_redraws)
                throw std::runtime_error("could not draw a conflict-free instruction set");
            chosen = util::sample_indices(rng, specs.size(), n);
            defaults.clear();
            for (size_t c = 0; c < chosen.size(); ++c)
                defaults.push_back(
                    detail::default_instance(specs[chosen[c]], question.question,
                                             util::fnv1a64(question.id) + c * 17));
            if (compose::static_conflict_check(defaults).empty()) break;
        }

        // reform each spec; schema-invalid -> fallback, conflicting -> skip
        std::vector<core::AtomicInstructionInstance> instances;
        for (size_t c = 0; c < chosen.size(); ++c) {
            const auto& spec = specs[chosen[c]];
            auto reformed =
                gw.reform_instruction(question.question, spec, detail::reform_demos(spec.id));
            core::AtomicInstructionInstance candidate;
            if (reformed) {
                candidate = *reformed;
            } else {
                ++result.reform_fallbacks;
                candidate = defaults[c];
            }
            auto trial = instances;
            trial.push_back(candidate);
            if (!compose::static_conflict_check(trial).empty()) {
                ++result.reform_skipped;
                continue;
            }
            instances.push_back(std::move(candidate));
        }
        if (instances.empty()) instances.push_back(defaults.front());

        auto blend = gw.blend(question.question, instances);
        if (!blend.blended) ++result.blend_fallbacks;

        core::BenchSample sample;
        sample.sample_id =
            "bench:" + std::string(core::to_string(question.dataset)) + ":" + std::to_string(qi);
        sample.source = question;
        sample.instances = std::move(instances);
        sample.blended_prompt = blend.text;
        sample.blended = blend.blended;
        sample.passages =
            store.retrieve_passages(embedder.embed_query(question.question), config.retrieval_k);
        result.samples.push_back(std::move(sample));
    }
    return result;
}

/// Loads the configured QA sources in order, honoring per-source counts.
inline std::vector<core::QaRecord> load_bench_questions(const BenchBuildConfig& config) {
    std::vector<core::QaRecord> questions;
    for (const auto& source : config.sources) {
        auto loaded = retrieval::load_qa(source.path, source.dataset);
        size_t take = source.count == 0 ? loaded.records.size()
                                        : std::min(source.count, loaded.records.size());
        for (size_t i = 0; i < take; ++i) questions.push_back(std::move(loaded.records[i]));
    }
    return questions;
}

inline retrieval::EmbeddingStore open_bench_store(const BenchBuildConfig& config,
                                                  const retrieval::Embedder& embedder) {
    if (!config.index_dir.empty()) return retrieval::EmbeddingStore::load(config.index_dir);
    if (config.corpus_path.empty())
        throw std::runtime_error("bench build needs corpus_path or index_dir");
    auto docs = util::read_jsonl<retrieval::CorpusDoc>(
        config.corpus_path, [](const nlohmann::json& j) {
            util::check_object_fields(j, {"id", "title", "text"}, {}, "corpus doc");
            return retrieval::CorpusDoc{j.at("id").get<std::string>(),
                                        j.at("title").get<std::string>(),
                                        j.at("text").get<std::string>()};
        });
    auto chunks = retrieval::chunk_corpus(docs.records);
    retrieval::EmbeddingStore store(embedder.dim());
    for (const auto& p : chunks.passages) store.add(p, embedder.embed_passage(p.text));
    return store;
}

}  // namespace vifrag::bench
