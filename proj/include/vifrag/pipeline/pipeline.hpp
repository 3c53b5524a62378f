#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vifrag/compose/composer.hpp"
#include "vifrag/core/schemas.hpp"
#include "vifrag/gateway/gateway.hpp"
#include "vifrag/pipeline/checkpoint.hpp"
#include "vifrag/pipeline/config.hpp"
#include "vifrag/retrieval/chunk.hpp"
#include "vifrag/retrieval/embed.hpp"
#include "vifrag/retrieval/index.hpp"
#include "vifrag/retrieval/qa.hpp"
#include "vifrag/sandbox/executor.hpp"
#include "vifrag/util/rng.hpp"

// The staged synthesis flow: seed -> compose -> rewrite -> verify -> combine
// -> sample -> emit. Every stage reads its input from the previous stage's
// file and writes a checkpoint once its own output is flushed, so an
// interrupted run resumes at the last completed stage and, with a frozen
// replay store, reproduces the exact same bytes.

namespace vifrag::pipeline {

class SeedLoadError : public std::runtime_error {
public:
    explicit SeedLoadError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SeedLoad {
    std::vector<core::SeedRecord> seeds;
    std::map<std::string, size_t> family_counts;
    std::vector<std::string> warnings;
};

/// Loads and validates the handwritten seed set. Duplicate ids and empty
/// files are errors; a family with a count other than 15 (or a total other
/// than 60) only warns, mirroring the lenient loader contract.
inline SeedLoad load_seed(const std::filesystem::path& path) {
    auto parsed = util::read_jsonl<core::SeedRecord>(
        path, [](const nlohmann::json& j) { return core::seed_from_json(j); }, /*strict=*/true);
    if (parsed.records.empty()) throw SeedLoadError("seed file is empty: " + path.string());

    SeedLoad load;
    std::set<std::string> ids;
    for (const auto& seed : parsed.records) {
        if (!ids.insert(seed.id).second)
            throw SeedLoadError("duplicate seed id \"" + seed.id + "\"");
        load.family_counts[core::to_string(seed.family)]++;
    }
    for (const char* family : {"format", "semantic", "knowledge", "lexical"}) {
        size_t n = load.family_counts.count(family) ? load.family_counts[family] : 0;
        if (n != 15)
            load.warnings.push_back("seed family \"" + std::string(family) + "\" has " +
                                    std::to_string(n) + " entries, expected 15");
    }
    if (parsed.records.size() != 60)
        load.warnings.push_back("seed set has " + std::to_string(parsed.records.size()) +
                                " entries, expected 60");
    load.seeds = std::move(parsed.records);
    for (const auto& w : load.warnings) util::log_warn("seed_warning", {{"message", w}});
    return load;
}

class SynthPipeline {
public:
    SynthPipeline(PipelineConfig config, std::shared_ptr<gateway::Gateway> gw,
                  std::filesystem::path run_dir)
        : config_(std::move(config)), gateway_(std::move(gw)), run_dir_(std::move(run_dir)) {
        std::filesystem::create_directories(run_dir_ / "stages");
        std::filesystem::create_directories(run_dir_ / "checkpoints");
    }

    static const std::vector<std::string>& stage_names() {
        static const std::vector<std::string> names = {"seed",    "compose", "rewrite", "verify",
                                                       "combine", "sample",  "emit"};
        return names;
    }

    const std::filesystem::path& run_dir() const { return run_dir_; }
    std::filesystem::path stage_file(const std::string& name) const {
        return run_dir_ / "stages" / (name + ".jsonl");
    }
    std::filesystem::path artifacts_file() const { return run_dir_ / "stages" / "artifacts.jsonl"; }
    std::filesystem::path dataset_file() const { return run_dir_ / "vif_rag_qa.jsonl"; }
    std::filesystem::path stats_file() const { return run_dir_ / "stats.json"; }

    /// Runs every stage that has no valid checkpoint yet, in order, stopping
    /// after `stop_after` when given. Re-running a finished pipeline is a
    /// no-op; this is also the resume path.
    void run(const std::string& stop_after = "") {
        for (const auto& stage : stage_names()) {
            auto existing = read_checkpoint(run_dir_, stage);
            if (existing) {
                std::string digest = file_digest(input_path_for(stage));
                if (digest != existing->input_digest)
                    throw std::runtime_error("stage " + stage +
                                             " input changed since its checkpoint; refusing to "
                                             "resume (delete the run dir to start over)");
                util::log_info("stage_skip", {{"stage", stage}});
            } else {
                util::log_info("stage_run", {{"stage", stage}});
                run_stage(stage);
            }
            if (stage == stop_after) return;
        }
    }

    void run_stage(const std::string& stage) {
        if (stage == "seed") run_stage_seed();
        else if (stage == "compose") run_stage_compose();
        else if (stage == "rewrite") run_stage_rewrite();
        else if (stage == "verify") run_stage_verify();
        else if (stage == "combine") run_stage_combine();
        else if (stage == "sample") run_stage_sample();
        else if (stage == "emit") run_stage_emit();
        else throw std::invalid_argument("unknown stage \"" + stage + "\"");
    }

    // ---- stage: seed ------------------------------------------------------------

    StageCheckpoint run_stage_seed() {
        auto load = load_seed(config_.seeds_path);
        std::vector<nlohmann::json> rows;
        for (const auto& seed : load.seeds) {
            core::ComposedInstruction ins;
            ins.id = seed.id;
            ins.mode = core::ComposeMode::Single;
            if (seed.binding) ins.parts.push_back(*seed.binding);
            ins.text = seed.text;
            ins.provenance = core::Provenance::Seed;
            ins.families = {core::to_string(seed.family)};
            ins.source_ids = {seed.id};
            rows.push_back(core::to_json(ins));
        }
        util::write_jsonl(stage_file("seed"), rows);

        StageCheckpoint cp;
        cp.stage = "seed";
        cp.input_digest = file_digest(config_.seeds_path);
        cp.output_path = stage_file("seed").string();
        cp.in = load.seeds.size();
        cp.kept = rows.size();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: compose ----------------------------------------------------------

    StageCheckpoint run_stage_compose() {
        auto pool = read_instructions(stage_file("seed"));
        util::Rng rng(config_.rng_seed ^ util::fnv1a64("compose"));

        compose::ComposerOptions opts;
        opts.max_conflict_redraws = config_.compose.max_conflict_redraws;
        if (!config_.compose.templates_path.empty())
            opts.templates = compose::load_templates(config_.compose.templates_path);

        StageCheckpoint cp;
        cp.stage = "compose";
        cp.in = config_.compose.count;

        std::vector<core::ComposedInstruction> complex_kept;
        for (size_t i = 0; i < config_.compose.count; ++i) {
            core::ComposedInstruction candidate;
            try {
                if (rng.unit() < config_.compose.multiple_fraction) {
                    size_t arity = 2 + rng.bounded(2);
                    candidate = compose::compose_multiple(pool, arity, rng, opts);
                } else {
                    size_t span = std::max<size_t>(1, config_.compose.chain_max_n - 1);
                    size_t n = 2 + rng.bounded(span);
                    candidate = compose::compose_chain(pool, n, rng, opts);
                }
            } catch (const std::exception& e) {
                util::log_warn("compose_failed", {{"error", e.what()}});
                cp.discarded["compose_failed"]++;
                continue;
            }
            candidate.id = "compose:" + std::to_string(i);

            auto score = gateway_->score_consistency(candidate.text);
            if (!score) {
                cp.discarded["consistency_unparseable"]++;
                continue;
            }
            candidate.consistency_score = *score;
            if (*score < config_.thresholds.consistency) {
                cp.discarded["consistency"]++;
                continue;
            }
            complex_kept.push_back(std::move(candidate));
        }
        cp.kept = complex_kept.size();

        // D_seed = atomic seeds + gated complex instructions
        std::vector<nlohmann::json> rows;
        for (const auto& ins : pool) rows.push_back(core::to_json(ins));
        for (const auto& ins : complex_kept) rows.push_back(core::to_json(ins));
        util::write_jsonl(stage_file("compose"), rows);

        cp.input_digest = file_digest(stage_file("seed"));
        cp.output_path = stage_file("compose").string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: rewrite ------------------------------------------------------------

    StageCheckpoint run_stage_rewrite() {
        auto d_seed = read_instructions(stage_file("compose"));

        std::set<std::string> dedup_keys;
        for (const auto& ins : d_seed) dedup_keys.insert(util::casefold_collapse(ins.text));

        StageCheckpoint cp;
        cp.stage = "rewrite";
        std::vector<core::ComposedInstruction> augmented;
        for (size_t start = 0; start < d_seed.size(); start += 50) {
            size_t end = std::min(d_seed.size(), start + 50);
            std::vector<core::ComposedInstruction> batch(d_seed.begin() + start,
                                                         d_seed.begin() + end);
            auto result = gateway_->rewrite_batch(batch, config_.k_rewrite_rounds, dedup_keys);
            cp.in += result.attempted;
            cp.discarded["duplicate"] += result.duplicates_removed;
            cp.discarded["unparseable"] += result.failed_slots;
            for (auto& ins : result.instructions) augmented.push_back(std::move(ins));
        }
        for (size_t i = 0; i < augmented.size(); ++i)
            augmented[i].id = "rewrite:" + std::to_string(i);

        // D_ins = D_seed (union) D_aug, duplicates already removed
        cp.in += d_seed.size();
        std::vector<nlohmann::json> rows;
        for (const auto& ins : d_seed) rows.push_back(core::to_json(ins));
        for (const auto& ins : augmented) rows.push_back(core::to_json(ins));
        cp.kept = rows.size();
        util::write_jsonl(stage_file("rewrite"), rows);

        cp.input_digest = file_digest(stage_file("compose"));
        cp.output_path = stage_file("rewrite").string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: verify ----------------------------------------------------------------

    StageCheckpoint run_stage_verify() {
        auto d_ins = read_instructions(stage_file("rewrite"));

        struct Slot {
            sandbox::VerificationArtifact artifact;
            bool has_artifact = false;
            bool kept = false;
        };
        std::vector<Slot> slots(d_ins.size());
        sandbox::parallel_for(d_ins.size(), config_.jobs, [&](size_t i) {
            auto artifact = gateway_->gen_verification(d_ins[i], config_.k_verification);
            if (artifact.k() == 0) return;
            slots[i].has_artifact = true;
            sandbox::cross_accuracy(artifact, config_.sandbox_policy, /*jobs=*/1);
            slots[i].kept = sandbox::filter_instruction(artifact, config_.filter_mode);
            slots[i].artifact = std::move(artifact);
        });

        StageCheckpoint cp;
        cp.stage = "verify";
        cp.in = d_ins.size();
        std::vector<nlohmann::json> kept_rows;
        std::vector<nlohmann::json> artifact_rows;
        for (size_t i = 0; i < d_ins.size(); ++i) {
            if (!slots[i].has_artifact) {
                cp.discarded["no_artifact"]++;
                continue;
            }
            if (!slots[i].kept) {
                cp.discarded["cross_accuracy"]++;
                continue;
            }
            ++cp.kept;
            kept_rows.push_back(core::to_json(d_ins[i]));
            artifact_rows.push_back(sandbox::to_json(slots[i].artifact));
        }
        util::write_jsonl(stage_file("verify"), kept_rows);
        util::write_jsonl(artifacts_file(), artifact_rows);

        cp.input_digest = file_digest(stage_file("rewrite"));
        cp.output_path = stage_file("verify").string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: combine ------------------------------------------------------------------

    StageCheckpoint run_stage_combine() {
        auto instructions = read_instructions(stage_file("verify"));

        std::vector<core::QaRecord> rag_pool;
        for (const auto& source : config_.rag_sources) {
            auto loaded = retrieval::load_qa(source.path, source.dataset);
            for (const auto& d : loaded.diagnostics)
                util::log_warn("qa_parse_error", {{"path", source.path},
                                                  {"line", d.line_no},
                                                  {"error", d.message}});
            for (auto& q : loaded.records) rag_pool.push_back(std::move(q));
        }
        std::vector<core::QaRecord> general_pool;
        if (config_.general_source) {
            auto loaded = retrieval::load_qa(config_.general_source->path,
                                             config_.general_source->dataset);
            for (const auto& d : loaded.diagnostics)
                util::log_warn("qa_parse_error", {{"path", config_.general_source->path},
                                                  {"line", d.line_no},
                                                  {"error", d.message}});
            general_pool = std::move(loaded.records);
        }

        std::optional<retrieval::EmbeddingStore> store;
        std::unique_ptr<retrieval::Embedder> embedder;
        if (!rag_pool.empty()) {
            embedder = std::make_unique<retrieval::HashedEmbedder>(config_.embedder_dim);
            store = open_store(*embedder);
        }

        size_t n_instr = instructions.size();
        size_t kq_rag =
            config_.k_queries_per_instruction > 0
                ? static_cast<size_t>(config_.k_queries_per_instruction)
                : (n_instr ? std::max<size_t>(1, config_.targets.rag / n_instr) : 0);
        size_t kq_general =
            config_.k_queries_per_instruction > 0
                ? static_cast<size_t>(config_.k_queries_per_instruction)
                : (n_instr ? std::max<size_t>(1, config_.targets.general / n_instr) : 0);
        if (rag_pool.empty()) kq_rag = 0;
        if (general_pool.empty()) kq_general = 0;

        util::Rng rng(config_.rng_seed ^ util::fnv1a64("combine"));
        PoolDrawer rag_drawer(rag_pool.size(), rng.fork(1));
        PoolDrawer general_drawer(general_pool.size(), rng.fork(2));

        StageCheckpoint cp;
        cp.stage = "combine";
        std::vector<nlohmann::json> rows;
        size_t rag_emitted = 0, general_emitted = 0, counter = 0;
        for (const auto& ins : instructions) {
            for (size_t q = 0; q < kq_rag; ++q) {
                ++cp.in;
                if (rag_emitted >= config_.targets.rag) {
                    cp.discarded["rag_cap_reached"]++;
                    continue;
                }
                const auto& query = rag_pool[rag_drawer.next()];
                core::SynthSample sample;
                sample.sample_id = "combine:" + std::to_string(counter++);
                sample.instruction = ins;
                sample.query = query;
                if (store && store->size() > 0) {
                    auto vec = embedder->embed_query(query.question);
                    sample.passages = store->retrieve_passages(
                        vec, std::min(config_.retrieval_k, store->size()));
                }
                rows.push_back(core::to_json(sample));
                ++rag_emitted;
                ++cp.kept;
            }
            for (size_t q = 0; q < kq_general; ++q) {
                ++cp.in;
                if (general_emitted >= config_.targets.general) {
                    cp.discarded["general_cap_reached"]++;
                    continue;
                }
                const auto& query = general_pool[general_drawer.next()];
                core::SynthSample sample;
                sample.sample_id = "combine:" + std::to_string(counter++);
                sample.instruction = ins;
                sample.query = query;
                rows.push_back(core::to_json(sample));
                ++general_emitted;
                ++cp.kept;
            }
        }
        if (rag_drawer.wrapped() || general_drawer.wrapped())
            util::log_warn("pool_exhausted",
                           {{"note", "query pool smaller than demand; sampling with replacement"}});

        util::write_jsonl(stage_file("combine"), rows);
        cp.input_digest = file_digest(stage_file("verify"));
        cp.output_path = stage_file("combine").string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: sample (rejection sampling + dual verification) ---------------------------

    StageCheckpoint run_stage_sample() {
        auto samples = read_samples(stage_file("combine"));
        auto artifacts = read_artifacts(artifacts_file());

        std::vector<core::SynthSample> results(samples.size());
        sandbox::parallel_for(samples.size(), config_.jobs, [&](size_t i) {
            results[i] = process_sample(samples[i], artifacts);
        });

        StageCheckpoint cp;
        cp.stage = "sample";
        cp.in = results.size();
        std::vector<nlohmann::json> rows;
        for (const auto& s : results) {
            rows.push_back(core::to_json(s));
            switch (s.verdict) {
                case core::Verdict::Kept: ++cp.kept; break;
                case core::Verdict::DiscardedExecutor: cp.discarded["executor"]++; break;
                case core::Verdict::DiscardedConsistency: cp.discarded["consistency"]++; break;
                default: cp.discarded["pending"]++; break;
            }
        }
        util::write_jsonl(stage_file("sample"), rows);
        cp.input_digest = file_digest(stage_file("combine"));
        cp.output_path = stage_file("sample").string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    // ---- stage: emit ---------------------------------------------------------------------

    StageCheckpoint run_stage_emit() {
        auto samples = read_samples(stage_file("sample"));

        StageCheckpoint cp;
        cp.stage = "emit";
        cp.in = samples.size();
        std::vector<nlohmann::json> rows;
        for (const auto& s : samples) {
            if (s.verdict != core::Verdict::Kept) {
                cp.discarded["not_kept"]++;
                continue;
            }
            core::check_invariants(s);
            rows.push_back(core::to_export_json(s));
            ++cp.kept;
        }
        util::write_jsonl(dataset_file(), rows);
        util::write_file_atomic(stats_file(), build_stats(samples).dump(2));

        cp.input_digest = file_digest(stage_file("sample"));
        cp.output_path = dataset_file().string();
        write_checkpoint(run_dir_, cp);
        return cp;
    }

    /// Funnel + retention summary assembled from checkpoints and stage files.
    nlohmann::json stats() const {
        std::vector<core::SynthSample> samples;
        if (std::filesystem::exists(stage_file("sample")))
            samples = read_samples(stage_file("sample"));
        return build_stats(samples);
    }

private:
    /// Uniform pool pick without replacement until the pool runs dry, then a
    /// reshuffled pass (sampling with replacement across passes).
    class PoolDrawer {
    public:
        PoolDrawer(size_t n, util::Rng rng) : n_(n), rng_(std::move(rng)) {}

        size_t next() {
            if (n_ == 0) throw std::runtime_error("draw from empty pool");
            if (queue_.empty()) {
                if (handed_out_ > 0) wrapped_ = true;
                queue_.resize(n_);
                for (size_t i = 0; i < n_; ++i) queue_[i] = i;
                util::shuffle(queue_, rng_);
            }
            size_t idx = queue_.back();
            queue_.pop_back();
            ++handed_out_;
            return idx;
        }

        bool wrapped() const { return wrapped_; }

    private:
        size_t n_;
        util::Rng rng_;
        std::vector<size_t> queue_;
        size_t handed_out_ = 0;
        bool wrapped_ = false;
    };

    std::filesystem::path input_path_for(const std::string& stage) const {
        if (stage == "seed") return config_.seeds_path;
        if (stage == "compose") return stage_file("seed");
        if (stage == "rewrite") return stage_file("compose");
        if (stage == "verify") return stage_file("rewrite");
        if (stage == "combine") return stage_file("verify");
        if (stage == "sample") return stage_file("combine");
        return stage_file("sample");  // emit
    }

    static std::vector<core::ComposedInstruction> read_instructions(
        const std::filesystem::path& path) {
        auto r = util::read_jsonl<core::ComposedInstruction>(
            path, [](const nlohmann::json& j) { return core::instruction_from_json(j); });
        return r.records;
    }

    static std::vector<core::SynthSample> read_samples(const std::filesystem::path& path) {
        auto r = util::read_jsonl<core::SynthSample>(
            path, [](const nlohmann::json& j) { return core::synth_sample_from_json(j); });
        return r.records;
    }

    static std::map<std::string, sandbox::VerificationArtifact> read_artifacts(
        const std::filesystem::path& path) {
        auto r = util::read_jsonl<sandbox::VerificationArtifact>(
            path, [](const nlohmann::json& j) { return sandbox::artifact_from_json(j); });
        std::map<std::string, sandbox::VerificationArtifact> out;
        for (auto& a : r.records) out[a.instruction_id] = std::move(a);
        return out;
    }

    retrieval::EmbeddingStore open_store(const retrieval::Embedder& embedder) const {
        if (!config_.index_dir.empty()) return retrieval::EmbeddingStore::load(config_.index_dir);
        if (config_.corpus_path.empty())
            throw std::runtime_error("combine stage needs corpus_path or index_dir");
        auto docs = util::read_jsonl<retrieval::CorpusDoc>(
            config_.corpus_path, [](const nlohmann::json& j) {
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

    core::SynthSample process_sample(
        const core::SynthSample& input,
        const std::map<std::string, sandbox::VerificationArtifact>& artifacts) const {
        core::SynthSample s = input;

        std::vector<std::pair<std::string, std::string>> passage_pairs;
        for (const auto& p : s.passages) passage_pairs.emplace_back(p.title, p.text);
        s.responses = gateway_->sample_responses(s.instruction.text, s.query.question,
                                                 passage_pairs, config_.k_responses);
        s.per_response_acc_case.assign(s.responses.size(), 0.0);
        if (s.responses.empty()) {
            s.verdict = core::Verdict::DiscardedExecutor;
            return s;
        }

        auto artifact_it = artifacts.find(s.instruction.id);
        if (artifact_it == artifacts.end()) {
            util::log_warn("missing_artifact", {{"instruction", s.instruction.id}});
            s.verdict = core::Verdict::DiscardedExecutor;
            return s;
        }

        auto rv = sandbox::verify_responses(s.responses, artifact_it->second.funcs,
                                            config_.sandbox_policy, /*jobs=*/1,
                                            config_.thresholds.acc);
        s.per_response_acc_case = rv.per_response_acc_case;
        if (!rv.keep) {
            s.verdict = core::Verdict::DiscardedExecutor;
            return s;
        }

        auto score = gateway_->score_consistency("Instruction: " + s.instruction.text +
                                                 "\nQuery: " + s.query.question);
        if (!score || *score < config_.thresholds.consistency) {
            if (score) s.consistency_score = *score;
            s.verdict = core::Verdict::DiscardedConsistency;
            return s;
        }
        s.consistency_score = *score;
        s.chosen_response = s.responses[rv.chosen_index];
        s.verdict = core::Verdict::Kept;
        return s;
    }

    nlohmann::json build_stats(const std::vector<core::SynthSample>& samples) const {
        nlohmann::json funnel = nlohmann::json::object();
        for (const auto& stage : stage_names()) {
            if (auto cp = read_checkpoint(run_dir_, stage)) {
                funnel[stage] = {{"in", cp->in},
                                 {"kept", cp->kept},
                                 {"discarded", cp->discarded}};
            }
        }

        auto family_counts = [](const std::vector<core::ComposedInstruction>& list) {
            std::map<std::string, size_t> counts;
            for (const auto& ins : list)
                for (const auto& f : ins.families) counts[f]++;
            return counts;
        };
        nlohmann::json retention = nlohmann::json::object();
        if (std::filesystem::exists(stage_file("seed")))
            retention["seed"] = family_counts(read_instructions(stage_file("seed")));
        if (std::filesystem::exists(stage_file("verify")))
            retention["verified"] = family_counts(read_instructions(stage_file("verify")));
        std::map<std::string, size_t> kept_families;
        std::map<std::string, size_t> verdicts;
        for (const auto& s : samples) {
            verdicts[core::to_string(s.verdict)]++;
            if (s.verdict == core::Verdict::Kept)
                for (const auto& f : s.instruction.families) kept_families[f]++;
        }
        retention["kept_samples"] = kept_families;

        nlohmann::json stats;
        stats["funnel"] = funnel;
        stats["family_retention"] = retention;
        stats["sample_verdicts"] = verdicts;
        return stats;
    }

    PipelineConfig config_;
    std::shared_ptr<gateway::Gateway> gateway_;
    std::filesystem::path run_dir_;
};

}  // namespace vifrag::pipeline
