// vifrag: synthesis pipeline + benchmark toolkit command line.
//
// Subcommands: synth run|resume, compose, verify-instructions, build-index,
// build-bench, evaluate, contamination, list-constraints, judge-check.
// Exit codes: 0 success, 1 finished with diagnostics, 2 configuration error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vifrag/bench/build.hpp"
#include "vifrag/bench/contamination.hpp"
#include "vifrag/bench/eval.hpp"
#include "vifrag/core/registry.hpp"
#include "vifrag/gateway/gateway.hpp"
#include "vifrag/gateway/http_backend.hpp"
#include "vifrag/gateway/mock_rules.hpp"
#include "vifrag/gateway/store.hpp"
#include "vifrag/pipeline/pipeline.hpp"
#include "vifrag/retrieval/chunk.hpp"
#include "vifrag/retrieval/embed.hpp"
#include "vifrag/retrieval/index.hpp"
#include "vifrag/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitConfigError = 2;

struct BackendFlags {
    std::string backend = "mock";  // mock | replay | http
    std::string replay_store;
    std::string record_store;
    std::string cache_dir;
    bool strict_replay = false;
    std::string key_namespace = "default";
};

void add_backend_flags(CLI::App* cmd, BackendFlags& flags) {
    cmd->add_option("--backend", flags.backend, "Model backend: http, replay, or mock")
        ->check(CLI::IsMember({"http", "replay", "mock"}));
    cmd->add_option("--replay-store", flags.replay_store,
                    "Replay store directory (required with --backend replay)");
    cmd->add_option("--record-store", flags.record_store,
                    "Record every request/response into this store");
    cmd->add_option("--cache-dir", flags.cache_dir, "Persistent response cache directory");
    cmd->add_flag("--strict-replay", flags.strict_replay,
                  "Abort when a request is missing from the replay store");
    cmd->add_option("--key-namespace", flags.key_namespace,
                    "Cache key namespace (must match between record and replay)");
}

vifrag::gateway::BackendPtr make_backend(const BackendFlags& flags) {
    using namespace vifrag::gateway;
    BackendPtr backend;
    if (flags.backend == "mock") {
        backend = make_scripted_mock_backend();
    } else if (flags.backend == "http") {
        HttpBackendConfig config;
        if (const char* base = std::getenv("VIF_API_BASE")) config.base_url = base;
        backend = std::make_shared<HttpBackend>(config);
    } else {  // replay
        if (flags.replay_store.empty())
            throw CLI::ValidationError("--backend replay requires --replay-store");
        auto store = std::make_shared<ReplayStore>(flags.replay_store);
        backend = std::make_shared<StoreBackend>(store, nullptr, flags.key_namespace,
                                                 flags.strict_replay);
    }
    if (!flags.record_store.empty() && flags.backend != "replay") {
        auto store = std::make_shared<ReplayStore>(flags.record_store);
        backend = std::make_shared<StoreBackend>(store, backend, flags.key_namespace);
    }
    if (!flags.cache_dir.empty()) {
        auto store = std::make_shared<ReplayStore>(flags.cache_dir);
        backend = std::make_shared<StoreBackend>(store, backend, flags.key_namespace);
    }
    return backend;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

/// Run manifest: enough to reproduce the run against the replay store.
void write_manifest(const fs::path& run_dir, const std::string& command,
                    const json& config_snapshot, uint64_t rng_seed,
                    const std::string& started_at, const json& funnel) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config_snapshot;
    manifest["rng_seed"] = rng_seed;
    manifest["versions"] = {{"vifrag", vifrag::kVersion}};
    manifest["started_at"] = started_at;
    manifest["finished_at"] = iso_timestamp();
    manifest["funnel"] = funnel;
    vifrag::util::write_file_atomic(run_dir / "run_manifest.json", manifest.dump(2));
}

json load_json_file(const std::string& path) {
    if (!fs::exists(path)) throw CLI::ValidationError("file not found: " + path);
    return json::parse(vifrag::util::read_file(path));
}

vifrag::pipeline::PipelineConfig load_pipeline_config(const std::string& path,
                                                      uint64_t seed_override, int jobs_override,
                                                      size_t k_docs_override) {
    auto config = vifrag::pipeline::pipeline_config_from_json(load_json_file(path));
    if (seed_override != 0) config.rng_seed = seed_override;
    if (jobs_override > 0) config.jobs = jobs_override;
    if (k_docs_override > 0) config.retrieval_k = k_docs_override;
    return config;
}

// ---- synth run / resume ---------------------------------------------------------

int cmd_synth_run(const std::string& config_path, const std::string& run_dir,
                  const BackendFlags& backend_flags, uint64_t seed_override, int jobs_override,
                  size_t k_docs_override, const std::string& stop_after) {
    std::string started = iso_timestamp();
    auto config = load_pipeline_config(config_path, seed_override, jobs_override,
                                       k_docs_override);
    fs::create_directories(run_dir);

    json snapshot;
    snapshot["pipeline"] = vifrag::pipeline::pipeline_config_to_json(config);
    snapshot["backend"] = {{"kind", backend_flags.backend},
                           {"replay_store", backend_flags.replay_store},
                           {"record_store", backend_flags.record_store},
                           {"cache_dir", backend_flags.cache_dir},
                           {"strict_replay", backend_flags.strict_replay},
                           {"key_namespace", backend_flags.key_namespace}};
    vifrag::util::write_file_atomic(fs::path(run_dir) / "config_snapshot.json",
                                    snapshot.dump(2));

    auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags),
                                                         config.gateway_options);
    vifrag::pipeline::SynthPipeline pipeline(config, gw, run_dir);
    pipeline.run(stop_after);

    json funnel = pipeline.stats();
    write_manifest(run_dir, "synth run", snapshot, config.rng_seed, started, funnel);
    std::cout << "synth run complete; outputs under " << run_dir << "\n";
    if (fs::exists(pipeline.dataset_file())) {
        std::cout << "dataset: " << pipeline.dataset_file().string() << "\n";
    }
    return kExitOk;
}

int cmd_synth_resume(const std::string& run_dir, const std::string& stop_after) {
    std::string started = iso_timestamp();
    fs::path snapshot_path = fs::path(run_dir) / "config_snapshot.json";
    if (!fs::exists(snapshot_path))
        throw CLI::ValidationError("no config_snapshot.json in " + run_dir +
                                   "; was this run started with `synth run`?");
    json snapshot = json::parse(vifrag::util::read_file(snapshot_path));
    auto config = vifrag::pipeline::pipeline_config_from_json(snapshot.at("pipeline"));

    BackendFlags backend_flags;
    const auto& b = snapshot.at("backend");
    backend_flags.backend = b.value("kind", "mock");
    backend_flags.replay_store = b.value("replay_store", "");
    backend_flags.record_store = b.value("record_store", "");
    backend_flags.cache_dir = b.value("cache_dir", "");
    backend_flags.strict_replay = b.value("strict_replay", false);
    backend_flags.key_namespace = b.value("key_namespace", "default");

    auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags),
                                                         config.gateway_options);
    vifrag::pipeline::SynthPipeline pipeline(config, gw, run_dir);
    pipeline.run(stop_after);

    write_manifest(run_dir, "synth resume", snapshot, config.rng_seed, started,
                   pipeline.stats());
    std::cout << "synth resume complete; outputs under " << run_dir << "\n";
    return kExitOk;
}

// ---- compose (seed + composition stages only) -------------------------------------

int cmd_compose(const std::string& config_path, const std::string& run_dir,
                const BackendFlags& backend_flags, uint64_t seed_override) {
    std::string started = iso_timestamp();
    auto config = load_pipeline_config(config_path, seed_override, 0, 0);
    auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags),
                                                         config.gateway_options);
    vifrag::pipeline::SynthPipeline pipeline(config, gw, run_dir);
    pipeline.run("compose");
    write_manifest(run_dir, "compose", vifrag::pipeline::pipeline_config_to_json(config),
                   config.rng_seed, started, pipeline.stats());
    std::cout << "composed instruction set: " << pipeline.stage_file("compose").string() << "\n";
    return kExitOk;
}

// ---- verify-instructions (standalone executor gate over a JSONL file) ---------------

int cmd_verify_instructions(const std::string& in_path, const std::string& out_dir,
                            const BackendFlags& backend_flags, int k_verification,
                            const std::string& filter_mode, int jobs) {
    auto rows = vifrag::util::read_jsonl<vifrag::core::ComposedInstruction>(
        in_path, [](const json& j) { return vifrag::core::instruction_from_json(j); });

    vifrag::gateway::GatewayOptions gw_options;
    auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags), gw_options);
    vifrag::sandbox::SandboxPolicy policy;
    auto mode = filter_mode == "all" ? vifrag::sandbox::FilterMode::All
                                     : vifrag::sandbox::FilterMode::Any;

    size_t kept = 0, dropped_no_artifact = 0, dropped_gate = 0;
    std::vector<json> kept_rows, artifact_rows;
    std::vector<vifrag::sandbox::VerificationArtifact> artifacts(rows.records.size());
    std::vector<int> status(rows.records.size(), 0);
    vifrag::sandbox::parallel_for(rows.records.size(), jobs, [&](size_t i) {
        auto& ins = rows.records[i];
        if (ins.id.empty()) ins.id = "verify:" + std::to_string(i);
        auto artifact = gw->gen_verification(ins, k_verification);
        if (artifact.k() == 0) {
            status[i] = 1;
            return;
        }
        vifrag::sandbox::cross_accuracy(artifact, policy, 1);
        status[i] = vifrag::sandbox::filter_instruction(artifact, mode) ? 3 : 2;
        artifacts[i] = std::move(artifact);
    });
    for (size_t i = 0; i < rows.records.size(); ++i) {
        if (status[i] == 1) ++dropped_no_artifact;
        else if (status[i] == 2) ++dropped_gate;
        else if (status[i] == 3) {
            ++kept;
            kept_rows.push_back(vifrag::core::to_json(rows.records[i]));
            artifact_rows.push_back(vifrag::sandbox::to_json(artifacts[i]));
        }
    }
    fs::create_directories(out_dir);
    vifrag::util::write_jsonl(fs::path(out_dir) / "verified.jsonl", kept_rows);
    vifrag::util::write_jsonl(fs::path(out_dir) / "artifacts.jsonl", artifact_rows);

    json summary = {{"in", rows.records.size()},
                    {"kept", kept},
                    {"discarded_no_artifact", dropped_no_artifact},
                    {"discarded_cross_accuracy", dropped_gate}};
    vifrag::util::write_file_atomic(fs::path(out_dir) / "verify_summary.json", summary.dump(2));
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

// ---- build-index ----------------------------------------------------------------------

int cmd_build_index(const std::string& corpus_path, const std::string& out_dir, size_t dim,
                    size_t chunk_words) {
    auto docs = vifrag::util::read_jsonl<vifrag::retrieval::CorpusDoc>(
        corpus_path, [](const json& j) {
            vifrag::util::check_object_fields(j, {"id", "title", "text"}, {}, "corpus doc");
            return vifrag::retrieval::CorpusDoc{j.at("id").get<std::string>(),
                                                j.at("title").get<std::string>(),
                                                j.at("text").get<std::string>()};
        });
    auto chunks = vifrag::retrieval::chunk_corpus(docs.records, chunk_words);
    vifrag::retrieval::HashedEmbedder embedder(dim);
    vifrag::retrieval::EmbeddingStore store(dim);
    for (const auto& p : chunks.passages) store.add(p, embedder.embed_passage(p.text));
    store.save(out_dir);
    std::cout << "indexed " << store.size() << " passages from " << chunks.docs_in
              << " documents (" << chunks.docs_skipped_empty << " empty skipped) into "
              << out_dir << "\n";
    return kExitOk;
}

// ---- build-bench ------------------------------------------------------------------------

int cmd_build_bench(const std::string& config_path, const std::string& run_dir,
                    const BackendFlags& backend_flags, uint64_t seed_override,
                    size_t k_docs_override) {
    std::string started = iso_timestamp();
    auto config = vifrag::bench::bench_config_from_json(load_json_file(config_path));
    if (seed_override != 0) config.rng_seed = seed_override;
    if (k_docs_override > 0) config.retrieval_k = k_docs_override;

    auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags),
                                                         vifrag::gateway::GatewayOptions{});
    vifrag::retrieval::HashedEmbedder embedder(config.embedder_dim);
    auto store = vifrag::bench::open_bench_store(config, embedder);
    auto questions = vifrag::bench::load_bench_questions(config);
    auto result = vifrag::bench::build_bench(questions, config, *gw, store, embedder);

    fs::create_directories(run_dir);
    std::vector<json> rows;
    for (const auto& s : result.samples) rows.push_back(vifrag::core::to_json(s));
    fs::path out = fs::path(run_dir) / "followrag_bench.jsonl";
    vifrag::util::write_jsonl(out, rows);

    json funnel = {{"samples", result.samples.size()},
                   {"reform_fallbacks", result.reform_fallbacks},
                   {"reform_skipped", result.reform_skipped},
                   {"blend_fallbacks", result.blend_fallbacks}};
    write_manifest(run_dir, "build-bench", load_json_file(config_path), config.rng_seed, started,
                   funnel);
    std::cout << "wrote " << result.samples.size() << " bench samples to " << out.string()
              << "\n";
    return kExitOk;
}

// ---- evaluate ------------------------------------------------------------------------------

int cmd_evaluate(const std::string& bench_path, const std::string& outputs_path, bool no_judge,
                 size_t judge_subsample, const std::string& report_path,
                 const BackendFlags& backend_flags, uint64_t seed) {
    auto bench = vifrag::util::read_jsonl<vifrag::core::BenchSample>(
        bench_path, [](const json& j) { return vifrag::core::bench_sample_from_json(j); });
    auto outputs = vifrag::util::read_jsonl<vifrag::bench::ModelOutput>(
        outputs_path, [](const json& j) { return vifrag::bench::model_output_from_json(j); },
        /*strict=*/false);
    for (const auto& d : outputs.diagnostics)
        vifrag::util::log_warn("output_parse_error", {{"line", d.line_no}, {"error", d.message}});

    auto report = vifrag::bench::eval_if(bench.records, outputs.records);
    if (!no_judge) {
        auto gw = std::make_shared<vifrag::gateway::Gateway>(make_backend(backend_flags),
                                                             vifrag::gateway::GatewayOptions{});
        vifrag::bench::eval_rag(report, bench.records, outputs.records, *gw, judge_subsample,
                                seed == 0 ? 42 : seed);
    }

    json report_json = vifrag::bench::report_to_json(report);
    if (!report_path.empty())
        vifrag::util::write_file_atomic(report_path, report_json.dump(2));
    std::cout << vifrag::bench::render_table(report);
    if (report.judge_error_count > 0 || !outputs.diagnostics.empty()) return kExitDiagnostics;
    return kExitOk;
}

// ---- contamination ---------------------------------------------------------------------------

int cmd_contamination(const std::string& train_path, const std::string& test_path, size_t ngram,
                      const std::string& report_path) {
    auto report = vifrag::bench::contamination_check_files(train_path, test_path, ngram);
    json j = vifrag::bench::to_json(report);
    if (!report_path.empty()) vifrag::util::write_file_atomic(report_path, j.dump(2));
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

// ---- list-constraints --------------------------------------------------------------------------

int cmd_list_constraints() {
    for (const auto& spec : vifrag::core::registry()) {
        std::string params;
        for (const auto& [name, field] : spec.param_schema) {
            if (!params.empty()) params += ", ";
            params += name + ":" + vifrag::core::to_string(field.kind);
            if (!field.required) params += "?";
        }
        std::printf("%-26s %-10s %s%s%s\n", spec.id.c_str(),
                    vifrag::core::to_string(spec.family), spec.description.c_str(),
                    params.empty() ? "" : "  [", params.empty() ? "" : (params + "]").c_str());
    }
    return kExitOk;
}

// ---- judge-check --------------------------------------------------------------------------------

int cmd_judge_check(const std::string& transcripts_path) {
    auto rows = vifrag::util::read_jsonl<json>(
        transcripts_path, [](const json& j) { return j; }, /*strict=*/false);
    size_t failures = rows.diagnostics.size();
    for (const auto& row : rows.records) {
        std::string kind = row.value("kind", "");
        std::string reply = row.value("reply", "");
        if (kind == "consistency") {
            auto score = vifrag::gateway::prompts::parse_consistency_score(reply);
            if (score) std::cout << "consistency OK score=" << *score << "\n";
            else {
                std::cout << "consistency UNPARSEABLE\n";
                ++failures;
            }
        } else if (kind == "rag") {
            auto rating = vifrag::gateway::prompts::parse_rating(reply);
            if (rating) std::cout << "rag OK rating=" << *rating << "\n";
            else {
                std::cout << "rag UNPARSEABLE\n";
                ++failures;
            }
        } else {
            std::cout << "unknown transcript kind \"" << kind << "\"\n";
            ++failures;
        }
    }
    return failures == 0 ? kExitOk : kExitDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VIF-RAG data synthesis and FollowRAG benchmark toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", vifrag::kVersion);

    uint64_t seed = 0;
    int jobs = 0;
    size_t k_docs = 0;
    app.add_option("--seed", seed, "Override the configured RNG seed")->group("Global");
    app.add_option("--jobs", jobs, "Worker cap for parallel stages")->group("Global");
    app.add_option("--k-docs", k_docs, "Override retrieval top-k")->group("Global");

    // synth run | resume
    auto* synth = app.add_subcommand("synth", "Run or resume the data synthesis pipeline");
    synth->require_subcommand(1);
    auto* run = synth->add_subcommand("run", "Run the full pipeline");
    std::string run_config, run_dir, stop_after;
    BackendFlags run_backend;
    run->add_option("--config", run_config, "Pipeline config JSON")->required();
    run->add_option("--run-dir", run_dir, "Output directory")->required();
    run->add_option("--stop-after", stop_after,
                    "Stop after this stage (seed|compose|rewrite|verify|combine|sample|emit)");
    add_backend_flags(run, run_backend);

    auto* resume = synth->add_subcommand("resume", "Resume an interrupted run");
    std::string resume_dir, resume_stop_after;
    resume->add_option("--run-dir", resume_dir, "Run directory to resume")->required();
    resume->add_option("--stop-after", resume_stop_after, "Stop after this stage");

    // compose
    auto* compose = app.add_subcommand("compose", "Load seeds and build the composed set");
    std::string compose_config, compose_dir;
    BackendFlags compose_backend;
    compose->add_option("--config", compose_config, "Pipeline config JSON")->required();
    compose->add_option("--run-dir", compose_dir, "Output directory")->required();
    add_backend_flags(compose, compose_backend);

    // verify-instructions
    auto* verify = app.add_subcommand("verify-instructions",
                                      "Executor-verify an instruction JSONL file");
    std::string verify_in, verify_out, verify_filter = "any";
    int verify_k = 3;
    BackendFlags verify_backend;
    verify->add_option("--in", verify_in, "Instruction JSONL")->required();
    verify->add_option("--run-dir", verify_out, "Output directory")->required();
    verify->add_option("--k-verification", verify_k, "Scripts/cases per instruction");
    verify->add_option("--filter-mode", verify_filter, "any (best must pass) or all")
        ->check(CLI::IsMember({"any", "all"}));
    add_backend_flags(verify, verify_backend);

    // build-index
    auto* index = app.add_subcommand("build-index", "Chunk + embed a corpus into an index");
    std::string index_corpus, index_out;
    size_t index_dim = 256, index_chunk_words = 100;
    index->add_option("--corpus", index_corpus, "Corpus JSONL {id,title,text}")->required();
    index->add_option("--out", index_out, "Index directory")->required();
    index->add_option("--dim", index_dim, "Embedding dimension");
    index->add_option("--chunk-words", index_chunk_words, "Words per passage chunk");

    // build-bench
    auto* bench = app.add_subcommand("build-bench", "Construct benchmark samples");
    std::string bench_config, bench_dir;
    BackendFlags bench_backend;
    bench->add_option("--config", bench_config, "Bench config JSON")->required();
    bench->add_option("--run-dir", bench_dir, "Output directory")->required();
    add_backend_flags(bench, bench_backend);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score model outputs against a bench file");
    std::string eval_bench, eval_outputs, eval_report;
    bool eval_no_judge = false;
    size_t eval_subsample = 100;
    BackendFlags eval_backend;
    evaluate->add_option("--bench", eval_bench, "Bench JSONL")->required();
    evaluate->add_option("--outputs", eval_outputs, "Model outputs JSONL {sample_id, output}")
        ->required();
    evaluate->add_flag("--no-judge", eval_no_judge, "Skip the LLM RAG judge (IF-only report)");
    evaluate->add_option("--judge-subsample", eval_subsample,
                         "Judged samples per dataset (0 = all)");
    evaluate->add_option("--report", eval_report, "Write the JSON report here");
    add_backend_flags(evaluate, eval_backend);

    // contamination
    auto* contamination = app.add_subcommand("contamination", "n-gram contamination analysis");
    std::string cont_train, cont_test, cont_report;
    size_t cont_ngram = 13;
    contamination->add_option("--train", cont_train, "Training JSONL")->required();
    contamination->add_option("--test", cont_test, "Test JSONL")->required();
    contamination->add_option("--ngram", cont_ngram, "n-gram size");
    contamination->add_option("--report", cont_report, "Write the JSON report here");

    app.add_subcommand("list-constraints", "List the registered constraint types");

    auto* judge_check = app.add_subcommand("judge-check", "Parse-check judge/consistency replies");
    std::string judge_transcripts;
    judge_check->add_option("--transcripts", judge_transcripts,
                            "JSONL of {kind: consistency|rag, reply}")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (run->parsed())
            return cmd_synth_run(run_config, run_dir, run_backend, seed, jobs, k_docs,
                                 stop_after);
        if (resume->parsed()) return cmd_synth_resume(resume_dir, resume_stop_after);
        if (compose->parsed()) return cmd_compose(compose_config, compose_dir, compose_backend, seed);
        if (verify->parsed())
            return cmd_verify_instructions(verify_in, verify_out, verify_backend, verify_k,
                                           verify_filter, jobs > 0 ? jobs : 1);
        if (index->parsed())
            return cmd_build_index(index_corpus, index_out, index_dim, index_chunk_words);
        if (bench->parsed())
            return cmd_build_bench(bench_config, bench_dir, bench_backend, seed, k_docs);
        if (evaluate->parsed())
            return cmd_evaluate(eval_bench, eval_outputs, eval_no_judge, eval_subsample,
                                eval_report, eval_backend, seed);
        if (contamination->parsed())
            return cmd_contamination(cont_train, cont_test, cont_ngram, cont_report);
        if (app.get_subcommand("list-constraints")->parsed()) return cmd_list_constraints();
        if (judge_check->parsed()) return cmd_judge_check(judge_transcripts);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const vifrag::util::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const vifrag::gateway::ReplayMissError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiagnostics;
    }
    return kExitConfigError;
}
