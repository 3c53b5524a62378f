#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "vifrag/core/render.hpp"
#include "vifrag/core/schemas.hpp"
#include "vifrag/core/types.hpp"
#include "vifrag/gateway/backend.hpp"
#include "vifrag/gateway/model.hpp"
#include "vifrag/gateway/prompts.hpp"
#include "vifrag/sandbox/artifact.hpp"
#include "vifrag/util/log.hpp"

namespace vifrag::gateway {

struct RetryPolicy {
    int max_attempts = 3;
    int base_delay_ms = 200;  // doubles per attempt
};

struct RateLimit {
    int requests_per_minute = 0;  // 0 = unlimited
    int max_in_flight = 4;
};

struct GatewayOptions {
    std::string model_name = "gpt-4-turbo";
    RetryPolicy retry;
    RateLimit rate;
    int max_output_tokens = 2048;
    // Sampling temperatures are unpublished; these defaults are config-visible.
    double temp_rewrite = 1.0;
    double temp_sampling = 0.7;
    double temp_judge = 0.0;
    double temp_consistency = 0.0;
    double temp_reform = 0.7;
    double temp_blend = 0.7;
};

struct RewriteResult {
    std::vector<core::ComposedInstruction> instructions;
    size_t attempted = 0;  // rewrite slots sent across all rounds
    size_t duplicates_removed = 0;
    size_t failed_slots = 0;
};

struct JudgeOutcome {
    std::optional<double> score;  // 1, 0.5, 0; nullopt = judge_error
    std::string raw_reply;
};

struct BlendResult {
    std::string text;
    bool blended = true;  // false when the template fallback was used
};

/// Shared front door to the supervised model: retry with exponential backoff,
/// token-bucket rate limiting, an in-flight cap, and the typed operations the
/// pipeline and benchmark builder use. Thread-safe.
class Gateway {
public:
    Gateway(BackendPtr backend, GatewayOptions options = {})
        : backend_(std::move(backend)), opts_(std::move(options)) {}

    const GatewayOptions& options() const { return opts_; }
    Backend& backend() { return *backend_; }

    /// Bounded-retry completion. Only TransportError retries; the total
    /// number of attempts never exceeds retry.max_attempts.
    ChatResponse complete(const ChatRequest& request) {
        InFlightGuard guard(*this);
        std::string last_error;
        for (int attempt = 0; attempt < std::max(1, opts_.retry.max_attempts); ++attempt) {
            if (attempt > 0) {
                int delay = opts_.retry.base_delay_ms * (1 << (attempt - 1));
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            }
            wait_for_rate_slot();
            try {
                return backend_->complete(request);
            } catch (const TransportError& e) {
                last_error = e.what();
                util::log_warn("gateway_retry",
                               {{"attempt", attempt + 1}, {"error", last_error}});
            }
        }
        throw TransportError("backend " + backend_->id() + " failed after " +
                             std::to_string(opts_.retry.max_attempts) +
                             " attempts: " + last_error);
    }

    ChatRequest make_request(std::string prompt, double temperature, int sample_count = 1,
                             std::optional<int64_t> seed = std::nullopt) const {
        ChatRequest req;
        req.model_name = opts_.model_name;
        req.messages.push_back({"user", std::move(prompt)});
        req.temperature = temperature;
        req.max_output_tokens = opts_.max_output_tokens;
        req.sample_count = sample_count;
        req.seed = seed;
        return req;
    }

    // ---- rewriting -----------------------------------------------------------

    /// K rounds of batch rewriting (batch <= 50). Round r rewrites round
    /// r-1's outputs. Case-folded whitespace-collapsed duplicates are dropped
    /// against `dedup_keys`, which the caller threads across batches so the
    /// union of seed and augmented instructions stays duplicate-free.
    RewriteResult rewrite_batch(const std::vector<core::ComposedInstruction>& batch, int rounds,
                                std::set<std::string>& dedup_keys) {
        if (batch.size() > 50)
            throw std::invalid_argument("rewrite batch larger than 50 instructions");
        if (batch.empty() || rounds < 1) return {};

        RewriteResult result;
        std::vector<core::ComposedInstruction> current(batch.begin(), batch.end());

        for (int round = 0; round < rounds && !current.empty(); ++round) {
            result.attempted += current.size();
            std::vector<std::string> texts;
            texts.reserve(current.size());
            for (const auto& ins : current) texts.push_back(ins.text);

            std::string reply;
            try {
                reply = complete(make_request(prompts::render_rewrite_prompt(texts),
                                              opts_.temp_rewrite, 1, round))
                            .first();
            } catch (const std::exception& e) {
                util::log_warn("rewrite_round_failed", {{"round", round}, {"error", e.what()}});
                result.failed_slots += current.size();
                break;  // partial batch; prior rounds' outputs stand
            }

            auto slots = prompts::parse_numbered_reply(reply, current.size());
            std::vector<core::ComposedInstruction> next;
            for (size_t i = 0; i < slots.size(); ++i) {
                if (!slots[i]) {
                    ++result.failed_slots;
                    continue;
                }
                std::string key = util::casefold_collapse(*slots[i]);
                if (!dedup_keys.insert(key).second) {
                    ++result.duplicates_removed;
                    continue;
                }
                core::ComposedInstruction rewritten = current[i];
                rewritten.id.clear();
                rewritten.text = *slots[i];
                rewritten.provenance = core::Provenance::Rewritten;
                rewritten.consistency_score.reset();
                result.instructions.push_back(rewritten);
                next.push_back(std::move(rewritten));
            }
            current = std::move(next);
        }
        return result;
    }

    // ---- verification generation ----------------------------------------------

    /// Asks the model for K scripts + K cases and returns the artifact shell.
    /// Slots with a missing or malformed half are dropped; the caller
    /// discards instructions whose artifact ends up empty.
    sandbox::VerificationArtifact gen_verification(const core::ComposedInstruction& instruction,
                                                   int k_v) {
        if (k_v < 1) throw std::invalid_argument("K_verification must be >= 1");
        sandbox::VerificationArtifact artifact;
        artifact.instruction_id = instruction.id;

        std::string reply;
        try {
            reply = complete(make_request(
                                 prompts::render_gen_verification_prompt(instruction.text, k_v),
                                 opts_.temp_reform))
                        .first();
        } catch (const std::exception& e) {
            util::log_warn("gen_verification_failed",
                           {{"instruction", instruction.id}, {"error", e.what()}});
            return artifact;
        }

        auto funcs = prompts::extract_fenced_blocks(reply, "python");
        auto cases = prompts::extract_fenced_blocks(reply, "json");
        size_t slots = std::min(funcs.size(), cases.size());
        for (size_t i = 0; i < slots; ++i) {
            if (util::trim(funcs[i]).empty()) continue;
            nlohmann::json case_doc = nlohmann::json::parse(cases[i], nullptr, false);
            if (case_doc.is_discarded()) continue;
            artifact.funcs.push_back(funcs[i]);
            artifact.cases.push_back(case_doc);
        }
        return artifact;
    }

    // ---- rejection sampling ------------------------------------------------------

    /// Exactly K_s candidates when the backend cooperates; transport failures
    /// are topped up with re-requests (fresh seed) under the bounded retry
    /// budget, and a short batch is returned with a warning otherwise.
    std::vector<std::string> sample_responses(const std::string& instruction_text,
                                              const std::string& question,
                                              const std::vector<std::pair<std::string, std::string>>& passages,
                                              int k_s) {
        if (k_s < 1) throw std::invalid_argument("K_responses must be >= 1");
        std::string prompt = prompts::render_sample_prompt(instruction_text, question, passages);
        std::vector<std::string> texts;
        int top_up_attempts = 0;
        int64_t seed = 0;
        while (static_cast<int>(texts.size()) < k_s &&
               top_up_attempts <= opts_.retry.max_attempts) {
            int missing = k_s - static_cast<int>(texts.size());
            try {
                ChatResponse resp =
                    complete(make_request(prompt, opts_.temp_sampling, missing, seed));
                for (auto& t : resp.texts) {
                    if (static_cast<int>(texts.size()) < k_s) texts.push_back(std::move(t));
                }
            } catch (const std::exception& e) {
                util::log_warn("sample_responses_attempt_failed", {{"error", e.what()}});
            }
            ++seed;
            ++top_up_attempts;
        }
        if (static_cast<int>(texts.size()) < k_s) {
            util::log_warn("sample_responses_short",
                           {{"requested", k_s}, {"returned", texts.size()}});
        }
        return texts;
    }

    // ---- judging -------------------------------------------------------------------

    JudgeOutcome judge_rag(const std::string& question,
                           const std::vector<std::string>& gold_answers,
                           const std::string& response) {
        if (gold_answers.empty()) throw std::invalid_argument("judge_rag requires gold answers");
        std::string gold;
        for (size_t i = 0; i < gold_answers.size(); ++i) {
            if (i) gold += "; ";
            gold += gold_answers[i];
        }
        std::string prompt = prompts::render_judging_prompt(question, gold, response);
        JudgeOutcome outcome;
        for (int attempt = 0; attempt < std::max(1, opts_.retry.max_attempts); ++attempt) {
            try {
                outcome.raw_reply =
                    complete(make_request(prompt, opts_.temp_judge, 1, attempt)).first();
            } catch (const std::exception& e) {
                util::log_warn("judge_attempt_failed", {{"error", e.what()}});
                continue;
            }
            if (auto score = prompts::parse_rating(outcome.raw_reply)) {
                outcome.score = score;
                return outcome;
            }
        }
        return outcome;  // judge_error: score unset
    }

    /// Consistency score per the multi-instruction verification prompt.
    /// Unparseable replies retry with a fresh seed and then fail closed
    /// (nullopt), which callers treat as discard.
    std::optional<int> score_consistency(const std::string& instruction_text) {
        std::string prompt = prompts::render_consistency_prompt(instruction_text);
        for (int attempt = 0; attempt < std::max(1, opts_.retry.max_attempts); ++attempt) {
            std::string reply;
            try {
                reply = complete(make_request(prompt, opts_.temp_consistency, 1, attempt)).first();
            } catch (const std::exception& e) {
                util::log_warn("consistency_attempt_failed", {{"error", e.what()}});
                continue;
            }
            if (auto score = prompts::parse_consistency_score(reply)) return score;
        }
        return std::nullopt;
    }

    // ---- benchmark construction ------------------------------------------------------

    /// Varied instruction text + schema-valid params for one spec, or nullopt
    /// after retries. The repeat_question spec gets the sample's question
    /// injected since its parameter is the question itself.
    std::optional<core::AtomicInstructionInstance> reform_instruction(
        const std::string& question, const core::AtomicInstructionSpec& spec,
        const std::vector<std::string>& demos) {
        if (demos.empty()) throw std::invalid_argument("reform_instruction requires demos");
        nlohmann::json schema = nlohmann::json::object();
        for (const auto& [name, field] : spec.param_schema) {
            schema[name] = std::string(core::to_string(field.kind)) +
                           (field.required ? " (required)" : " (optional)");
        }
        std::string prompt = prompts::render_reform_prompt(question, spec.id, spec.description,
                                                           schema.dump(), demos);
        for (int attempt = 0; attempt < std::max(1, opts_.retry.max_attempts); ++attempt) {
            std::string reply;
            try {
                reply = complete(make_request(prompt, opts_.temp_reform, 1, attempt)).first();
            } catch (const std::exception& e) {
                util::log_warn("reform_attempt_failed", {{"error", e.what()}});
                continue;
            }
            auto blocks = prompts::extract_fenced_blocks(reply, "json");
            std::string body = !blocks.empty() ? blocks.front() : reply;
            size_t brace = body.find('{');
            if (brace == std::string::npos) continue;
            nlohmann::json j = nlohmann::json::parse(body.substr(brace), nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j.contains("params"))
                continue;
            try {
                core::ParamMap params = core::params_from_json(j.at("params"), spec.id);
                if (spec.id == "format:repeat_question") params["question"] = question;
                core::AtomicInstructionInstance inst;
                inst.spec_id = spec.id;
                inst.params = core::validate_params(spec, params);
                inst.rendered_text = j.at("text").get<std::string>();
                if (inst.rendered_text.empty()) continue;
                return inst;
            } catch (const std::exception& e) {
                util::log_warn("reform_invalid_params", {{"spec", spec.id}, {"error", e.what()}});
                continue;
            }
        }
        return std::nullopt;
    }

    /// One coherent paragraph blending query and instructions. Backend
    /// failure falls back to plain concatenation with blended=false; kwargs
    /// live on the sample, never re-parsed from this text.
    BlendResult blend(const std::string& question,
                      const std::vector<core::AtomicInstructionInstance>& instances) {
        if (instances.empty()) throw std::invalid_argument("blend requires >= 1 instance");
        std::vector<std::string> texts;
        for (const auto& inst : instances) {
            texts.push_back(!inst.rendered_text.empty() ? inst.rendered_text
                                                        : core::render_default_text(inst));
        }
        BlendResult result;
        try {
            std::string reply =
                complete(make_request(prompts::render_blend_prompt(question, texts),
                                      opts_.temp_blend))
                    .first();
            result.text = util::collapse_whitespace(reply);  // keep it one paragraph
            result.blended = !result.text.empty();
        } catch (const std::exception& e) {
            util::log_warn("blend_fallback", {{"error", e.what()}});
            result.blended = false;
        }
        if (!result.blended || result.text.empty()) {
            std::string fallback = question;
            for (const auto& t : texts) fallback += " " + t;
            result.text = util::collapse_whitespace(fallback);
            result.blended = false;
        }
        return result;
    }

private:
    class InFlightGuard {
    public:
        explicit InFlightGuard(Gateway& g) : g_(g) {
            std::unique_lock<std::mutex> lock(g_.mu_);
            g_.cv_.wait(lock, [&] {
                return g_.in_flight_ < std::max(1, g_.opts_.rate.max_in_flight);
            });
            ++g_.in_flight_;
        }
        ~InFlightGuard() {
            {
                std::lock_guard<std::mutex> lock(g_.mu_);
                --g_.in_flight_;
            }
            g_.cv_.notify_one();
        }

    private:
        Gateway& g_;
    };

    /// Token bucket over requests/minute; a no-op when unconfigured.
    void wait_for_rate_slot() {
        if (opts_.rate.requests_per_minute <= 0) return;
        using clock = std::chrono::steady_clock;
        const auto interval =
            std::chrono::milliseconds(60000 / opts_.rate.requests_per_minute);
        std::unique_lock<std::mutex> lock(rate_mu_);
        auto now = clock::now();
        if (next_slot_ < now) next_slot_ = now;
        auto my_slot = next_slot_;
        next_slot_ += interval;
        lock.unlock();
        std::this_thread::sleep_until(my_slot);
    }

    BackendPtr backend_;
    GatewayOptions opts_;
    std::mutex mu_;
    std::condition_variable cv_;
    int in_flight_ = 0;
    std::mutex rate_mu_;
    std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace vifrag::gateway
