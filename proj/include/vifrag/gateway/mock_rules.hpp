#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/gateway/backend.hpp"
#include "vifrag/gateway/model.hpp"
#include "vifrag/util/strings.hpp"

// Built-in scripted backend: classifies each request by its prompt shape and
// answers deterministically from a content hash. It gives the whole pipeline
// a zero-network, zero-cost path whose replies vary enough to exercise every
// keep/discard branch, and whatever it produces can be recorded into a replay
// store and frozen.

namespace vifrag::gateway {

namespace mock_detail {

inline std::string pick(const std::vector<std::string>& pool, uint64_t h) {
    return pool[h % pool.size()];
}

inline const std::vector<std::string>& inclusion_words() {
    static const std::vector<std::string> words = {
        "heritage", "climate", "archive", "festival", "granite",
        "harbor",   "meadow",  "lantern", "compass",  "voyage"};
    return words;
}

inline const std::vector<std::string>& exclusion_words() {
    static const std::vector<std::string> words = {"basically", "obviously", "frankly",
                                                   "literally", "actually"};
    return words;
}

inline const std::vector<std::string>& closers() {
    static const std::vector<std::string> phrases = {
        "Any other questions?", "Hope that helps!", "That is the full picture."};
    return phrases;
}

inline std::string first_line_after(const std::string& text, const std::string& marker) {
    for (const auto& line : util::split_lines(text)) {
        if (line.rfind(marker, 0) == 0) return util::trim(line.substr(marker.size()));
    }
    return "";
}

inline std::string good_verifier_script() {
    return "import sys, json\n"
           "doc = json.load(sys.stdin)\n"
           "text = doc if isinstance(doc, str) else json.dumps(doc)\n"
           "print(len(text.split()) > 0)\n";
}

inline std::string failing_verifier_script() { return "print(False)\n"; }

inline nlohmann::json reform_payload(const std::string& spec_id, uint64_t h) {
    nlohmann::json params = nlohmann::json::object();
    std::string text;
    if (spec_id == "keywords:inclusion") {
        auto a = pick(inclusion_words(), h);
        auto b = pick(inclusion_words(), h + 3);
        if (b == a) b = pick(inclusion_words(), h + 4);
        params["keywords"] = {a, b};
        text = "Work the terms \"" + a + "\" and \"" + b + "\" into your reply.";
    } else if (spec_id == "keywords:exclusion") {
        auto a = pick(exclusion_words(), h);
        params["keywords"] = {a};
        text = "Avoid the word \"" + a + "\" entirely.";
    } else if (spec_id == "keywords:frequency") {
        auto a = pick(inclusion_words(), h);
        params["keyword"] = a;
        params["relation"] = "at_least";
        params["n"] = 2;
        text = "Mention \"" + a + "\" at least twice.";
    } else if (spec_id == "length:words") {
        params["relation"] = "at_least";
        params["n"] = 30 + static_cast<int>(h % 40);
        text = "Give a reply of " + std::to_string(30 + static_cast<int>(h % 40)) +
               " words or more.";
    } else if (spec_id == "length:sentences") {
        params["relation"] = "at_least";
        params["n"] = 3 + static_cast<int>(h % 3);
        text = "Use several full sentences in your answer.";
    } else if (spec_id == "length:paragraphs") {
        params["relation"] = "exactly";
        params["n"] = 2 + static_cast<int>(h % 2);
        text = "Split the answer into distinct paragraphs.";
    } else if (spec_id == "format:json") {
        text = "Return your whole answer as one valid JSON value.";
    } else if (spec_id == "format:quotation") {
        text = "Put your full reply between double quotation marks.";
    } else if (spec_id == "format:no_commas") {
        text = "Write the reply without using a single comma.";
    } else if (spec_id == "format:language") {
        params["language"] = "en";
        text = "Answer in English only.";
    } else if (spec_id == "format:repeat_question") {
        text = "Repeat my question word for word before you answer it.";
    } else if (spec_id == "structure:title") {
        text = "Start with a title framed like <<this>> on a line of its own.";
    } else if (spec_id == "structure:sections") {
        params["relation"] = "at_least";
        params["n"] = 2;
        params["splitter"] = "Section";
        text = "Lay the answer out in sections, each opening with the word Section.";
    } else if (spec_id == "structure:highlights") {
        params["relation"] = "at_least";
        params["n"] = 2;
        text = "Emphasize a couple of key phrases with *asterisks*.";
    } else if (spec_id == "structure:bullets") {
        params["relation"] = "exactly";
        params["n"] = 3 + static_cast<int>(h % 2);
        text = "Answer as a short bullet list.";
    } else if (spec_id == "structure:placeholder") {
        params["relation"] = "at_least";
        params["n"] = 1 + static_cast<int>(h % 2);
        text = "Leave bracketed placeholders like [name] where details would go.";
    } else if (spec_id == "cases:uppercase") {
        text = "Reply using capital letters only.";
    } else if (spec_id == "cases:lowercase") {
        text = "Reply in lowercase letters only.";
    } else if (spec_id == "cases:capital_words") {
        params["relation"] = "at_least";
        params["n"] = 2;
        text = "Include a few fully capitalized words such as NOTE or IMPORTANT.";
    } else if (spec_id == "position:end_with") {
        auto closer = pick(closers(), h);
        params["suffix"] = closer;
        text = "Close your reply with the exact phrase \"" + closer + "\".";
    } else if (spec_id == "position:postscript") {
        params["marker"] = "P.S.";
        text = "Finish with a P.S. line.";
    } else if (spec_id == "position:first_word") {
        params["n"] = 1;
        auto word = pick(inclusion_words(), h + 1);
        params["word"] = word;
        text = "Open your first paragraph with the word \"" + word + "\".";
    } else {
        text = "Follow the constraint.";
    }
    nlohmann::json j;
    j["text"] = text;
    j["params"] = params;
    return j;
}

}  // namespace mock_detail

/// Deterministic reply for one request; shared by the mock backend and tests
/// that need to predict it.
inline ChatResponse scripted_mock_reply(const ChatRequest& request) {
    using namespace mock_detail;
    const std::string& prompt = request.messages.empty() ? "" : request.messages.back().content;
    uint64_t h = util::fnv1a64(prompt);
    if (request.seed) h ^= util::fnv1a64("seed:" + std::to_string(*request.seed));
    ChatResponse resp;

    if (prompt.rfind("You are an expert proficient in determining", 0) == 0) {
        int score = 7 + static_cast<int>(h % 4);  // 7..10, so some gate discards
        resp.texts.push_back(
            "The instructions were reviewed for coherence and mutual satisfiability.\nScore: " +
            std::to_string(score));
        return resp;
    }

    if (prompt.rfind("Please act as an impartial judge", 0) == 0) {
        uint64_t bucket = h % 10;
        std::string rating = bucket < 6 ? "1" : bucket < 9 ? "0.5" : "0";
        resp.texts.push_back("Rating: [" + rating + "]\nReason: [scripted comparison against the reference]");
        return resp;
    }

    if (prompt.rfind("You will be given a numbered list", 0) == 0) {
        std::string reply;
        size_t slot = 0;
        for (const auto& line : util::split_lines(prompt)) {
            size_t dot = line.find(". ");
            if (dot == std::string::npos || dot == 0 || dot > 4) continue;
            bool digits = true;
            for (size_t i = 0; i < dot; ++i)
                if (!util::is_ascii_digit(line[i])) digits = false;
            if (!digits) continue;
            ++slot;
            std::string text = util::trim(line.substr(dot + 2));
            uint64_t th = util::fnv1a64(text);
            std::string rewritten;
            if (th % 5 == 0) {
                rewritten = text;  // unchanged: exercises dedup
            } else if (th % 3 == 0) {
                rewritten = "Please make sure of the following: " + text;
            } else if (th % 3 == 1) {
                rewritten = "Keep to this requirement: " + text;
            } else {
                rewritten = "Note carefully: " + text;
            }
            reply += std::to_string(slot) + ". " + rewritten + "\n";
        }
        resp.texts.push_back(reply);
        return resp;
    }

    if (prompt.rfind("Write verification code", 0) == 0) {
        int k = 1;
        size_t mark = prompt.find("Produce exactly ");
        if (mark != std::string::npos) {
            k = std::atoi(prompt.c_str() + mark + 16);
            if (k < 1) k = 1;
        }
        uint64_t quality = h % 10;  // <7 sound, <9 broken, else mixed
        std::string reply = "Here are the verification programs.\n";
        for (int j = 0; j < k; ++j) {
            bool good = quality < 7 || (quality == 9 && j == 0);
            reply += "```python\n";
            reply += good ? good_verifier_script() : failing_verifier_script();
            reply += "```\n```json\n\"mock case " + std::to_string(j + 1) + " for " +
                     std::to_string(h % 1000) + "\"\n```\n";
        }
        resp.texts.push_back(reply);
        return resp;
    }

    if (prompt.rfind("Generate a varied instruction", 0) == 0) {
        std::string spec_id = first_line_after(prompt, "spec: ");
        resp.texts.push_back(reform_payload(spec_id, h).dump());
        return resp;
    }

    if (prompt.rfind("Blend the question and the instructions", 0) == 0) {
        std::string question = first_line_after(prompt, "Question: ");
        std::string combined = "Here is what I need: " + question;
        for (const auto& line : util::split_lines(prompt)) {
            if (line.rfind("Instruction ", 0) == 0) {
                size_t colon = line.find(": ");
                if (colon != std::string::npos) combined += " " + line.substr(colon + 2);
            }
        }
        resp.texts.push_back(combined);
        return resp;
    }

    // default: rejection-sampling responses
    std::string question = first_line_after(prompt, "Question: ");
    if (question.size() > 60) question = question.substr(0, 60);
    for (int i = 0; i < request.sample_count; ++i) {
        uint64_t rh = h ^ util::fnv1a64("response:" + std::to_string(i));
        if (rh % 8 == 0) {
            resp.texts.push_back("   ");  // defective candidate: fails executor checks
        } else {
            resp.texts.push_back("Drawing on the provided passages, here is answer variant " +
                                 std::to_string(i + 1) + " to the question \"" + question +
                                 "\" with the requested formatting applied.");
        }
    }
    return resp;
}

inline BackendPtr make_scripted_mock_backend() {
    return std::make_shared<MockBackend>(&scripted_mock_reply, "mock");
}

}  // namespace vifrag::gateway
