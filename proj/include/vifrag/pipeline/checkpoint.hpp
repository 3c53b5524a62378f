#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "vifrag/util/fs.hpp"
#include "vifrag/util/jsonl.hpp"
#include "vifrag/util/sha256.hpp"

namespace vifrag::pipeline {

/// Per-stage funnel record. Invariant: in == kept + sum(discarded values).
/// A checkpoint file exists only once the stage's output is fully flushed,
/// so its presence is the resume marker.
struct StageCheckpoint {
    std::string stage;
    std::string input_digest;
    std::string output_path;
    size_t in = 0;
    size_t kept = 0;
    std::map<std::string, size_t> discarded;

    size_t discarded_total() const {
        size_t total = 0;
        for (const auto& [reason, n] : discarded) total += n;
        return total;
    }

    void check() const {
        if (in != kept + discarded_total())
            throw std::runtime_error("funnel violation in stage " + stage + ": " +
                                     std::to_string(in) + " != " + std::to_string(kept) + " + " +
                                     std::to_string(discarded_total()));
    }
};

inline nlohmann::json to_json(const StageCheckpoint& cp) {
    nlohmann::json j;
    j["stage"] = cp.stage;
    j["input_digest"] = cp.input_digest;
    j["output_path"] = cp.output_path;
    nlohmann::json counts;
    counts["in"] = cp.in;
    counts["kept"] = cp.kept;
    counts["discarded"] = cp.discarded;
    j["counts"] = counts;
    return j;
}

inline StageCheckpoint checkpoint_from_json(const nlohmann::json& j) {
    util::check_object_fields(j, {"stage", "input_digest", "output_path", "counts"}, {},
                              "stage checkpoint");
    StageCheckpoint cp;
    cp.stage = j.at("stage").get<std::string>();
    cp.input_digest = j.at("input_digest").get<std::string>();
    cp.output_path = j.at("output_path").get<std::string>();
    const auto& counts = j.at("counts");
    cp.in = counts.at("in").get<size_t>();
    cp.kept = counts.at("kept").get<size_t>();
    for (auto it = counts.at("discarded").begin(); it != counts.at("discarded").end(); ++it)
        cp.discarded[it.key()] = it.value().get<size_t>();
    cp.check();
    return cp;
}

inline std::filesystem::path checkpoint_path(const std::filesystem::path& run_dir,
                                             const std::string& stage) {
    return run_dir / "checkpoints" / (stage + ".json");
}

inline void write_checkpoint(const std::filesystem::path& run_dir, const StageCheckpoint& cp) {
    cp.check();
    util::write_file_atomic(checkpoint_path(run_dir, cp.stage), to_json(cp).dump(2));
}

inline std::optional<StageCheckpoint> read_checkpoint(const std::filesystem::path& run_dir,
                                                      const std::string& stage) {
    auto path = checkpoint_path(run_dir, stage);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return checkpoint_from_json(nlohmann::json::parse(util::read_file(path)));
}

inline std::string file_digest(const std::filesystem::path& path) {
    return util::sha256_hex(util::read_file(path));
}

}  // namespace vifrag::pipeline
