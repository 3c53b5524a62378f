#pragma once

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vifrag/core/schemas.hpp"
#include "vifrag/core/types.hpp"
#include "vifrag/util/fs.hpp"
#include "vifrag/util/jsonl.hpp"

namespace vifrag::retrieval {

struct RetrievalHit {
    std::string passage_id;
    double score;
};

struct RetrievalResult {
    std::string query_id;
    std::vector<RetrievalHit> hits;  // scores non-increasing, ties by ascending id
};

/// Flat dense store with exact dot-product top-k. Vectors are float32 and the
/// store is immutable after build, so concurrent retrieval is safe. On disk:
/// index.meta.json + vectors.f32 + ids.jsonl (passages with their text).
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(size_t dim) : dim_(dim) {}

    size_t dim() const { return dim_; }
    size_t size() const { return ids_.size(); }

    void add(const core::Passage& passage, const std::vector<float>& vector) {
        if (vector.size() != dim_)
            throw std::invalid_argument("vector dim " + std::to_string(vector.size()) +
                                        " != store dim " + std::to_string(dim_));
        if (id_to_row_.count(passage.id))
            throw std::invalid_argument("duplicate passage id " + passage.id);
        id_to_row_[passage.id] = ids_.size();
        ids_.push_back(passage.id);
        passages_.push_back(passage);
        vectors_.insert(vectors_.end(), vector.begin(), vector.end());
    }

    const core::Passage& passage_by_id(const std::string& id) const {
        auto it = id_to_row_.find(id);
        if (it == id_to_row_.end()) throw std::out_of_range("unknown passage id " + id);
        return passages_[it->second];
    }

    /// Exact argtop-k over dot products. Deterministic tie-break: equal
    /// scores order by ascending passage id. Returns min(k, N) hits.
    RetrievalResult retrieve(const std::vector<float>& query_vector, size_t k,
                             const std::string& query_id = "") const {
        if (query_vector.size() != dim_)
            throw std::invalid_argument("query dim " + std::to_string(query_vector.size()) +
                                        " != store dim " + std::to_string(dim_));
        if (k == 0) throw std::invalid_argument("k must be >= 1");

        const size_t n = ids_.size();
        std::vector<std::pair<double, size_t>> scored(n);
        for (size_t row = 0; row < n; ++row) {
            const float* v = vectors_.data() + row * dim_;
            double dot = 0.0;
            for (size_t d = 0; d < dim_; ++d)
                dot += static_cast<double>(v[d]) * query_vector[d];
            scored[row] = {dot, row};
        }

        auto better = [this](const std::pair<double, size_t>& a,
                             const std::pair<double, size_t>& b) {
            if (a.first != b.first) return a.first > b.first;
            return ids_[a.second] < ids_[b.second];
        };
        size_t keep = std::min(k, n);
        std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(keep), scored.end(),
                          better);

        RetrievalResult result;
        result.query_id = query_id;
        result.hits.reserve(keep);
        for (size_t i = 0; i < keep; ++i)
            result.hits.push_back({ids_[scored[i].second], scored[i].first});
        return result;
    }

    std::vector<core::Passage> retrieve_passages(const std::vector<float>& query_vector,
                                                 size_t k) const {
        std::vector<core::Passage> out;
        for (const auto& hit : retrieve(query_vector, k).hits) {
            core::Passage p = passage_by_id(hit.passage_id);
            p.score = hit.score;
            out.push_back(std::move(p));
        }
        return out;
    }

    // ---- persistence ----------------------------------------------------------

    void save(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        nlohmann::json meta;
        meta["dim"] = dim_;
        meta["count"] = ids_.size();
        meta["dtype"] = "f32";
        util::write_file_atomic(dir / "index.meta.json", meta.dump(2));

        std::ofstream vec(dir / "vectors.f32", std::ios::binary | std::ios::trunc);
        if (!vec) throw std::runtime_error("cannot write vectors.f32");
        vec.write(reinterpret_cast<const char*>(vectors_.data()),
                  static_cast<std::streamsize>(vectors_.size() * sizeof(float)));

        std::vector<nlohmann::json> rows;
        rows.reserve(passages_.size());
        for (const auto& p : passages_) rows.push_back(core::to_json(p));
        util::write_jsonl(dir / "ids.jsonl", rows);
    }

    static EmbeddingStore load(const std::filesystem::path& dir) {
        nlohmann::json meta = nlohmann::json::parse(util::read_file(dir / "index.meta.json"));
        EmbeddingStore store(meta.at("dim").get<size_t>());
        size_t count = meta.at("count").get<size_t>();

        std::string raw = util::read_file(dir / "vectors.f32");
        if (raw.size() != count * store.dim_ * sizeof(float))
            throw std::runtime_error("vectors.f32 size mismatch");
        std::vector<float> vectors(count * store.dim_);
        std::memcpy(vectors.data(), raw.data(), raw.size());

        auto rows = util::read_jsonl<core::Passage>(
            dir / "ids.jsonl", [](const nlohmann::json& j) { return core::passage_from_json(j); });
        if (rows.records.size() != count) throw std::runtime_error("ids.jsonl count mismatch");
        for (size_t i = 0; i < count; ++i) {
            std::vector<float> v(vectors.begin() + static_cast<long>(i * store.dim_),
                                 vectors.begin() + static_cast<long>((i + 1) * store.dim_));
            store.add(rows.records[i], v);
        }
        return store;
    }

private:
    size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<core::Passage> passages_;
    std::vector<float> vectors_;  // row-major, size = N * dim
    std::map<std::string, size_t> id_to_row_;
};

}  // namespace vifrag::retrieval
