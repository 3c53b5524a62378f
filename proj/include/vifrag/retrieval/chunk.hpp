#pragma once

#include <string>
#include <vector>

#include "vifrag/core/types.hpp"
#include "vifrag/util/strings.hpp"

namespace vifrag::retrieval {

struct CorpusDoc {
    std::string id;
    std::string title;
    std::string body;
};

struct ChunkResult {
    std::vector<core::Passage> passages;
    size_t docs_in = 0;
    size_t docs_skipped_empty = 0;
};

/// Splits each document body into <=chunk_words whitespace-word blocks.
/// Stored passage text is "{title} [SEP] {chunk}"; chunk ids are
/// "{doc_id}#{index}". Empty bodies are skipped and counted. Concatenating
/// the chunks of a document (minus the prefix) restores its tokenized body.
inline ChunkResult chunk_corpus(const std::vector<CorpusDoc>& docs, size_t chunk_words = 100) {
    if (chunk_words == 0) chunk_words = 100;
    ChunkResult result;
    for (const auto& doc : docs) {
        ++result.docs_in;
        auto words = util::whitespace_tokens(doc.body);
        if (words.empty()) {
            ++result.docs_skipped_empty;
            continue;
        }
        size_t chunk_index = 0;
        for (size_t start = 0; start < words.size(); start += chunk_words) {
            size_t end = std::min(words.size(), start + chunk_words);
            std::string chunk;
            for (size_t w = start; w < end; ++w) {
                if (w > start) chunk += ' ';
                chunk += words[w];
            }
            core::Passage p;
            p.id = doc.id + "#" + std::to_string(chunk_index++);
            p.title = doc.title;
            p.text = doc.title + " [SEP] " + chunk;
            result.passages.push_back(std::move(p));
        }
    }
    return result;
}

}  // namespace vifrag::retrieval
