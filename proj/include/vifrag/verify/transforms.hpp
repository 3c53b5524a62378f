#pragma once

#include <string>
#include <vector>

#include "vifrag/util/strings.hpp"

namespace vifrag::verify {

/// Removes the first line. Responses with fewer than two lines have no
/// introductory line to strip, so the transform is a no-op there.
inline std::string drop_first_line(const std::string& text) {
    auto lines = util::split_lines(text);
    if (lines.size() < 2) return text;
    lines.erase(lines.begin());
    return util::join_lines(lines);
}

inline std::string drop_last_line(const std::string& text) {
    auto lines = util::split_lines(text);
    if (lines.size() < 2) return text;
    lines.pop_back();
    return util::join_lines(lines);
}

/// Strips `*` emphasis markers (covers both *italic* and **bold**).
inline std::string strip_emphasis(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (c != '*') out += c;
    return out;
}

/// The loose-evaluation variant lattice: {identity, first line removed, last
/// line removed, both removed} x {emphasis kept, emphasis stripped},
/// deduplicated with first occurrence order preserved. The identity comes
/// first, which is what makes loose pass whenever strict does.
inline std::vector<std::string> loose_variants(const std::string& response) {
    std::vector<std::string> line_forms;
    line_forms.push_back(response);
    line_forms.push_back(drop_first_line(response));
    line_forms.push_back(drop_last_line(response));
    line_forms.push_back(drop_last_line(drop_first_line(response)));

    std::vector<std::string> variants;
    auto add = [&variants](const std::string& v) {
        for (const auto& existing : variants)
            if (existing == v) return;
        variants.push_back(v);
    };
    for (const auto& form : line_forms) {
        add(form);
        add(strip_emphasis(form));
    }
    return variants;
}

}  // namespace vifrag::verify
