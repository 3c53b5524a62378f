#pragma once

#include <memory>
#include <string>

#include "vifrag/util/strings.hpp"

namespace vifrag::verify {

/// Pluggable language detection. The default is a Unicode-script heuristic
/// over four coarse buckets, which is enough to check "answer in <language>"
/// constraints without an external model.
class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;

    /// True when the whole response reads as the requested language code.
    virtual bool matches(const std::string& text, const std::string& language_code) const = 0;
};

enum class ScriptBucket { Latin, Cjk, Cyrillic, Arabic, Unknown };

inline ScriptBucket bucket_for_codepoint(uint32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return ScriptBucket::Latin;
    if ((cp >= 0x00C0 && cp <= 0x024F) && cp != 0x00D7 && cp != 0x00F7) return ScriptBucket::Latin;
    if (cp >= 0x0400 && cp <= 0x04FF) return ScriptBucket::Cyrillic;
    if ((cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F))
        return ScriptBucket::Arabic;
    if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
        (cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0xAC00 && cp <= 0xD7AF))
        return ScriptBucket::Cjk;
    return ScriptBucket::Unknown;
}

inline ScriptBucket bucket_for_language_code(const std::string& code) {
    std::string c = util::lower_ascii(code);
    if (c == "zh" || c == "ja" || c == "ko") return ScriptBucket::Cjk;
    if (c == "ru" || c == "uk" || c == "bg" || c == "sr" || c == "be") return ScriptBucket::Cyrillic;
    if (c == "ar" || c == "fa" || c == "ur") return ScriptBucket::Arabic;
    if (c == "en" || c == "fr" || c == "de" || c == "es" || c == "it" || c == "pt" ||
        c == "nl" || c == "sv" || c == "pl" || c == "tr" || c == "vi" || c == "id")
        return ScriptBucket::Latin;
    return ScriptBucket::Unknown;
}

/// Counts letters per script; the requested language matches when its bucket
/// holds a strict majority of all classified letters. No letters -> no match.
class ScriptBucketDetector : public LanguageDetector {
public:
    bool matches(const std::string& text, const std::string& language_code) const override {
        ScriptBucket want = bucket_for_language_code(language_code);
        if (want == ScriptBucket::Unknown) return false;
        size_t counts[4] = {0, 0, 0, 0};
        size_t total = 0;
        for (uint32_t cp : util::utf8_codepoints(text)) {
            ScriptBucket b = bucket_for_codepoint(cp);
            if (b == ScriptBucket::Unknown) continue;
            counts[static_cast<int>(b)]++;
            total++;
        }
        if (total == 0) return false;
        return counts[static_cast<int>(want)] * 2 > total;
    }
};

inline const LanguageDetector& default_language_detector() {
    static ScriptBucketDetector detector;
    return detector;
}

}  // namespace vifrag::verify
