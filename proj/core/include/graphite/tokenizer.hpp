#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace graphite {

// Splits on Unicode whitespace, lowercases ASCII letters and strips leading
// and trailing punctuation from every token. Internal punctuation (hyphens,
// periods in "2.5mm", ...) is kept. Order and duplicates are preserved.
std::vector<std::string> tokenize(std::string_view text);

// Tokens joined by a single space. Used as the canonical text of a keyphrase.
std::string normalize_phrase(std::string_view text);

// Trims Unicode whitespace from both ends.
std::string_view trim(std::string_view text);

}  // namespace graphite
