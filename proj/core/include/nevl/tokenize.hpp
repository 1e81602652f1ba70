#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nevl::metrics {

// mteval-13a tokenization: entity unescaping and end-of-line hyphenation
// cleanup, then punctuation padding (periods/commas kept attached to digits,
// dashes split after digits), then whitespace splitting. Deterministic and
// idempotent on its own output.
std::vector<std::string> tokenize_13a(std::string_view text);

}  // namespace nevl::metrics
