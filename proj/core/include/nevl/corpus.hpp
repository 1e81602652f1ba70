#pragma once

#include "nevl/tsv.hpp"

#include <array>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

namespace nevl::corpus {

enum class GenderCategory { Neutral, Masculine, Feminine };
enum class SetTag { SetN, SetG };

std::string category_code(GenderCategory c);            // "N" | "M" | "F"
GenderCategory category_from_code(const std::string&);  // throws on unknown code
std::string set_tag_name(SetTag t);                     // "Set-N" | "Set-G"
SetTag set_tag_from_name(const std::string&);
SetTag implied_set_tag(GenderCategory c);

// One benchmark item: an English source, its gendered Italian reference and
// one neutral reference (three on the common set).
struct CorpusEntry {
    std::string id;
    SetTag set_tag = SetTag::SetN;
    GenderCategory category = GenderCategory::Neutral;
    bool common_set = false;
    std::string source;
    std::string ref_g;
    std::vector<std::string> neutral_refs;  // length 1, or 3 when common_set
};

struct Corpus {
    std::string name;
    std::vector<CorpusEntry> entries;

    const CorpusEntry* find(const std::string& id) const;
};

// TSV columns: ID, SET, CATEGORY, COMMON, SRC, REF-G, REF-N1, REF-N2, REF-N3
// (the last two stay empty when COMMON=0). Structural problems raise
// tsv::ParseError with the offending line number.
extern const std::array<const char*, 9> kCorpusHeader;
Corpus parse_corpus(std::istream& in, const std::string& name = "");
void serialize_corpus(const Corpus& corpus, std::ostream& out);

struct ValidationFinding {
    std::string code;
    std::string message;
    std::string entry_id;  // empty for corpus-level findings
};

struct ValidationOptions {
    size_t balance_tolerance = 0;  // allowed |count difference| for balance checks
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;
    bool ok() const { return findings.empty(); }
    nlohmann::ordered_json to_json() const;
};

ValidationReport validate(const Corpus& corpus, const ValidationOptions& options = {});

// Cue lexicon: case-sensitive regular expressions matched on word
// boundaries. TSV columns: PATTERN, CLASS (gendered|neutral), HINT (M|F|-).
struct CuePattern {
    std::string pattern;
    std::optional<GenderCategory> hint;
    std::regex compiled;
};

struct CueLexicon {
    std::vector<CuePattern> gendered;
    std::vector<CuePattern> neutral;

    bool empty() const { return gendered.empty() && neutral.empty(); }
    static CueLexicon load(std::istream& in);
};

struct SegmentPair {
    std::string source;
    std::string target;
};

struct Candidate {
    size_t index = 0;  // position in the input pair list
    SegmentPair pair;
    SetTag proposed = SetTag::SetN;
    std::vector<std::string> gendered_cues;  // matched surface forms, deduplicated
    std::vector<std::string> neutral_cues;
};

// A pair is proposed as Set-G when any gendered cue matches its source;
// otherwise as Set-N when a neutral cue matches; pairs matching neither are
// omitted. Gendered evidence dominates, both cue lists are kept for review.
std::vector<Candidate> extract_candidates(const std::vector<SegmentPair>& segments,
                                          const CueLexicon& lexicon);

// Cross-reference score matrix over the common set, one 4x4 block per set
// tag. Row = reference role, column = candidate role, diagonal undefined.
struct VariabilityMatrix {
    static constexpr std::array<const char*, 4> kRoles{"REF-N1", "REF-N2", "REF-N3", "REF-G"};
    using Cells = std::array<std::array<std::optional<double>, 4>, 4>;
    Cells set_n;
    Cells set_g;
    nlohmann::ordered_json to_json() const;
};

using CorpusScorer = std::function<double(const std::vector<std::string>& hypotheses,
                                          const std::vector<std::vector<std::string>>& references)>;

// Requires every entry to carry three neutral references. The default
// scorer is corpus-level BLEU.
VariabilityMatrix reference_variability(const Corpus& common_set, const CorpusScorer& scorer);
VariabilityMatrix reference_variability(const Corpus& common_set);

// Length statistics per set tag; token counts ignore punctuation-only
// whitespace tokens.
struct FieldStats {
    size_t sentences = 0;
    double avg_length = 0.0;  // meaningful only when sentences > 0
};

struct SetStats {
    size_t count = 0;
    FieldStats source;
    FieldStats ref_g;
    FieldStats neutral;  // counted over every neutral reference
};

struct CorpusStats {
    SetStats set_n;
    SetStats set_g;
    nlohmann::ordered_json to_json() const;
};

CorpusStats stats(const Corpus& corpus);

}  // namespace nevl::corpus
