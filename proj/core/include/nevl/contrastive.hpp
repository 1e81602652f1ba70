#pragma once

#include "nevl/corpus.hpp"
#include "nevl/metrics.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nevl::contrastive {

// One system translation joined to a corpus entry. postedit_source marks the
// neutral reference (1-based) whose forms were substituted into the output;
// it is absent for raw MT output.
struct SystemOutput {
    std::string entry_id;
    std::string text;
    std::optional<int> postedit_source;
};

// TSV columns: ENTRY_ID, TEXT, POSTEDIT_SOURCE (third column optional).
std::vector<SystemOutput> load_outputs(std::istream& in);

enum class Verdict { Gendered, Neutral, Tie };
std::string verdict_name(Verdict v);

struct ContrastiveVerdict {
    std::string entry_id;
    metrics::MetricKind metric = metrics::MetricKind::Bleu;
    double score_vs_neutral = 0.0;
    double score_vs_gendered = 0.0;
    Verdict predicted = Verdict::Tie;
    corpus::SetTag gold = corpus::SetTag::SetN;
};

// Relative gain of the correct reference over the wrong one, sign-adjusted
// for lower-is-better metrics. Positive means the metric rewards correctness.
double delta_percent(double score_correct, double score_wrong, metrics::Direction dir);

// Which neutral references a sentence-level comparison may use.
struct RefPolicy {
    enum class Kind { Best, ExcludeSource, Single };
    Kind kind = Kind::ExcludeSource;  // falls back to Best when no source is known
    int single_index = 1;             // 1-based, Kind::Single only
};

ContrastiveVerdict sentence_contrastive(const SystemOutput& output,
                                        const corpus::CorpusEntry& entry,
                                        metrics::MetricKind metric,
                                        const RefPolicy& policy = {},
                                        const metrics::MetricConfigs& configs = {});

// Sentence-level contrastive classification is canonical for BLEU, TER and
// METEOR; other metrics are permitted but flagged.
bool sentence_canonical(metrics::MetricKind kind);

enum class TiePolicy { Incorrect, AsGendered, AsNeutral };

struct Accuracy {
    std::optional<double> set_g;  // percent, absent when the set has no verdicts
    std::optional<double> set_n;
    double all = 0.0;  // macro mean over the present sets
};

double macro_average(double accuracy_set_g, double accuracy_set_n);
Accuracy accuracy(const std::vector<ContrastiveVerdict>& verdicts,
                  TiePolicy tie_policy = TiePolicy::Incorrect);

// Corpus-level protocol. Every output group (keyed by postedit_source) is
// scored once against every admissible reference role and the resulting
// corpus scores are averaged per side. The trace records each (group, role)
// scoring for audit.
struct TraceItem {
    corpus::SetTag set = corpus::SetTag::SetN;
    std::optional<int> output_group;
    std::string ref_role;  // "REF-G", "REF-N1", "REF-N2", "REF-N3"
    bool correct_side = false;
    double score = 0.0;
    size_t segments = 0;
};

struct SetScores {
    double score_correct = 0.0;
    double score_wrong = 0.0;
    double delta = 0.0;
    size_t entries = 0;
};

struct CorpusContrastiveResult {
    std::optional<SetScores> set_g;
    std::optional<SetScores> set_n;
    std::vector<TraceItem> trace;
};

struct CorpusContrastiveOptions {
    // When set, a Set-N output for a common-set entry must carry
    // postedit_source; otherwise such outputs are treated as raw MT and
    // scored against every neutral reference.
    bool strict_exclusion = false;
};

CorpusContrastiveResult corpus_contrastive(const std::vector<SystemOutput>& outputs,
                                           const corpus::Corpus& corpus,
                                           metrics::MetricKind metric,
                                           const metrics::MetricConfigs& configs = {},
                                           const CorpusContrastiveOptions& options = {});

// Span-literal neutralization of an output: each gendered span's first
// occurrence is replaced left to right; everything else stays byte-identical.
struct PosteditResult {
    std::string text;
    double changed_token_fraction = 0.0;
};

PosteditResult apply_neutral_postedit(
    const std::string& output_text,
    const std::vector<std::pair<std::string, std::string>>& substitutions);

// Full protocol over several metrics: corpus-level scores per set plus
// sentence-level verdicts and accuracies.
struct MetricProtocol {
    metrics::MetricKind metric = metrics::MetricKind::Bleu;
    CorpusContrastiveResult corpus_level;
    Accuracy acc;
    std::vector<ContrastiveVerdict> verdicts;
};

struct ProtocolReport {
    std::vector<MetricProtocol> per_metric;
    nlohmann::ordered_json to_json() const;
    void write_verdicts_tsv(std::ostream& out) const;
};

ProtocolReport run_protocol(const std::vector<SystemOutput>& outputs,
                            const corpus::Corpus& corpus,
                            const std::vector<metrics::MetricKind>& kinds,
                            const RefPolicy& policy = {}, TiePolicy tie_policy = TiePolicy::Incorrect,
                            const metrics::MetricConfigs& configs = {},
                            const CorpusContrastiveOptions& options = {});

}  // namespace nevl::contrastive
