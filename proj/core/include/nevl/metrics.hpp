#pragma once

#include "nevl/tokenize.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nevl::metrics {

enum class MetricKind { Bleu, Chrf, Ter, Meteor };
enum class Direction { HigherBetter, LowerBetter };

Direction direction(MetricKind kind);
std::string metric_name(MetricKind kind);
MetricKind metric_from_name(const std::string& name);  // throws on unknown name

// Native scale is [0,100] for BLEU/chrF/TER and [0,1] for METEOR; reports
// print METEOR x100.
double report_scale(MetricKind kind, double value);
double perfect_score_bound(MetricKind kind);  // 100, 100, 0; METEOR has no fixed ceiling

struct MetricScore {
    MetricKind kind;
    double value;
};

enum class Level { Sentence, Corpus };

// BLEU with mixed case, 13a tokenization and exponential smoothing.
// Orders whose n-gram denominator is zero (segments shorter than n) are
// excluded from the geometric mean; the k-th zero numerator among the
// remaining orders is smoothed to 1/(2^k * denominator).
struct BleuConfig {
    int max_order = 4;
    bool exponential_smoothing = true;
};

// chrF: F_beta over character n-gram precisions/recalls averaged across
// orders, whitespace removed before extraction. word_order is fixed at 0.
struct ChrfConfig {
    int char_order = 6;
    int word_order = 0;
    double beta = 2.0;
    bool strip_whitespace = true;
};

// TER shift search limits. A shift moves a contiguous hypothesis block of at
// most max_block tokens to an insertion index (measured after removal) at
// most max_shift_distance away; the greedy loop applies the first
// scan-ordered shift reaching the largest edit-distance reduction, at most
// max_shifts times.
struct TerConfig {
    size_t max_block = 10;
    size_t max_shift_distance = 50;
    size_t max_shifts = 20;
};

// METEOR with exact unigram matching (optional crude suffix-stripping stem
// stage) and the chunk penalty gamma * (chunks/matches)^beta.
struct MeteorParams {
    double alpha = 0.9;
    double beta = 3.0;
    double gamma = 0.5;
    bool stem_stage = false;
};

MetricScore bleu(const std::vector<std::string>& hypotheses,
                 const std::vector<std::vector<std::string>>& references,
                 const BleuConfig& config = {}, Level level = Level::Corpus);

MetricScore chrf(const std::vector<std::string>& hypotheses,
                 const std::vector<std::vector<std::string>>& references,
                 const ChrfConfig& config = {}, Level level = Level::Corpus);

// Sentence-level TER: 100 * edits / reference length, minimized over
// references. Tokenization is lowercase + 13a.
MetricScore ter(const std::string& hypothesis, const std::vector<std::string>& references,
                const TerConfig& config = {});

MetricScore meteor(const std::string& hypothesis, const std::vector<std::string>& references,
                   const MeteorParams& params = {});

// Aggregatable per-segment statistics for corpus-level TER and METEOR.
struct TerStats {
    double edits = 0;
    size_t ref_len = 0;
};
TerStats ter_stats(const std::string& hypothesis, const std::vector<std::string>& references,
                   const TerConfig& config = {});

struct MeteorStats {
    size_t matches = 0;
    size_t chunks = 0;
    size_t hyp_len = 0;
    size_t ref_len = 0;
};
MeteorStats meteor_stats(const std::string& hypothesis,
                         const std::vector<std::string>& references,
                         const MeteorParams& params = {});
double meteor_from_stats(const MeteorStats& stats, const MeteorParams& params = {});

struct MetricConfigs {
    BleuConfig bleu;
    ChrfConfig chrf;
    TerConfig ter;
    MeteorParams meteor;
};

// Uniform entry points used by the contrastive protocol. Corpus TER is
// summed edits over summed reference lengths; corpus METEOR applies the
// formula to statistics summed over segments.
double score_corpus(MetricKind kind, const std::vector<std::string>& hypotheses,
                    const std::vector<std::vector<std::string>>& references,
                    const MetricConfigs& configs = {});
double score_sentence(MetricKind kind, const std::string& hypothesis,
                      const std::vector<std::string>& references,
                      const MetricConfigs& configs = {});

}  // namespace nevl::metrics
