#include "nevl/metrics.hpp"

#include <stdexcept>

namespace nevl::metrics {

Direction direction(MetricKind kind) {
    return kind == MetricKind::Ter ? Direction::LowerBetter : Direction::HigherBetter;
}

std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Bleu: return "BLEU";
        case MetricKind::Chrf: return "chrF";
        case MetricKind::Ter: return "TER";
        case MetricKind::Meteor: return "METEOR";
    }
    return "?";
}

MetricKind metric_from_name(const std::string& name) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "bleu") return MetricKind::Bleu;
    if (lower == "chrf") return MetricKind::Chrf;
    if (lower == "ter") return MetricKind::Ter;
    if (lower == "meteor") return MetricKind::Meteor;
    throw std::runtime_error("unknown metric '" + name + "' (valid: bleu, chrf, ter, meteor)");
}

double report_scale(MetricKind kind, double value) {
    return kind == MetricKind::Meteor ? value * 100.0 : value;
}

double perfect_score_bound(MetricKind kind) {
    switch (kind) {
        case MetricKind::Ter: return 0.0;
        case MetricKind::Meteor: return 1.0;
        default: return 100.0;
    }
}

double score_corpus(MetricKind kind, const std::vector<std::string>& hypotheses,
                    const std::vector<std::vector<std::string>>& references,
                    const MetricConfigs& configs) {
    if (hypotheses.size() != references.size() || hypotheses.empty())
        throw std::runtime_error("corpus scoring requires equally many hypotheses and reference lists");
    switch (kind) {
        case MetricKind::Bleu:
            return bleu(hypotheses, references, configs.bleu, Level::Corpus).value;
        case MetricKind::Chrf:
            return chrf(hypotheses, references, configs.chrf, Level::Corpus).value;
        case MetricKind::Ter: {
            double edits = 0;
            size_t ref_len = 0;
            for (size_t i = 0; i < hypotheses.size(); ++i) {
                const TerStats s = ter_stats(hypotheses[i], references[i], configs.ter);
                edits += s.edits;
                ref_len += s.ref_len;
            }
            return ref_len == 0 ? 0.0 : 100.0 * edits / static_cast<double>(ref_len);
        }
        case MetricKind::Meteor: {
            MeteorStats sum;
            for (size_t i = 0; i < hypotheses.size(); ++i) {
                const MeteorStats s = meteor_stats(hypotheses[i], references[i], configs.meteor);
                sum.matches += s.matches;
                sum.chunks += s.chunks;
                sum.hyp_len += s.hyp_len;
                sum.ref_len += s.ref_len;
            }
            return meteor_from_stats(sum, configs.meteor);
        }
    }
    throw std::logic_error("unreachable metric kind");
}

double score_sentence(MetricKind kind, const std::string& hypothesis,
                      const std::vector<std::string>& references,
                      const MetricConfigs& configs) {
    switch (kind) {
        case MetricKind::Bleu:
            return bleu({hypothesis}, {references}, configs.bleu, Level::Sentence).value;
        case MetricKind::Chrf:
            return chrf({hypothesis}, {references}, configs.chrf, Level::Sentence).value;
        case MetricKind::Ter:
            return ter(hypothesis, references, configs.ter).value;
        case MetricKind::Meteor:
            return meteor(hypothesis, references, configs.meteor).value;
    }
    throw std::logic_error("unreachable metric kind");
}

}  // namespace nevl::metrics
