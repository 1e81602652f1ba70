#include "nevl/metrics.hpp"

#include "nevl/text.hpp"

#include <cctype>
#include <map>
#include <stdexcept>

namespace nevl::metrics {

namespace {

std::u32string to_codepoints(std::string_view s, bool strip_whitespace) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        const auto [cp, len] = text::decode_utf8(s, i);
        if (!(strip_whitespace && cp < 0x80 && std::isspace(static_cast<int>(cp))))
            out.push_back(static_cast<char32_t>(cp));
        i += len;
    }
    return out;
}

struct OrderStats {
    size_t hyp_ngrams = 0;
    size_t ref_ngrams = 0;
    size_t matches = 0;
};

std::vector<OrderStats> segment_stats(const std::u32string& hyp, const std::u32string& ref,
                                      int char_order) {
    std::vector<OrderStats> stats(char_order);
    for (int n = 1; n <= char_order; ++n) {
        auto& st = stats[n - 1];
        std::map<std::u32string, size_t> ref_counts;
        if (ref.size() >= static_cast<size_t>(n)) {
            st.ref_ngrams = ref.size() - n + 1;
            for (size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[ref.substr(i, n)];
        }
        if (hyp.size() >= static_cast<size_t>(n)) {
            st.hyp_ngrams = hyp.size() - n + 1;
            std::map<std::u32string, size_t> hyp_counts;
            for (size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[hyp.substr(i, n)];
            for (const auto& [gram, c] : hyp_counts) {
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) st.matches += std::min(c, it->second);
            }
        }
    }
    return stats;
}

// Average precision and recall over orders where either side has n-grams,
// then combine with F_beta.
double f_score(const std::vector<OrderStats>& stats, double beta) {
    double prec_sum = 0.0, rec_sum = 0.0;
    int effective = 0;
    for (const auto& st : stats) {
        if (st.hyp_ngrams == 0 && st.ref_ngrams == 0) continue;
        ++effective;
        if (st.hyp_ngrams > 0) prec_sum += static_cast<double>(st.matches) / st.hyp_ngrams;
        if (st.ref_ngrams > 0) rec_sum += static_cast<double>(st.matches) / st.ref_ngrams;
    }
    if (effective == 0) return 0.0;
    const double precision = prec_sum / effective;
    const double recall = rec_sum / effective;
    const double b2 = beta * beta;
    const double denom = b2 * precision + recall;
    if (denom <= 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

}  // namespace

MetricScore chrf(const std::vector<std::string>& hypotheses,
                 const std::vector<std::vector<std::string>>& references,
                 const ChrfConfig& config, Level level) {
    if (config.char_order < 1) throw std::runtime_error("chrF char_order must be >= 1");
    if (config.beta <= 0.0) throw std::runtime_error("chrF beta must be > 0");
    if (config.word_order != 0) throw std::runtime_error("chrF word_order is fixed at 0");
    if (hypotheses.size() != references.size())
        throw std::runtime_error("chrF: hypothesis/reference count mismatch");
    if (hypotheses.empty()) throw std::runtime_error("chrF: empty input");
    if (level == Level::Sentence && hypotheses.size() != 1)
        throw std::runtime_error("chrF: sentence level takes a single segment");

    std::vector<OrderStats> corpus(config.char_order);
    for (size_t seg = 0; seg < hypotheses.size(); ++seg) {
        if (references[seg].empty())
            throw std::runtime_error("chrF: segment " + std::to_string(seg) + " has no references");
        const auto hyp = to_codepoints(hypotheses[seg], config.strip_whitespace);

        // Multi-reference: keep the statistics of the best-scoring reference.
        std::vector<OrderStats> best;
        double best_score = -1.0;
        for (const auto& r : references[seg]) {
            auto stats = segment_stats(hyp, to_codepoints(r, config.strip_whitespace),
                                       config.char_order);
            const double s = f_score(stats, config.beta);
            if (s > best_score) {
                best_score = s;
                best = std::move(stats);
            }
        }
        for (int n = 0; n < config.char_order; ++n) {
            corpus[n].hyp_ngrams += best[n].hyp_ngrams;
            corpus[n].ref_ngrams += best[n].ref_ngrams;
            corpus[n].matches += best[n].matches;
        }
    }
    return {MetricKind::Chrf, 100.0 * f_score(corpus, config.beta)};
}

}  // namespace nevl::metrics
