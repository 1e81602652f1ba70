#include "nevl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace nevl::metrics {

namespace {

using NgramCounts = std::map<std::vector<std::string>, size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
    NgramCounts counts;
    if (tokens.size() < static_cast<size_t>(n)) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

}  // namespace

MetricScore bleu(const std::vector<std::string>& hypotheses,
                 const std::vector<std::vector<std::string>>& references,
                 const BleuConfig& config, Level level) {
    if (config.max_order < 1) throw std::runtime_error("BLEU max_order must be >= 1");
    if (hypotheses.size() != references.size())
        throw std::runtime_error("BLEU: hypothesis/reference count mismatch");
    if (hypotheses.empty()) throw std::runtime_error("BLEU: empty input");
    if (level == Level::Sentence && hypotheses.size() != 1)
        throw std::runtime_error("BLEU: sentence level takes a single segment");

    const int order = config.max_order;
    std::vector<size_t> correct(order, 0), total(order, 0);
    size_t sys_len = 0, ref_len = 0;

    for (size_t seg = 0; seg < hypotheses.size(); ++seg) {
        if (references[seg].empty())
            throw std::runtime_error("BLEU: segment " + std::to_string(seg) + " has no references");
        const auto hyp_tokens = tokenize_13a(hypotheses[seg]);
        sys_len += hyp_tokens.size();

        std::vector<std::vector<std::string>> ref_tokens;
        ref_tokens.reserve(references[seg].size());
        for (const auto& r : references[seg]) ref_tokens.push_back(tokenize_13a(r));

        // Brevity penalty uses the reference closest in length to the
        // hypothesis; ties resolve toward the shorter reference.
        size_t closest = ref_tokens[0].size();
        for (const auto& rt : ref_tokens) {
            const auto d = [&](size_t len) {
                return len > hyp_tokens.size() ? len - hyp_tokens.size() : hyp_tokens.size() - len;
            };
            if (d(rt.size()) < d(closest) || (d(rt.size()) == d(closest) && rt.size() < closest))
                closest = rt.size();
        }
        ref_len += closest;

        for (int n = 1; n <= order; ++n) {
            const auto hyp_counts = count_ngrams(hyp_tokens, n);
            NgramCounts max_ref_counts;
            for (const auto& rt : ref_tokens)
                for (const auto& [gram, c] : count_ngrams(rt, n)) {
                    auto& slot = max_ref_counts[gram];
                    slot = std::max(slot, c);
                }
            for (const auto& [gram, c] : hyp_counts) {
                const auto it = max_ref_counts.find(gram);
                if (it != max_ref_counts.end()) correct[n - 1] += std::min(c, it->second);
            }
            if (hyp_tokens.size() >= static_cast<size_t>(n))
                total[n - 1] += hyp_tokens.size() - n + 1;
        }
    }

    // Orders with a zero denominator are excluded from the geometric mean;
    // this makes a segment identical to its reference score 100 regardless
    // of length.
    double log_sum = 0.0;
    int effective_orders = 0;
    size_t zero_numerators = 0;
    for (int n = 0; n < order; ++n) {
        if (total[n] == 0) continue;
        ++effective_orders;
        double precision;
        if (correct[n] == 0) {
            if (!config.exponential_smoothing) return {MetricKind::Bleu, 0.0};
            ++zero_numerators;
            precision = 1.0 / (std::pow(2.0, static_cast<double>(zero_numerators)) *
                               static_cast<double>(total[n]));
        } else {
            precision = static_cast<double>(correct[n]) / static_cast<double>(total[n]);
        }
        log_sum += std::log(precision);
    }
    if (effective_orders == 0 || sys_len == 0) return {MetricKind::Bleu, 0.0};

    const double geo_mean = std::exp(log_sum / effective_orders);
    double brevity_penalty = 1.0;
    if (sys_len < ref_len)
        brevity_penalty = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(sys_len));
    return {MetricKind::Bleu, 100.0 * brevity_penalty * geo_mean};
}

}  // namespace nevl::metrics
