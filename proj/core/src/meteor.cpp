#include "nevl/metrics.hpp"

#include "nevl/text.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace nevl::metrics {

namespace {

std::vector<std::string> meteor_tokens(const std::string& s) {
    return tokenize_13a(text::lowercase(s));
}

// Crude language-agnostic stem used by the optional second stage: keep at
// most the first four characters (whole token when shorter).
std::string crude_stem(const std::string& token) {
    size_t bytes = 0, cps = 0;
    while (bytes < token.size() && cps < 4) {
        bytes += text::decode_utf8(token, bytes).len;
        ++cps;
    }
    return token.substr(0, bytes);
}

struct PairList {
    // (hyp index, ref index) pairs in ascending hyp order.
    std::vector<std::pair<size_t, size_t>> pairs;
};

size_t count_chunks(const PairList& a) {
    if (a.pairs.empty()) return 0;
    size_t chunks = 1;
    for (size_t i = 1; i < a.pairs.size(); ++i)
        if (a.pairs[i].first != a.pairs[i - 1].first + 1 ||
            a.pairs[i].second != a.pairs[i - 1].second + 1)
            ++chunks;
    return chunks;
}

// Exhaustive search over maximum exact matchings, minimizing chunk count.
// Branching happens only at duplicated tokens; a node budget keeps
// adversarial inputs bounded (the best alignment found so far is kept).
struct ChunkMinimizer {
    const std::vector<std::string>& hyp;
    const std::vector<std::string>& ref;
    std::unordered_map<std::string, std::vector<size_t>> ref_positions;
    std::unordered_map<std::string, size_t> required;  // matches still required per type
    std::unordered_map<std::string, size_t> hyp_left;  // hyp occurrences not yet visited
    std::vector<bool> ref_used;
    size_t total_required = 0;
    size_t best_chunks = 0;
    bool have_result = false;
    size_t nodes = 0;
    static constexpr size_t kNodeBudget = 1u << 20;

    explicit ChunkMinimizer(const std::vector<std::string>& h, const std::vector<std::string>& r)
        : hyp(h), ref(r), ref_used(r.size(), false) {
        std::unordered_map<std::string, size_t> hyp_counts, ref_counts;
        for (const auto& t : hyp) ++hyp_counts[t];
        for (size_t j = 0; j < ref.size(); ++j) {
            ++ref_counts[ref[j]];
            ref_positions[ref[j]].push_back(j);
        }
        for (const auto& [t, hc] : hyp_counts) {
            const auto it = ref_counts.find(t);
            if (it != ref_counts.end()) {
                required[t] = std::min(hc, it->second);
                total_required += required[t];
            }
            hyp_left[t] = hc;
        }
    }

    PairList current;

    void search(size_t i, size_t matched, size_t chunks_so_far) {
        if (++nodes > kNodeBudget) return;
        if (have_result && chunks_so_far >= best_chunks) return;
        if (i == hyp.size()) {
            if (matched == total_required) {
                best_chunks = chunks_so_far;
                have_result = true;
            }
            return;
        }
        const auto& tok = hyp[i];
        const auto req_it = required.find(tok);
        const bool matchable = req_it != required.end() && req_it->second > 0;

        auto chunk_delta = [&](size_t r) {
            if (current.pairs.empty()) return size_t{1};
            const auto& [ph, pr] = current.pairs.back();
            return (ph + 1 == i && pr + 1 == r) ? size_t{0} : size_t{1};
        };

        if (matchable) {
            for (const size_t r : ref_positions[tok]) {
                if (ref_used[r]) continue;
                ref_used[r] = true;
                --req_it->second;
                --hyp_left[tok];
                current.pairs.emplace_back(i, r);
                search(i + 1, matched + 1, chunks_so_far + chunk_delta(r));
                current.pairs.pop_back();
                ++hyp_left[tok];
                ++req_it->second;
                ref_used[r] = false;
            }
        }
        // Skipping is allowed only when the remaining occurrences still
        // cover what this type requires (keeps the matching maximum).
        const size_t left_after = hyp_left[tok] - 1;
        const size_t req = req_it == required.end() ? 0 : req_it->second;
        if (req <= left_after || !matchable) {
            --hyp_left[tok];
            search(i + 1, matched, chunks_so_far);
            ++hyp_left[tok];
        }
    }
};

struct AlignmentResult {
    size_t matches = 0;
    size_t chunks = 0;
};

AlignmentResult align_exact(const std::vector<std::string>& hyp,
                            const std::vector<std::string>& ref) {
    ChunkMinimizer m(hyp, ref);
    if (m.total_required == 0) return {0, 0};
    m.search(0, 0, 0);
    if (!m.have_result) {
        // Budget exhausted before a full maximum matching was enumerated;
        // fall back to in-order greedy pairing (still a maximum matching).
        PairList greedy;
        std::vector<bool> used(ref.size(), false);
        for (size_t i = 0; i < hyp.size(); ++i) {
            const auto it = m.ref_positions.find(hyp[i]);
            if (it == m.ref_positions.end()) continue;
            for (const size_t r : it->second) {
                if (!used[r]) {
                    used[r] = true;
                    greedy.pairs.emplace_back(i, r);
                    break;
                }
            }
        }
        return {greedy.pairs.size(), count_chunks(greedy)};
    }
    return {m.total_required, m.best_chunks};
}

}  // namespace

double meteor_from_stats(const MeteorStats& stats, const MeteorParams& params) {
    if (stats.matches == 0 || stats.hyp_len == 0 || stats.ref_len == 0) return 0.0;
    const double p = static_cast<double>(stats.matches) / stats.hyp_len;
    const double r = static_cast<double>(stats.matches) / stats.ref_len;
    const double f_mean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
    const double frag = static_cast<double>(stats.chunks) / stats.matches;
    const double penalty = params.gamma * std::pow(frag, params.beta);
    return f_mean * (1.0 - penalty);
}

MeteorStats meteor_stats(const std::string& hypothesis,
                         const std::vector<std::string>& references,
                         const MeteorParams& params) {
    if (references.empty()) throw std::runtime_error("METEOR: no references");
    if (params.alpha < 0.0 || params.alpha > 1.0)
        throw std::runtime_error("METEOR: alpha must be in [0,1]");
    if (params.gamma < 0.0 || params.gamma > 1.0)
        throw std::runtime_error("METEOR: gamma must be in [0,1]");
    const auto hyp = meteor_tokens(hypothesis);

    MeteorStats best;
    double best_score = -1.0;
    for (const auto& reference : references) {
        const auto ref = meteor_tokens(reference);
        auto [matches, chunks] = align_exact(hyp, ref);
        if (params.stem_stage && matches < std::min(hyp.size(), ref.size())) {
            // Optional second stage: greedy in-order pairing of the remaining
            // tokens by crude stem. Chunk count is then recomputed over the
            // union, approximating the staged aligner.
            std::vector<std::string> hyp_stems(hyp.size()), ref_stems(ref.size());
            for (size_t i = 0; i < hyp.size(); ++i) hyp_stems[i] = crude_stem(hyp[i]);
            for (size_t j = 0; j < ref.size(); ++j) ref_stems[j] = crude_stem(ref[j]);
            const auto stem_res = align_exact(hyp_stems, ref_stems);
            if (stem_res.matches > matches) {
                matches = stem_res.matches;
                chunks = stem_res.chunks;
            }
        }
        const MeteorStats st{matches, chunks, hyp.size(), ref.size()};
        const double score = meteor_from_stats(st, params);
        if (score > best_score) {
            best_score = score;
            best = st;
        }
    }
    return best;
}

MetricScore meteor(const std::string& hypothesis, const std::vector<std::string>& references,
                   const MeteorParams& params) {
    return {MetricKind::Meteor, meteor_from_stats(meteor_stats(hypothesis, references, params), params)};
}

}  // namespace nevl::metrics
