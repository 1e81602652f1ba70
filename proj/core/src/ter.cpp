#include "nevl/metrics.hpp"

#include "nevl/text.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace nevl::metrics {

namespace {

std::vector<int> to_ids(const std::vector<std::string>& tokens,
                        std::unordered_map<std::string, int>& vocab) {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        const auto [it, inserted] = vocab.emplace(t, static_cast<int>(vocab.size()));
        ids.push_back(it->second);
    }
    return ids;
}

size_t levenshtein(const std::vector<int>& a, const std::vector<int>& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<size_t> row(m + 1);
    for (size_t j = 0; j <= m; ++j) row[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        size_t diag = row[0];
        row[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            const size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[m];
}

// Banded Levenshtein: exact when the distance is below `limit`, otherwise
// returns `limit`. Used to discard shift candidates that cannot beat the
// best one seen so far.
size_t levenshtein_bounded(const std::vector<int>& a, const std::vector<int>& b, size_t limit) {
    const size_t n = a.size(), m = b.size();
    const size_t diff = n > m ? n - m : m - n;
    if (diff >= limit) return limit;
    constexpr size_t kBig = std::numeric_limits<size_t>::max() / 2;
    std::vector<size_t> row(m + 1, kBig), next(m + 1, kBig);
    const size_t band = limit;  // |i - j| <= band suffices for distances < limit
    for (size_t j = 0; j <= std::min(m, band); ++j) row[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        const size_t lo = i > band ? i - band : 0;
        const size_t hi = std::min(m, i + band);
        std::fill(next.begin(), next.end(), kBig);
        if (lo == 0) next[0] = i;
        size_t row_min = kBig;
        for (size_t j = std::max<size_t>(lo, 1); j <= hi; ++j) {
            const size_t sub = row[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const size_t del = row[j] + 1;
            const size_t ins = next[j - 1] + 1;
            next[j] = std::min({sub, del, ins});
            row_min = std::min(row_min, next[j]);
        }
        if (lo == 0) row_min = std::min(row_min, next[0]);
        if (row_min >= limit) return limit;
        row.swap(next);
    }
    return std::min(row[m], limit);
}

std::vector<int> apply_shift(const std::vector<int>& seq, size_t start, size_t len, size_t dest) {
    std::vector<int> out;
    out.reserve(seq.size());
    for (size_t i = 0; i < seq.size(); ++i)
        if (i < start || i >= start + len) out.push_back(seq[i]);
    out.insert(out.begin() + dest, seq.begin() + start, seq.begin() + start + len);
    return out;
}

// Greedy block-shift search: each round scans every candidate shift
// (ascending block start, block length, destination) and applies the first
// one reaching the largest reduction of the remaining edit distance. Each
// applied shift costs one edit.
size_t greedy_ter_edits(const std::vector<int>& hyp, const std::vector<int>& ref,
                        const TerConfig& cfg) {
    std::vector<int> current = hyp;
    size_t cur_lev = levenshtein(current, ref);
    size_t shifts = 0;
    while (shifts < cfg.max_shifts && cur_lev > 0 && !current.empty()) {
        const size_t n = current.size();
        size_t best_lev = cur_lev;
        size_t best_start = 0, best_len = 0, best_dest = 0;
        for (size_t start = 0; start < n; ++start) {
            for (size_t len = 1; len <= std::min(cfg.max_block, n - start); ++len) {
                const size_t dest_lo =
                    start > cfg.max_shift_distance ? start - cfg.max_shift_distance : 0;
                const size_t dest_hi = std::min(n - len, start + cfg.max_shift_distance);
                for (size_t dest = dest_lo; dest <= dest_hi; ++dest) {
                    if (dest == start) continue;
                    const auto shifted = apply_shift(current, start, len, dest);
                    const size_t d = levenshtein_bounded(shifted, ref, best_lev);
                    if (d < best_lev) {
                        best_lev = d;
                        best_start = start;
                        best_len = len;
                        best_dest = dest;
                    }
                }
            }
        }
        if (best_lev >= cur_lev) break;
        current = apply_shift(current, best_start, best_len, best_dest);
        cur_lev = best_lev;
        ++shifts;
    }
    return shifts + cur_lev;
}

std::vector<std::string> ter_tokens(const std::string& s) {
    return tokenize_13a(text::lowercase(s));
}

}  // namespace

TerStats ter_stats(const std::string& hypothesis, const std::vector<std::string>& references,
                   const TerConfig& config) {
    if (references.empty()) throw std::runtime_error("TER: no references");
    std::unordered_map<std::string, int> vocab;
    const auto hyp = to_ids(ter_tokens(hypothesis), vocab);

    TerStats best;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : references) {
        const auto ref = to_ids(ter_tokens(r), vocab);
        if (ref.empty()) throw std::runtime_error("TER: empty reference after tokenization");
        const auto edits = static_cast<double>(greedy_ter_edits(hyp, ref, config));
        const double ratio = edits / static_cast<double>(ref.size());
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = {edits, ref.size()};
        }
    }
    return best;
}

MetricScore ter(const std::string& hypothesis, const std::vector<std::string>& references,
                const TerConfig& config) {
    const TerStats s = ter_stats(hypothesis, references, config);
    return {MetricKind::Ter, 100.0 * s.edits / static_cast<double>(s.ref_len)};
}

}  // namespace nevl::metrics
