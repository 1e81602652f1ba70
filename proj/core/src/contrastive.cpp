#include "nevl/contrastive.hpp"

#include "nevl/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace nevl::contrastive {

using corpus::CorpusEntry;
using corpus::SetTag;
using metrics::Direction;
using metrics::MetricKind;

std::vector<SystemOutput> load_outputs(std::istream& in) {
    const auto rows = tsv::read_rows(in);
    if (rows.empty()) throw tsv::ParseError(1, "missing header row");
    const auto& header = rows.front().fields;
    const bool has_source_col = header.size() == 3;
    if (!(header.size() == 2 || has_source_col) || header[0] != "ENTRY_ID" || header[1] != "TEXT" ||
        (has_source_col && header[2] != "POSTEDIT_SOURCE"))
        throw tsv::ParseError(rows.front().line,
                              "expected header ENTRY_ID, TEXT[, POSTEDIT_SOURCE]");

    std::vector<SystemOutput> outputs;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size())
            throw tsv::ParseError(row.line, "expected " + std::to_string(header.size()) + " columns");
        SystemOutput o;
        o.entry_id = row.fields[0];
        o.text = row.fields[1];
        if (o.entry_id.empty()) throw tsv::ParseError(row.line, "empty ENTRY_ID");
        if (o.text.empty()) throw tsv::ParseError(row.line, "empty TEXT");
        if (has_source_col && !row.fields[2].empty()) {
            if (row.fields[2] != "1" && row.fields[2] != "2" && row.fields[2] != "3")
                throw tsv::ParseError(row.line, "POSTEDIT_SOURCE must be 1, 2 or 3");
            o.postedit_source = row.fields[2][0] - '0';
        }
        outputs.push_back(std::move(o));
    }
    return outputs;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Gendered: return "gendered";
        case Verdict::Neutral: return "neutral";
        case Verdict::Tie: return "tie";
    }
    return "?";
}

double delta_percent(double score_correct, double score_wrong, Direction dir) {
    if (score_correct == 0.0)
        throw std::runtime_error("delta_percent: correct-reference score is zero");
    if (dir == Direction::HigherBetter)
        return 100.0 * (score_correct - score_wrong) / score_correct;
    return 100.0 * (score_wrong - score_correct) / score_correct;
}

bool sentence_canonical(MetricKind kind) { return kind != MetricKind::Chrf; }

namespace {

// Best single-reference sentence score under the metric's direction.
double best_single_ref(MetricKind kind, const std::string& text,
                       const std::vector<std::string>& refs,
                       const metrics::MetricConfigs& configs) {
    const bool higher = metrics::direction(kind) == Direction::HigherBetter;
    double best = higher ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
    for (const auto& r : refs) {
        const double s = metrics::score_sentence(kind, text, {r}, configs);
        if (higher ? s > best : s < best) best = s;
    }
    return best;
}

std::vector<std::string> select_neutral_refs(const CorpusEntry& entry,
                                             const std::optional<int>& postedit_source,
                                             const RefPolicy& policy) {
    switch (policy.kind) {
        case RefPolicy::Kind::Best:
            return entry.neutral_refs;
        case RefPolicy::Kind::ExcludeSource: {
            if (!postedit_source) return entry.neutral_refs;
            std::vector<std::string> refs;
            for (size_t i = 0; i < entry.neutral_refs.size(); ++i)
                if (static_cast<int>(i) + 1 != *postedit_source)
                    refs.push_back(entry.neutral_refs[i]);
            if (refs.empty())
                throw std::runtime_error("entry '" + entry.id +
                                         "': excluding the post-edit source leaves no neutral reference");
            return refs;
        }
        case RefPolicy::Kind::Single: {
            const int idx = policy.single_index;
            if (idx < 1 || static_cast<size_t>(idx) > entry.neutral_refs.size())
                throw std::runtime_error("entry '" + entry.id + "': reference index " +
                                         std::to_string(idx) + " out of range (1.." +
                                         std::to_string(entry.neutral_refs.size()) + ")");
            return {entry.neutral_refs[idx - 1]};
        }
    }
    throw std::logic_error("unreachable ref policy");
}

}  // namespace

ContrastiveVerdict sentence_contrastive(const SystemOutput& output, const CorpusEntry& entry,
                                        MetricKind metric, const RefPolicy& policy,
                                        const metrics::MetricConfigs& configs) {
    if (output.entry_id != entry.id)
        throw std::runtime_error("output entry id '" + output.entry_id +
                                 "' does not match entry '" + entry.id + "'");
    ContrastiveVerdict v;
    v.entry_id = entry.id;
    v.metric = metric;
    v.gold = entry.set_tag;
    v.score_vs_gendered = metrics::score_sentence(metric, output.text, {entry.ref_g}, configs);
    v.score_vs_neutral = best_single_ref(
        metric, output.text, select_neutral_refs(entry, output.postedit_source, policy), configs);

    const bool higher = metrics::direction(metric) == Direction::HigherBetter;
    const double n = v.score_vs_neutral, g = v.score_vs_gendered;
    if (n == g)
        v.predicted = Verdict::Tie;
    else if (higher ? n > g : n < g)
        v.predicted = Verdict::Neutral;
    else
        v.predicted = Verdict::Gendered;
    return v;
}

double macro_average(double accuracy_set_g, double accuracy_set_n) {
    return (accuracy_set_g + accuracy_set_n) / 2.0;
}

Accuracy accuracy(const std::vector<ContrastiveVerdict>& verdicts, TiePolicy tie_policy) {
    if (verdicts.empty()) throw std::runtime_error("accuracy: no verdicts");
    size_t n_g = 0, n_n = 0, correct_g = 0, correct_n = 0;
    for (const auto& v : verdicts) {
        Verdict predicted = v.predicted;
        if (predicted == Verdict::Tie) {
            if (tie_policy == TiePolicy::AsGendered)
                predicted = Verdict::Gendered;
            else if (tie_policy == TiePolicy::AsNeutral)
                predicted = Verdict::Neutral;
        }
        if (v.gold == SetTag::SetG) {
            ++n_g;
            if (predicted == Verdict::Gendered) ++correct_g;
        } else {
            ++n_n;
            if (predicted == Verdict::Neutral) ++correct_n;
        }
    }
    Accuracy acc;
    if (n_g) acc.set_g = 100.0 * static_cast<double>(correct_g) / static_cast<double>(n_g);
    if (n_n) acc.set_n = 100.0 * static_cast<double>(correct_n) / static_cast<double>(n_n);
    if (acc.set_g && acc.set_n)
        acc.all = macro_average(*acc.set_g, *acc.set_n);
    else
        acc.all = acc.set_g ? *acc.set_g : *acc.set_n;
    return acc;
}

namespace {

constexpr std::array<const char*, 4> kNeutralRoles{"REF-N1", "REF-N2", "REF-N3"};

struct ResolvedOutput {
    const SystemOutput* output;
    const CorpusEntry* entry;
};

// Corpus score of one output group against one reference role, restricted to
// entries where the role exists.
std::optional<TraceItem> score_group_role(const std::vector<ResolvedOutput>& group,
                                          SetTag set, std::optional<int> group_key,
                                          int role,  // 0..2 neutral index, 3 = REF-G
                                          bool correct_side, MetricKind metric,
                                          const metrics::MetricConfigs& configs) {
    std::vector<std::string> hyps;
    std::vector<std::vector<std::string>> refs;
    for (const auto& ro : group) {
        const auto& e = *ro.entry;
        if (role == 3) {
            hyps.push_back(ro.output->text);
            refs.push_back({e.ref_g});
        } else if (static_cast<size_t>(role) < e.neutral_refs.size()) {
            hyps.push_back(ro.output->text);
            refs.push_back({e.neutral_refs[role]});
        }
    }
    if (hyps.empty()) return std::nullopt;
    TraceItem item;
    item.set = set;
    item.output_group = group_key;
    item.ref_role = role == 3 ? "REF-G" : kNeutralRoles[role];
    item.correct_side = correct_side;
    item.score = metrics::score_corpus(metric, hyps, refs, configs);
    item.segments = hyps.size();
    return item;
}

}  // namespace

CorpusContrastiveResult corpus_contrastive(const std::vector<SystemOutput>& outputs,
                                           const corpus::Corpus& corpus,
                                           MetricKind metric,
                                           const metrics::MetricConfigs& configs,
                                           const CorpusContrastiveOptions& options) {
    // Group resolved outputs: Set-G outputs form a single raw group, Set-N
    // outputs are keyed by postedit_source so each post-edited variant is
    // scored as its own output set.
    std::vector<ResolvedOutput> group_g;
    std::map<std::optional<int>, std::vector<ResolvedOutput>> groups_n;
    std::set<std::pair<std::optional<int>, std::string>> seen;
    size_t entries_g = 0, entries_n = 0;
    std::set<std::string> distinct_g, distinct_n;

    for (const auto& o : outputs) {
        const CorpusEntry* entry = corpus.find(o.entry_id);
        if (!entry) throw std::runtime_error("output references unknown entry '" + o.entry_id + "'");
        if (entry->set_tag == SetTag::SetG) {
            if (o.postedit_source)
                throw std::runtime_error("entry '" + o.entry_id +
                                         "': Set-G outputs must not carry POSTEDIT_SOURCE");
            if (!seen.emplace(std::nullopt, "G:" + o.entry_id).second)
                throw std::runtime_error("duplicate output for Set-G entry '" + o.entry_id + "'");
            group_g.push_back({&o, entry});
            distinct_g.insert(o.entry_id);
        } else {
            if (options.strict_exclusion && entry->common_set && !o.postedit_source)
                throw std::runtime_error("entry '" + o.entry_id +
                                         "': common-set output lacks POSTEDIT_SOURCE "
                                         "(strict exclusion)");
            if (o.postedit_source &&
                static_cast<size_t>(*o.postedit_source) > entry->neutral_refs.size())
                throw std::runtime_error("entry '" + o.entry_id + "': POSTEDIT_SOURCE " +
                                         std::to_string(*o.postedit_source) +
                                         " exceeds the entry's neutral reference count");
            const std::string key =
                (o.postedit_source ? std::to_string(*o.postedit_source) : "-") + ":" + o.entry_id;
            if (!seen.emplace(o.postedit_source, key).second)
                throw std::runtime_error("duplicate output for entry '" + o.entry_id +
                                         "' in the same post-edit group");
            groups_n[o.postedit_source].push_back({&o, entry});
            distinct_n.insert(o.entry_id);
        }
    }
    entries_g = distinct_g.size();
    entries_n = distinct_n.size();

    CorpusContrastiveResult result;
    const auto dir = metrics::direction(metric);

    auto average_side = [](const std::vector<TraceItem>& items, bool correct_side) {
        double sum = 0;
        size_t n = 0;
        for (const auto& it : items)
            if (it.correct_side == correct_side) {
                sum += it.score;
                ++n;
            }
        return n ? sum / static_cast<double>(n) : std::nan("");
    };

    if (!group_g.empty()) {
        std::vector<TraceItem> items;
        if (auto t = score_group_role(group_g, SetTag::SetG, std::nullopt, 3, true, metric, configs))
            items.push_back(*t);
        for (int role = 0; role < 3; ++role)
            if (auto t = score_group_role(group_g, SetTag::SetG, std::nullopt, role, false, metric,
                                          configs))
                items.push_back(*t);
        SetScores s;
        s.score_correct = average_side(items, true);
        s.score_wrong = average_side(items, false);
        s.delta = delta_percent(s.score_correct, s.score_wrong, dir);
        s.entries = entries_g;
        result.set_g = s;
        result.trace.insert(result.trace.end(), items.begin(), items.end());
    }

    if (!groups_n.empty()) {
        std::vector<TraceItem> items;
        for (const auto& [key, group] : groups_n) {
            for (int role = 0; role < 3; ++role) {
                if (key && *key == role + 1) continue;  // never score against the source reference
                if (auto t = score_group_role(group, SetTag::SetN, key, role, true, metric, configs))
                    items.push_back(*t);
            }
            if (auto t = score_group_role(group, SetTag::SetN, key, 3, false, metric, configs))
                items.push_back(*t);
        }
        SetScores s;
        s.score_correct = average_side(items, true);
        s.score_wrong = average_side(items, false);
        s.delta = delta_percent(s.score_correct, s.score_wrong, dir);
        s.entries = entries_n;
        result.set_n = s;
        result.trace.insert(result.trace.end(), items.begin(), items.end());
    }
    return result;
}

PosteditResult apply_neutral_postedit(
    const std::string& output_text,
    const std::vector<std::pair<std::string, std::string>>& substitutions) {
    struct Span {
        size_t begin;
        size_t end;
        const std::string* replacement;
    };
    std::vector<Span> spans;
    for (const auto& [gendered, neutral] : substitutions) {
        if (gendered.empty()) throw std::runtime_error("empty gendered span");
        const size_t pos = output_text.find(gendered);
        if (pos == std::string::npos)
            throw std::runtime_error("span not found in output: '" + gendered + "'");
        spans.push_back({pos, pos + gendered.size(), &neutral});
    }
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
    for (size_t i = 1; i < spans.size(); ++i)
        if (spans[i].begin < spans[i - 1].end)
            throw std::runtime_error("overlapping substitution spans at byte " +
                                     std::to_string(spans[i].begin));

    std::string out;
    size_t cursor = 0;
    for (const auto& s : spans) {
        out.append(output_text, cursor, s.begin - cursor);
        out.append(*s.replacement);
        cursor = s.end;
    }
    out.append(output_text, cursor, std::string::npos);

    // A token counts as changed when any byte of it lies in a replaced span.
    size_t total_tokens = 0, changed_tokens = 0;
    size_t i = 0;
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
    while (i < output_text.size()) {
        while (i < output_text.size() && is_space(output_text[i])) ++i;
        size_t j = i;
        while (j < output_text.size() && !is_space(output_text[j])) ++j;
        if (j > i) {
            ++total_tokens;
            for (const auto& s : spans)
                if (i < s.end && s.begin < j) {
                    ++changed_tokens;
                    break;
                }
        }
        i = j;
    }
    PosteditResult res;
    res.text = std::move(out);
    res.changed_token_fraction =
        total_tokens ? static_cast<double>(changed_tokens) / static_cast<double>(total_tokens) : 0.0;
    return res;
}

ProtocolReport run_protocol(const std::vector<SystemOutput>& outputs, const corpus::Corpus& corpus,
                            const std::vector<MetricKind>& kinds, const RefPolicy& policy,
                            TiePolicy tie_policy, const metrics::MetricConfigs& configs,
                            const CorpusContrastiveOptions& options) {
    ProtocolReport report;
    for (const auto kind : kinds) {
        MetricProtocol mp;
        mp.metric = kind;
        mp.corpus_level = corpus_contrastive(outputs, corpus, kind, configs, options);
        for (const auto& o : outputs) {
            const CorpusEntry* entry = corpus.find(o.entry_id);
            mp.verdicts.push_back(sentence_contrastive(o, *entry, kind, policy, configs));
        }
        mp.acc = accuracy(mp.verdicts, tie_policy);
        report.per_metric.push_back(std::move(mp));
    }
    return report;
}

nlohmann::ordered_json ProtocolReport::to_json() const {
    using text::round_half_up2;
    nlohmann::ordered_json sections = nlohmann::ordered_json::array();
    for (const auto& mp : per_metric) {
        nlohmann::ordered_json acc;
        acc["set_g"] = mp.acc.set_g ? nlohmann::ordered_json(round_half_up2(*mp.acc.set_g))
                                    : nlohmann::ordered_json(nullptr);
        acc["set_n"] = mp.acc.set_n ? nlohmann::ordered_json(round_half_up2(*mp.acc.set_n))
                                    : nlohmann::ordered_json(nullptr);
        acc["all"] = round_half_up2(mp.acc.all);

        auto emit_set = [&](const std::optional<SetScores>& scores, corpus::SetTag tag) {
            if (!scores) return;
            nlohmann::ordered_json j;
            j["metric"] = metrics::metric_name(mp.metric);
            j["set"] = corpus::set_tag_name(tag);
            j["score_correct"] = round_half_up2(metrics::report_scale(mp.metric, scores->score_correct));
            j["score_wrong"] = round_half_up2(metrics::report_scale(mp.metric, scores->score_wrong));
            j["delta_percent"] = round_half_up2(scores->delta);
            j["canonical_sentence_metric"] = sentence_canonical(mp.metric);
            j["accuracy"] = acc;
            nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
            for (const auto& v : mp.verdicts) {
                if (v.gold != tag) continue;
                nlohmann::ordered_json vj;
                vj["entry_id"] = v.entry_id;
                vj["score_vs_neutral"] = round_half_up2(metrics::report_scale(mp.metric, v.score_vs_neutral));
                vj["score_vs_gendered"] = round_half_up2(metrics::report_scale(mp.metric, v.score_vs_gendered));
                vj["predicted"] = verdict_name(v.predicted);
                vj["gold"] = corpus::set_tag_name(v.gold);
                verdicts.push_back(vj);
            }
            j["verdicts"] = verdicts;
            sections.push_back(j);
        };
        emit_set(mp.corpus_level.set_g, corpus::SetTag::SetG);
        emit_set(mp.corpus_level.set_n, corpus::SetTag::SetN);
    }
    return sections;
}

void ProtocolReport::write_verdicts_tsv(std::ostream& out) const {
    tsv::write_row(out, {"ENTRY_ID", "METRIC", "S_N", "S_G", "PRED", "GOLD"});
    char buf[64];
    for (const auto& mp : per_metric) {
        for (const auto& v : mp.verdicts) {
            auto fmt = [&](double x) {
                std::snprintf(buf, sizeof(buf), "%.2f",
                              text::round_half_up2(metrics::report_scale(mp.metric, x)));
                return std::string(buf);
            };
            tsv::write_row(out, {v.entry_id, metrics::metric_name(mp.metric), fmt(v.score_vs_neutral),
                                 fmt(v.score_vs_gendered), verdict_name(v.predicted),
                                 corpus::set_tag_name(v.gold)});
        }
    }
}

}  // namespace nevl::contrastive
