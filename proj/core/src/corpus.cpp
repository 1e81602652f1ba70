#include "nevl/corpus.hpp"

#include "nevl/metrics.hpp"
#include "nevl/text.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nevl::corpus {

std::string category_code(GenderCategory c) {
    switch (c) {
        case GenderCategory::Neutral: return "N";
        case GenderCategory::Masculine: return "M";
        case GenderCategory::Feminine: return "F";
    }
    return "?";
}

GenderCategory category_from_code(const std::string& code) {
    if (code == "N") return GenderCategory::Neutral;
    if (code == "M") return GenderCategory::Masculine;
    if (code == "F") return GenderCategory::Feminine;
    throw std::runtime_error("invalid category code '" + code + "' (expected N, M or F)");
}

std::string set_tag_name(SetTag t) { return t == SetTag::SetN ? "Set-N" : "Set-G"; }

SetTag set_tag_from_name(const std::string& name) {
    if (name == "Set-N") return SetTag::SetN;
    if (name == "Set-G") return SetTag::SetG;
    throw std::runtime_error("invalid set tag '" + name + "' (expected Set-N or Set-G)");
}

SetTag implied_set_tag(GenderCategory c) {
    return c == GenderCategory::Neutral ? SetTag::SetN : SetTag::SetG;
}

const CorpusEntry* Corpus::find(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

const std::array<const char*, 9> kCorpusHeader{"ID",    "SET",    "CATEGORY", "COMMON", "SRC",
                                               "REF-G", "REF-N1", "REF-N2",   "REF-N3"};

Corpus parse_corpus(std::istream& in, const std::string& name) {
    const auto rows = tsv::read_rows(in);
    if (rows.empty()) throw tsv::ParseError(1, "missing header row");

    const auto& header = rows.front();
    if (header.fields.size() != kCorpusHeader.size())
        throw tsv::ParseError(header.line, "header has " + std::to_string(header.fields.size()) +
                                               " columns, expected " +
                                               std::to_string(kCorpusHeader.size()));
    for (size_t i = 0; i < kCorpusHeader.size(); ++i)
        if (header.fields[i] != kCorpusHeader[i])
            throw tsv::ParseError(header.line, "unexpected header column '" + header.fields[i] +
                                                   "', expected '" + kCorpusHeader[i] + "'");

    Corpus corpus;
    corpus.name = name;
    std::unordered_set<std::string> seen_ids;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const size_t line = row.line;
        if (row.fields.size() != kCorpusHeader.size())
            throw tsv::ParseError(line, "row has " + std::to_string(row.fields.size()) +
                                            " columns, expected " +
                                            std::to_string(kCorpusHeader.size()));
        CorpusEntry e;
        e.id = row.fields[0];
        if (e.id.empty()) throw tsv::ParseError(line, "empty ID");
        if (!seen_ids.insert(e.id).second)
            throw tsv::ParseError(line, "duplicate id '" + e.id + "'");
        try {
            e.set_tag = set_tag_from_name(row.fields[1]);
            e.category = category_from_code(row.fields[2]);
        } catch (const std::runtime_error& ex) {
            throw tsv::ParseError(line, ex.what());
        }
        if (implied_set_tag(e.category) != e.set_tag)
            throw tsv::ParseError(line, "category " + category_code(e.category) +
                                            " is inconsistent with " + set_tag_name(e.set_tag));
        if (row.fields[3] == "0")
            e.common_set = false;
        else if (row.fields[3] == "1")
            e.common_set = true;
        else
            throw tsv::ParseError(line, "invalid COMMON flag '" + row.fields[3] + "'");
        e.source = row.fields[4];
        e.ref_g = row.fields[5];
        if (e.source.empty()) throw tsv::ParseError(line, "empty SRC");
        if (e.ref_g.empty()) throw tsv::ParseError(line, "empty REF-G");
        if (row.fields[6].empty()) throw tsv::ParseError(line, "empty REF-N1");
        e.neutral_refs.push_back(row.fields[6]);
        if (e.common_set) {
            if (row.fields[7].empty() || row.fields[8].empty())
                throw tsv::ParseError(line, "common-set row must carry three neutral references");
            e.neutral_refs.push_back(row.fields[7]);
            e.neutral_refs.push_back(row.fields[8]);
        } else if (!row.fields[7].empty() || !row.fields[8].empty()) {
            throw tsv::ParseError(line, "REF-N2/REF-N3 must be empty when COMMON=0");
        }
        corpus.entries.push_back(std::move(e));
    }
    if (corpus.entries.empty()) throw tsv::ParseError(rows.back().line, "corpus has no entries");
    return corpus;
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
    std::vector<std::string> header(kCorpusHeader.begin(), kCorpusHeader.end());
    tsv::write_row(out, header);
    for (const auto& e : corpus.entries) {
        std::vector<std::string> fields{
            e.id,
            set_tag_name(e.set_tag),
            category_code(e.category),
            e.common_set ? "1" : "0",
            e.source,
            e.ref_g,
            e.neutral_refs.empty() ? "" : e.neutral_refs[0],
            e.neutral_refs.size() > 1 ? e.neutral_refs[1] : "",
            e.neutral_refs.size() > 2 ? e.neutral_refs[2] : "",
        };
        tsv::write_row(out, fields);
    }
}

nlohmann::ordered_json ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["valid"] = findings.empty();
    j["findings"] = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json item;
        item["code"] = f.code;
        item["message"] = f.message;
        if (!f.entry_id.empty()) item["entry_id"] = f.entry_id;
        j["findings"].push_back(item);
    }
    return j;
}

ValidationReport validate(const Corpus& corpus, const ValidationOptions& options) {
    ValidationReport report;
    auto add = [&](const std::string& code, const std::string& message,
                   const std::string& id = "") {
        report.findings.push_back({code, message, id});
    };

    if (corpus.entries.empty()) {
        add("empty_corpus", "corpus has no entries");
        return report;
    }

    size_t set_n = 0, set_g = 0, fem = 0, masc = 0;
    std::unordered_set<std::string> ids;
    for (const auto& e : corpus.entries) {
        if (!ids.insert(e.id).second) add("duplicate_id", "id '" + e.id + "' appears twice", e.id);
        if (e.set_tag == SetTag::SetN)
            ++set_n;
        else
            ++set_g;
        if (e.category == GenderCategory::Feminine) ++fem;
        if (e.category == GenderCategory::Masculine) ++masc;

        if (implied_set_tag(e.category) != e.set_tag)
            add("category_set_mismatch",
                "category " + category_code(e.category) + " under " + set_tag_name(e.set_tag),
                e.id);
        if (e.source.empty()) add("empty_field", "empty source", e.id);
        if (e.ref_g.empty()) add("empty_field", "empty gendered reference", e.id);
        const size_t expected_refs = e.common_set ? 3 : 1;
        if (e.neutral_refs.size() != expected_refs)
            add("reference_count",
                "entry has " + std::to_string(e.neutral_refs.size()) + " neutral references, expected " +
                    std::to_string(expected_refs),
                e.id);
        for (const auto& ref_n : e.neutral_refs) {
            if (ref_n.empty()) add("empty_field", "empty neutral reference", e.id);
            if (!ref_n.empty() && ref_n == e.ref_g)
                add("identical_references", "gendered reference equals a neutral reference", e.id);
        }
    }

    auto diff = [](size_t a, size_t b) { return a > b ? a - b : b - a; };
    if (diff(set_n, set_g) > options.balance_tolerance)
        add("set_imbalance", "Set-N has " + std::to_string(set_n) + " entries, Set-G has " +
                                 std::to_string(set_g));
    if (diff(fem, masc) > options.balance_tolerance)
        add("category_imbalance",
            "Set-G has " + std::to_string(fem) + " F entries and " + std::to_string(masc) + " M entries");
    return report;
}

CueLexicon CueLexicon::load(std::istream& in) {
    const auto rows = tsv::read_rows(in);
    if (rows.empty()) throw tsv::ParseError(1, "missing header row");
    const auto& header = rows.front().fields;
    if (header.size() != 3 || header[0] != "PATTERN" || header[1] != "CLASS" || header[2] != "HINT")
        throw tsv::ParseError(rows.front().line, "expected header PATTERN, CLASS, HINT");

    CueLexicon lexicon;
    std::unordered_map<std::string, std::string> classes;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 3)
            throw tsv::ParseError(row.line, "expected 3 columns");
        const auto& [pattern, cls, hint] = std::tie(row.fields[0], row.fields[1], row.fields[2]);
        if (pattern.empty()) throw tsv::ParseError(row.line, "empty PATTERN");

        const auto [it, inserted] = classes.emplace(pattern, cls);
        if (!inserted && it->second != cls)
            throw tsv::ParseError(row.line, "pattern '" + pattern + "' appears in both classes");

        CuePattern cue;
        cue.pattern = pattern;
        if (hint == "M")
            cue.hint = GenderCategory::Masculine;
        else if (hint == "F")
            cue.hint = GenderCategory::Feminine;
        else if (hint != "-")
            throw tsv::ParseError(row.line, "invalid HINT '" + hint + "' (expected M, F or -)");
        try {
            cue.compiled = std::regex("\\b(?:" + pattern + ")\\b", std::regex::ECMAScript);
        } catch (const std::regex_error& ex) {
            throw tsv::ParseError(row.line, "invalid pattern '" + pattern + "': " + ex.what());
        }
        if (cls == "gendered")
            lexicon.gendered.push_back(std::move(cue));
        else if (cls == "neutral")
            lexicon.neutral.push_back(std::move(cue));
        else
            throw tsv::ParseError(row.line, "invalid CLASS '" + cls + "'");
    }
    return lexicon;
}

namespace {

void collect_matches(const std::string& source, const std::vector<CuePattern>& cues,
                     std::vector<std::string>& out) {
    for (const auto& cue : cues) {
        for (auto it = std::sregex_iterator(source.begin(), source.end(), cue.compiled);
             it != std::sregex_iterator(); ++it) {
            const std::string surface = it->str();
            if (std::find(out.begin(), out.end(), surface) == out.end()) out.push_back(surface);
        }
    }
}

}  // namespace

std::vector<Candidate> extract_candidates(const std::vector<SegmentPair>& segments,
                                          const CueLexicon& lexicon) {
    if (lexicon.empty()) throw std::runtime_error("cue lexicon is empty");
    std::vector<Candidate> out;
    for (size_t i = 0; i < segments.size(); ++i) {
        Candidate cand;
        cand.index = i;
        cand.pair = segments[i];
        collect_matches(segments[i].source, lexicon.gendered, cand.gendered_cues);
        collect_matches(segments[i].source, lexicon.neutral, cand.neutral_cues);
        if (!cand.gendered_cues.empty())
            cand.proposed = SetTag::SetG;
        else if (!cand.neutral_cues.empty())
            cand.proposed = SetTag::SetN;
        else
            continue;
        out.push_back(std::move(cand));
    }
    return out;
}

namespace {

// Role texts per entry: 0..2 neutral references, 3 the gendered one.
std::array<std::vector<std::string>, 4> role_texts(const std::vector<const CorpusEntry*>& entries) {
    std::array<std::vector<std::string>, 4> roles;
    for (const auto* e : entries) {
        for (size_t k = 0; k < 3; ++k) roles[k].push_back(e->neutral_refs[k]);
        roles[3].push_back(e->ref_g);
    }
    return roles;
}

VariabilityMatrix::Cells cells_for(const std::vector<const CorpusEntry*>& entries,
                                   const CorpusScorer& scorer) {
    VariabilityMatrix::Cells cells{};
    if (entries.empty()) return cells;
    const auto roles = role_texts(entries);
    for (size_t ref_role = 0; ref_role < 4; ++ref_role) {
        for (size_t cand_role = 0; cand_role < 4; ++cand_role) {
            if (ref_role == cand_role) continue;
            std::vector<std::vector<std::string>> refs;
            refs.reserve(roles[ref_role].size());
            for (const auto& r : roles[ref_role]) refs.push_back({r});
            cells[ref_role][cand_role] = scorer(roles[cand_role], refs);
        }
    }
    return cells;
}

}  // namespace

VariabilityMatrix reference_variability(const Corpus& common_set, const CorpusScorer& scorer) {
    std::vector<const CorpusEntry*> set_n, set_g;
    for (const auto& e : common_set.entries) {
        if (e.neutral_refs.size() != 3)
            throw std::runtime_error("entry '" + e.id + "' has " +
                                     std::to_string(e.neutral_refs.size()) +
                                     " neutral references, need 3 for variability scoring");
        (e.set_tag == SetTag::SetN ? set_n : set_g).push_back(&e);
    }
    VariabilityMatrix m;
    m.set_n = cells_for(set_n, scorer);
    m.set_g = cells_for(set_g, scorer);
    return m;
}

VariabilityMatrix reference_variability(const Corpus& common_set) {
    return reference_variability(common_set, [](const std::vector<std::string>& hyps,
                                                const std::vector<std::vector<std::string>>& refs) {
        return metrics::bleu(hyps, refs).value;
    });
}

nlohmann::ordered_json VariabilityMatrix::to_json() const {
    auto cells_json = [](const Cells& cells) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (size_t i = 0; i < 4; ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (size_t j = 0; j < 4; ++j) {
                if (cells[i][j])
                    row.push_back(text::round_half_up2(*cells[i][j]));
                else
                    row.push_back(nullptr);
            }
            rows.push_back(row);
        }
        return rows;
    };
    nlohmann::ordered_json j;
    j["roles"] = kRoles;
    j["set_n"] = cells_json(set_n);
    j["set_g"] = cells_json(set_g);
    return j;
}

CorpusStats stats(const Corpus& corpus) {
    struct Acc {
        size_t sentences = 0;
        size_t tokens = 0;
        void add(const std::string& s) {
            ++sentences;
            tokens += text::count_content_tokens(s);
        }
        FieldStats finish() const {
            FieldStats f;
            f.sentences = sentences;
            f.avg_length = sentences ? static_cast<double>(tokens) / sentences : 0.0;
            return f;
        }
    };
    struct SetAcc {
        size_t count = 0;
        Acc source, ref_g, neutral;
    };
    SetAcc n, g;
    for (const auto& e : corpus.entries) {
        auto& acc = e.set_tag == SetTag::SetN ? n : g;
        ++acc.count;
        acc.source.add(e.source);
        acc.ref_g.add(e.ref_g);
        for (const auto& r : e.neutral_refs) acc.neutral.add(r);
    }
    CorpusStats out;
    out.set_n = {n.count, n.source.finish(), n.ref_g.finish(), n.neutral.finish()};
    out.set_g = {g.count, g.source.finish(), g.ref_g.finish(), g.neutral.finish()};
    return out;
}

nlohmann::ordered_json CorpusStats::to_json() const {
    auto set_json = [](const SetStats& s) {
        nlohmann::ordered_json j;
        j["sentences"] = s.count;
        auto field = [](const FieldStats& f) {
            nlohmann::ordered_json fj;
            fj["sentences"] = f.sentences;
            if (f.sentences > 0) fj["avg_length"] = text::round_half_up2(f.avg_length);
            return fj;
        };
        j["source"] = field(s.source);
        j["ref_g"] = field(s.ref_g);
        j["ref_n"] = field(s.neutral);
        return j;
    };
    nlohmann::ordered_json j;
    j["set_n"] = set_json(set_n);
    j["set_g"] = set_json(set_g);
    return j;
}

}  // namespace nevl::corpus
