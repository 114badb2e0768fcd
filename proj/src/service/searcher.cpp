#include "mathfind/service/searcher.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/fusion/fusion.hpp"
#include "mathfind/index/search.hpp"

namespace mathfind {

namespace {

bool blank(std::string_view s)
{
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void require_family(InvertedIndex const& index, TermFamily f)
{
    if (!index.config().enabled(f)) {
        throw std::invalid_argument("index has no " + std::string(family_name(f)) + " terms");
    }
}

std::vector<Hit> run_engine(LoadedIndex const& li, EngineKind kind, Query const& q,
                            std::size_t depth, SearchOptions const& o)
{
    auto const& index = li.index;
    if (kind == EngineKind::Bm25Text) {
        require_family(index, TermFamily::Text);
        auto words = text_words(q.text);
        return bm25plus_search(words, index, depth, {}, o.exec);
    }
    if (blank(q.formula)) {
        throw EmptyQuery();
    }
    switch (kind) {
    case EngineKind::Slt:
    case EngineKind::Opt:
    case EngineKind::WikiMirs: {
        auto fam = kind == EngineKind::Slt   ? TermFamily::Slt
                   : kind == EngineKind::Opt ? TermFamily::Opt
                                             : TermFamily::WikiMirs;
        require_family(index, fam);
        return dice_search(formula_terms(q.formula, fam, index.config()), index, depth, o.exec);
    }
    case EngineKind::DlmfText:
        require_family(index, TermFamily::Token);
        return tfidf_search(formula_terms(q.formula, TermFamily::Token, index.config()), index,
                            depth, o.exec);
    case EngineKind::Phoc: {
        auto boxes = layout_symbols(parse_latex(q.formula));
        return phoc_search(phoc_encode(boxes, li.phoc.scheme()), li.phoc, depth, o.exec);
    }
    default:
        throw std::invalid_argument("not a single engine");
    }
}

/// Keeps each document's best formula score.
std::vector<Hit> lift_to_documents(std::vector<Hit> const& hits)
{
    std::map<DocNo, double> best;
    for (auto const& h : hits) {
        auto [it, fresh] = best.emplace(h.doc, h.score);
        if (!fresh) {
            it->second = std::max(it->second, h.score);
        }
    }
    std::vector<Hit> out;
    for (auto [d, s] : best) {
        out.push_back({d, -1, s});
    }
    rank_hits(out, out.size());
    return out;
}

std::vector<Hit> run_component(LoadedIndex const& li, EngineKind kind, Query const& q,
                               EngineSpec const& spec, std::size_t k, SearchOptions const& o)
{
    bool const reranked = spec.rerank != RerankMethod::None && !is_text_engine(kind);
    bool const fused = spec.engine == EngineKind::Fused;
    std::size_t depth = reranked || fused ? std::max(k, o.candidate_depth) : k;
    auto hits = run_engine(li, kind, q, depth, o);
    if (reranked) {
        hits = rerank(std::move(hits), q.formula, li.index, spec.rerank, o.rerank, o.exec);
    }
    if (spec.document_level() && !is_text_engine(kind)) {
        hits = lift_to_documents(hits);
    }
    return hits;
}

Ranking to_ranking(std::vector<Hit> const& hits, InvertedIndex const& index, std::string tag)
{
    Ranking r;
    r.tag = std::move(tag);
    for (auto const& h : hits) {
        r.items.push_back({item_id(index, h.doc, h.formula), h.score});
    }
    return r;
}

}  // namespace

std::shared_ptr<LoadedIndex const> LoadedIndex::load(std::filesystem::path const& dir)
{
    auto li = std::make_shared<LoadedIndex>();
    li->dir = dir;
    li->index = InvertedIndex::load(dir);
    li->phoc = PhocIndex::load(dir / kPhocFile);
    if (li->phoc.size() != li->index.formula_count()) {
        throw IndexFormatError("phoc.bin does not match the index formulas");
    }
    for (std::size_t i = 0; i < li->phoc.size(); ++i) {
        auto [d, f] = li->phoc.ref(i);
        if (d >= li->index.doc_count() ||
            f < 0 || static_cast<std::size_t>(f) >= li->index.doc(d).formulas.size()) {
            throw IndexFormatError("phoc.bin refers to a missing formula");
        }
    }
    return li;
}

Query Query::parse(std::string_view raw)
{
    if (raw.find('$') == std::string_view::npos) {
        auto t = trim(raw);
        return {t, t};
    }
    Query q;
    std::string text;
    bool have_formula = false;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto open = raw.find('$', pos);
        if (open == std::string_view::npos) {
            text += raw.substr(pos);
            break;
        }
        auto close = raw.find('$', open + 1);
        if (close == std::string_view::npos) {
            throw std::invalid_argument("unmatched $ in query");
        }
        text += raw.substr(pos, open - pos);
        text += ' ';
        if (!have_formula) {
            q.formula = trim(raw.substr(open + 1, close - open - 1));
            have_formula = true;
        }
        pos = close + 1;
    }
    q.text = trim(text);
    return q;
}

std::string item_id(InvertedIndex const& index, DocNo doc, std::int32_t formula)
{
    auto const& id = index.doc(doc).id;
    return formula < 0 ? id : id + '#' + std::to_string(formula);
}

std::vector<SearchHit> search(LoadedIndex const& li, Query const& query, EngineSpec const& spec,
                              SearchOptions const& options)
{
    if (spec.k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (spec.engine != EngineKind::Fused && is_text_engine(spec.engine) &&
        spec.rerank != RerankMethod::None) {
        throw std::invalid_argument("re-ranking needs a formula engine");
    }
    auto const& index = li.index;
    std::vector<Hit> hits;
    if (spec.engine != EngineKind::Fused) {
        hits = run_component(li, spec.engine, query, spec, spec.k, options);
        if (hits.size() > spec.k) {
            hits.resize(spec.k);
        }
    } else {
        std::vector<Ranking> rankings;
        std::unordered_map<std::string, Hit> refs;
        for (auto kind : spec.components) {
            auto comp = run_component(li, kind, query, spec, spec.k, options);
            for (auto const& h : comp) {
                refs.emplace(item_id(index, h.doc, h.formula), Hit{h.doc, h.formula, 0.0});
            }
            rankings.push_back(to_ranking(comp, index, std::string(engine_name(kind))));
        }
        Ranking fused;
        switch (spec.fusion) {
        case FusionMethod::Linear: {
            std::vector<std::pair<double, Ranking>> weighted;
            for (std::size_t i = 0; i < rankings.size(); ++i) {
                weighted.emplace_back(spec.weights.at(i), minmax_normalize(rankings[i]));
            }
            fused = linear_combine(weighted);
            break;
        }
        case FusionMethod::Rrf:
            fused = rrf(rankings, options.rrf_k0);
            break;
        case FusionMethod::Borda:
            fused = borda(rankings);
            break;
        case FusionMethod::Interleave:
            fused = interleave(rankings);
            break;
        }
        for (auto const& item : fused.items) {
            if (hits.size() == spec.k) {
                break;
            }
            auto h = refs.at(item.id);
            h.score = item.score;
            hits.push_back(h);
        }
    }

    TermCounts formula_query;
    if (!blank(query.formula)) {
        formula_query = formula_terms(query.formula, index.config());
    }
    auto const text_query = text_terms(query.text);
    std::vector<SearchHit> out;
    out.reserve(hits.size());
    for (auto const& h : hits) {
        SearchHit s;
        s.item = item_id(index, h.doc, h.formula);
        s.doc_id = index.doc(h.doc).id;
        s.formula = h.formula;
        s.score = h.score;
        if (h.formula >= 0) {
            s.latex = index.doc(h.doc).formulas.at(static_cast<std::size_t>(h.formula)).latex;
            s.matched_terms = matched_terms(formula_query, index, h.doc, h.formula);
        } else {
            s.matched_terms = matched_terms(text_query, index, h.doc, -1);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Topic> read_topics(std::istream& in)
{
    std::vector<Topic> topics;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (blank(line) || line.front() == '#') {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw FormatError("expected topic<TAB>query", lineno);
        }
        Topic t{line.substr(0, tab), line.substr(tab + 1)};
        if (t.id.find_first_of(" \t") != std::string::npos) {
            throw FormatError("topic id contains whitespace", lineno);
        }
        for (auto const& prev : topics) {
            if (prev.id == t.id) {
                throw FormatError("duplicate topic " + t.id, lineno);
            }
        }
        topics.push_back(std::move(t));
    }
    return topics;
}

std::vector<Topic> read_topics(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_topics(in);
}

Run search_topics(LoadedIndex const& index, std::vector<Topic> const& topics,
                  EngineSpec const& spec, SearchOptions const& options)
{
    Run run;
    run.tag = spec.run_tag();
    for (auto const& t : topics) {
        auto hits = search(index, Query::parse(t.query), spec, options);
        auto& entries = run.topics[t.id];
        for (std::size_t i = 0; i < hits.size(); ++i) {
            entries.push_back({hits[i].item, static_cast<int>(i + 1), hits[i].score});
        }
    }
    return run;
}

void write_visual_map(std::ostream& out, InvertedIndex const& index)
{
    for (std::uint32_t s = 0; s < index.formula_count(); ++s) {
        auto [d, f] = index.formula_ref(s);
        out << item_id(index, d, f) << '\t'
            << index.doc(d).formulas.at(static_cast<std::size_t>(f)).visual_id << '\n';
    }
}

}  // namespace mathfind
