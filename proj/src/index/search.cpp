#include "mathfind/index/search.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "mathfind/error.hpp"

namespace mathfind {

namespace {

void check_k(std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
}

std::vector<std::uint32_t> formula_candidates(InvertedIndex const& index,
                                              std::vector<kernels::WeightedTerm> const& query)
{
    std::vector<std::uint32_t> slots;
    for (auto const& q : query) {
        for (auto const& p : index.postings(q.term)) {
            if (p.formula >= 0) {
                slots.push_back(index.slot(p.doc, p.formula));
            }
        }
    }
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    return slots;
}

std::vector<Hit> to_hits(InvertedIndex const& index, std::vector<std::uint32_t> const& slots,
                         std::vector<double> const& scores)
{
    std::vector<Hit> hits;
    hits.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        auto [d, f] = index.formula_ref(slots[i]);
        hits.push_back({d, f, scores[i]});
    }
    return hits;
}

}  // namespace

void rank_hits(std::vector<Hit>& hits, std::size_t k)
{
    auto better = [](Hit const& a, Hit const& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.doc != b.doc) {
            return a.doc < b.doc;
        }
        return a.formula < b.formula;
    };
    if (hits.size() > k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(),
                          better);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), better);
    }
}

std::vector<Hit> dice_search(TermCounts const& query, InvertedIndex const& index, std::size_t k,
                             Exec exec)
{
    check_k(k);
    if (query.empty()) {
        throw EmptyQuery();
    }
    kernels::FamilyMask families{};
    std::vector<kernels::WeightedTerm> terms;
    double total = 0.0;
    for (auto const& [term, count] : query) {
        double w = term_weight(term) * count;
        total += w;
        families[static_cast<std::size_t>(family_of(term))] = true;
        if (auto id = index.find(term)) {
            terms.push_back({*id, w});
        }
    }
    std::sort(terms.begin(), terms.end(),
              [](auto const& a, auto const& b) { return a.term < b.term; });
    auto slots = formula_candidates(index, terms);
    std::vector<double> scores(slots.size());
    kernels::dice_scores(index, terms, total, families, slots, scores, exec);
    auto hits = to_hits(index, slots, scores);
    rank_hits(hits, k);
    return hits;
}

std::vector<Hit> bm25plus_search(std::vector<std::string> const& words, InvertedIndex const& index,
                                 std::size_t k, kernels::Bm25Params params, Exec exec)
{
    check_k(k);
    if (params.k1 <= 0.0 || params.b < 0.0 || params.b > 1.0 || params.delta < 0.0) {
        throw std::invalid_argument("BM25+ parameters out of range");
    }
    if (words.empty()) {
        throw EmptyQuery();
    }
    std::set<TermId> ids;
    for (auto const& w : words) {
        if (auto id = index.find("txt:" + w)) {
            ids.insert(*id);
        }
    }
    std::vector<TermId> terms(ids.begin(), ids.end());
    std::vector<DocNo> docs;
    for (auto t : terms) {
        for (auto const& p : index.postings(t)) {
            if (p.formula < 0) {
                docs.push_back(p.doc);
            }
        }
    }
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    std::vector<double> scores(docs.size());
    kernels::bm25_scores(index, terms, docs, params, scores, exec);
    std::vector<Hit> hits;
    hits.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        hits.push_back({docs[i], -1, scores[i]});
    }
    rank_hits(hits, k);
    return hits;
}

std::vector<Hit> tfidf_search(TermCounts const& query, InvertedIndex const& index, std::size_t k,
                              Exec exec)
{
    check_k(k);
    if (query.empty()) {
        throw EmptyQuery();
    }
    std::vector<kernels::WeightedTerm> terms;
    for (auto const& [term, count] : query) {
        if (auto id = index.find(term)) {
            terms.push_back({*id, count * idf(*id, index)});
        }
    }
    std::sort(terms.begin(), terms.end(),
              [](auto const& a, auto const& b) { return a.term < b.term; });
    auto slots = formula_candidates(index, terms);
    std::vector<double> scores(slots.size());
    kernels::cosine_scores(index, terms, slots, scores, exec);
    auto hits = to_hits(index, slots, scores);
    rank_hits(hits, k);
    return hits;
}

std::vector<Hit> boolean_filter(std::vector<Hit> const& formula_hits,
                                std::vector<Hit> const& text_hits)
{
    std::set<DocNo> docs;
    for (auto const& h : text_hits) {
        docs.insert(h.doc);
    }
    std::vector<Hit> out;
    for (auto const& h : formula_hits) {
        if (docs.count(h.doc)) {
            out.push_back(h);
        }
    }
    return out;
}

std::vector<std::string> matched_terms(TermCounts const& query, InvertedIndex const& index,
                                       DocNo doc, std::int32_t formula)
{
    auto fwd = formula < 0 ? index.doc_text_terms(doc) : index.formula_terms(index.slot(doc, formula));
    std::vector<std::string> out;
    for (auto const& [term, count] : query) {
        auto id = index.find(term);
        if (!id) {
            continue;
        }
        auto it = std::lower_bound(fwd.begin(), fwd.end(), *id,
                                   [](TermTf const& t, TermId v) { return t.term < v; });
        if (it != fwd.end() && it->term == *id) {
            out.push_back(term);
        }
    }
    return out;
}

}  // namespace mathfind
