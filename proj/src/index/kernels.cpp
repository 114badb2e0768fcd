#include "mathfind/index/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace mathfind::kernels {

namespace {

void check_sizes(std::size_t a, std::size_t b)
{
    if (a != b) {
        throw std::invalid_argument("output span size does not match candidates");
    }
}

double family_total(InvertedIndex const& index, std::uint32_t slot, FamilyMask families)
{
    double total = 0.0;
    for (int f = 0; f < kTermFamilyCount; ++f) {
        if (families[static_cast<std::size_t>(f)]) {
            total += index.family_weight(slot, static_cast<TermFamily>(f));
        }
    }
    return total;
}

double bm25_term(double term_idf, double tf, double len, double avg, Bm25Params p)
{
    double norm = avg > 0.0 ? len / avg : 1.0;
    return term_idf * ((p.k1 + 1.0) * tf / (p.k1 * (1.0 - p.b + p.b * norm) + tf) + p.delta);
}

template <typename Key>
std::unordered_map<Key, std::size_t> positions(std::span<Key const> keys)
{
    std::unordered_map<Key, std::size_t> pos;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        pos.emplace(keys[i], i);
    }
    return pos;
}

}  // namespace

void dice_scores(InvertedIndex const& index, std::span<WeightedTerm const> query,
                 double query_total, FamilyMask families, std::span<std::uint32_t const> slots,
                 std::span<double> out, Exec exec)
{
    check_sizes(slots.size(), out.size());
    if (exec == Exec::Serial) {
        auto pos = positions(slots);
        std::vector<double> overlap(slots.size(), 0.0);
        for (auto const& q : query) {
            double w = term_weight(index.term(q.term));
            for (auto const& p : index.postings(q.term)) {
                if (p.formula < 0) {
                    continue;
                }
                auto it = pos.find(index.slot(p.doc, p.formula));
                if (it != pos.end()) {
                    overlap[it->second] += std::min(q.weight, w * p.tf);
                }
            }
        }
        for (std::size_t i = 0; i < slots.size(); ++i) {
            double denom = query_total + family_total(index, slots[i], families);
            out[i] = denom > 0.0 ? 2.0 * overlap[i] / denom : 0.0;
        }
        return;
    }
    auto const n = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        auto s = slots[static_cast<std::size_t>(i)];
        auto fwd = index.formula_terms(s);
        double overlap = 0.0;
        std::size_t a = 0;
        std::size_t b = 0;
        while (a < query.size() && b < fwd.size()) {
            if (query[a].term < fwd[b].term) {
                ++a;
            } else if (fwd[b].term < query[a].term) {
                ++b;
            } else {
                overlap += std::min(query[a].weight, term_weight(index.term(fwd[b].term)) * fwd[b].tf);
                ++a;
                ++b;
            }
        }
        double denom = query_total + family_total(index, s, families);
        out[static_cast<std::size_t>(i)] = denom > 0.0 ? 2.0 * overlap / denom : 0.0;
    }
}

void bm25_scores(InvertedIndex const& index, std::span<TermId const> terms,
                 std::span<DocNo const> docs, Bm25Params params, std::span<double> out, Exec exec)
{
    check_sizes(docs.size(), out.size());
    double avg = index.avg_doc_length();
    if (exec == Exec::Serial) {
        auto pos = positions(docs);
        std::fill(out.begin(), out.end(), 0.0);
        for (auto t : terms) {
            double term_idf = idf(t, index);
            for (auto const& p : index.postings(t)) {
                if (p.formula >= 0) {
                    continue;
                }
                auto it = pos.find(p.doc);
                if (it != pos.end()) {
                    out[it->second] += bm25_term(term_idf, p.tf, index.doc(p.doc).length, avg, params);
                }
            }
        }
        return;
    }
    std::vector<double> idfs;
    idfs.reserve(terms.size());
    for (auto t : terms) {
        idfs.push_back(idf(t, index));
    }
    auto const n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        auto d = docs[static_cast<std::size_t>(i)];
        auto fwd = index.doc_text_terms(d);
        double len = index.doc(d).length;
        double score = 0.0;
        std::size_t a = 0;
        std::size_t b = 0;
        while (a < terms.size() && b < fwd.size()) {
            if (terms[a] < fwd[b].term) {
                ++a;
            } else if (fwd[b].term < terms[a]) {
                ++b;
            } else {
                score += bm25_term(idfs[a], fwd[b].tf, len, avg, params);
                ++a;
                ++b;
            }
        }
        out[static_cast<std::size_t>(i)] = score;
    }
}

void cosine_scores(InvertedIndex const& index, std::span<WeightedTerm const> query,
                   std::span<std::uint32_t const> slots, std::span<double> out, Exec exec)
{
    check_sizes(slots.size(), out.size());
    double qnorm = 0.0;
    for (auto const& q : query) {
        qnorm += q.weight * q.weight;
    }
    qnorm = std::sqrt(qnorm);
    auto finish = [&](double dot, std::uint32_t s) {
        double denom = qnorm * index.token_norm(s);
        return denom > 0.0 ? dot / denom : 0.0;
    };
    if (exec == Exec::Serial) {
        auto pos = positions(slots);
        std::vector<double> dot(slots.size(), 0.0);
        for (auto const& q : query) {
            double term_idf = idf(q.term, index);
            for (auto const& p : index.postings(q.term)) {
                if (p.formula < 0) {
                    continue;
                }
                auto it = pos.find(index.slot(p.doc, p.formula));
                if (it != pos.end()) {
                    dot[it->second] += q.weight * p.tf * term_idf;
                }
            }
        }
        for (std::size_t i = 0; i < slots.size(); ++i) {
            out[i] = finish(dot[i], slots[i]);
        }
        return;
    }
    auto const n = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        auto s = slots[static_cast<std::size_t>(i)];
        auto fwd = index.formula_terms(s);
        double dot = 0.0;
        std::size_t a = 0;
        std::size_t b = 0;
        while (a < query.size() && b < fwd.size()) {
            if (query[a].term < fwd[b].term) {
                ++a;
            } else if (fwd[b].term < query[a].term) {
                ++b;
            } else {
                dot += query[a].weight * fwd[b].tf * idf(fwd[b].term, index);
                ++a;
                ++b;
            }
        }
        out[static_cast<std::size_t>(i)] = finish(dot, s);
    }
}

}  // namespace mathfind::kernels
