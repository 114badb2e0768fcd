#include "mathfind/rerank/rerank.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"

namespace mathfind {

namespace {

constexpr std::pair<RerankMethod, std::string_view> kNames[] = {
    {RerankMethod::None, "none"},         {RerankMethod::TedSlt, "ted-slt"},
    {RerankMethod::TedOpt, "ted-opt"},    {RerankMethod::TedCombined, "ted-combined"},
    {RerankMethod::Mss, "mss"},           {RerankMethod::Approach0, "approach0"},
};

bool needs_opt(RerankMethod m)
{
    return m == RerankMethod::TedOpt || m == RerankMethod::TedCombined || m == RerankMethod::Approach0;
}

struct Prepared {
    SltTree slt;
    OptTree opt;
    bool ok = false;
};

Prepared prepare(std::string_view latex, RerankMethod m)
{
    Prepared p;
    p.slt = parse_latex(latex);
    if (needs_opt(m)) {
        p.opt = slt_to_opt(p.slt);
    }
    p.ok = true;
    return p;
}

AlignmentScore score_one(Prepared const& q, Prepared const& c, RerankMethod m,
                         RerankOptions const& options)
{
    if (!c.ok) {
        return {};
    }
    switch (m) {
    case RerankMethod::None: return {};
    case RerankMethod::TedSlt:
        return {sim_inverse(labeled_tree(q.slt), labeled_tree(c.slt)), 0.0, 0.0};
    case RerankMethod::TedOpt:
        return {combined_ted_score(q.slt, q.opt, c.slt, c.opt, 0.0, 1.0), 0.0, 0.0};
    case RerankMethod::TedCombined:
        return {combined_ted_score(q.slt, q.opt, c.slt, c.opt, options.w_slt, options.w_opt), 0.0,
                0.0};
    case RerankMethod::Mss: return mss_score(q.slt, c.slt);
    case RerankMethod::Approach0:
        return {approach0_score(q.opt, c.opt, options.approach0), 0.0, 0.0};
    }
    return {};
}

AlignmentScore score_candidate(Prepared const& q, InvertedIndex const& index, Hit const& h,
                               RerankMethod m, RerankOptions const& options)
{
    Prepared c;
    try {
        c = prepare(index.doc(h.doc).formulas.at(static_cast<std::size_t>(h.formula)).latex, m);
    } catch (ParseError const&) {
    } catch (TranslateError const&) {
    }
    return score_one(q, c, m, options);
}

}  // namespace

RerankMethod rerank_from_name(std::string_view name)
{
    for (auto [m, n] : kNames) {
        if (n == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown rerank method '" + std::string(name) + "'");
}

std::string_view rerank_name(RerankMethod m) noexcept
{
    for (auto [k, n] : kNames) {
        if (k == m) {
            return n;
        }
    }
    return "none";
}

std::vector<Hit> rerank(std::vector<Hit> hits, std::string_view query_latex,
                        InvertedIndex const& index, RerankMethod method,
                        RerankOptions const& options, Exec exec)
{
    if (method == RerankMethod::None || hits.empty()) {
        return hits;
    }
    for (auto const& h : hits) {
        if (h.formula < 0) {
            throw std::invalid_argument("only formula hits can be re-ranked");
        }
    }
    auto q = prepare(query_latex, method);
    std::vector<AlignmentScore> scores(hits.size());
    auto const n = static_cast<std::int64_t>(hits.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            scores[k] = score_candidate(q, index, hits[k], method, options);
        }
    } else {
        for (std::size_t k = 0; k < hits.size(); ++k) {
            scores[k] = score_candidate(q, index, hits[k], method, options);
        }
    }
    std::vector<std::size_t> order(hits.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[b] < scores[a];
        }
        if (hits[a].doc != hits[b].doc) {
            return hits[a].doc < hits[b].doc;
        }
        return hits[a].formula < hits[b].formula;
    });
    std::vector<Hit> out;
    out.reserve(hits.size());
    for (auto i : order) {
        out.push_back({hits[i].doc, hits[i].formula, scores[i].mss});
    }
    return out;
}

}  // namespace mathfind
