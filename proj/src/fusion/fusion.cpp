#include "mathfind/fusion/fusion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace mathfind {

namespace {

// Contributions are summed in sorted order so the result does not depend on
// the order of the input rankings.
using Contributions = std::map<std::string, std::vector<double>>;

std::map<std::string, double> sum_sorted(Contributions& parts)
{
    std::map<std::string, double> out;
    for (auto& [id, v] : parts) {
        std::sort(v.begin(), v.end());
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        out.emplace(id, s);
    }
    return out;
}

Ranking from_scores(std::string tag, std::map<std::string, double> const& scores)
{
    Ranking out{std::move(tag), {}};
    out.items.reserve(scores.size());
    for (auto const& [id, s] : scores) {
        out.items.push_back({id, s});
    }
    out.normalize_order();
    return out;
}

std::string joined_tag(std::string_view method, std::vector<Ranking> const& rankings)
{
    std::string tag(method);
    tag += '(';
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        tag += (i ? "," : "") + rankings[i].tag;
    }
    return tag + ')';
}

}  // namespace

void Ranking::normalize_order()
{
    std::stable_sort(items.begin(), items.end(), [](RankedItem const& a, RankedItem const& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.id < b.id;
    });
    std::unordered_set<std::string_view> seen;
    for (auto const& it : items) {
        if (!seen.insert(it.id).second) {
            throw std::invalid_argument("duplicate item in ranking: " + it.id);
        }
    }
}

Ranking minmax_normalize(Ranking r)
{
    if (r.items.empty()) {
        return r;
    }
    auto [lo, hi] = std::minmax_element(r.items.begin(), r.items.end(),
                                        [](auto const& a, auto const& b) { return a.score < b.score; });
    double const min = lo->score;
    double const range = hi->score - min;
    for (auto& it : r.items) {
        it.score = range > 0 ? (it.score - min) / range : 1.0;
    }
    r.normalize_order();
    return r;
}

Ranking linear_combine(std::vector<std::pair<double, Ranking>> const& weighted)
{
    double total = 0.0;
    for (auto const& [w, r] : weighted) {
        if (w < 0) {
            throw std::invalid_argument("fusion weights must be non-negative");
        }
        total += w;
    }
    if (weighted.empty() || total <= 0) {
        throw std::invalid_argument("fusion weights must have a positive sum");
    }
    Contributions parts;
    std::vector<Ranking> tags;
    for (auto const& [w, r] : weighted) {
        for (auto const& it : r.items) {
            parts[it.id].push_back(w * it.score);
        }
        tags.push_back({r.tag, {}});
    }
    return from_scores(joined_tag("linear", tags), sum_sorted(parts));
}

Ranking rrf(std::vector<Ranking> const& rankings, int k0)
{
    if (k0 < 0) {
        throw std::invalid_argument("rrf k0 must be non-negative");
    }
    Contributions parts;
    for (auto const& r : rankings) {
        for (std::size_t i = 0; i < r.items.size(); ++i) {
            parts[r.items[i].id].push_back(1.0 / (k0 + static_cast<double>(i + 1)));
        }
    }
    return from_scores(joined_tag("rrf", rankings), sum_sorted(parts));
}

Ranking borda(std::vector<Ranking> const& rankings)
{
    std::map<std::string, double> scores;
    for (auto const& r : rankings) {
        for (std::size_t i = 0; i < r.items.size(); ++i) {
            scores[r.items[i].id] += static_cast<double>(r.items.size() - i - 1);
        }
    }
    return from_scores(joined_tag("borda", rankings), scores);
}

Ranking interleave(std::vector<Ranking> const& rankings)
{
    std::vector<std::string> order;
    std::set<std::string, std::less<>> emitted;
    std::vector<std::size_t> pos(rankings.size(), 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t r = 0; r < rankings.size(); ++r) {
            auto const& items = rankings[r].items;
            while (pos[r] < items.size() && emitted.contains(items[pos[r]].id)) {
                ++pos[r];
            }
            if (pos[r] < items.size()) {
                order.push_back(items[pos[r]].id);
                emitted.insert(items[pos[r]].id);
                ++pos[r];
                progress = true;
            }
        }
    }
    Ranking out{joined_tag("interleave", rankings), {}};
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.items.push_back({order[i], static_cast<double>(order.size() - i)});
    }
    return out;
}

}  // namespace mathfind
