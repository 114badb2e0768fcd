#include "mathfind/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace mathfind {

namespace {

int grade_of(Judgments const& judged, std::string const& item)
{
    auto it = judged.find(item);
    return it == judged.end() ? 0 : it->second;
}

bool relevant(Judgments const& judged, std::string const& item)
{
    return grade_of(judged, item) > 0;
}

std::size_t relevant_in_top(ItemList const& ranking, Judgments const& judged, std::size_t k)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
        n += relevant(judged, ranking[i]) ? 1 : 0;
    }
    return n;
}

double gain_discount(std::vector<int> const& gains, std::size_t k)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(k, gains.size()); ++i) {
        double g = gains[i];
        sum += i == 0 ? g : g / std::log2(static_cast<double>(i + 1));
    }
    return sum;
}

}  // namespace

Qrels binarize(Qrels const& qrels, GradeScale scale)
{
    Qrels out;
    for (auto const& [topic, judged] : qrels.topics) {
        out.topics.emplace(topic, binarize(judged, scale));
    }
    return out;
}

Judgments binarize(Judgments const& judged, GradeScale scale)
{
    if (scale.threshold < 0 || scale.threshold > scale.max_grade) {
        throw std::invalid_argument("binarization threshold outside the grade scale");
    }
    Judgments out;
    for (auto const& [item, g] : judged) {
        out.emplace(item, g >= scale.threshold ? 1 : 0);
    }
    return out;
}

std::size_t relevant_count(Judgments const& judged)
{
    return static_cast<std::size_t>(
        std::count_if(judged.begin(), judged.end(), [](auto const& p) { return p.second > 0; }));
}

double precision_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    return static_cast<double>(relevant_in_top(ranking, judged, k)) / static_cast<double>(k);
}

double recall_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    auto r = relevant_count(judged);
    return r == 0 ? 0.0
                  : static_cast<double>(relevant_in_top(ranking, judged, k)) / static_cast<double>(r);
}

double precision(ItemList const& ranking, Judgments const& judged)
{
    return ranking.empty() ? 0.0 : precision_at_k(ranking, judged, ranking.size());
}

double recall(ItemList const& ranking, Judgments const& judged)
{
    auto r = relevant_count(judged);
    return r == 0 ? 0.0
                  : static_cast<double>(relevant_in_top(ranking, judged, ranking.size())) /
                        static_cast<double>(r);
}

double average_precision(ItemList const& ranking, Judgments const& judged)
{
    auto r = relevant_count(judged);
    if (r == 0) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevant(judged, ranking[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(r);
}

double reciprocal_rank(ItemList const& ranking, Judgments const& judged)
{
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevant(judged, ranking[i])) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

double bpref(ItemList const& ranking, Judgments const& judged)
{
    auto r = relevant_count(judged);
    if (r == 0) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t nonrel = 0;
    for (auto const& item : ranking) {
        auto it = judged.find(item);
        if (it == judged.end()) {
            continue;
        }
        if (it->second > 0) {
            sum += 1.0 - static_cast<double>(std::min(nonrel, r)) / static_cast<double>(r);
        } else {
            ++nonrel;
        }
    }
    return sum / static_cast<double>(r);
}

double dcg_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k)
{
    std::vector<int> gains;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
        gains.push_back(grade_of(judged, ranking[i]));
    }
    return gain_discount(gains, k);
}

double idcg_at_k(Judgments const& judged, std::size_t k)
{
    std::vector<int> gains;
    for (auto const& [item, g] : judged) {
        gains.push_back(g);
    }
    std::sort(gains.rbegin(), gains.rend());
    return gain_discount(gains, k);
}

double ndcg_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k)
{
    double ideal = idcg_at_k(judged, k);
    return ideal > 0 ? dcg_at_k(ranking, judged, k) / ideal : 0.0;
}

double ndcg(ItemList const& ranking, Judgments const& judged)
{
    return ranking.empty() ? 0.0 : ndcg_at_k(ranking, judged, ranking.size());
}

ItemList prime_filter(ItemList const& ranking, Judgments const& judged)
{
    ItemList out;
    for (auto const& item : ranking) {
        if (judged.contains(item)) {
            out.push_back(item);
        }
    }
    return out;
}

ItemList dedup_visually_distinct(ItemList const& ranking,
                                 std::map<std::string, std::string, std::less<>> const& visual)
{
    ItemList out;
    std::set<std::string, std::less<>> seen;
    for (auto const& item : ranking) {
        auto it = visual.find(item);
        auto const& v = it == visual.end() ? item : it->second;
        if (seen.insert(v).second) {
            out.push_back(item);
        }
    }
    return out;
}

// --- metric names -------------------------------------------------------

MetricSpec MetricSpec::parse(std::string const& name)
{
    MetricSpec spec;
    spec.name = name;
    std::string base = name;
    if (auto at = base.find('@'); at != std::string::npos) {
        auto digits = base.substr(at + 1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
            std::stoul(digits) == 0) {
            throw std::invalid_argument("bad cutoff in metric " + name);
        }
        spec.k = std::stoul(digits);
        base.resize(at);
    }
    constexpr std::string_view kPrime = "_prime";
    if (base.size() > kPrime.size() && base.ends_with(kPrime)) {
        spec.prime = true;
        base.resize(base.size() - kPrime.size());
    }
    static std::map<std::string, std::pair<MetricKind, int>> const kinds{
        // second: 0 cutoff optional, 1 cutoff required, 2 no cutoff
        {"p", {MetricKind::Precision, 1}},        {"precision", {MetricKind::Precision, 2}},
        {"r", {MetricKind::Recall, 1}},           {"recall", {MetricKind::Recall, 2}},
        {"map", {MetricKind::AveragePrecision, 2}}, {"ap", {MetricKind::AveragePrecision, 2}},
        {"mrr", {MetricKind::ReciprocalRank, 2}}, {"rr", {MetricKind::ReciprocalRank, 2}},
        {"ndcg", {MetricKind::Ndcg, 0}},          {"dcg", {MetricKind::Dcg, 1}},
        {"bpref", {MetricKind::Bpref, 2}},
    };
    auto it = kinds.find(base);
    if (it == kinds.end()) {
        throw std::invalid_argument("unknown metric " + name);
    }
    spec.kind = it->second.first;
    if (it->second.second == 1 && spec.k == 0) {
        throw std::invalid_argument("metric " + name + " needs a cutoff");
    }
    if (it->second.second == 2 && spec.k != 0) {
        throw std::invalid_argument("metric " + name + " takes no cutoff");
    }
    return spec;
}

bool MetricSpec::graded() const noexcept
{
    return kind == MetricKind::Ndcg || kind == MetricKind::Dcg;
}

namespace {

double compute(MetricSpec const& m, ItemList const& ranking, Judgments const& judged)
{
    switch (m.kind) {
    case MetricKind::Precision:
        return m.k ? precision_at_k(ranking, judged, m.k) : precision(ranking, judged);
    case MetricKind::Recall:
        return m.k ? recall_at_k(ranking, judged, m.k) : recall(ranking, judged);
    case MetricKind::AveragePrecision: return average_precision(ranking, judged);
    case MetricKind::ReciprocalRank: return reciprocal_rank(ranking, judged);
    case MetricKind::Ndcg: return m.k ? ndcg_at_k(ranking, judged, m.k) : ndcg(ranking, judged);
    case MetricKind::Dcg: return dcg_at_k(ranking, judged, m.k);
    case MetricKind::Bpref: return bpref(ranking, judged);
    }
    return 0.0;
}

bool needs_relevant(MetricSpec const& m)
{
    return m.kind == MetricKind::AveragePrecision || m.kind == MetricKind::Bpref;
}

}  // namespace

Report evaluate(Qrels const& qrels, Run const& run, std::vector<MetricSpec> const& metrics,
                EvalOptions const& options)
{
    Report report;
    auto const binary = binarize(qrels, options.scale);
    for (auto const& [topic, judged] : qrels.topics) {
        if (!run.topics.contains(topic)) {
            report.empty_topics.push_back(topic);
        }
        if (relevant_count(binary.judgments(topic)) == 0) {
            report.excluded_topics.push_back(topic);
        }
    }
    std::set<std::string, std::less<>> excluded(report.excluded_topics.begin(),
                                                report.excluded_topics.end());
    for (auto const& m : metrics) {
        double sum = 0.0;
        std::size_t count = 0;
        for (auto const& [topic, graded] : qrels.topics) {
            auto ranking = run.ranking(topic);
            if (options.dedup) {
                ranking = dedup_visually_distinct(ranking, options.visual);
            }
            auto const& judged = m.graded() ? graded : binary.judgments(topic);
            if (m.prime) {
                ranking = prime_filter(ranking, judged);
            }
            if (needs_relevant(m) && excluded.contains(topic)) {
                continue;
            }
            double v = compute(m, ranking, judged);
            report.rows.push_back({m.name, topic, v});
            sum += v;
            ++count;
        }
        report.rows.push_back({m.name, "ALL", count ? sum / static_cast<double>(count) : 0.0});
    }
    return report;
}

void write_report(std::ostream& out, Report const& report)
{
    char buf[64];
    for (auto const& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%.12f", row.value);
        out << row.metric << '\t' << row.topic << '\t' << buf << '\n';
    }
}

}  // namespace mathfind
