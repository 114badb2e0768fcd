#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mathfind/eval/trec.hpp"

namespace mathfind {

/// Ranked item ids, best first.
using ItemList = std::vector<std::string>;

struct GradeScale {
    int max_grade = 3;
    int threshold = 2;
};

/// Grade >= threshold becomes 1, everything else judged becomes 0.
/// Throws std::invalid_argument unless 0 <= threshold <= max_grade.
[[nodiscard]] Qrels binarize(Qrels const& qrels, GradeScale scale = {});
[[nodiscard]] Judgments binarize(Judgments const& judged, GradeScale scale = {});

// Binary metrics count an item as relevant when its grade is positive;
// unjudged items are non-relevant. Binarize graded judgments first.
[[nodiscard]] double precision_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k);
[[nodiscard]] double recall_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k);
[[nodiscard]] double precision(ItemList const& ranking, Judgments const& judged);
[[nodiscard]] double recall(ItemList const& ranking, Judgments const& judged);
[[nodiscard]] double average_precision(ItemList const& ranking, Judgments const& judged);
[[nodiscard]] double reciprocal_rank(ItemList const& ranking, Judgments const& judged);
/// Only judged non-relevant items count against a relevant one.
[[nodiscard]] double bpref(ItemList const& ranking, Judgments const& judged);

// Graded metrics use the grade as gain.
[[nodiscard]] double dcg_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k);
[[nodiscard]] double idcg_at_k(Judgments const& judged, std::size_t k);
/// 0 when the ideal gain is 0.
[[nodiscard]] double ndcg_at_k(ItemList const& ranking, Judgments const& judged, std::size_t k);
/// nDCG at the ranking's own depth.
[[nodiscard]] double ndcg(ItemList const& ranking, Judgments const& judged);

[[nodiscard]] std::size_t relevant_count(Judgments const& judged);

/// Keeps judged items only, in order.
[[nodiscard]] ItemList prime_filter(ItemList const& ranking, Judgments const& judged);

/// Keeps the first item of each visual id; items absent from the map are
/// their own visual id.
[[nodiscard]] ItemList dedup_visually_distinct(
    ItemList const& ranking, std::map<std::string, std::string, std::less<>> const& visual);

enum class MetricKind { Precision, Recall, AveragePrecision, ReciprocalRank, Ndcg, Dcg, Bpref };

/// A metric name such as `p@10`, `p_prime@5`, `map`, `map_prime`, `mrr`,
/// `ndcg`, `ndcg_prime@10`, `dcg@5`, `r@100`, `recall`, `precision`, `bpref`.
struct MetricSpec {
    std::string name;
    MetricKind kind = MetricKind::Precision;
    std::size_t k = 0;  // 0: whole ranking
    bool prime = false;

    /// Throws std::invalid_argument.
    [[nodiscard]] static MetricSpec parse(std::string const& name);
    /// Graded metrics read raw grades; binary ones read binarized grades.
    [[nodiscard]] bool graded() const noexcept;
};

struct EvalOptions {
    GradeScale scale;
    std::map<std::string, std::string, std::less<>> visual;
    bool dedup = false;
};

struct ReportRow {
    std::string metric;
    std::string topic;
    double value = 0.0;
};

struct Report {
    std::vector<ReportRow> rows;
    /// Topics that have judgments but no run entries; they score 0.
    std::vector<std::string> empty_topics;
    /// Topics without relevant items, left out of the map/bpref averages.
    std::vector<std::string> excluded_topics;
};

/// Per-topic rows for every judged topic, then an ALL row per metric
/// holding the mean over topics.
[[nodiscard]] Report evaluate(Qrels const& qrels, Run const& run,
                              std::vector<MetricSpec> const& metrics, EvalOptions const& options = {});

/// `metric<TAB>topic<TAB>value` with 12 decimals.
void write_report(std::ostream& out, Report const& report);

}  // namespace mathfind
