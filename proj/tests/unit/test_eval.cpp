#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mathfind/error.hpp"
#include "mathfind/eval/metrics.hpp"
#include "mathfind/eval/qa.hpp"
#include "mathfind/eval/trec.hpp"
#include "support/oracles.hpp"

using namespace mathfind;
using namespace mathfind::testing;

namespace {

Qrels qrels_of(std::string const& text)
{
    std::istringstream in(text);
    return parse_qrels(in);
}

Run run_of(std::string const& text)
{
    std::istringstream in(text);
    return parse_run(in);
}

// Rank list with judgments where the third hit was
// never pooled.
ItemList const kModelA{"f1", "f2", "f3", "f4", "f5"};
Judgments const kModelAJudged{{"f1", 1}, {"f2", 0}, {"f4", 1}, {"f5", 0}};

std::size_t lev_oracle(std::string const& a, std::string const& b)
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
        if (i == a.size()) {
            return b.size() - j;
        }
        if (j == b.size()) {
            return a.size() - i;
        }
        auto key = std::pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        std::size_t best = std::min(go(i + 1, j), go(i, j + 1)) + 1;
        best = std::min(best, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1));
        return memo[key] = best;
    };
    return go(0, 0);
}

}  // namespace

TEST_CASE("qrels and run parsing")
{
    auto q = qrels_of("T1 0 d5 3\n\nT1 0 d2 0\nT2 0 d5 1\n");
    CHECK(q.grade("T1", "d5") == 3);
    CHECK(q.grade("T1", "d2") == 0);
    CHECK_FALSE(q.grade("T1", "d9").has_value());
    CHECK(q.judgments("T3").empty());

    auto r = run_of("T1 Q0 d2 2 3.5 sys\nT1 Q0 d5 1 12.5 sys\n");
    REQUIRE(r.topics.at("T1").size() == 2);
    CHECK(r.topics.at("T1")[0] == RunEntry{"d5", 1, 12.5});
    CHECK(r.tag == "sys");
    CHECK(r.ranking("T1") == ItemList{"d5", "d2"});

    auto line_of = [](auto fn) {
        try {
            fn();
        } catch (FormatError const& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of([] { (void)qrels_of("T1 0 d5 3\nT1 0 d5 2\n"); }) == 2);
    CHECK(line_of([] { (void)qrels_of("T1 0 d5\n"); }) == 1);
    CHECK(line_of([] { (void)qrels_of("\nT1 0 d5 x\n"); }) == 2);
    CHECK(line_of([] { (void)qrels_of("T1 0 d5 -1\n"); }) == 1);
    CHECK(line_of([] { (void)run_of("T1 Q0 d5 1 1.0\n"); }) == 1);
    CHECK(line_of([] { (void)run_of("T1 Q0 d5 1 abc sys\n"); }) == 1);
    CHECK(line_of([] { (void)run_of("T1 Q0 d5 1 1 s\nT1 Q0 d5 2 1 s\n"); }) == 2);
    CHECK(line_of([] { (void)run_of("T1 Q0 d5 1 1 s\nT1 Q0 d6 3 1 s\n"); }) == 2);
    CHECK(line_of([] { (void)run_of("T1 Q0 d5 0 1 s\n"); }) == 1);

    std::ostringstream out;
    write_run(out, r);
    CHECK(run_of(out.str()).topics == r.topics);
    std::ostringstream qout;
    write_qrels(qout, q);
    CHECK(qrels_of(qout.str()).topics == q.topics);

    std::istringstream vm("f1\tA\nf2\tA\n");
    auto visual = parse_visual_map(vm);
    CHECK(visual.at("f2") == "A");
    std::istringstream bad("f1 A\n");
    CHECK_THROWS_AS((void)parse_visual_map(bad), FormatError);
}

TEST_CASE("precision on a partly judged ranking")
{
    CHECK(precision_at_k(kModelA, kModelAJudged, 5) == doctest::Approx(2.0 / 5));
    auto with_sixth = kModelA;
    with_sixth.push_back("f6");
    auto judged = kModelAJudged;
    judged["f6"] = 1;
    CHECK(precision_at_k(prime_filter(with_sixth, judged), judged, 5) == doctest::Approx(3.0 / 5));
    judged["f6"] = 0;
    CHECK(precision_at_k(prime_filter(with_sixth, judged), judged, 5) == doctest::Approx(2.0 / 5));
    CHECK(precision_at_k(prime_filter(kModelA, kModelAJudged), kModelAJudged, 5) ==
          doctest::Approx(2.0 / 5));

    CHECK(precision_at_k({"a", "b"}, {{"a", 1}, {"b", 1}}, 2) == 1.0);
    CHECK_THROWS_AS((void)precision_at_k({"a"}, {}, 0), std::invalid_argument);
    CHECK(precision({}, {{"a", 1}}) == 0.0);
}

TEST_CASE("graded gain")
{
    ItemList s{"a", "b", "c", "d", "e"};
    Judgments j{{"a", 3}, {"b", 3}, {"c", 2}, {"d", 1}, {"e", 0}};
    CHECK(dcg_at_k(s, j, 5) == doctest::Approx(7.76186).epsilon(1e-6));
    CHECK(dcg_at_k(s, j, 5) == doctest::Approx(6.5 + 2 / std::log2(3.0)).epsilon(1e-12));
    CHECK(ndcg_at_k(s, j, 5) == doctest::Approx(1.0));
    CHECK(ndcg(s, j) == doctest::Approx(1.0));
    CHECK(ndcg_at_k(s, {{"a", 0}, {"b", 0}}, 5) == 0.0);
    CHECK(ndcg({"x"}, {}) == 0.0);
}

TEST_CASE("bpref boundaries")
{
    CHECK(bpref({"r1", "r2", "n1", "n2"}, {{"r1", 1}, {"r2", 1}, {"n1", 0}, {"n2", 0}}) == 1.0);
    CHECK(bpref({"n1", "n2", "r1", "r2"}, {{"r1", 1}, {"r2", 1}, {"n1", 0}, {"n2", 0}}) == 0.0);
    // unjudged items do not count against relevant ones
    CHECK(bpref({"u1", "u2", "r1"}, {{"r1", 1}}) == 1.0);
    CHECK(bpref({"r1"}, {{"r1", 1}, {"r2", 1}}) == 0.5);
}

TEST_CASE("rank metrics match definition oracles")
{
    std::mt19937_64 rng(1234);
    for (int t = 0; t < 2000; ++t) {
        auto f = random_judged_ranking(rng);
        auto const& s = f.ranking;
        auto const& j = f.judged;
        auto rel = relevant_set(j);
        for (std::size_t k = 1; k <= 10; ++k) {
            CHECK(precision_at_k(s, j, k) == doctest::Approx(p_oracle(s, j, k)).epsilon(1e-12));
            double r_oracle = rel.empty() ? 0.0 : p_oracle(s, j, k) * static_cast<double>(k) /
                                                       static_cast<double>(rel.size());
            CHECK(recall_at_k(s, j, k) == doctest::Approx(r_oracle).epsilon(1e-12));
            CHECK(dcg_at_k(s, j, k) == doctest::Approx(dcg_oracle(gains_of(s, j), k)).epsilon(1e-12));
            double ideal = idcg_oracle(j, k);
            CHECK(idcg_at_k(j, k) == doctest::Approx(ideal).epsilon(1e-12));
            double n = ndcg_at_k(s, j, k);
            CHECK(n == doctest::Approx(ndcg_oracle(s, j, k)).epsilon(1e-12));
            CHECK(n >= 0.0);
            CHECK(n <= 1.0 + 1e-12);
        }
        CHECK(average_precision(s, j) == doctest::Approx(ap_oracle(s, j)).epsilon(1e-12));
        CHECK(bpref(s, j) == doctest::Approx(bpref_oracle(s, j)).epsilon(1e-12));
        double rr = 0.0;
        for (std::size_t i = 0; i < s.size() && rr == 0.0; ++i) {
            rr = rel.contains(s[i]) ? 1.0 / static_cast<double>(i + 1) : 0.0;
        }
        CHECK(reciprocal_rank(s, j) == rr);

        for (double v : {average_precision(s, j), bpref(s, j), reciprocal_rank(s, j),
                         recall(s, j), precision(s, j)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

        auto p1 = prime_filter(s, j);
        CHECK(prime_filter(p1, j) == p1);
        bool all_judged = std::all_of(s.begin(), s.end(), [&](auto const& i) { return j.contains(i); });
        if (all_judged) {
            CHECK(p1 == s);
            CHECK(precision_at_k(p1, j, 5) == precision_at_k(s, j, 5));
        }
    }
    CHECK(prime_filter({"a", "b"}, {}).empty());
}

TEST_CASE("binarization")
{
    auto q = qrels_of("T 0 a 0\nT 0 b 1\nT 0 c 2\nT 0 d 3\n");
    auto b = binarize(q);
    CHECK(b.judgments("T") == Judgments{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}});
    auto all = binarize(q, {3, 0});
    CHECK(relevant_count(all.judgments("T")) == 4);
    auto five_level = binarize(qrels_of("T 0 a 0\nT 0 b 1\nT 0 c 2\nT 0 d 3\nT 0 e 4\n"), {4, 3});
    CHECK(five_level.judgments("T") == Judgments{{"a", 0}, {"b", 0}, {"c", 0}, {"d", 1}, {"e", 1}});
    CHECK_THROWS_AS((void)binarize(q, {3, 4}), std::invalid_argument);
    CHECK_THROWS_AS((void)binarize(q, {3, -1}), std::invalid_argument);
}

TEST_CASE("visual deduplication")
{
    std::map<std::string, std::string, std::less<>> v{{"f1", "A"}, {"f2", "A"}, {"f3", "B"}};
    CHECK(dedup_visually_distinct({"f1", "f2", "f3"}, v) == ItemList{"f1", "f3"});
    CHECK(dedup_visually_distinct({"f3", "f4"}, v) == ItemList{"f3", "f4"});

    std::mt19937_64 rng(9);
    for (int t = 0; t < 500; ++t) {
        std::map<std::string, std::string, std::less<>> visual;
        ItemList s;
        for (int i = 0; i < 8; ++i) {
            s.push_back("f" + std::to_string(i));
            visual[s.back()] = std::string(1, static_cast<char>('A' + rng() % 4));
        }
        std::shuffle(s.begin(), s.end(), rng);
        auto d = dedup_visually_distinct(s, visual);
        std::set<std::string> ids;
        for (auto const& i : d) {
            CHECK(ids.insert(visual[i]).second);
        }
        // every kept item is the first of its visual id
        for (auto const& i : d) {
            auto first = std::find_if(s.begin(), s.end(), [&](auto const& x) { return visual[x] == visual[i]; });
            CHECK(*first == i);
        }
        CHECK(std::is_sorted(d.begin(), d.end(), [&](auto const& a, auto const& b) {
            return std::find(s.begin(), s.end(), a) < std::find(s.begin(), s.end(), b);
        }));
    }
}

TEST_CASE("metric names")
{
    auto m = MetricSpec::parse("p_prime@10");
    CHECK(m.kind == MetricKind::Precision);
    CHECK(m.k == 10);
    CHECK(m.prime);
    CHECK(MetricSpec::parse("ndcg_prime").kind == MetricKind::Ndcg);
    CHECK(MetricSpec::parse("ndcg@5").k == 5);
    CHECK(MetricSpec::parse("map_prime").prime);
    CHECK(MetricSpec::parse("bpref").kind == MetricKind::Bpref);
    CHECK(MetricSpec::parse("ndcg").graded());
    CHECK_FALSE(MetricSpec::parse("map").graded());
    for (auto bad : {"p", "p@0", "p@x", "map@5", "prime", "bogus", "_prime@3"}) {
        CHECK_THROWS_AS((void)MetricSpec::parse(bad), std::invalid_argument);
    }
}

TEST_CASE("evaluation report")
{
    auto q = qrels_of("T1 0 a 3\nT1 0 b 1\nT1 0 c 2\n"
                      "T2 0 x 2\nT2 0 y 0\n"
                      "T3 0 z 1\n"
                      "T4 0 w 3\n");
    auto r = run_of("T1 Q0 a 1 9 s\nT1 Q0 u 2 8 s\nT1 Q0 b 3 7 s\nT1 Q0 c 4 6 s\n"
                    "T2 Q0 y 1 5 s\nT2 Q0 x 2 4 s\n"
                    "T3 Q0 z 1 1 s\n"
                    "T9 Q0 q 1 1 s\n");
    std::vector<MetricSpec> metrics;
    for (auto name : {"p_prime@2", "map", "bpref", "ndcg_prime", "mrr"}) {
        metrics.push_back(MetricSpec::parse(name));
    }
    auto report = evaluate(q, r, metrics);
    CHECK(report.empty_topics == std::vector<std::string>{"T4"});
    CHECK(report.excluded_topics == std::vector<std::string>{"T3"});

    std::map<std::pair<std::string, std::string>, double> rows;
    for (auto const& row : report.rows) {
        CHECK(rows.emplace(std::pair(row.metric, row.topic), row.value).second);
    }
    // T1 binarized relevant {a, c}; u unjudged, b judged non-relevant
    CHECK(rows.at({"p_prime@2", "T1"}) == doctest::Approx(0.5));
    CHECK(rows.at({"map", "T1"}) == doctest::Approx((1.0 + 2.0 / 4) / 2));
    CHECK(rows.at({"map", "T2"}) == doctest::Approx(0.5));
    CHECK_FALSE(rows.contains({"map", "T3"}));
    CHECK(rows.at({"map", "T4"}) == 0.0);
    CHECK(rows.at({"map", "ALL"}) == doctest::Approx((0.75 + 0.5 + 0.0) / 3));
    CHECK(rows.at({"bpref", "T1"}) == doctest::Approx((1.0 + 0.5) / 2));
    CHECK(rows.contains({"mrr", "T3"}));
    CHECK(rows.at({"mrr", "ALL"}) == doctest::Approx((1.0 + 0.5 + 0.0 + 0.0) / 4));
    double ndcg_t1 = (3 + 1 / std::log2(2.0) + 2 / std::log2(3.0)) / (3 + 2 / std::log2(2.0) + 1 / std::log2(3.0));
    CHECK(rows.at({"ndcg_prime", "T1"}) == doctest::Approx(ndcg_t1).epsilon(1e-12));
    CHECK_FALSE(rows.contains({"map", "T9"}));

    // ALL rows are means of the per-topic rows
    for (auto const& m : metrics) {
        double sum = 0;
        int n = 0;
        for (auto const& row : report.rows) {
            if (row.metric == m.name && row.topic != "ALL") {
                sum += row.value;
                ++n;
            }
        }
        CHECK(rows.at({m.name, "ALL"}) == doctest::Approx(sum / n).epsilon(1e-12));
    }

    std::ostringstream out;
    write_report(out, report);
    auto text = out.str();
    CHECK(text.find("map\tALL\t0.416666666667\n") != std::string::npos);
    CHECK(text.find("p_prime@2\tT1\t0.500000000000\n") == 0);

    EvalOptions dedup;
    dedup.dedup = true;
    dedup.visual = {{"a", "V"}, {"u", "V"}, {"b", "V"}};
    auto d = evaluate(q, r, {MetricSpec::parse("p@2")}, dedup);
    CHECK(d.rows[0].value == doctest::Approx(1.0));  // a, c
}

TEST_CASE("answer metrics")
{
    CHECK(exact_match({"3.14"}, {"3.14"}) == 1.0);
    CHECK(accuracy({"3.14"}, {"3.14"}) == 1.0);
    CHECK(exact_match({" 72"}, {"72"}) == 0.0);
    CHECK(accuracy({" 72"}, {"72"}) == 1.0);
    CHECK(accuracy({"3.1415926"}, {"3.1415927"}) == 1.0);
    CHECK(accuracy({"3.14159"}, {"3.1416"}) == 0.0);
    CHECK(answers_equivalent("3, 4", "3,4"));
    CHECK_FALSE(answers_equivalent("4, 3", "3, 4"));
    CHECK(answers_equivalent("Yes", "yes"));
    CHECK(answers_equivalent("0", "0.0"));
    CHECK(accuracy({"1", "2", "x"}, {"1", "3", "X"}) == doctest::Approx(2.0 / 3));
    CHECK_THROWS_AS((void)accuracy({"1"}, {}), std::invalid_argument);

    CHECK(token_f1("a b c", {"a b d"}) == doctest::Approx(2.0 / 3));
    CHECK(token_f1("a b c", {"a b c"}) == 1.0);
    CHECK(token_f1("a b c d e f g h i j", {"a x x x x x x x x x", "a b c d e f g h i x"}) ==
          doctest::Approx(0.9));
    CHECK(token_f1("", {""}) == 1.0);
    CHECK(token_f1("", {"a"}) == 0.0);
    CHECK(token_f1("a a", {"a"}) == doctest::Approx(2 * 0.5 * 1.0 / 1.5));

    CHECK(edit_distance("abc", "abc") == 0);
    CHECK(edit_distance("abc", "abd") == 1);
    CHECK(normalized_edit_distance("", "") == 0.0);
    CHECK(normalized_edit_distance("ab", "") == 1.0);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 1000; ++t) {
        auto word = [&] {
            std::string s(rng() % 9, 'a');
            for (auto& c : s) {
                c = static_cast<char>('a' + rng() % 3);
            }
            return s;
        };
        auto a = word(), b = word();
        CHECK(edit_distance(a, b) == lev_oracle(a, b));
        CHECK(edit_distance(a, b) == edit_distance(b, a));
    }

    CHECK(perplexity({1.0, 1.0}) == 1.0);
    CHECK(perplexity({0.25}) == 4.0);
    CHECK_THROWS_AS((void)perplexity({0.0}), EvalError);
    CHECK_THROWS_AS((void)perplexity({1.5}), EvalError);
    CHECK_THROWS_AS((void)perplexity({}), EvalError);
}
