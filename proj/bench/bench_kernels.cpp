// Serial reference against the OpenMP kernels on a synthetic corpus.
// Arg 0 selects Exec::Serial, 1 Exec::Parallel.

#include <benchmark/benchmark.h>

#include <memory>

#include "mathfind/index/search.hpp"
#include "mathfind/phoc/phoc.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/rerank/rerank.hpp"
#include "support/generators.hpp"

namespace {

using namespace mathfind;

constexpr std::size_t kDocs = 2000;
constexpr char const* kQuery = "\\frac{x+1}{y} + a^{2}";

struct Corpus {
    std::vector<DocInput> docs;
    InvertedIndex index;
    PhocIndex phoc;
};

Corpus const& corpus()
{
    static std::unique_ptr<Corpus> c = [] {
        auto out = std::make_unique<Corpus>();
        testing::FormulaGenerator gen(2024);
        static char const* const words[] = {"sum", "integral", "triangle", "root", "series",
                                            "prime", "limit", "matrix", "vector", "angle"};
        std::mt19937_64 rng(7);
        for (std::size_t d = 0; d < kDocs; ++d) {
            DocInput doc;
            doc.id = "doc" + std::to_string(d);
            for (int w = 0; w < 12; ++w) {
                doc.text += std::string(words[rng() % 10]) + " ";
            }
            for (int f = 0; f < 3; ++f) {
                doc.formulas.push_back(gen.formula(3));
            }
            out->docs.push_back(std::move(doc));
        }
        out->index = InvertedIndex::build(out->docs);
        out->phoc = PhocIndex::build(out->index);
        return out;
    }();
    return *c;
}

Exec exec_of(benchmark::State const& state)
{
    return state.range(0) ? Exec::Parallel : Exec::Serial;
}

void BM_Dice(benchmark::State& state)
{
    auto const& c = corpus();
    auto q = formula_terms(kQuery, TermFamily::Slt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dice_search(q, c.index, 100, exec_of(state)));
    }
}

void BM_Bm25(benchmark::State& state)
{
    auto const& c = corpus();
    auto words = text_words("prime triangle series limit");
    for (auto _ : state) {
        benchmark::DoNotOptimize(bm25plus_search(words, c.index, 100, {}, exec_of(state)));
    }
}

void BM_TfidfCosine(benchmark::State& state)
{
    auto const& c = corpus();
    auto q = formula_terms(kQuery, TermFamily::Token);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tfidf_search(q, c.index, 100, exec_of(state)));
    }
}

void BM_PhocSearch(benchmark::State& state)
{
    auto const& c = corpus();
    auto q = phoc_encode(layout_symbols(parse_latex(kQuery)), c.phoc.scheme());
    for (auto _ : state) {
        benchmark::DoNotOptimize(phoc_search(q, c.phoc, 100, exec_of(state)));
    }
}

void BM_Autocomplete(benchmark::State& state)
{
    auto const& c = corpus();
    std::vector<SymbolBox> partial{{"x", 0, 0, 1, 1}, {"+", 1, 0, 2, 1}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(autocomplete(partial, c.phoc, 100, exec_of(state)));
    }
}

void BM_RerankTed(benchmark::State& state)
{
    auto const& c = corpus();
    auto hits = dice_search(formula_terms(kQuery, TermFamily::Slt), c.index, 200);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rerank(hits, kQuery, c.index, RerankMethod::TedCombined, {}, exec_of(state)));
    }
}

void BM_RerankMss(benchmark::State& state)
{
    auto const& c = corpus();
    auto hits = dice_search(formula_terms(kQuery, TermFamily::Slt), c.index, 200);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rerank(hits, kQuery, c.index, RerankMethod::Mss, {}, exec_of(state)));
    }
}

void BM_BuildIndex(benchmark::State& state)
{
    auto const& c = corpus();
    std::vector<DocInput> docs(c.docs.begin(), c.docs.begin() + 300);
    for (auto _ : state) {
        benchmark::DoNotOptimize(InvertedIndex::build(docs, {}, exec_of(state)));
    }
}

void BM_BuildPhoc(benchmark::State& state)
{
    auto const& c = corpus();
    for (auto _ : state) {
        benchmark::DoNotOptimize(PhocIndex::build(c.index, {}, exec_of(state)));
    }
}

}  // namespace

BENCHMARK(BM_Dice)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Bm25)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TfidfCosine)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PhocSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Autocomplete)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RerankTed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RerankMss)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildIndex)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildPhoc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
