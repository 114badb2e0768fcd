#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/index/collection.hpp"
#include "mathfind/phoc/phoc.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace mathfind;
using mathfind::testing::FormulaGenerator;
using mathfind::testing::index_of;
using mathfind::testing::oracle_regions;

namespace {

std::filesystem::path const kData = MATHFIND_TEST_DATA;

std::vector<SymbolBox> boxes(std::string const& latex)
{
    return layout_symbols(parse_latex(latex));
}

std::vector<SymbolBox> random_boxes(std::mt19937_64& rng, int n)
{
    static char const* const labels[] = {"a", "b", "+", "x", "="};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SymbolBox> out;
    for (int i = 0; i < n; ++i) {
        double x = u(rng), y = u(rng);
        out.push_back({labels[i % 5], x, y, x + 0.05 + u(rng) * 0.3, y + 0.05 + u(rng) * 0.3});
    }
    return out;
}

}  // namespace

TEST_CASE("region schemes")
{
    RegionScheme def;
    CHECK(def.region_count() == 29);
    CHECK(def.groups().size() == 9);

    RegionScheme odd{{1, 3, 5}, {Orientation::Horizontal, Orientation::Vertical},
                     RegionVariant::Concentric};
    CHECK(odd.region_count() == 9);
    CHECK(odd.groups().size() == 3);

    RegionScheme horiz{{1, 2, 3}, {Orientation::Horizontal}, RegionVariant::AxisSplits};
    CHECK(horiz.region_count() == 6);

    CHECK(cell_index(0.0, 4) == 0);
    CHECK(cell_index(0.25, 4) == 0);
    CHECK(cell_index(0.25 + 1e-12, 4) == 0);
    CHECK(cell_index(0.2500001, 4) == 1);
    CHECK(cell_index(1.0, 4) == 3);
    CHECK(cell_index(0.5, 1) == 0);
}

TEST_CASE("layout geometry")
{
    auto x = boxes("x");
    REQUIRE(x.size() == 1);
    CHECK(x[0].x0 == 0.0);
    CHECK(x[0].x1 == 1.0);

    auto ab = boxes("ab");
    REQUIRE(ab.size() == 2);
    CHECK(ab[0].label == "a");
    CHECK(ab[0].x1 <= ab[1].x0);
    CHECK(ab[0].y1 - ab[0].y0 == doctest::Approx(ab[1].y1 - ab[1].y0));
    CHECK(ab[0].cx() == doctest::Approx(0.25));
    CHECK(ab[1].cx() == doctest::Approx(0.75));

    // numerator box [0.1,1.1], bar [-0.05,0.05], denominator [-1.1,-0.1]
    auto frac = boxes("\\frac{a}{b}");
    REQUIRE(frac.size() == 3);
    auto find = [&](std::string const& l) {
        return *std::find_if(frac.begin(), frac.end(), [&](auto const& s) { return s.label == l; });
    };
    auto a = find("a");
    auto b = find("b");
    CHECK(a.y1 < b.y0);
    CHECK(a.y0 == doctest::Approx(0.0));
    CHECK(a.y1 == doctest::Approx(1.0 / 2.2));
    CHECK(b.y0 == doctest::Approx(1.2 / 2.2));
    CHECK(b.y1 == doctest::Approx(1.0));

    // superscript: base [-0.5,0.5], script 0.7 high centered at +0.4
    auto sq = boxes("x^2");
    REQUIRE(sq.size() == 2);
    CHECK(sq[1].label == "2");
    CHECK(sq[1].y0 < sq[0].y0);
    CHECK(sq[1].x0 == doctest::Approx(1.0 / 1.7));
    CHECK(sq[0].y1 == doctest::Approx(1.0));

    auto root = boxes("\\sqrt{x}");
    REQUIRE(root.size() == 2);
    CHECK(root[0].x0 < root[1].x0);
    CHECK(root[1].x1 < root[0].x1);
    CHECK(root[0].y0 < root[1].y0);

    FormulaGenerator gen(7);
    for (int i = 0; i < 200; ++i) {
        auto latex = gen.formula();
        auto slt = parse_latex(latex);
        auto bs = layout_symbols(slt);
        REQUIRE(bs.size() == slt.size());
        for (auto const& s : bs) {
            CHECK(s.x0 >= -1e-12);
            CHECK(s.x1 <= 1 + 1e-12);
            CHECK(s.x0 < s.x1);
            CHECK(s.y0 < s.y1);
        }
    }
}

TEST_CASE("encoding sets one bit per partition")
{
    RegionScheme def;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        auto bs = random_boxes(rng, 1 + i % 4);
        bs.resize(1);
        auto v = phoc_encode(bs, def);
        CHECK(v.popcount() == 9);
    }

    auto ab = boxes("ab");
    auto v = phoc_encode(ab);
    CHECK(v.test("a", 1));
    CHECK(v.test("b", 2));
    CHECK_FALSE(v.test("a", 2));

    CHECK(phoc_encode({}).popcount() == 0);

    // Independent replay over multi-symbol sets with distinct labels.
    for (int i = 0; i < 300; ++i) {
        std::vector<SymbolBox> bs = random_boxes(rng, 1 + i % 5);
        auto vec = phoc_encode(bs, def);
        double minx = 1e9, maxx = -1e9, miny = 1e9, maxy = -1e9;
        for (auto const& s : bs) {
            minx = std::min(minx, s.x0);
            maxx = std::max(maxx, s.x1);
            miny = std::min(miny, s.y0);
            maxy = std::max(maxy, s.y1);
        }
        std::map<std::string, std::set<std::size_t>> expect;
        for (auto const& s : bs) {
            auto r = oracle_regions((s.cx() - minx) / (maxx - minx), (s.cy() - miny) / (maxy - miny));
            expect[s.label].insert(r.begin(), r.end());
        }
        for (auto const& [label, regions] : expect) {
            for (std::size_t r = 0; r < 29; ++r) {
                CHECK(vec.test(label, r) == regions.contains(r));
            }
        }
    }
}

TEST_CASE("concentric rings")
{
    RegionScheme rings{{1, 3, 5}, {}, RegionVariant::Concentric};
    std::vector<SymbolBox> bs{{"a", 0.0, 0.0, 0.1, 0.1}, {"b", 0.45, 0.45, 0.55, 0.55},
                              {"c", 0.9, 0.0, 1.0, 1.0}};
    auto v = phoc_encode(bs, rings);
    CHECK(v.popcount() == 9);
    // a at distance 0.45 from the centre, b at 0, c at 0.45
    CHECK(v.test("a", 0));
    CHECK(v.test("a", 1 + 2));
    CHECK(v.test("a", 4 + 4));
    CHECK(v.test("b", 1));
    CHECK(v.test("b", 4));
    CHECK(v.test("c", 3));
    // symmetric layouts give the same rings, unlike axis splits
    auto xy = phoc_encode(boxes("x+y"), rings);
    auto yx = phoc_encode(boxes("y+x"), rings);
    CHECK(phoc_cosine(xy, yx) == doctest::Approx(1.0));
    CHECK(phoc_cosine(phoc_encode(boxes("x+y")), phoc_encode(boxes("y+x"))) < 1.0);
}

TEST_CASE("encoding is invariant under scaling and translation")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 300; ++i) {
        auto bs = random_boxes(rng, 1 + i % 6);
        double s = u(rng), dx = u(rng) - 5, dy = u(rng) - 5;
        auto moved = bs;
        for (auto& b : moved) {
            b.x0 = b.x0 * s + dx;
            b.x1 = b.x1 * s + dx;
            b.y0 = b.y0 * s + dy;
            b.y1 = b.y1 * s + dy;
        }
        // exact powers of two keep the arithmetic exact; others may move
        // a centre across a boundary only at measure-zero ties
        auto a = phoc_encode(bs);
        auto b = phoc_encode(moved);
        CHECK(phoc_cosine(a, b) == doctest::Approx(1.0));
    }
}

TEST_CASE("cosine")
{
    auto a = phoc_encode(boxes("a+b"));
    CHECK(phoc_cosine(a, a) == doctest::Approx(1.0));
    CHECK(phoc_cosine(a, phoc_encode(boxes("xy"))) == 0.0);
    CHECK(phoc_cosine(a, PhocVector{}) == 0.0);
}

TEST_CASE("search ranks by exact cosine")
{
    auto docs = read_collection(kData / "fixture" / "collection.jsonl");
    auto index = InvertedIndex::build(docs);
    auto phoc = PhocIndex::build(index);
    REQUIRE(phoc.size() == index.formula_count());
    CHECK(phoc == PhocIndex::build(index, {}, Exec::Serial));

    for (std::size_t q = 0; q < phoc.size(); ++q) {
        auto [qd, qf] = phoc.ref(q);
        auto qv = phoc_encode(boxes(index.doc(qd).formulas[static_cast<std::size_t>(qf)].latex));
        std::vector<Hit> expect;
        for (std::size_t c = 0; c < phoc.size(); ++c) {
            auto [d, f] = phoc.ref(c);
            double s = phoc_cosine(qv, phoc_encode(boxes(index.doc(d).formulas[static_cast<std::size_t>(f)].latex)));
            if (s > 0) {
                expect.push_back({d, f, s});
            }
        }
        std::sort(expect.begin(), expect.end(), [](Hit const& x, Hit const& y) {
            if (x.score != y.score) {
                return x.score > y.score;
            }
            return std::pair(x.doc, x.formula) < std::pair(y.doc, y.formula);
        });
        auto par = phoc_search(qv, phoc, 100, Exec::Parallel);
        auto ser = phoc_search(qv, phoc, 100, Exec::Serial);
        REQUIRE(par.size() == expect.size());
        REQUIRE(ser.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(par[i].doc == expect[i].doc);
            CHECK(par[i].formula == expect[i].formula);
            CHECK(par[i].score == doctest::Approx(expect[i].score).epsilon(1e-12));
            CHECK(ser[i] == par[i]);
        }
        // self-retrieval: score 1.0 and within the top tie group
        REQUIRE_FALSE(par.empty());
        CHECK(par[0].score == doctest::Approx(1.0));
        bool found = false;
        for (auto const& h : par) {
            if (h.score < par[0].score - 1e-12) {
                break;
            }
            found = found || (h.doc == qd && h.formula == qf);
        }
        CHECK(found);
    }
    CHECK_THROWS_AS((void)phoc_search(PhocVector{}, phoc, 0), std::invalid_argument);
}

TEST_CASE("autocomplete keeps containment and size on random corpora")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        FormulaGenerator gen(seed + 100);
        std::vector<std::string> formulas;
        for (int i = 0; i < 12; ++i) {
            formulas.push_back(gen.formula(2));
        }
        auto index = index_of(formulas);
        auto phoc = PhocIndex::build(index);
        std::vector<std::map<std::string, int>> sets;
        for (std::size_t i = 0; i < phoc.size(); ++i) {
            auto [d, f] = phoc.ref(i);
            sets.push_back(testing::label_multiset(boxes(index.doc(d).formulas[static_cast<std::size_t>(f)].latex)));
        }

        std::mt19937_64 rng(seed);
        auto target = boxes(formulas[seed % formulas.size()]);
        std::shuffle(target.begin(), target.end(), rng);
        std::set<std::pair<DocNo, std::int32_t>> previous;
        bool first = true;
        std::vector<SymbolBox> partial;
        for (auto const& s : target) {
            partial.push_back(s);
            auto q = testing::label_multiset(partial);
            std::set<std::pair<DocNo, std::int32_t>> expect;
            for (std::size_t i = 0; i < sets.size(); ++i) {
                bool ok = true;
                int total = 0;
                for (auto const& [l, n] : sets[i]) {
                    total += n;
                }
                for (auto const& [l, n] : q) {
                    auto it = sets[i].find(l);
                    ok = ok && it != sets[i].end() && it->second >= n;
                }
                if (ok && total >= static_cast<int>(partial.size())) {
                    expect.insert(phoc.ref(i));
                }
            }
            auto hits = autocomplete(partial, phoc, 1000);
            std::set<std::pair<DocNo, std::int32_t>> got;
            for (auto const& h : hits) {
                got.insert({h.doc, h.formula});
            }
            CHECK(got == expect);
            if (!first) {
                CHECK(std::includes(previous.begin(), previous.end(), got.begin(), got.end()));
            }
            CHECK(hits == autocomplete(partial, phoc, 1000, Exec::Serial));
            previous = got;
            first = false;
        }
    }
    CHECK_THROWS_AS((void)autocomplete({}, PhocIndex{}, 5), EmptyQuery);
}

TEST_CASE("outside-in entry of an integral keeps the target")
{
    std::string const target = "\\int_0^\\infty \\frac{\\sin(x)}{x}dx";
    auto index = index_of({target, "\\frac{\\sin(x)}{x}", "\\int_0^1 x dx", "\\sin(x)+x",
                           "\\int_{-\\infty}^\\infty e^{-x^2}dx", "a^2+b^2=c^2"});
    auto phoc = PhocIndex::build(index);
    auto bs = boxes(target);
    auto order = entry_order(bs, EntryOrder::OutsideIn);
    std::vector<SymbolBox> partial;
    for (std::size_t i = 0; i < 3; ++i) {
        partial.push_back(bs[order[i]]);
    }
    CHECK(partial[0].label == "\\infty");  // limit column, top first
    CHECK(partial[1].label == "x");
    auto hits = autocomplete(partial, phoc, 10);
    auto d = *index.docno("f0000");
    CHECK(std::any_of(hits.begin(), hits.end(), [&](Hit const& h) { return h.doc == d; }));

    auto full = autocomplete(bs, phoc, 10);
    REQUIRE_FALSE(full.empty());
    CHECK(full[0].doc == d);
    CHECK(full[0].score == doctest::Approx(1.0));

    for (auto o : {EntryOrder::LeftRight, EntryOrder::RightLeft, EntryOrder::OutsideIn,
                   EntryOrder::MiddleOut}) {
        auto n = symbols_to_rank1(phoc, index, 0, o);
        REQUIRE(n.has_value());
        CHECK(*n <= bs.size());
    }
}

TEST_CASE("entry orders")
{
    auto abc = boxes("abc");
    auto labels = [&](EntryOrder o) {
        std::string s;
        for (auto i : entry_order(abc, o)) {
            s += abc[i].label;
        }
        return s;
    };
    CHECK(labels(EntryOrder::LeftRight) == "abc");
    CHECK(labels(EntryOrder::RightLeft) == "cba");
    CHECK(labels(EntryOrder::OutsideIn) == "acb");
    CHECK(labels(EntryOrder::MiddleOut) == "bac");
    auto five = boxes("abcde");
    std::string s;
    for (auto i : entry_order(five, EntryOrder::MiddleOut)) {
        s += five[i].label;
    }
    CHECK(s == "cbdae");
    CHECK(entry_order({}, EntryOrder::MiddleOut).empty());
    CHECK(entry_order_name(EntryOrder::OutsideIn) == "outside-in");
}

TEST_CASE("phoc.bin round trip and corruption")
{
    auto index = InvertedIndex::build(read_collection(kData / "fixture" / "collection.jsonl"));
    testing::TempDir dir;
    for (auto const& scheme : {RegionScheme{}, RegionScheme{{1, 3, 5}, {}, RegionVariant::Concentric}}) {
        auto phoc = PhocIndex::build(index, scheme);
        phoc.save(dir / "phoc.bin");
        auto back = PhocIndex::load(dir / "phoc.bin");
        CHECK(back == phoc);
        CHECK(back.scheme() == scheme);
    }
    auto bytes = testing::read_file(dir / "phoc.bin");
    CHECK(bytes.substr(0, 5) == "MFPH1");
    testing::write_file(dir / "bad.bin", "MFPH2" + bytes.substr(5));
    CHECK_THROWS_AS((void)PhocIndex::load(dir / "bad.bin"), IndexFormatError);
    testing::write_file(dir / "short.bin", bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS((void)PhocIndex::load(dir / "short.bin"), IndexFormatError);
    testing::write_file(dir / "long.bin", bytes + "x");
    CHECK_THROWS_AS((void)PhocIndex::load(dir / "long.bin"), IndexFormatError);
    CHECK_THROWS_AS((void)PhocIndex::load(dir / "missing.bin"), IndexFormatError);
}
