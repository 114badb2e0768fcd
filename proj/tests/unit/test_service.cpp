#include <httplib.h>

#include <atomic>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/index/collection.hpp"
#include "mathfind/service/commands.hpp"
#include "mathfind/service/http_api.hpp"
#include "support/temp_dir.hpp"

using namespace mathfind;
using json = nlohmann::json;

namespace {

std::filesystem::path const kData = MATHFIND_TEST_DATA;

std::shared_ptr<LoadedIndex const> fixture_index(testing::TempDir const& tmp)
{
    std::ostringstream log;
    cmd_index(kData / "fixture" / "collection.jsonl", tmp / "idx", false, {}, {}, log);
    return LoadedIndex::load(tmp / "idx");
}

std::string run_text(LoadedIndex const& li, std::string const& engine, std::size_t k,
                     SearchOptions const& options = {})
{
    auto spec = EngineSpec::parse(engine);
    spec.k = k;
    std::ostringstream out;
    (void)cmd_search(li, read_topics(kData / "fixture" / "topics.tsv"), spec, options, out);
    return out.str();
}

}  // namespace

TEST_CASE("engine specs parse to a canonical form")
{
    auto s = EngineSpec::parse("fused:rrf:slt+bm25-text");
    CHECK(s.engine == EngineKind::Fused);
    CHECK(s.fusion == FusionMethod::Rrf);
    CHECK(s.components == std::vector{EngineKind::Slt, EngineKind::Bm25Text});
    CHECK(s.document_level());
    CHECK(s.str() == "fused:rrf:slt+bm25-text");

    auto l = EngineSpec::parse("fused:linear:opt=0.25+phoc/mss");
    CHECK(l.weights == std::vector{0.25, 1.0});
    CHECK(l.rerank == RerankMethod::Mss);
    CHECK(l.str() == "fused:linear:opt=0.25+phoc=1/mss");
    CHECK(EngineSpec::parse(l.str()) == l);
    CHECK_FALSE(l.document_level());

    for (auto name : {"slt", "opt", "wikimirs", "dlmf-text", "bm25-text", "phoc"}) {
        CHECK(EngineSpec::parse(name).str() == name);
    }
    for (auto bad : {"", "fused", "fused:rrf:slt", "fused:rrf:slt+fused", "fused:rrf:slt=2+opt",
                     "fused:xyz:slt+opt", "lucene", "slt/bogus", "fused:linear:slt=-1+opt",
                     "fused:linear:slt=abc+opt", "fused:rrf:slt+opt:x"}) {
        INFO(bad);
        CHECK_THROWS_AS((void)EngineSpec::parse(bad), std::invalid_argument);
    }

    auto tag = s.run_tag();
    CHECK(tag.starts_with("fused:rrf:slt+bm25-text~"));
    CHECK(tag.size() == s.str().size() + 17);
    CHECK(tag == EngineSpec::parse("fused:rrf:slt+bm25-text").run_tag());
    CHECK(tag != EngineSpec::parse("fused:rrf:bm25-text+slt").run_tag());
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("queries split into formula and text")
{
    auto q = Query::parse("$a+b$ addition of terms");
    CHECK(q.formula == "a+b");
    CHECK(q.text == "addition of terms");
    auto plain = Query::parse("  x^2 ");
    CHECK(plain.formula == "x^2");
    CHECK(plain.text == "x^2");
    auto two = Query::parse("sum $x$ and $y$");
    CHECK(two.formula == "x");
    CHECK(two.text == "sum   and");
    CHECK_THROWS_AS((void)Query::parse("broken $x"), std::invalid_argument);
}

TEST_CASE("index command")
{
    testing::TempDir tmp;
    std::ostringstream log;
    auto s = cmd_index(kData / "fixture" / "collection.jsonl", tmp / "idx", false, {}, {}, log);
    CHECK(s.documents == 5);
    CHECK(s.formulas == 11);
    CHECK(log.str().empty());

    SUBCASE("index files match the golden fixture")
    {
        for (auto f : {"vocab.tsv", "postings.bin", "docs.tsv", "formulas.tsv", "stats.tsv"}) {
            INFO(f);
            CHECK(testing::read_file(tmp / "idx" / f) ==
                  testing::read_file(kData / "golden" / "index" / f));
        }
        CHECK(testing::read_file(tmp / "idx" / "postings.bin").starts_with("MFIDX1"));
        CHECK(testing::read_file(tmp / "idx" / "phoc.bin").starts_with("MFPH1"));
        auto visual = parse_visual_map(tmp / "idx" / "visual.tsv");
        CHECK(visual.size() == 11);
        CHECK(visual.at("d2#1") == visual.at("d5#0"));
        CHECK(visual.at("d2#1") != visual.at("d5#1"));
    }
    SUBCASE("existing index needs force")
    {
        CHECK_THROWS((void)cmd_index(kData / "fixture" / "collection.jsonl", tmp / "idx", false,
                                     {}, {}, log));
        testing::write_file(tmp / "one.jsonl", R"({"id":"z","text":"t","formulas":["q"]})" "\n");
        auto again = cmd_index(tmp / "one.jsonl", tmp / "idx", true, {}, {}, log);
        CHECK(again.documents == 1);
        CHECK(LoadedIndex::load(tmp / "idx")->phoc.size() == 1);
    }
    SUBCASE("empty collection gives an empty index and a warning")
    {
        testing::write_file(tmp / "empty.jsonl", "");
        auto e = cmd_index(tmp / "empty.jsonl", tmp / "empty", false, {}, {}, log);
        CHECK(e.documents == 0);
        CHECK(log.str().find("warning") != std::string::npos);
        auto li = LoadedIndex::load(tmp / "empty");
        CHECK(li->index.doc_count() == 0);
        CHECK(search(*li, Query::parse("a+b"), EngineSpec::parse("slt")).empty());
    }
    SUBCASE("duplicate ids")
    {
        testing::write_file(tmp / "dup.jsonl", R"({"id":"a","text":"","formulas":[]})" "\n"
                                               R"({"id":"a","text":"","formulas":[]})" "\n");
        CHECK_THROWS_AS((void)cmd_index(tmp / "dup.jsonl", tmp / "dup", false, {}, {}, log),
                        DuplicateDocId);
    }
    SUBCASE("load rejects a mismatched phoc store")
    {
        testing::write_file(tmp / "one.jsonl", R"({"id":"z","text":"t","formulas":["q"]})" "\n");
        (void)cmd_index(tmp / "one.jsonl", tmp / "other", false, {}, {}, log);
        std::filesystem::copy_file(tmp / "other" / "phoc.bin", tmp / "idx" / "phoc.bin",
                                   std::filesystem::copy_options::overwrite_existing);
        CHECK_THROWS_AS((void)LoadedIndex::load(tmp / "idx"), IndexFormatError);
    }
}

TEST_CASE("search over the fixture")
{
    testing::TempDir tmp;
    auto li = fixture_index(tmp);
    auto const& index = li->index;

    SUBCASE("a+b retrieves itself at rank 1")
    {
        for (auto engine : {"slt", "opt", "wikimirs", "dlmf-text", "phoc"}) {
            INFO(engine);
            auto hits = search(*li, Query::parse("a+b"), EngineSpec::parse(engine));
            REQUIRE_FALSE(hits.empty());
            CHECK(hits[0].latex == "a+b");
            CHECK(hits[0].item == "d2#1");
        }
    }
    SUBCASE("k beyond the corpus returns every scoring formula")
    {
        auto spec = EngineSpec::parse("slt");
        spec.k = 1000;
        auto hits = search(*li, Query::parse("a+b"), spec);
        auto q = formula_terms("a+b", TermFamily::Slt);
        std::set<std::string> oracle;
        for (std::uint32_t s = 0; s < index.formula_count(); ++s) {
            auto [d, f] = index.formula_ref(s);
            auto mine = formula_terms(index.doc(d).formulas[static_cast<std::size_t>(f)].latex,
                                      TermFamily::Slt);
            for (auto const& [t, c] : q) {
                if (mine.count(t)) {
                    oracle.insert(item_id(index, d, f));
                }
            }
        }
        std::set<std::string> got;
        for (auto const& h : hits) {
            got.insert(h.item);
        }
        CHECK(got == oracle);
        spec.k = 2;
        CHECK(search(*li, Query::parse("a+b"), spec).size() == 2);
    }
    SUBCASE("document-level and fused engines")
    {
        auto text = search(*li, Query::parse("quadratic roots"), EngineSpec::parse("bm25-text"));
        REQUIRE_FALSE(text.empty());
        CHECK(text[0].doc_id == "d4");
        CHECK(text[0].formula == -1);
        CHECK(text[0].latex.empty());
        CHECK(text[0].matched_terms == std::vector<std::string>{"txt:quadratic", "txt:roots"});

        auto fused = search(*li, Query::parse("$a+b$ addition"),
                            EngineSpec::parse("fused:rrf:slt+bm25-text"));
        REQUIRE(fused.size() >= 2);
        CHECK(fused[0].item == "d5");
        // slt ties d2 and d5 at 1.0 with d2 first; bm25 puts d5 first.
        CHECK(fused[0].score == doctest::Approx(1.0 / 62 + 1.0 / 61).epsilon(1e-12));

        auto formulas = search(*li, Query::parse("a+b"), EngineSpec::parse("fused:borda:slt+phoc"));
        REQUIRE_FALSE(formulas.empty());
        CHECK(formulas[0].formula >= 0);
        CHECK(formulas[0].latex == "a+b");
    }
    SUBCASE("re-ranking keeps the candidate set")
    {
        auto base = EngineSpec::parse("slt");
        base.k = 1000;
        auto reranked = base;
        reranked.rerank = RerankMethod::TedSlt;
        auto a = search(*li, Query::parse("x^2+y^2"), base);
        auto b = search(*li, Query::parse("x^2+y^2"), reranked);
        std::multiset<std::string> sa, sb;
        for (auto const& h : a) {
            sa.insert(h.item);
        }
        for (auto const& h : b) {
            sb.insert(h.item);
        }
        CHECK(sa == sb);
        CHECK_THROWS_AS((void)search(*li, Query::parse("a"), EngineSpec::parse("bm25-text/mss")),
                        std::invalid_argument);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS((void)search(*li, Query::parse("$$ words"), EngineSpec::parse("slt")),
                        EmptyQuery);
        CHECK_THROWS_AS((void)search(*li, Query::parse("\\frac{a"), EngineSpec::parse("slt")),
                        ParseError);
        auto zero = EngineSpec::parse("slt");
        zero.k = 0;
        CHECK_THROWS_AS((void)search(*li, Query::parse("a"), zero), std::invalid_argument);
    }
    SUBCASE("runs are deterministic and exec-independent")
    {
        SearchOptions serial;
        serial.exec = Exec::Serial;
        for (auto engine : {"fused:rrf:slt+bm25-text", "fused:linear:slt=0.6+dlmf-text=0.4/mss",
                            "phoc", "opt/ted-combined", "fused:interleave:wikimirs+bm25-text"}) {
            INFO(engine);
            auto first = run_text(*li, engine, 10);
            CHECK(first == run_text(*li, engine, 10));
            CHECK(first == run_text(*li, engine, 10, serial));
            std::istringstream in(first);
            auto run = parse_run(in);
            CHECK(run.tag == EngineSpec::parse(engine).run_tag());
            for (auto const& [topic, entries] : run.topics) {
                for (std::size_t i = 0; i < entries.size(); ++i) {
                    CHECK(entries[i].rank == static_cast<int>(i + 1));
                }
            }
        }
    }
}

TEST_CASE("topics files")
{
    std::istringstream ok("# comment\nT1\t$a$ x\n\nT2\tb\r\n");
    auto t = read_topics(ok);
    REQUIRE(t.size() == 2);
    CHECK(t[1].id == "T2");
    CHECK(t[1].query == "b");
    std::istringstream no_tab("T1 a\n");
    CHECK_THROWS_AS((void)read_topics(no_tab), FormatError);
    std::istringstream dup("T1\ta\nT1\tb\n");
    CHECK_THROWS_AS((void)read_topics(dup), FormatError);
}

TEST_CASE("word-problem and autocomplete commands")
{
    testing::TempDir tmp;
    testing::write_file(tmp / "wp.jsonl",
                        R"({"id":"p1","question":"q","equation":"3x=12","answer":"4"})" "\n"
                        R"({"id":"p2","question":"q","equation":"x+1=3","answer":"5"})" "\n"
                        R"({"id":"p3","question":"q","equation":"x^2=4"})" "\n");
    std::ostringstream out;
    double acc = cmd_solve_wp(tmp / "wp.jsonl", SolveMode::Equation, out);
    CHECK(acc == 0.5);
    CHECK(out.str() == "p1\t4\tyes\np2\t2\tno\np3\t-\t-\naccuracy\t0.500000\t1/2\n");

    auto li = fixture_index(tmp);
    std::ostringstream ac;
    cmd_autocomplete(*li, row_of_symbols({"x", "z"}), 5, ac);
    auto lines = ac.str();
    CHECK(lines.starts_with("d3#1\t"));
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 1);
}

TEST_CASE("HTTP API routing")
{
    testing::TempDir tmp;
    ApiServer api;
    auto health = api.handle("GET", "/health", "");
    CHECK(health.status == 503);
    CHECK(json::parse(health.body).at("error") == "index loading");

    auto li = fixture_index(tmp);
    api.swap_index(li);
    health = api.handle("GET", "/health", "");
    REQUIRE(health.status == 200);
    auto h = json::parse(health.body);
    CHECK(h.at("documents") == 5);
    CHECK(h.at("formulas") == 11);
    CHECK(h.at("version").is_string());

    SUBCASE("search matches the library path")
    {
        for (auto [engine, rerank, query] :
             {std::tuple{"slt", "", "a+b"}, std::tuple{"fused:rrf:slt+bm25-text", "", "$a+b$ plus"},
              std::tuple{"opt", "ted-opt", "x^2+y^2=z^2"}, std::tuple{"phoc", "mss", "c^2"}}) {
            INFO(engine);
            json req{{"query", query}, {"engine", engine}, {"k", 4}};
            auto spec = EngineSpec::parse(engine);
            if (*rerank) {
                req["rerank"] = rerank;
                spec.rerank = rerank_from_name(rerank);
            }
            spec.k = 4;
            auto r = api.handle("POST", "/search", req.dump());
            REQUIRE(r.status == 200);
            auto body = json::parse(r.body);
            CHECK(body.at("engine") == spec.run_tag());
            auto lib = search(*li, Query::parse(query), spec);
            REQUIRE(body.at("hits").size() == lib.size());
            for (std::size_t i = 0; i < lib.size(); ++i) {
                auto const& jh = body["hits"][i];
                CHECK(jh.at("docId") == lib[i].doc_id);
                CHECK(jh.at("item") == lib[i].item);
                CHECK(jh.at("score").get<double>() == lib[i].score);
                CHECK(jh.at("latex") == lib[i].latex);
                CHECK(jh.at("matchedTerms").get<std::vector<std::string>>() == lib[i].matched_terms);
                if (lib[i].formula < 0) {
                    CHECK(jh.at("formulaId").is_null());
                } else {
                    CHECK(jh.at("formulaId") == lib[i].formula);
                }
            }
        }
    }
    SUBCASE("client errors")
    {
        auto status = [&](std::string const& body) {
            return api.handle("POST", "/search", body).status;
        };
        CHECK(status(R"({"query":"a+b","engine":"unknown"})") == 400);
        CHECK(status(R"({"query":"a+b","engine":"fused:rrf:slt"})") == 400);
        CHECK(status(R"({"query":"a+b","rerank":"nope"})") == 400);
        CHECK(status(R"({"query":"a+b","k":0})") == 400);
        CHECK(status(R"({"query":"a+b","k":"5"})") == 400);
        CHECK(status(R"({"query":"\\frac{a"})") == 400);
        CHECK(status(R"({"query":""})") == 400);
        CHECK(status(R"({"engine":"slt"})") == 400);
        CHECK(status("not json") == 400);
        CHECK(status("[1,2]") == 400);
        auto r = api.handle("POST", "/search", R"({"query":"a+b","engine":"unknown"})");
        CHECK(json::parse(r.body).at("error").get<std::string>().find("unknown") != std::string::npos);
        CHECK(api.handle("GET", "/search", "").status == 405);
        CHECK(api.handle("GET", "/nothing", "").status == 404);
        CHECK(api.handle("POST", "/autocomplete", R"({"symbols":[]})").status == 400);
        CHECK(api.handle("POST", "/autocomplete", R"({"symbols":[{"label":"x"}]})").status == 400);
    }
    SUBCASE("formula lookup")
    {
        auto r = api.handle("GET", "/formula/d5/2", "");
        REQUIRE(r.status == 200);
        auto f = json::parse(r.body);
        CHECK(f.at("latex") == "(x+3)\\times\\frac{a}{b}");
        CHECK(f.at("text") == "A simple addition example: a plus b.");
        for (auto bad : {"/formula/d5/3", "/formula/d9/0", "/formula/d5/-1", "/formula/d5/x",
                         "/formula/d5", "/formula/"}) {
            INFO(bad);
            CHECK(api.handle("GET", bad, "").status == 404);
        }
    }
    SUBCASE("two symbols of a fixture formula autocomplete to it")
    {
        auto const& index = li->index;
        std::mt19937_64 rng(5);
        for (std::uint32_t s = 0; s < index.formula_count(); ++s) {
            auto [d, f] = index.formula_ref(s);
            auto const& latex = index.doc(d).formulas[static_cast<std::size_t>(f)].latex;
            auto boxes = layout_symbols(parse_latex(latex));
            if (boxes.size() < 2) {
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(0, boxes.size() - 1);
            for (int trial = 0; trial < 5; ++trial) {
                auto i = pick(rng), j = pick(rng);
                if (i == j) {
                    continue;
                }
                json req{{"k", index.formula_count()}};
                req["symbols"] = json::array();
                for (auto const& b : {boxes[i], boxes[j]}) {
                    req["symbols"].push_back(
                        {{"label", b.label}, {"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}});
                }
                auto r = api.handle("POST", "/autocomplete", req.dump());
                REQUIRE(r.status == 200);
                bool found = false;
                auto body = json::parse(r.body);
                for (auto const& c : body.at("candidates")) {
                    found = found || (c.at("docId") == index.doc(d).id && c.at("formulaId") == f);
                }
                INFO(latex, " ", boxes[i].label, " ", boxes[j].label);
                CHECK(found);

                json labels{{"k", index.formula_count()},
                            {"symbols", {boxes[i].label, boxes[j].label}}};
                r = api.handle("POST", "/autocomplete", labels.dump());
                REQUIRE(r.status == 200);
                found = false;
                body = json::parse(r.body);
                for (auto const& c : body.at("candidates")) {
                    found = found || c.at("latex") == latex;
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("HTTP API over a socket with concurrent reloads")
{
    testing::TempDir tmp;
    auto li = fixture_index(tmp);
    testing::write_file(tmp / "one.jsonl", R"({"id":"z","text":"t","formulas":["a+b"]})" "\n");
    std::ostringstream log;
    (void)cmd_index(tmp / "one.jsonl", tmp / "small", false, {}, {}, log);
    auto small = LoadedIndex::load(tmp / "small");

    ApiServer api;
    api.swap_index(li);
    int port = api.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { api.run(); });

    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(10, 0);
    for (int tries = 0; tries < 100; ++tries) {
        if (client.Get("/health")) {
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    auto res = client.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type").starts_with("application/json"));

    std::atomic<bool> done{false};
    std::thread swapper([&] {
        for (int i = 0; !done; ++i) {
            api.swap_index(i % 2 ? li : small);
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
    });
    std::atomic<int> ok{0};
    std::vector<std::thread> clients;
    for (int c = 0; c < 4; ++c) {
        clients.emplace_back([&] {
            httplib::Client cl("127.0.0.1", port);
            for (int i = 0; i < 15; ++i) {
                auto r = cl.Post("/search", R"({"query":"a+b","engine":"slt","k":1})",
                                 "application/json");
                if (r && r->status == 200) {
                    auto hits = json::parse(r->body).at("hits");
                    if (hits.size() == 1 && hits[0].at("latex") == "a+b") {
                        ++ok;
                    }
                }
            }
        });
    }
    for (auto& t : clients) {
        t.join();
    }
    done = true;
    swapper.join();
    CHECK(ok == 60);

    auto missing = client.Get("/formula/nope/0");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    api.stop();
    server.join();
}
