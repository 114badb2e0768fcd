// Command-line front end: index, search, autocomplete, eval, solve-wp, serve.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "mathfind/error.hpp"
#include "mathfind/service/commands.hpp"
#include "mathfind/service/http_api.hpp"
#include "mathfind/version.hpp"

namespace {

using namespace mathfind;

mathfind::ApiServer* g_server = nullptr;

void on_signal(int)
{
    if (g_server) {
        g_server->stop();
    }
}

/// Runs `fn` with stdout or a file opened for `path` ("-" is stdout).
template <class Fn>
void with_output(std::string const& path, Fn&& fn)
{
    if (path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    fn(out);
    if (!out.flush()) {
        throw std::runtime_error("write failed: " + path);
    }
}

ExtractorConfig families_config(std::vector<std::string> const& names)
{
    ExtractorConfig c;
    c.slt = c.opt = c.wikimirs = c.tokens = c.text = false;
    for (auto const& n : names) {
        switch (family_from_name(n)) {
        case TermFamily::Slt: c.slt = true; break;
        case TermFamily::Opt: c.opt = true; break;
        case TermFamily::WikiMirs: c.wikimirs = true; break;
        case TermFamily::Token: c.tokens = true; break;
        case TermFamily::Text: c.text = true; break;
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mathfind: formula-aware search, evaluation and word-problem tools"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key=value file mirroring the flags; flags win");
    app.require_subcommand(1);

    std::string index_dir;
    auto add_index_opt = [&](CLI::App* sub) {
        sub->add_option("--index", index_dir, "index directory")
            ->envname("MATHFIND_INDEX")
            ->required();
    };

    // index
    auto* idx = app.add_subcommand("index", "build an index directory from a collection");
    std::string collection, out_dir;
    bool force = false;
    std::vector<std::string> families{"slt", "opt", "wikimirs", "tokens", "text"};
    int slt_max_path = 1;
    std::vector<int> phoc_levels{1, 2, 3, 4, 5};
    std::string phoc_variant = "axis";
    idx->add_option("--collection", collection, "JSON-lines collection")->required();
    idx->add_option("--out", out_dir, "index directory to write")->required();
    idx->add_flag("--force", force, "overwrite an existing index");
    idx->add_option("--families", families, "term families to index")->delimiter(',');
    idx->add_option("--slt-max-path", slt_max_path, "longest SLT tuple path")
        ->check(CLI::Range(1, 16));
    idx->add_option("--phoc-levels", phoc_levels, "PHOC split levels")->delimiter(',');
    idx->add_option("--phoc-variant", phoc_variant, "axis or concentric")
        ->check(CLI::IsMember({"axis", "concentric"}));

    // search
    auto* srch = app.add_subcommand("search", "write a TREC run for topics or one query");
    add_index_opt(srch);
    std::string topics_path, single_query, engine = "slt", rerank_opt, run_out = "-";
    std::size_t k = 10, depth = 100;
    int rrf_k0 = 60;
    auto* topics_opt = srch->add_option("--topics", topics_path, "topic<TAB>query file");
    auto* query_opt = srch->add_option("--query", single_query, "single query (topic id q)");
    topics_opt->excludes(query_opt);
    srch->add_option("--engine", engine, "engine spec, e.g. slt or fused:rrf:slt+bm25-text");
    srch->add_option("--rerank", rerank_opt, "none, ted-slt, ted-opt, ted-combined, mss, approach0");
    srch->add_option("-k,--k", k, "result depth")->check(CLI::PositiveNumber);
    srch->add_option("--candidate-depth", depth, "candidates per engine before rerank/fusion")
        ->check(CLI::PositiveNumber);
    srch->add_option("--rrf-k0", rrf_k0, "RRF rank offset")->check(CLI::NonNegativeNumber);
    srch->add_option("--out", run_out, "run file (- for stdout)");

    // autocomplete
    auto* ac = app.add_subcommand("autocomplete", "complete a partial formula from symbols");
    add_index_opt(ac);
    std::vector<std::string> symbols;
    std::size_t ac_k = 10;
    ac->add_option("--symbols", symbols, "symbol labels in writing order")
        ->delimiter(',')
        ->required();
    ac->add_option("-k,--k", ac_k, "number of candidates")->check(CLI::PositiveNumber);

    // eval
    auto* ev = app.add_subcommand("eval", "score a run against qrels");
    EvalRequest eval_req;
    std::string qrels_path, eval_run, visual_path, report_out = "-";
    ev->add_option("--qrels", qrels_path, "qrels file")->required();
    ev->add_option("--run", eval_run, "run file")->required();
    ev->add_option("--metrics", eval_req.metrics, "e.g. ndcg_prime,map_prime,p_prime@10,bpref")
        ->delimiter(',')
        ->required();
    ev->add_option("--dedup-visual", visual_path, "item<TAB>visual-id map; enables dedup");
    ev->add_option("--binarize-threshold", eval_req.scale.threshold, "lowest relevant grade");
    ev->add_option("--max-grade", eval_req.scale.max_grade, "highest grade");
    ev->add_option("--out", report_out, "report file (- for stdout)");

    // solve-wp
    auto* wp = app.add_subcommand("solve-wp", "solve word problems and report accuracy");
    std::string problems_path, mode = "equation";
    wp->add_option("--problems", problems_path, "JSON-lines problems")->required();
    wp->add_option("--mode", mode, "equation or aris")->check(CLI::IsMember({"equation", "aris"}));

    // serve
    auto* sv = app.add_subcommand("serve", "serve the JSON API");
    add_index_opt(sv);
    std::string host = "127.0.0.1";
    int port = 8080;
    sv->add_option("--host", host, "bind address");
    sv->add_option("--port", port, "port (0 picks one)")->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        return app.exit(e);
    }

    try {
        if (*idx) {
            RegionScheme scheme;
            scheme.levels = phoc_levels;
            scheme.variant = phoc_variant == "axis" ? RegionVariant::AxisSplits
                                                    : RegionVariant::Concentric;
            auto config = families_config(families);
            config.slt_max_path = slt_max_path;
            auto s = cmd_index(collection, out_dir, force, config, scheme, std::cerr);
            std::cerr << "indexed " << s.documents << " documents, " << s.formulas
                      << " formulas, " << s.terms << " terms\n";
        } else if (*srch) {
            std::vector<Topic> topics;
            if (!topics_path.empty()) {
                topics = read_topics(topics_path);
            } else if (!single_query.empty()) {
                topics.push_back({"q", single_query});
            } else {
                throw std::invalid_argument("give --topics or --query");
            }
            auto spec = EngineSpec::parse(engine);
            if (!rerank_opt.empty()) {
                spec.rerank = rerank_from_name(rerank_opt);
            }
            spec.k = k;
            SearchOptions options;
            options.candidate_depth = depth;
            options.rrf_k0 = rrf_k0;
            auto li = LoadedIndex::load(index_dir);
            with_output(run_out, [&](std::ostream& out) { cmd_search(*li, topics, spec, options, out); });
        } else if (*ac) {
            auto li = LoadedIndex::load(index_dir);
            cmd_autocomplete(*li, row_of_symbols(symbols), ac_k, std::cout);
        } else if (*ev) {
            eval_req.qrels = qrels_path;
            eval_req.run = eval_run;
            if (!visual_path.empty()) {
                eval_req.visual_map = visual_path;
            }
            with_output(report_out, [&](std::ostream& out) { cmd_eval(eval_req, out); });
        } else if (*wp) {
            cmd_solve_wp(problems_path, mode == "aris" ? SolveMode::Aris : SolveMode::Equation,
                         std::cout);
        } else if (*sv) {
            ApiServer server;
            int bound = server.bind(host, port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << host << ':' << bound << std::endl;
            int status = 0;
            std::thread loader([&] {
                try {
                    server.swap_index(LoadedIndex::load(index_dir));
                    std::cerr << "index loaded from " << index_dir << std::endl;
                } catch (std::exception const& e) {
                    std::cerr << "error: " << e.what() << std::endl;
                    status = 1;
                    server.stop();
                }
            });
            server.run();
            loader.join();
            g_server = nullptr;
            return status;
        }
    } catch (DuplicateDocId const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
