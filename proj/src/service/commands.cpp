#include "mathfind/service/commands.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mathfind/error.hpp"
#include "mathfind/eval/qa.hpp"
#include "mathfind/index/collection.hpp"

namespace mathfind {

namespace {

constexpr std::string_view kIndexFiles[] = {"vocab.tsv", "postings.bin", "docs.tsv",
                                            "formulas.tsv", "stats.tsv"};

std::ofstream open_out(std::filesystem::path const& p)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    return out;
}

}  // namespace

IndexSummary cmd_index(std::filesystem::path const& collection, std::filesystem::path const& out,
                       bool force, ExtractorConfig const& config, RegionScheme const& scheme,
                       std::ostream& log)
{
    namespace fs = std::filesystem;
    auto docs = read_collection(collection);
    if (docs.empty()) {
        log << "warning: " << collection.string() << " has no documents\n";
    }
    if (fs::exists(out) && !fs::is_directory(out)) {
        throw std::runtime_error(out.string() + " exists and is not a directory");
    }
    if (!force) {
        for (auto name : kIndexFiles) {
            if (fs::exists(out / name)) {
                throw std::runtime_error(out.string() + " already holds an index; use --force");
            }
        }
        if (fs::exists(out / kPhocFile)) {
            throw std::runtime_error(out.string() + " already holds an index; use --force");
        }
    }
    auto index = InvertedIndex::build(std::move(docs), config);
    auto phoc = PhocIndex::build(index, scheme);
    fs::create_directories(out);
    index.save(out);
    phoc.save(out / kPhocFile);
    auto visual = open_out(out / kVisualFile);
    write_visual_map(visual, index);
    return {index.doc_count(), index.formula_count(), index.term_count()};
}

Run cmd_search(LoadedIndex const& index, std::vector<Topic> const& topics, EngineSpec const& spec,
               SearchOptions const& options, std::ostream& out)
{
    auto run = search_topics(index, topics, spec, options);
    write_run(out, run);
    return run;
}

std::vector<SymbolBox> row_of_symbols(std::vector<std::string> const& labels)
{
    std::vector<SymbolBox> boxes;
    double x = 0.0;
    for (auto const& l : labels) {
        boxes.push_back({l, x, 0.0, x + 1.0, 1.0});
        x += 1.0;
    }
    return boxes;
}

void cmd_autocomplete(LoadedIndex const& index, std::vector<SymbolBox> const& symbols,
                      std::size_t k, std::ostream& out)
{
    for (auto const& h : autocomplete(symbols, index.phoc, k)) {
        char score[32];
        std::snprintf(score, sizeof score, "%.17g", h.score);
        out << item_id(index.index, h.doc, h.formula) << '\t' << score << '\t'
            << tsv_escape(index.index.doc(h.doc).formulas.at(static_cast<std::size_t>(h.formula)).latex)
            << '\n';
    }
}

Report cmd_eval(EvalRequest const& request, std::ostream& out)
{
    if (request.metrics.empty()) {
        throw std::invalid_argument("no metrics requested");
    }
    std::vector<MetricSpec> metrics;
    for (auto const& m : request.metrics) {
        metrics.push_back(MetricSpec::parse(m));
    }
    EvalOptions options;
    options.scale = request.scale;
    if (request.visual_map) {
        options.visual = parse_visual_map(*request.visual_map);
        options.dedup = true;
    }
    auto report = evaluate(parse_qrels(request.qrels), parse_run(request.run), metrics, options);
    write_report(out, report);
    return report;
}

double cmd_solve_wp(std::filesystem::path const& problems, SolveMode mode, std::ostream& out)
{
    std::vector<std::string> answers;
    std::vector<std::string> targets;
    for (auto const& p : read_problems(problems)) {
        std::string predicted;
        try {
            predicted = solve_problem(p, mode);
        } catch (Error const&) {
            predicted = "-";
        }
        std::string verdict = "-";
        if (p.answer) {
            bool ok = predicted != "-" && answers_equivalent(predicted, *p.answer);
            verdict = ok ? "yes" : "no";
            answers.push_back(predicted);
            targets.push_back(*p.answer);
        }
        out << p.id << '\t' << predicted << '\t' << verdict << '\n';
    }
    double acc = answers.empty() ? 0.0 : accuracy(answers, targets);
    char buf[64];
    std::snprintf(buf, sizeof buf, "accuracy\t%.6f\t", acc);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        correct += answers[i] != "-" && answers_equivalent(answers[i], targets[i]);
    }
    out << buf << correct << '/' << answers.size() << '\n';
    return acc;
}

}  // namespace mathfind
