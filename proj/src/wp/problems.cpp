#include "mathfind/wp/problems.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/formula/opt.hpp"
#include "mathfind/wp/aris.hpp"
#include "mathfind/wp/expression.hpp"

namespace mathfind {

namespace {

OptTree opt_of(std::string const& latex)
{
    return slt_to_opt(parse_latex(latex));
}

std::set<std::string> variables(OptTree const& t)
{
    std::set<std::string> out;
    for (auto id : t.preorder()) {
        if (t.is_leaf(id) && t.symbol(id).kind == SymbolKind::Variable) {
            out.insert(t.symbol(id).label);
        }
    }
    return out;
}

}  // namespace

std::vector<WordProblem> read_problems(std::istream& in)
{
    std::vector<WordProblem> out;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            WordProblem p;
            p.id = j.at("id").get<std::string>();
            p.question = j.at("question").get<std::string>();
            if (j.contains("equation")) {
                p.equation = j["equation"].get<std::string>();
            }
            if (j.contains("targets")) {
                p.targets = j["targets"].get<std::vector<std::string>>();
            }
            if (j.contains("answer")) {
                auto const& a = j["answer"];
                p.answer = a.is_string() ? a.get<std::string>() : a.dump();
            }
            out.push_back(std::move(p));
        } catch (nlohmann::json::exception const& e) {
            throw FormatError(e.what(), n);
        }
    }
    return out;
}

std::vector<WordProblem> read_problems(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_problems(in);
}

std::string solve_problem(WordProblem const& problem, SolveMode mode)
{
    if (mode == SolveMode::Aris) {
        return aris_solve_text(problem.question).answer.decimal();
    }
    if (!problem.equation) {
        throw Error("problem " + problem.id + " has no equation");
    }
    auto eq = opt_of(*problem.equation);
    auto root = eq.root();
    if (root == kNoNode || eq.symbol(root).label != "=") {
        return evaluate_opt(eq).decimal();
    }
    auto vars = variables(eq);
    if (vars.size() != 1) {
        throw Unsolvable("equation of problem " + problem.id + " needs exactly one unknown");
    }
    auto const unknown = *vars.begin();
    auto value = solve_linear(eq, unknown);
    if (problem.targets.empty()) {
        return value.decimal();
    }
    std::string out;
    for (auto const& t : problem.targets) {
        out += (out.empty() ? "" : ", ") + evaluate_at(opt_of(t), unknown, value).decimal();
    }
    return out;
}

}  // namespace mathfind
