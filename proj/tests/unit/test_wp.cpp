#include <random>
#include <sstream>

#include "doctest.h"
#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/wp/aris.hpp"
#include "mathfind/wp/expression.hpp"
#include "mathfind/wp/problems.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace mathfind;

namespace {

OptTree opt(std::string const& latex)
{
    return slt_to_opt(parse_latex(latex));
}

NumberBinding const kPencils{{"n1", 3}, {"n2", 5}, {"n3", 9}};

std::vector<std::string> seq(std::string const& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) {
        out.push_back(t);
    }
    return out;
}

}  // namespace

TEST_CASE("rational arithmetic")
{
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(6, -4).str() == "-3/2");
    CHECK(Rational::parse("2.50") == Rational(5, 2));
    CHECK(Rational::parse("-.75") == Rational(-3, 4));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(2).pow(10) == Rational(1024));
    CHECK(Rational(2).pow(-2) == Rational(1, 4));
    CHECK(Rational(1, 3).decimal() == "0.333333333333");
    CHECK(Rational(5, 2).decimal() == "2.5");
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), EvalError);
    CHECK_THROWS_AS((void)Rational::parse("1e5"), EvalError);
    CHECK_THROWS_AS((void)Rational::parse("."), EvalError);
    CHECK_THROWS_AS((void)(Rational(INT64_MAX) * Rational(3)), EvalError);
}

TEST_CASE("expression evaluation")
{
    CHECK(evaluate_opt(opt("(3+5)\\times 9")) == Rational(72));
    CHECK(evaluate_opt(opt("7")) == Rational(7));
    auto tmpl = opt("(n_1+n_2)\\times n_3");
    // n_1 is a subscripted variable in LaTeX; bind the flat tokens instead
    OptTree t;
    auto n1 = t.add_node({"n1", SymbolKind::Variable});
    auto n2 = t.add_node({"n2", SymbolKind::Variable});
    auto n3 = t.add_node({"n3", SymbolKind::Variable});
    auto plus = t.add_node({"+", SymbolKind::OpUnordered}, {n1, n2});
    t.set_root(t.add_node({"times", SymbolKind::OpUnordered}, {plus, n3}));
    CHECK(evaluate_opt(t, kPencils) == Rational(72));
    CHECK(evaluate_opt(opt("\\frac{1}{2}+2^3-(-1)")) == Rational(19, 2));
    CHECK(evaluate_opt(opt("6\\div 4")) == Rational(3, 2));
    CHECK(evaluate_opt(opt("2\\cdot 3\\cdot 4")) == Rational(24));
    CHECK_THROWS_AS((void)evaluate_opt(opt("1/(2-2)")), EvalError);
    CHECK_THROWS_AS((void)evaluate_opt(opt("y+1")), EvalError);
    CHECK_THROWS_AS((void)evaluate_opt(opt("\\sqrt{4}")), EvalError);
    CHECK_THROWS_AS((void)evaluate_opt(tmpl), EvalError);
}

TEST_CASE("stack traversals")
{
    CHECK(eval_traversal(seq("n1 n2 + n3 *"), Traversal::ArgsFirst, kPencils) == Rational(72));
    CHECK(eval_traversal(seq("* + n1 n2 n3"), Traversal::OpsFirst, kPencils) == Rational(72));
    CHECK(eval_traversal(seq("n1 n2 + n3 ×"), Traversal::ArgsFirst, kPencils) == Rational(72));
    CHECK_THROWS_AS((void)eval_traversal(seq("n1 +"), Traversal::ArgsFirst, kPencils), MalformedSequence);
    CHECK_THROWS_AS((void)eval_traversal(seq("n1 n2"), Traversal::ArgsFirst, kPencils), MalformedSequence);
    CHECK_THROWS_AS((void)eval_traversal({}, Traversal::ArgsFirst), MalformedSequence);
    CHECK_THROWS_AS((void)eval_traversal(seq("+ n1"), Traversal::OpsFirst, kPencils), MalformedSequence);
    CHECK_THROWS_AS((void)eval_traversal(seq("+ n1 n2 n3"), Traversal::OpsFirst, kPencils), MalformedSequence);
    CHECK_THROWS_AS((void)eval_traversal(seq("n1 n9 +"), Traversal::ArgsFirst, kPencils), EvalError);

    auto pencils = opt("(3+5)\\times 9");
    CHECK(traversal(pencils, Traversal::ArgsFirst) == seq("3 5 + 9 *"));
    CHECK(traversal(pencils, Traversal::OpsFirst) == seq("* + 3 5 9"));
    auto neg = opt("-2+3");
    CHECK(eval_traversal(traversal(neg, Traversal::OpsFirst), Traversal::OpsFirst) == Rational(1));
    CHECK(eval_traversal(traversal(neg, Traversal::ArgsFirst), Traversal::ArgsFirst) == Rational(1));
}

TEST_CASE("three evaluation paths agree on random trees")
{
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        auto t = testing::random_arith_tree(rng, 10);
        CHECK(t.size() <= 10);
        NumberBinding b{{"n1", Rational(std::uniform_int_distribution<int>(1, 9)(rng))},
                        {"n2", Rational(std::uniform_int_distribution<int>(1, 9)(rng))},
                        {"n3", Rational(std::uniform_int_distribution<int>(1, 9)(rng))}};
        bool ok = true;
        double expect = testing::arith_value_oracle(t, t.root(), b, ok);
        if (!ok) {
            CHECK_THROWS_AS((void)evaluate_opt(t, b), EvalError);
            CHECK_THROWS_AS((void)eval_traversal(traversal(t, Traversal::ArgsFirst), Traversal::ArgsFirst, b),
                            EvalError);
            CHECK_THROWS_AS((void)eval_traversal(traversal(t, Traversal::OpsFirst), Traversal::OpsFirst, b),
                            EvalError);
            continue;
        }
        auto v = evaluate_opt(t, b);
        CHECK(v.to_double() == doctest::Approx(expect).epsilon(1e-9));
        CHECK(eval_traversal(traversal(t, Traversal::ArgsFirst), Traversal::ArgsFirst, b) == v);
        CHECK(eval_traversal(traversal(t, Traversal::OpsFirst), Traversal::OpsFirst, b) == v);
        ++compared;
    }
    CHECK(compared > 800);
}

TEST_CASE("number substitution")
{
    std::string const q = "There are 3 boys and 5 girls in a group. Each person wants to buy 9 pencils.";
    auto s = substitute_numbers(q);
    CHECK(s.templ == "There are n1 boys and n2 girls in a group. Each person wants to buy n3 pencils.");
    CHECK(s.binding == kPencils);
    CHECK(rebind(s) == q);

    auto none = substitute_numbers("No numbers here.");
    CHECK(none.templ == "No numbers here.");
    CHECK(none.binding.empty());

    auto twice = substitute_numbers("7 and 7");
    CHECK(twice.templ == "n1 and n2");
    CHECK(twice.binding == NumberBinding{{"n1", 7}, {"n2", 7}});

    auto dec = substitute_numbers("pay 2.50 for x2 and n1 items, 4.");
    CHECK(dec.templ == "pay n1 for x2 and n1 items, n2.");
    CHECK(dec.binding == NumberBinding{{"n1", Rational(5, 2)}, {"n2", 4}});
    CHECK(rebind(dec) == "pay 2.50 for x2 and n1 items, 4.");

    std::mt19937_64 rng(8);
    char const* const words[] = {"apples", "n1", "x", "3", "12.5", "007", "a1", "cost", "4,", "(9)", "."};
    for (int i = 0; i < 500; ++i) {
        std::string text;
        int n = static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) {
            text += words[rng() % 11];
            text += (rng() % 3 == 0) ? "" : " ";
        }
        auto sub = substitute_numbers(text);
        CHECK(rebind(sub) == text);
        CHECK(sub.slots.size() == sub.binding.size());
    }
}

TEST_CASE("linear equations")
{
    CHECK(solve_linear(opt("x+(x+1)=7")) == Rational(3));
    CHECK(solve_linear(opt("x=5+3")) == Rational(8));
    CHECK(solve_linear(opt("\\frac{x}{2}-1=4")) == Rational(10));
    CHECK(solve_linear(opt("3(x-2)=x")) == Rational(3));
    CHECK(solve_linear(opt("y^1+2=0"), "y") == Rational(-2));
    CHECK_THROWS_AS((void)solve_linear(opt("2x=2x+1")), Unsolvable);
    CHECK_THROWS_AS((void)solve_linear(opt("x=x")), Unsolvable);
    CHECK_THROWS_AS((void)solve_linear(opt("x^2=4")), NonLinear);
    CHECK_THROWS_AS((void)solve_linear(opt("x\\times x=4")), NonLinear);
    CHECK_THROWS_AS((void)solve_linear(opt("\\frac{1}{x}=4")), NonLinear);
    CHECK_THROWS_AS((void)solve_linear(opt("x+1")), Unsolvable);

    // residual check on random linear equations a*x + b = c*x + d
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int i = 0; i < 300; ++i) {
        int a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
        auto lhs = "(" + std::to_string(a) + ")x+(" + std::to_string(b) + ")";
        auto rhs = "(" + std::to_string(c) + ")x+(" + std::to_string(d) + ")";
        auto eq = opt(lhs + "=" + rhs);
        if (a == c) {
            CHECK_THROWS_AS((void)solve_linear(eq), Unsolvable);
            continue;
        }
        auto x = solve_linear(eq);
        auto l = evaluate_at(opt(lhs), "x", x);
        auto r = evaluate_at(opt(rhs), "x", x);
        CHECK(std::abs((l - r).to_double()) < 1e-9);
    }
}

TEST_CASE("word problems in equation mode")
{
    std::istringstream in(
        R"({"id":"pencils","question":"There are 3 boys and 5 girls in a group. Each person wants to buy 9 pencils. How many pencils do they need to buy altogether?","equation":"\\chi=(3+5)\\times 9","answer":"72"})"
        "\n"
        R"({"id":"consecutive","question":"Find two consecutive integers whose sum is 7.","equation":"x+(x+1)=7","targets":["x","x+1"],"answer":"3, 4"})"
        "\n\n"
        R"({"id":"pens","question":"Sarah has 5 pens, David has 3 pens. How many pens do they have?","equation":"x=5+3","answer":8})"
        "\n"
        R"({"id":"arith","question":"What is (3+5) times 9?","equation":"(3+5)\\times 9"})");
    auto problems = read_problems(in);
    REQUIRE(problems.size() == 4);
    CHECK(problems[2].answer == "8");
    CHECK_FALSE(problems[3].answer.has_value());
    CHECK(solve_problem(problems[0], SolveMode::Equation) == "72");
    CHECK(solve_problem(problems[1], SolveMode::Equation) == "3, 4");
    CHECK(solve_problem(problems[2], SolveMode::Equation) == "8");
    CHECK(solve_problem(problems[3], SolveMode::Equation) == "72");
    CHECK_THROWS_AS((void)solve_problem({"q", "?", std::nullopt, {}, std::nullopt}, SolveMode::Equation), Error);

    std::istringstream bad("{\"id\":\"x\"}\n{");
    try {
        (void)read_problems(bad);
        FAIL("expected FormatError");
    } catch (FormatError const& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("ARIS state machine")
{
    std::string const sarah =
        "Sarah had 5 black pens and 3 blue pens. She gave some of her black pens to Jack. "
        "Jack has 8 black pens. Sarah has 3 black pens left. How many black pens did Jack have?";
    auto sol = aris_solve_text(sarah);
    CHECK(sol.answer == Rational(6));
    REQUIRE(sol.states.size() == 4);
    CHECK(sol.states[1].category == VerbCategory::NegativeTransfer);
    CHECK(sol.states[1].containers.size() == 2);
    CHECK(sol.states[0].containers.size() == 1);
    CHECK(sol.states[0].containers[0].entities.size() == 2);
    CHECK(sol.unknowns == std::vector<std::string>{"L1", "J0"});
    CHECK(sol.solved.at(0) == Rational(2));

    CHECK(aris_solve_text("A had 5 pens. A lost 2 pens. How many pens does A have?").answer == Rational(3));
    CHECK(aris_solve_text("Tom has 4 apples. Tom received 3 apples from Ann. Ann has 1 apple. "
                          "How many apples did Ann have?")
              .answer == Rational(4));
    CHECK(aris_solve_text("Tom has 4 apples. Tom received 3 apples from Ann. Ann has 1 apple. "
                          "How many apples does Tom have?")
              .answer == Rational(7));
    CHECK(aris_solve_text("Ann planted 3 trees with Bob. Bob has 5 trees. How many trees did Bob have?")
              .answer == Rational(2));
    CHECK(aris_solve_text("Ann had 2 red balls and 3 blue balls. How many balls does Ann have?").answer ==
          Rational(5));

    // reordering observations that assert constraints keeps the answer
    CHECK(aris_solve_text("Sarah had 5 black pens. She gave some black pens to Jack. Sarah has 3 black pens. "
                          "Jack has 8 black pens. How many black pens did Jack have?")
              .answer == Rational(6));

    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens. How many cups does A have?"), Unsolvable);
    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens. How many pens does B have?"), Unsolvable);
    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens. A gave some pens to B. How many pens does B have?"),
                    Unsolvable);
    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens. A juggled 2 pens. How many pens does A have?"),
                    UnknownVerb);
    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens. A has 6 pens. How many pens does A have?"), Unsolvable);
    CHECK_THROWS_AS((void)aris_solve_text("A had 5 pens."), Error);
    CHECK_THROWS_AS((void)aris_solve_text("A gave 5 pens. How many pens does A have?"), Error);

    WordProblem p{"aris", sarah, std::nullopt, {}, "6"};
    CHECK(solve_problem(p, SolveMode::Aris) == "6");
}
