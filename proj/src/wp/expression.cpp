#include "mathfind/wp/expression.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "mathfind/error.hpp"

namespace mathfind {

namespace {

std::optional<Rational> lookup(NumberBinding const& b, std::string_view token)
{
    for (auto const& [t, v] : b) {
        if (t == token) {
            return v;
        }
    }
    return std::nullopt;
}

Rational leaf_value(std::string const& label, NumberBinding const& b)
{
    if (auto v = lookup(b, label)) {
        return *v;
    }
    return Rational::parse(label);
}

std::int64_t integer_exponent(Rational const& e)
{
    if (!e.is_integer() || e.num() > 64 || e.num() < -64) {
        throw EvalError("only small integer exponents are supported");
    }
    return e.num();
}

enum class Op { Add, Sub, Mul, Div, Pow, Neg };

std::optional<Op> op_of(std::string_view label, std::size_t arity)
{
    if (label == "+") {
        return Op::Add;
    }
    if (label == "-") {
        return arity == 1 ? Op::Neg : Op::Sub;
    }
    if (label == "times" || label == "cdot" || label == "ast") {
        return Op::Mul;
    }
    if (label == "divide") {
        return Op::Div;
    }
    if (label == "sup") {
        return Op::Pow;
    }
    return std::nullopt;
}

Rational apply(Op op, Rational const& a, Rational const& b)
{
    switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return a.pow(integer_exponent(b));
    case Op::Neg: return -a;
    }
    return a;
}

Rational eval_node(OptTree const& t, NodeId id, NumberBinding const& b)
{
    auto const& kids = t.children(id);
    auto const& label = t.symbol(id).label;
    if (kids.empty()) {
        return leaf_value(label, b);
    }
    auto op = op_of(label, kids.size());
    if (!op) {
        throw EvalError("unsupported operator " + label);
    }
    if (*op == Op::Neg) {
        return -eval_node(t, kids[0], b);
    }
    if ((*op == Op::Sub || *op == Op::Div || *op == Op::Pow) && kids.size() != 2) {
        throw EvalError("operator " + label + " needs two arguments");
    }
    Rational acc = eval_node(t, kids[0], b);
    for (std::size_t i = 1; i < kids.size(); ++i) {
        acc = apply(*op, acc, eval_node(t, kids[i], b));
    }
    return acc;
}

char const* token_of(Op op)
{
    switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Neg: return "neg";
    }
    return "?";
}

void emit(OptTree const& t, NodeId id, Traversal mode, std::vector<std::string>& out)
{
    auto const& kids = t.children(id);
    if (kids.empty()) {
        out.push_back(t.symbol(id).label);
        return;
    }
    auto op = op_of(t.symbol(id).label, kids.size());
    if (!op) {
        throw EvalError("unsupported operator " + t.symbol(id).label);
    }
    std::string tok = token_of(*op);
    if (*op == Op::Neg) {
        if (mode == Traversal::OpsFirst) {
            out.push_back(tok);
        }
        emit(t, kids[0], mode, out);
        if (mode == Traversal::ArgsFirst) {
            out.push_back(tok);
        }
        return;
    }
    // a+b+c is ((a+b)+c)
    if (mode == Traversal::OpsFirst) {
        for (std::size_t i = 1; i < kids.size(); ++i) {
            out.push_back(tok);
        }
        emit(t, kids[0], mode, out);
        for (std::size_t i = 1; i < kids.size(); ++i) {
            emit(t, kids[i], mode, out);
        }
    } else {
        emit(t, kids[0], mode, out);
        for (std::size_t i = 1; i < kids.size(); ++i) {
            emit(t, kids[i], mode, out);
            out.push_back(tok);
        }
    }
}

std::optional<std::pair<Op, int>> operator_token(std::string_view tok)
{
    static std::map<std::string, std::pair<Op, int>, std::less<>> const ops{
        {"+", {Op::Add, 2}},     {"-", {Op::Sub, 2}},      {"*", {Op::Mul, 2}},
        {"times", {Op::Mul, 2}}, {"×", {Op::Mul, 2}}, {"/", {Op::Div, 2}},
        {"divide", {Op::Div, 2}}, {"÷", {Op::Div, 2}}, {"^", {Op::Pow, 2}},
        {"neg", {Op::Neg, 1}},
    };
    if (auto it = ops.find(tok); it != ops.end()) {
        return it->second;
    }
    return std::nullopt;
}

// Linear form c0 + c1 * unknown.
struct Linear {
    Rational c0;
    Rational c1;
};

Linear linear_node(OptTree const& t, NodeId id, std::string const& x, NumberBinding const& b)
{
    auto const& kids = t.children(id);
    auto const& label = t.symbol(id).label;
    if (kids.empty()) {
        if (label == x) {
            return {0, 1};
        }
        return {leaf_value(label, b), 0};
    }
    auto op = op_of(label, kids.size());
    if (!op) {
        throw EvalError("unsupported operator " + label);
    }
    if (*op == Op::Neg) {
        auto v = linear_node(t, kids[0], x, b);
        return {-v.c0, -v.c1};
    }
    if ((*op == Op::Sub || *op == Op::Div || *op == Op::Pow) && kids.size() != 2) {
        throw EvalError("operator " + label + " needs two arguments");
    }
    Linear acc = linear_node(t, kids[0], x, b);
    for (std::size_t i = 1; i < kids.size(); ++i) {
        Linear r = linear_node(t, kids[i], x, b);
        switch (*op) {
        case Op::Add: acc = {acc.c0 + r.c0, acc.c1 + r.c1}; break;
        case Op::Sub: acc = {acc.c0 - r.c0, acc.c1 - r.c1}; break;
        case Op::Mul:
            if (!acc.c1.is_zero() && !r.c1.is_zero()) {
                throw NonLinear("product of two terms in " + x);
            }
            acc = {acc.c0 * r.c0, acc.c0 * r.c1 + acc.c1 * r.c0};
            break;
        case Op::Div:
            if (!r.c1.is_zero()) {
                throw NonLinear("division by a term in " + x);
            }
            acc = {acc.c0 / r.c0, acc.c1 / r.c0};
            break;
        case Op::Pow: {
            if (!r.c1.is_zero()) {
                throw NonLinear(x + " in an exponent");
            }
            auto e = integer_exponent(r.c0);
            if (acc.c1.is_zero()) {
                acc = {acc.c0.pow(e), 0};
            } else if (e == 1) {
                // unchanged
            } else if (e == 0) {
                acc = {1, 0};
            } else {
                throw NonLinear(x + " raised to a power");
            }
            break;
        }
        case Op::Neg: break;
        }
    }
    return acc;
}

}  // namespace

Rational evaluate_opt(OptTree const& expr, NumberBinding const& bindings)
{
    if (expr.root() == kNoNode) {
        throw EvalError("empty expression");
    }
    return eval_node(expr, expr.root(), bindings);
}

std::vector<std::string> traversal(OptTree const& expr, Traversal mode)
{
    std::vector<std::string> out;
    if (expr.root() != kNoNode) {
        emit(expr, expr.root(), mode, out);
    }
    return out;
}

Rational eval_traversal(std::vector<std::string> const& sequence, Traversal mode,
                        NumberBinding const& bindings)
{
    if (mode == Traversal::ArgsFirst) {
        std::vector<Rational> stack;
        for (auto const& tok : sequence) {
            auto op = operator_token(tok);
            if (!op) {
                stack.push_back(leaf_value(tok, bindings));
                continue;
            }
            auto [kind, arity] = *op;
            if (stack.size() < static_cast<std::size_t>(arity)) {
                throw MalformedSequence("operator '" + tok + "' is missing arguments");
            }
            Rational b = stack.back();
            if (arity == 1) {
                stack.back() = apply(kind, b, b);
                continue;
            }
            stack.pop_back();
            stack.back() = apply(kind, stack.back(), b);
        }
        if (stack.size() != 1) {
            throw MalformedSequence(stack.empty() ? "empty sequence" : "leftover arguments");
        }
        return stack.back();
    }

    struct Frame {
        Op op;
        int arity;
        std::vector<Rational> args;
    };
    std::vector<Frame> frames;
    std::optional<Rational> result;
    for (auto const& tok : sequence) {
        if (result) {
            throw MalformedSequence("tokens after a complete expression");
        }
        if (auto op = operator_token(tok)) {
            frames.push_back({op->first, op->second, {}});
            continue;
        }
        Rational v = leaf_value(tok, bindings);
        // close every frame this value completes
        while (true) {
            if (frames.empty()) {
                result = v;
                break;
            }
            auto& f = frames.back();
            f.args.push_back(v);
            if (static_cast<int>(f.args.size()) < f.arity) {
                break;
            }
            v = f.arity == 1 ? apply(f.op, f.args[0], f.args[0]) : apply(f.op, f.args[0], f.args[1]);
            frames.pop_back();
        }
    }
    if (!result) {
        throw MalformedSequence(frames.empty() ? "empty sequence" : "operator is missing arguments");
    }
    return *result;
}

NumberSubstitution substitute_numbers(std::string_view question)
{
    NumberSubstitution out;
    std::size_t i = 0;
    auto digit = [&](std::size_t k) {
        return k < question.size() && std::isdigit(static_cast<unsigned char>(question[k])) != 0;
    };
    auto word_char = [&](std::size_t k) {
        return std::isalnum(static_cast<unsigned char>(question[k])) != 0 || question[k] == '_';
    };
    while (i < question.size()) {
        // numerals embedded in words (n1, x2) are left alone
        if (digit(i) && (i == 0 || !word_char(i - 1))) {
            std::size_t j = i;
            while (digit(j)) {
                ++j;
            }
            if (j + 1 < question.size() && question[j] == '.' && digit(j + 1)) {
                ++j;
                while (digit(j)) {
                    ++j;
                }
            }
            if (j == question.size() || !word_char(j)) {
                auto token = "n" + std::to_string(out.binding.size() + 1);
                out.binding.emplace_back(token, Rational::parse(question.substr(i, j - i)));
                out.slots.push_back({out.templ.size(), std::string(question.substr(i, j - i))});
                out.templ += token;
                i = j;
                continue;
            }
            while (j < question.size() && word_char(j)) {
                ++j;
            }
            out.templ += question.substr(i, j - i);
            i = j;
            continue;
        }
        out.templ += question[i++];
    }
    return out;
}

std::string rebind(NumberSubstitution const& s)
{
    std::string out;
    std::size_t i = 0;
    for (std::size_t k = 0; k < s.slots.size(); ++k) {
        auto const& slot = s.slots[k];
        out += s.templ.substr(i, slot.pos - i);
        out += slot.numeral;
        i = slot.pos + s.binding.at(k).first.size();
    }
    return out + s.templ.substr(std::min(i, s.templ.size()));
}

Rational solve_linear(OptTree const& equation, std::string const& unknown, NumberBinding const& bindings)
{
    auto root = equation.root();
    if (root == kNoNode || equation.symbol(root).label != "=" || equation.children(root).size() != 2) {
        throw Unsolvable("expected an equation with one '='");
    }
    auto l = linear_node(equation, equation.children(root)[0], unknown, bindings);
    auto r = linear_node(equation, equation.children(root)[1], unknown, bindings);
    Rational a = l.c1 - r.c1;
    Rational c = r.c0 - l.c0;
    if (a.is_zero()) {
        throw Unsolvable(c.is_zero() ? "every value of " + unknown + " is a solution"
                                     : "no value of " + unknown + " is a solution");
    }
    return c / a;
}

Rational evaluate_at(OptTree const& expr, std::string const& unknown, Rational value,
                     NumberBinding const& bindings)
{
    auto b = bindings;
    b.emplace(b.begin(), unknown, value);
    return evaluate_opt(expr, b);
}

}  // namespace mathfind
