#pragma once

// Symbol tables shared by the LaTeX parser, serializers and the OPT translator.

#include <set>
#include <string>
#include <string_view>

namespace mathfind::detail {

inline std::set<std::string, std::less<>> const& named_function_commands()
{
    static std::set<std::string, std::less<>> const names = {
        "log", "ln", "exp", "sin", "cos", "tan", "cot", "sec", "csc", "arcsin", "arccos",
        "arctan", "sinh", "cosh", "tanh", "lim", "max", "min", "det", "gcd", "deg", "dim"};
    return names;
}

inline std::set<std::string, std::less<>> const& greek_commands()
{
    static std::set<std::string, std::less<>> const names = {
        "alpha", "beta",  "gamma",   "delta",  "epsilon", "varepsilon", "zeta",  "eta",
        "theta", "vartheta", "iota", "kappa",  "lambda",  "mu",         "nu",    "xi",
        "pi",    "varpi", "rho",     "varrho", "sigma",   "varsigma",   "tau",   "upsilon",
        "phi",   "varphi", "chi",    "psi",    "omega",   "Gamma",      "Delta", "Theta",
        "Lambda", "Xi",   "Pi",      "Sigma",  "Upsilon", "Phi",        "Psi",   "Omega"};
    return names;
}

inline bool is_big_operator(std::string_view label)
{
    return label == "\\sum" || label == "\\prod" || label == "\\int";
}

}  // namespace mathfind::detail
