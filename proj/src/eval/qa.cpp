#include "mathfind/eval/qa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mathfind/error.hpp"

namespace mathfind {

namespace {

void check_sizes(std::vector<std::string> const& a, std::vector<std::string> const& t)
{
    if (a.size() != t.size()) {
        throw std::invalid_argument("answers and targets differ in length");
    }
}

std::string trim_lower(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        out.push_back(trim_lower(s.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool parse_number(std::string const& s, double& v)
{
    if (s.empty()) {
        return false;
    }
    std::size_t used = 0;
    try {
        v = std::stod(s, &used);
    } catch (std::exception const&) {
        return false;
    }
    return used == s.size() && std::isfinite(v);
}

std::map<std::string, int> token_bag(std::string_view s)
{
    std::map<std::string, int> out;
    std::istringstream ss{std::string(s)};
    for (std::string t; ss >> t;) {
        ++out[t];
    }
    return out;
}

}  // namespace

double exact_match(std::vector<std::string> const& answers, std::vector<std::string> const& targets)
{
    check_sizes(answers, targets);
    if (answers.empty()) {
        return 0.0;
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        n += answers[i] == targets[i] ? 1 : 0;
    }
    return static_cast<double>(n) / static_cast<double>(answers.size());
}

bool answers_equivalent(std::string_view answer, std::string_view target, double rel_tol)
{
    auto a = split_list(answer);
    auto t = split_list(target);
    if (a.size() != t.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = 0, y = 0;
        if (parse_number(a[i], x) && parse_number(t[i], y)) {
            if (std::abs(x - y) > rel_tol * std::max(std::abs(x), std::abs(y))) {
                return false;
            }
        } else if (a[i] != t[i]) {
            return false;
        }
    }
    return true;
}

double accuracy(std::vector<std::string> const& answers, std::vector<std::string> const& targets,
                double rel_tol)
{
    check_sizes(answers, targets);
    if (answers.empty()) {
        return 0.0;
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        n += answers_equivalent(answers[i], targets[i], rel_tol) ? 1 : 0;
    }
    return static_cast<double>(n) / static_cast<double>(answers.size());
}

double token_f1(std::string_view answer, std::vector<std::string> const& targets)
{
    auto a = token_bag(answer);
    double best = 0.0;
    for (auto const& target : targets) {
        auto t = token_bag(target);
        if (a.empty() || t.empty()) {
            best = std::max(best, a.empty() && t.empty() ? 1.0 : 0.0);
            continue;
        }
        int common = 0, na = 0, nt = 0;
        for (auto const& [tok, c] : a) {
            na += c;
            if (auto it = t.find(tok); it != t.end()) {
                common += std::min(c, it->second);
            }
        }
        for (auto const& [tok, c] : t) {
            nt += c;
        }
        if (common == 0) {
            continue;
        }
        double p = static_cast<double>(common) / na;
        double r = static_cast<double>(common) / nt;
        best = std::max(best, 2 * p * r / (p + r));
    }
    return best;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double normalized_edit_distance(std::string_view a, std::string_view b)
{
    auto n = std::max(a.size(), b.size());
    return n == 0 ? 0.0 : static_cast<double>(edit_distance(a, b)) / static_cast<double>(n);
}

double perplexity(std::vector<double> const& probabilities)
{
    if (probabilities.empty()) {
        throw EvalError("perplexity needs at least one probability");
    }
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw EvalError("probability outside (0,1]: " + std::to_string(p));
        }
        sum += 1.0 / p;
    }
    return sum / static_cast<double>(probabilities.size());
}

}  // namespace mathfind
