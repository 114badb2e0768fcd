#include "mathfind/eval/trec.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mathfind/error.hpp"

namespace mathfind {

namespace {

std::vector<std::string> fields(std::string const& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string f; ss >> f;) {
        out.push_back(std::move(f));
    }
    return out;
}

int to_int(std::string const& s, std::size_t line, char const* what)
{
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw FormatError(std::string("bad ") + what + " '" + s + "'", line);
    }
    return v;
}

double to_double(std::string const& s, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (std::exception const&) {
        throw FormatError("bad score '" + s + "'", line);
    }
    if (used != s.size()) {
        throw FormatError("bad score '" + s + "'", line);
    }
    return v;
}

std::ifstream open(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return in;
}

bool blank(std::string const& line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::optional<int> Qrels::grade(std::string_view topic, std::string_view item) const
{
    auto t = topics.find(topic);
    if (t == topics.end()) {
        return std::nullopt;
    }
    auto i = t->second.find(item);
    if (i == t->second.end()) {
        return std::nullopt;
    }
    return i->second;
}

Judgments const& Qrels::judgments(std::string_view topic) const
{
    static Judgments const empty;
    auto t = topics.find(topic);
    return t == topics.end() ? empty : t->second;
}

std::vector<std::string> Run::ranking(std::string_view topic) const
{
    std::vector<std::string> out;
    if (auto t = topics.find(topic); t != topics.end()) {
        for (auto const& e : t->second) {
            out.push_back(e.item);
        }
    }
    return out;
}

Qrels parse_qrels(std::istream& in)
{
    Qrels out;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (blank(line)) {
            continue;
        }
        auto f = fields(line);
        if (f.size() != 4) {
            throw FormatError("expected 4 fields in qrels line", n);
        }
        int grade = to_int(f[3], n, "grade");
        if (grade < 0) {
            throw FormatError("negative grade", n);
        }
        if (!out.topics[f[0]].emplace(f[2], grade).second) {
            throw FormatError("duplicate judgment for " + f[0] + " " + f[2], n);
        }
    }
    return out;
}

Qrels parse_qrels(std::filesystem::path const& path)
{
    auto in = open(path);
    return parse_qrels(in);
}

Run parse_run(std::istream& in)
{
    Run out;
    std::map<std::string, std::set<std::string>> seen;
    std::map<std::string, std::size_t> last_line;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (blank(line)) {
            continue;
        }
        auto f = fields(line);
        if (f.size() != 6) {
            throw FormatError("expected 6 fields in run line", n);
        }
        RunEntry e{f[2], to_int(f[3], n, "rank"), to_double(f[4], n)};
        if (e.rank < 1) {
            throw FormatError("rank must be positive", n);
        }
        if (out.tag.empty()) {
            out.tag = f[5];
        }
        if (!seen[f[0]].insert(e.item).second) {
            throw FormatError("duplicate item " + e.item + " for topic " + f[0], n);
        }
        out.topics[f[0]].push_back(std::move(e));
        last_line[f[0]] = n;
    }
    for (auto& [topic, entries] : out.topics) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](auto const& a, auto const& b) { return a.rank < b.rank; });
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].rank != static_cast<int>(i + 1)) {
                throw FormatError("ranks of topic " + topic + " are not 1..n", last_line[topic]);
            }
        }
    }
    return out;
}

Run parse_run(std::filesystem::path const& path)
{
    auto in = open(path);
    return parse_run(in);
}

void write_run(std::ostream& out, Run const& run)
{
    char buf[64];
    for (auto const& [topic, entries] : run.topics) {
        for (auto const& e : entries) {
            std::snprintf(buf, sizeof buf, "%.17g", e.score);
            out << topic << " Q0 " << e.item << ' ' << e.rank << ' ' << buf << ' ' << run.tag
                << '\n';
        }
    }
}

void write_qrels(std::ostream& out, Qrels const& qrels)
{
    for (auto const& [topic, judged] : qrels.topics) {
        for (auto const& [item, grade] : judged) {
            out << topic << " 0 " << item << ' ' << grade << '\n';
        }
    }
}

std::map<std::string, std::string, std::less<>> parse_visual_map(std::istream& in)
{
    std::map<std::string, std::string, std::less<>> out;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (blank(line)) {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw FormatError("expected item<TAB>visual-id", n);
        }
        if (!out.emplace(line.substr(0, tab), line.substr(tab + 1)).second) {
            throw FormatError("duplicate item " + line.substr(0, tab), n);
        }
    }
    return out;
}

std::map<std::string, std::string, std::less<>> parse_visual_map(std::filesystem::path const& path)
{
    auto in = open(path);
    return parse_visual_map(in);
}

}  // namespace mathfind
