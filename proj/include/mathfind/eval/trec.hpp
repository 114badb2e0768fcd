#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mathfind {

/// Grades of the judged items of one topic.
using Judgments = std::map<std::string, int, std::less<>>;

struct Qrels {
    std::map<std::string, Judgments, std::less<>> topics;

    [[nodiscard]] std::optional<int> grade(std::string_view topic, std::string_view item) const;
    [[nodiscard]] Judgments const& judgments(std::string_view topic) const;
};

struct RunEntry {
    std::string item;
    int rank = 0;
    double score = 0.0;

    friend bool operator==(RunEntry const&, RunEntry const&) = default;
};

struct Run {
    std::string tag;
    /// Entries ordered by rank, ranks 1..n.
    std::map<std::string, std::vector<RunEntry>, std::less<>> topics;

    [[nodiscard]] std::vector<std::string> ranking(std::string_view topic) const;
};

/// `topic 0 item grade` lines. Throws FormatError on malformed lines and
/// duplicate (topic, item) pairs.
[[nodiscard]] Qrels parse_qrels(std::istream& in);
[[nodiscard]] Qrels parse_qrels(std::filesystem::path const& path);

/// `topic Q0 item rank score tag` lines. Throws FormatError on malformed
/// lines, duplicate items within a topic, and ranks that are not 1..n.
[[nodiscard]] Run parse_run(std::istream& in);
[[nodiscard]] Run parse_run(std::filesystem::path const& path);

void write_run(std::ostream& out, Run const& run);
void write_qrels(std::ostream& out, Qrels const& qrels);

/// `item<TAB>visual-id` lines.
[[nodiscard]] std::map<std::string, std::string, std::less<>> parse_visual_map(std::istream& in);
[[nodiscard]] std::map<std::string, std::string, std::less<>> parse_visual_map(
    std::filesystem::path const& path);

}  // namespace mathfind
