#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mathfind/index/terms.hpp"

namespace mathfind {

using TermId = std::uint32_t;
using DocNo = std::uint32_t;

/// Formula id -1 marks a document-level (text) posting.
struct Posting {
    DocNo doc = 0;
    std::int32_t formula = -1;
    std::uint32_t tf = 0;

    friend bool operator==(Posting const&, Posting const&) = default;
};

struct TermTf {
    TermId term = 0;
    std::uint32_t tf = 0;
};

struct FormulaEntry {
    std::string latex;
    std::string visual_id;
};

struct DocEntry {
    std::string id;
    std::string text;
    std::uint32_t length = 0;  // text words
    std::vector<FormulaEntry> formulas;
};

/// One collection line: external id, text and formulas in LaTeX.
struct DocInput {
    std::string id;
    std::string text;
    std::vector<std::string> formulas;
};

enum class Exec { Serial, Parallel };

/// Immutable inverted index over documents and their formulas. Documents
/// are numbered in ascending external-id order and term ids follow sorted
/// term order, so the same collection always gives the same index.
class InvertedIndex {
  public:
    InvertedIndex() = default;

    /// Throws DuplicateDocId.
    [[nodiscard]] static InvertedIndex build(std::vector<DocInput> docs,
                                             ExtractorConfig const& config = {},
                                             Exec exec = Exec::Parallel);

    /// Writes vocab.tsv, postings.bin, docs.tsv, formulas.tsv and stats.tsv.
    void save(std::filesystem::path const& dir) const;
    /// Throws IndexFormatError on a missing file or bad header.
    [[nodiscard]] static InvertedIndex load(std::filesystem::path const& dir);

    [[nodiscard]] std::size_t doc_count() const noexcept { return m_docs.size(); }
    [[nodiscard]] std::size_t formula_count() const noexcept { return m_formula_refs.size(); }
    [[nodiscard]] std::size_t term_count() const noexcept { return m_terms.size(); }
    [[nodiscard]] double avg_doc_length() const noexcept { return m_avg_length; }
    [[nodiscard]] ExtractorConfig const& config() const noexcept { return m_config; }

    [[nodiscard]] std::optional<TermId> find(std::string_view term) const;
    [[nodiscard]] std::string const& term(TermId id) const { return m_terms.at(id); }
    [[nodiscard]] TermFamily family(TermId id) const { return m_families.at(id); }
    [[nodiscard]] std::span<Posting const> postings(TermId id) const { return m_postings.at(id); }
    /// Number of distinct documents in the term's postings.
    [[nodiscard]] std::uint32_t df(TermId id) const { return m_df.at(id); }

    [[nodiscard]] DocEntry const& doc(DocNo d) const { return m_docs.at(d); }
    [[nodiscard]] std::optional<DocNo> docno(std::string_view id) const;

    /// Formulas are also addressed by a dense slot in (doc, formula) order.
    [[nodiscard]] std::uint32_t slot(DocNo d, std::int32_t formula) const;
    [[nodiscard]] std::pair<DocNo, std::int32_t> formula_ref(std::uint32_t slot) const
    {
        return m_formula_refs.at(slot);
    }
    /// Forward lists sorted by term id.
    [[nodiscard]] std::span<TermTf const> formula_terms(std::uint32_t slot) const
    {
        return m_formula_fwd.at(slot);
    }
    [[nodiscard]] std::span<TermTf const> doc_text_terms(DocNo d) const { return m_text_fwd.at(d); }
    /// Sum of tf times term weight over one family of a formula's terms.
    [[nodiscard]] double family_weight(std::uint32_t slot, TermFamily f) const
    {
        return m_family_weight.at(slot)[static_cast<std::size_t>(f)];
    }
    /// Euclidean norm of the formula's tf-idf vector over token terms.
    [[nodiscard]] double token_norm(std::uint32_t slot) const { return m_token_norm.at(slot); }

  private:
    void finalize();

    ExtractorConfig m_config;
    std::vector<DocEntry> m_docs;
    std::vector<std::string> m_terms;
    std::unordered_map<std::string, TermId> m_term_ids;
    std::vector<TermFamily> m_families;
    std::vector<std::vector<Posting>> m_postings;
    std::vector<std::uint32_t> m_df;
    double m_avg_length = 0.0;

    std::vector<std::uint32_t> m_formula_base;
    std::vector<std::pair<DocNo, std::int32_t>> m_formula_refs;
    std::vector<std::vector<TermTf>> m_formula_fwd;
    std::vector<std::vector<TermTf>> m_text_fwd;
    std::vector<std::array<double, kTermFamilyCount>> m_family_weight;
    std::vector<double> m_token_norm;
    std::unordered_map<std::string, DocNo> m_doc_ids;
};

/// Natural-log inverse document frequency log(N / n).
[[nodiscard]] double idf(std::size_t N, std::size_t n);
/// Throws UnknownTerm when the term is not in the vocabulary.
[[nodiscard]] double idf(std::string_view term, InvertedIndex const& index);
[[nodiscard]] double idf(TermId term, InvertedIndex const& index);

/// Backslash escapes for tab, newline, carriage return and backslash.
[[nodiscard]] std::string tsv_escape(std::string_view s);
[[nodiscard]] std::string tsv_unescape(std::string_view s);

}  // namespace mathfind
