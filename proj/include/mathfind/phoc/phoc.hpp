#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mathfind/formula/slt.hpp"
#include "mathfind/index/inverted_index.hpp"
#include "mathfind/index/search.hpp"

namespace mathfind {

struct SymbolBox {
    std::string label;
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    [[nodiscard]] double cx() const noexcept { return (x0 + x1) / 2.0; }
    [[nodiscard]] double cy() const noexcept { return (y0 + y1) / 2.0; }
};

/// Synthetic layout normalized to the unit square, y pointing down, in the
/// tree's reading order. Unit advance along NEXT, scripts at 0.7 scale
/// shifted 0.4 up or down, fractions and limits stacked, radicals wrapping
/// their content with a 0.1 margin.
[[nodiscard]] std::vector<SymbolBox> layout_symbols(SltTree const& slt);

enum class Orientation : std::uint8_t { Horizontal, Vertical };
enum class RegionVariant : std::uint8_t { AxisSplits, Concentric };

struct RegionScheme {
    std::vector<int> levels{1, 2, 3, 4, 5};
    std::vector<Orientation> orientations{Orientation::Horizontal, Orientation::Vertical};
    RegionVariant variant = RegionVariant::AxisSplits;

    /// One partition per (level, orientation); level 1 and concentric
    /// levels ignore orientation.
    struct Group {
        int level;
        std::optional<Orientation> orientation;
        std::size_t offset;
    };
    [[nodiscard]] std::vector<Group> groups() const;
    [[nodiscard]] std::size_t region_count() const;
    friend bool operator==(RegionScheme const&, RegionScheme const&) = default;
};

/// Cell of a coordinate in [0,1] among `parts` equal cells; a coordinate on
/// a boundary (within 1e-9) belongs to the lower cell.
[[nodiscard]] int cell_index(double c, int parts) noexcept;

/// Occupancy bits per distinct label.
struct PhocVector {
    std::size_t regions = 0;
    std::map<std::string, std::vector<std::uint64_t>> bits;

    [[nodiscard]] bool test(std::string const& label, std::size_t region) const;
    [[nodiscard]] std::size_t popcount() const;
    friend bool operator==(PhocVector const&, PhocVector const&) = default;
};

/// Boxes are first rescaled to their joint bounding box, so the encoding
/// does not depend on translation or scale.
[[nodiscard]] PhocVector phoc_encode(std::vector<SymbolBox> const& symbols,
                                     RegionScheme const& scheme = {});
[[nodiscard]] double phoc_cosine(PhocVector const& a, PhocVector const& b);

enum class EntryOrder { LeftRight, RightLeft, OutsideIn, MiddleOut };

[[nodiscard]] std::string_view entry_order_name(EntryOrder o) noexcept;
/// Indices into `symbols` in entry order.
[[nodiscard]] std::vector<std::size_t> entry_order(std::vector<SymbolBox> const& symbols,
                                                   EntryOrder order);

/// Per-formula PHOC vectors and symbol multisets over an index's formulas.
class PhocIndex {
  public:
    struct Entry {
        std::uint32_t label = 0;
        std::uint32_t count = 0;
        std::vector<std::uint64_t> bits;
        friend bool operator==(Entry const&, Entry const&) = default;
    };

    PhocIndex() = default;
    [[nodiscard]] static PhocIndex build(InvertedIndex const& index, RegionScheme scheme = {},
                                         Exec exec = Exec::Parallel);

    void save(std::filesystem::path const& file) const;
    /// Throws IndexFormatError.
    [[nodiscard]] static PhocIndex load(std::filesystem::path const& file);

    [[nodiscard]] RegionScheme const& scheme() const noexcept { return m_scheme; }
    [[nodiscard]] std::size_t size() const noexcept { return m_refs.size(); }
    [[nodiscard]] std::size_t words() const noexcept { return (m_scheme.region_count() + 63) / 64; }
    [[nodiscard]] std::vector<std::string> const& vocabulary() const noexcept { return m_labels; }
    [[nodiscard]] std::pair<DocNo, std::int32_t> ref(std::size_t i) const { return m_refs.at(i); }
    /// Sorted by label id.
    [[nodiscard]] std::vector<Entry> const& entries(std::size_t i) const { return m_entries.at(i); }
    [[nodiscard]] std::uint32_t symbol_count(std::size_t i) const { return m_symbol_counts.at(i); }
    [[nodiscard]] std::optional<std::uint32_t> label_id(std::string const& label) const;

    friend bool operator==(PhocIndex const&, PhocIndex const&) = default;

  private:
    RegionScheme m_scheme;
    std::vector<std::string> m_labels;
    std::vector<std::pair<DocNo, std::int32_t>> m_refs;
    std::vector<std::vector<Entry>> m_entries;
    std::vector<std::uint32_t> m_symbol_counts;
};

/// Cosine ranking over every indexed formula with a nonzero score.
[[nodiscard]] std::vector<Hit> phoc_search(PhocVector const& query, PhocIndex const& index,
                                           std::size_t k, Exec exec = Exec::Parallel);

/// Formulas whose symbol multiset contains the query's and that have at
/// least as many symbols, ranked by cosine. Throws EmptyQuery.
[[nodiscard]] std::vector<Hit> autocomplete(std::vector<SymbolBox> const& partial,
                                            PhocIndex const& index, std::size_t k,
                                            Exec exec = Exec::Parallel);

/// Number of symbols of the target's own layout, entered in `order`, after
/// which the target is ranked first; nullopt if never.
[[nodiscard]] std::optional<std::size_t> symbols_to_rank1(PhocIndex const& index,
                                                          InvertedIndex const& source,
                                                          std::size_t target, EntryOrder order);

}  // namespace mathfind
