#include "mathfind/phoc/phoc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"

namespace mathfind {

std::vector<RegionScheme::Group> RegionScheme::groups() const
{
    std::vector<Group> out;
    std::size_t offset = 0;
    for (int level : levels) {
        if (level < 1) {
            throw std::invalid_argument("region level must be positive");
        }
        if (variant == RegionVariant::Concentric || level == 1) {
            out.push_back({level, std::nullopt, offset});
            offset += static_cast<std::size_t>(level);
            continue;
        }
        for (auto o : orientations) {
            out.push_back({level, o, offset});
            offset += static_cast<std::size_t>(level);
        }
    }
    return out;
}

std::size_t RegionScheme::region_count() const
{
    auto g = groups();
    return g.empty() ? 0 : g.back().offset + static_cast<std::size_t>(g.back().level);
}

int cell_index(double c, int parts) noexcept
{
    // centres computed through different affine maps land on a boundary
    // with rounding noise, so snap to it before assigning the lower cell
    int cell = static_cast<int>(std::ceil(c * parts - 1e-9)) - 1;
    return std::clamp(cell, 0, parts - 1);
}

bool PhocVector::test(std::string const& label, std::size_t region) const
{
    auto it = bits.find(label);
    if (it == bits.end() || region >= regions) {
        return false;
    }
    return ((it->second[region / 64] >> (region % 64)) & 1U) != 0;
}

std::size_t PhocVector::popcount() const
{
    std::size_t n = 0;
    for (auto const& [label, words] : bits) {
        for (auto w : words) {
            n += static_cast<std::size_t>(std::popcount(w));
        }
    }
    return n;
}

PhocVector phoc_encode(std::vector<SymbolBox> const& symbols, RegionScheme const& scheme)
{
    PhocVector out;
    out.regions = scheme.region_count();
    if (symbols.empty()) {
        return out;
    }
    double minx = symbols[0].x0, maxx = symbols[0].x1;
    double miny = symbols[0].y0, maxy = symbols[0].y1;
    for (auto const& s : symbols) {
        minx = std::min(minx, s.x0);
        maxx = std::max(maxx, s.x1);
        miny = std::min(miny, s.y0);
        maxy = std::max(maxy, s.y1);
    }
    double w = maxx > minx ? maxx - minx : 1.0;
    double h = maxy > miny ? maxy - miny : 1.0;
    auto const groups = scheme.groups();
    std::size_t const words = (out.regions + 63) / 64;
    for (auto const& s : symbols) {
        double cx = (s.cx() - minx) / w;
        double cy = (s.cy() - miny) / h;
        auto& bits = out.bits[s.label];
        bits.resize(words, 0);
        for (auto const& g : groups) {
            int cell = 0;
            if (scheme.variant == RegionVariant::Concentric) {
                double d = std::max(std::abs(cx - 0.5), std::abs(cy - 0.5));
                cell = cell_index(d / 0.5, g.level);
            } else if (g.orientation == Orientation::Horizontal) {
                cell = cell_index(cx, g.level);
            } else if (g.orientation == Orientation::Vertical) {
                cell = cell_index(cy, g.level);
            }
            std::size_t r = g.offset + static_cast<std::size_t>(cell);
            bits[r / 64] |= std::uint64_t{1} << (r % 64);
        }
    }
    return out;
}

double phoc_cosine(PhocVector const& a, PhocVector const& b)
{
    std::size_t na = a.popcount();
    std::size_t nb = b.popcount();
    if (na == 0 || nb == 0) {
        return 0.0;
    }
    std::size_t common = 0;
    for (auto const& [label, wa] : a.bits) {
        auto it = b.bits.find(label);
        if (it == b.bits.end()) {
            continue;
        }
        for (std::size_t i = 0; i < std::min(wa.size(), it->second.size()); ++i) {
            common += static_cast<std::size_t>(std::popcount(wa[i] & it->second[i]));
        }
    }
    return static_cast<double>(common) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

std::string_view entry_order_name(EntryOrder o) noexcept
{
    switch (o) {
    case EntryOrder::LeftRight: return "left-right";
    case EntryOrder::RightLeft: return "right-left";
    case EntryOrder::OutsideIn: return "outside-in";
    case EntryOrder::MiddleOut: return "middle-out";
    }
    return "?";
}

std::vector<std::size_t> entry_order(std::vector<SymbolBox> const& symbols, EntryOrder order)
{
    std::vector<std::size_t> lr(symbols.size());
    for (std::size_t i = 0; i < lr.size(); ++i) {
        lr[i] = i;
    }
    std::stable_sort(lr.begin(), lr.end(), [&](std::size_t a, std::size_t b) {
        auto const& sa = symbols[a];
        auto const& sb = symbols[b];
        if (sa.cx() != sb.cx()) {
            return sa.cx() < sb.cx();
        }
        return sa.cy() < sb.cy();
    });
    std::vector<std::size_t> out;
    out.reserve(lr.size());
    switch (order) {
    case EntryOrder::LeftRight:
        return lr;
    case EntryOrder::RightLeft:
        return {lr.rbegin(), lr.rend()};
    case EntryOrder::OutsideIn: {
        std::size_t lo = 0, hi = lr.size();
        bool left = true;
        while (lo < hi) {
            out.push_back(left ? lr[lo++] : lr[--hi]);
            left = !left;
        }
        return out;
    }
    case EntryOrder::MiddleOut: {
        if (lr.empty()) {
            return out;
        }
        auto mid = static_cast<std::ptrdiff_t>((lr.size() - 1) / 2);
        out.push_back(lr[static_cast<std::size_t>(mid)]);
        for (std::ptrdiff_t d = 1; out.size() < lr.size(); ++d) {
            if (mid - d >= 0) {
                out.push_back(lr[static_cast<std::size_t>(mid - d)]);
            }
            if (mid + d < static_cast<std::ptrdiff_t>(lr.size())) {
                out.push_back(lr[static_cast<std::size_t>(mid + d)]);
            }
        }
        return out;
    }
    }
    return lr;
}

// --- index ---------------------------------------------------------------

namespace {

std::vector<SymbolBox> layout_latex(std::string const& latex)
{
    try {
        return layout_symbols(parse_latex(latex));
    } catch (ParseError const&) {
        return {};
    }
}

struct Encoded {
    std::vector<PhocIndex::Entry> entries;  // label ids filled later
    std::vector<std::string> labels;
    std::uint32_t symbols = 0;
};

Encoded encode_formula(std::string const& latex, RegionScheme const& scheme)
{
    auto boxes = layout_latex(latex);
    auto vec = phoc_encode(boxes, scheme);
    std::map<std::string, std::uint32_t> counts;
    for (auto const& b : boxes) {
        ++counts[b.label];
    }
    Encoded out;
    out.symbols = static_cast<std::uint32_t>(boxes.size());
    for (auto& [label, bits] : vec.bits) {
        out.labels.push_back(label);
        out.entries.push_back({0, counts[label], std::move(bits)});
    }
    return out;
}

// Query side: per vocabulary label id, bits and count; unknown labels only
// contribute to the norm and to the size.
struct Query {
    std::vector<PhocIndex::Entry> entries;  // sorted by label
    std::size_t norm = 0;
    std::size_t symbols = 0;
    bool unknown_label = false;
};

Query to_query(PhocVector const& vec, std::map<std::string, std::uint32_t> const& counts,
               PhocIndex const& index)
{
    Query q;
    q.norm = vec.popcount();
    for (auto const& [label, bits] : vec.bits) {
        auto id = index.label_id(label);
        auto c = counts.contains(label) ? counts.at(label) : 1U;
        q.symbols += c;
        if (!id) {
            q.unknown_label = true;
            continue;
        }
        auto padded = bits;
        padded.resize(index.words(), 0);
        q.entries.push_back({*id, c, std::move(padded)});
    }
    std::sort(q.entries.begin(), q.entries.end(),
              [](auto const& a, auto const& b) { return a.label < b.label; });
    return q;
}

std::size_t entry_norm(std::vector<PhocIndex::Entry> const& entries)
{
    std::size_t n = 0;
    for (auto const& e : entries) {
        for (auto w : e.bits) {
            n += static_cast<std::size_t>(std::popcount(w));
        }
    }
    return n;
}

std::size_t common_bits(Query const& q, std::vector<PhocIndex::Entry> const& c)
{
    std::size_t n = 0;
    auto qi = q.entries.begin();
    auto ci = c.begin();
    while (qi != q.entries.end() && ci != c.end()) {
        if (qi->label < ci->label) {
            ++qi;
        } else if (ci->label < qi->label) {
            ++ci;
        } else {
            for (std::size_t w = 0; w < ci->bits.size(); ++w) {
                n += static_cast<std::size_t>(std::popcount(qi->bits[w] & ci->bits[w]));
            }
            ++qi;
            ++ci;
        }
    }
    return n;
}

// Bit-by-bit reference for the popcount kernel.
std::size_t common_bits_naive(Query const& q, std::vector<PhocIndex::Entry> const& c,
                              std::size_t regions)
{
    std::size_t n = 0;
    for (auto const& qe : q.entries) {
        for (auto const& ce : c) {
            if (ce.label != qe.label) {
                continue;
            }
            for (std::size_t r = 0; r < regions; ++r) {
                bool a = ((qe.bits[r / 64] >> (r % 64)) & 1U) != 0;
                bool b = ((ce.bits[r / 64] >> (r % 64)) & 1U) != 0;
                n += (a && b) ? 1 : 0;
            }
        }
    }
    return n;
}

bool contains(Query const& q, std::vector<PhocIndex::Entry> const& c)
{
    if (q.unknown_label) {
        return false;
    }
    auto ci = c.begin();
    for (auto const& qe : q.entries) {
        while (ci != c.end() && ci->label < qe.label) {
            ++ci;
        }
        if (ci == c.end() || ci->label != qe.label || ci->count < qe.count) {
            return false;
        }
    }
    return true;
}

double cosine_of(std::size_t common, std::size_t qn, std::size_t cn)
{
    if (qn == 0 || cn == 0) {
        return 0.0;
    }
    return static_cast<double>(common) / std::sqrt(static_cast<double>(qn) * static_cast<double>(cn));
}

std::vector<Hit> score_all(Query const& q, PhocIndex const& index, std::size_t k, Exec exec,
                           bool filter)
{
    auto const n = static_cast<std::ptrdiff_t>(index.size());
    std::vector<double> scores(static_cast<std::size_t>(n), -1.0);
    auto score_one = [&](std::size_t i, bool naive) {
        auto const& entries = index.entries(i);
        if (filter && (index.symbol_count(i) < q.symbols || !contains(q, entries))) {
            return;
        }
        std::size_t common = naive ? common_bits_naive(q, entries, index.scheme().region_count())
                                   : common_bits(q, entries);
        scores[i] = cosine_of(common, q.norm, entry_norm(entries));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            score_one(static_cast<std::size_t>(i), false);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            score_one(static_cast<std::size_t>(i), true);
        }
    }
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool keep = filter ? scores[i] >= 0.0 : scores[i] > 0.0;
        if (keep) {
            auto [doc, f] = index.ref(i);
            hits.push_back({doc, f, std::max(scores[i], 0.0)});
        }
    }
    rank_hits(hits, k);
    return hits;
}

std::map<std::string, std::uint32_t> label_counts(std::vector<SymbolBox> const& boxes)
{
    std::map<std::string, std::uint32_t> out;
    for (auto const& b : boxes) {
        ++out[b.label];
    }
    return out;
}

// Little-endian binary helpers.
template <typename T>
void put(std::ostream& os, T v)
{
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        os.put(static_cast<char>((u >> (8 * i)) & 0xFFU));
    }
}

template <typename T>
T get(std::istream& is)
{
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        int c = is.get();
        if (c == std::char_traits<char>::eof()) {
            throw IndexFormatError("phoc.bin: unexpected end of file");
        }
        u |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(c)) << (8 * i));
    }
    return static_cast<T>(u);
}

constexpr std::string_view kMagic = "MFPH1";
constexpr std::uint32_t kSanityLimit = 1U << 28;

std::uint32_t get_count(std::istream& is)
{
    auto n = get<std::uint32_t>(is);
    if (n > kSanityLimit) {
        throw IndexFormatError("phoc.bin: implausible count");
    }
    return n;
}

}  // namespace

std::optional<std::uint32_t> PhocIndex::label_id(std::string const& label) const
{
    auto it = std::lower_bound(m_labels.begin(), m_labels.end(), label);
    if (it == m_labels.end() || *it != label) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - m_labels.begin());
}

PhocIndex PhocIndex::build(InvertedIndex const& index, RegionScheme scheme, Exec exec)
{
    PhocIndex out;
    out.m_scheme = std::move(scheme);
    (void)out.m_scheme.region_count();  // validates levels
    auto const n = static_cast<std::ptrdiff_t>(index.formula_count());
    std::vector<Encoded> encoded(static_cast<std::size_t>(n));
    auto encode_one = [&](std::size_t slot) {
        auto [doc, f] = index.formula_ref(static_cast<std::uint32_t>(slot));
        encoded[slot] = encode_formula(index.doc(doc).formulas.at(static_cast<std::size_t>(f)).latex,
                                       out.m_scheme);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            encode_one(static_cast<std::size_t>(i));
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            encode_one(static_cast<std::size_t>(i));
        }
    }
    for (auto const& e : encoded) {
        out.m_labels.insert(out.m_labels.end(), e.labels.begin(), e.labels.end());
    }
    std::sort(out.m_labels.begin(), out.m_labels.end());
    out.m_labels.erase(std::unique(out.m_labels.begin(), out.m_labels.end()), out.m_labels.end());
    for (std::size_t slot = 0; slot < encoded.size(); ++slot) {
        auto& e = encoded[slot];
        for (std::size_t j = 0; j < e.entries.size(); ++j) {
            e.entries[j].label = *out.label_id(e.labels[j]);
        }
        // labels came from a std::map, so entries are already in label order
        out.m_refs.push_back(index.formula_ref(static_cast<std::uint32_t>(slot)));
        out.m_entries.push_back(std::move(e.entries));
        out.m_symbol_counts.push_back(e.symbols);
    }
    return out;
}

void PhocIndex::save(std::filesystem::path const& file) const
{
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw Error("cannot write " + file.string());
    }
    os.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(m_scheme.variant));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(m_scheme.levels.size()));
    for (int l : m_scheme.levels) {
        put<std::int32_t>(os, l);
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(m_scheme.orientations.size()));
    for (auto o : m_scheme.orientations) {
        put<std::uint8_t>(os, static_cast<std::uint8_t>(o));
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(m_labels.size()));
    for (auto const& l : m_labels) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(l.size()));
        os.write(l.data(), static_cast<std::streamsize>(l.size()));
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(m_refs.size()));
    for (std::size_t i = 0; i < m_refs.size(); ++i) {
        put<std::uint32_t>(os, m_refs[i].first);
        put<std::int32_t>(os, m_refs[i].second);
        put<std::uint32_t>(os, m_symbol_counts[i]);
        put<std::uint32_t>(os, static_cast<std::uint32_t>(m_entries[i].size()));
        for (auto const& e : m_entries[i]) {
            put<std::uint32_t>(os, e.label);
            put<std::uint32_t>(os, e.count);
            for (auto w : e.bits) {
                put<std::uint64_t>(os, w);
            }
        }
    }
    if (!os) {
        throw Error("failed writing " + file.string());
    }
}

PhocIndex PhocIndex::load(std::filesystem::path const& file)
{
    std::ifstream is(file, std::ios::binary);
    if (!is) {
        throw IndexFormatError("cannot open " + file.string());
    }
    std::string magic(kMagic.size(), '\0');
    is.read(magic.data(), static_cast<std::streamsize>(magic.size()));
    if (!is || magic != kMagic) {
        throw IndexFormatError("phoc.bin: bad magic");
    }
    PhocIndex out;
    auto variant = get<std::uint8_t>(is);
    if (variant > 1) {
        throw IndexFormatError("phoc.bin: bad region variant");
    }
    out.m_scheme.variant = static_cast<RegionVariant>(variant);
    out.m_scheme.levels.resize(get_count(is));
    for (auto& l : out.m_scheme.levels) {
        l = get<std::int32_t>(is);
        if (l < 1 || l > 1024) {
            throw IndexFormatError("phoc.bin: bad level");
        }
    }
    out.m_scheme.orientations.resize(get_count(is));
    for (auto& o : out.m_scheme.orientations) {
        auto v = get<std::uint8_t>(is);
        if (v > 1) {
            throw IndexFormatError("phoc.bin: bad orientation");
        }
        o = static_cast<Orientation>(v);
    }
    out.m_labels.resize(get_count(is));
    for (auto& l : out.m_labels) {
        l.resize(get_count(is));
        is.read(l.data(), static_cast<std::streamsize>(l.size()));
        if (!is) {
            throw IndexFormatError("phoc.bin: truncated vocabulary");
        }
    }
    if (!std::is_sorted(out.m_labels.begin(), out.m_labels.end())) {
        throw IndexFormatError("phoc.bin: vocabulary not sorted");
    }
    auto const words = out.words();
    auto const count = get_count(is);
    for (std::uint32_t i = 0; i < count; ++i) {
        DocNo doc = get<std::uint32_t>(is);
        auto f = get<std::int32_t>(is);
        out.m_refs.emplace_back(doc, f);
        out.m_symbol_counts.push_back(get<std::uint32_t>(is));
        std::vector<Entry> entries(get_count(is));
        for (auto& e : entries) {
            e.label = get<std::uint32_t>(is);
            if (e.label >= out.m_labels.size()) {
                throw IndexFormatError("phoc.bin: label out of range");
            }
            e.count = get<std::uint32_t>(is);
            e.bits.resize(words);
            for (auto& w : e.bits) {
                w = get<std::uint64_t>(is);
            }
        }
        out.m_entries.push_back(std::move(entries));
    }
    if (is.peek() != std::char_traits<char>::eof()) {
        throw IndexFormatError("phoc.bin: trailing bytes");
    }
    return out;
}

std::vector<Hit> phoc_search(PhocVector const& query, PhocIndex const& index, std::size_t k,
                             Exec exec)
{
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    auto q = to_query(query, {}, index);
    return score_all(q, index, k, exec, false);
}

std::vector<Hit> autocomplete(std::vector<SymbolBox> const& partial, PhocIndex const& index,
                              std::size_t k, Exec exec)
{
    if (partial.empty()) {
        throw EmptyQuery();
    }
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    auto q = to_query(phoc_encode(partial, index.scheme()), label_counts(partial), index);
    return score_all(q, index, k, exec, true);
}

std::optional<std::size_t> symbols_to_rank1(PhocIndex const& index, InvertedIndex const& source,
                                            std::size_t target, EntryOrder order)
{
    auto [doc, f] = index.ref(target);
    auto boxes = layout_latex(source.doc(doc).formulas.at(static_cast<std::size_t>(f)).latex);
    auto seq = entry_order(boxes, order);
    std::vector<SymbolBox> partial;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        partial.push_back(boxes[seq[n]]);
        auto hits = autocomplete(partial, index, 1, Exec::Parallel);
        if (!hits.empty() && hits[0].doc == doc && hits[0].formula == f) {
            return n + 1;
        }
    }
    return std::nullopt;
}

}  // namespace mathfind
