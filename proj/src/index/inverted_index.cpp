#include "mathfind/index/inverted_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mathfind/error.hpp"
#include "mathfind/formula/linearize.hpp"

namespace mathfind {

namespace {

constexpr char const* kMagic = "MFIDX1";

struct Extracted {
    TermCounts text;
    std::vector<TermCounts> formulas;
    std::vector<std::string> visual_ids;
};

Extracted extract(DocInput const& doc, ExtractorConfig const& config)
{
    Extracted out;
    if (config.text) {
        out.text = text_terms(doc.text);
    }
    for (auto const& latex : doc.formulas) {
        out.formulas.push_back(formula_terms(latex, config));
        out.visual_ids.push_back(visual_id(latex));
    }
    return out;
}

void put_varint(std::string& out, std::uint64_t v)
{
    while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

std::uint64_t get_varint(std::string const& in, std::size_t& pos)
{
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) {
            throw IndexFormatError("postings.bin: truncated varint");
        }
        auto byte = static_cast<unsigned char>(in[pos++]);
        v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if (!(byte & 0x80)) {
            return v;
        }
    }
    throw IndexFormatError("postings.bin: varint too long");
}

std::vector<std::string> split_tabs(std::string const& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::ifstream open_checked(std::filesystem::path const& path, std::string const& kind)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IndexFormatError("cannot open " + path.string());
    }
    std::string header;
    std::getline(in, header);
    auto fields = split_tabs(header);
    if (fields.size() < 2 || fields[0] != kMagic || fields[1] != kind) {
        throw IndexFormatError(path.filename().string() + ": bad header");
    }
    return in;
}

std::uint64_t to_u64(std::string const& s, std::string const& file)
{
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (std::exception const&) {
        throw IndexFormatError(file + ": bad number '" + s + "'");
    }
}

std::string config_families(ExtractorConfig const& config)
{
    std::string out;
    for (int i = 0; i < kTermFamilyCount; ++i) {
        auto f = static_cast<TermFamily>(i);
        if (config.enabled(f)) {
            out += (out.empty() ? "" : ",") + std::string(family_name(f));
        }
    }
    return out;
}

std::ofstream create(std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

}  // namespace

std::string tsv_escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tsv_unescape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        switch (s[++i]) {
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: out += s[i];
        }
    }
    return out;
}

InvertedIndex InvertedIndex::build(std::vector<DocInput> docs, ExtractorConfig const& config,
                                   Exec exec)
{
    std::sort(docs.begin(), docs.end(),
              [](DocInput const& a, DocInput const& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].id == docs[i - 1].id) {
            throw DuplicateDocId("duplicate document id '" + docs[i].id + "'");
        }
    }

    std::vector<Extracted> extracted(docs.size());
    auto const n = static_cast<std::int64_t>(docs.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t i = 0; i < n; ++i) {
            extracted[static_cast<std::size_t>(i)] = extract(docs[static_cast<std::size_t>(i)], config);
        }
    } else {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            extracted[i] = extract(docs[i], config);
        }
    }

    InvertedIndex idx;
    idx.m_config = config;
    std::map<std::string, std::vector<Posting>, std::less<>> lists;
    std::uint64_t total_length = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& ex = extracted[d];
        DocEntry entry{docs[d].id, docs[d].text, 0, {}};
        auto docno = static_cast<DocNo>(d);
        for (auto& [term, tf] : ex.text) {
            lists[term].push_back({docno, -1, static_cast<std::uint32_t>(tf)});
            entry.length += static_cast<std::uint32_t>(tf);
        }
        for (std::size_t f = 0; f < ex.formulas.size(); ++f) {
            for (auto& [term, tf] : ex.formulas[f]) {
                lists[term].push_back(
                    {docno, static_cast<std::int32_t>(f), static_cast<std::uint32_t>(tf)});
            }
            entry.formulas.push_back({docs[d].formulas[f], std::move(ex.visual_ids[f])});
        }
        total_length += entry.length;
        idx.m_docs.push_back(std::move(entry));
    }
    idx.m_avg_length =
        docs.empty() ? 0.0 : static_cast<double>(total_length) / static_cast<double>(docs.size());
    for (auto& [term, list] : lists) {
        idx.m_terms.push_back(term);
        idx.m_postings.push_back(std::move(list));
    }
    idx.finalize();
    return idx;
}

void InvertedIndex::finalize()
{
    m_term_ids.clear();
    m_families.clear();
    m_df.clear();
    m_doc_ids.clear();
    for (TermId t = 0; t < m_terms.size(); ++t) {
        m_term_ids.emplace(m_terms[t], t);
        m_families.push_back(family_of(m_terms[t]));
        std::uint32_t df = 0;
        DocNo last = 0;
        for (auto const& p : m_postings[t]) {
            if (df == 0 || p.doc != last) {
                ++df;
                last = p.doc;
            }
        }
        m_df.push_back(df);
    }

    m_formula_base.clear();
    m_formula_refs.clear();
    for (DocNo d = 0; d < m_docs.size(); ++d) {
        m_doc_ids.emplace(m_docs[d].id, d);
        m_formula_base.push_back(static_cast<std::uint32_t>(m_formula_refs.size()));
        for (std::size_t f = 0; f < m_docs[d].formulas.size(); ++f) {
            m_formula_refs.emplace_back(d, static_cast<std::int32_t>(f));
        }
    }

    m_formula_fwd.assign(m_formula_refs.size(), {});
    m_text_fwd.assign(m_docs.size(), {});
    m_family_weight.assign(m_formula_refs.size(), {});
    m_token_norm.assign(m_formula_refs.size(), 0.0);
    for (TermId t = 0; t < m_terms.size(); ++t) {
        double w = term_weight(m_terms[t]);
        bool token = m_families[t] == TermFamily::Token;
        double term_idf = token ? idf(m_docs.size(), m_df[t]) : 0.0;
        for (auto const& p : m_postings[t]) {
            if (p.formula < 0) {
                m_text_fwd[p.doc].push_back({t, p.tf});
                continue;
            }
            auto s = slot(p.doc, p.formula);
            m_formula_fwd[s].push_back({t, p.tf});
            m_family_weight[s][static_cast<std::size_t>(m_families[t])] += w * p.tf;
            if (token) {
                double x = p.tf * term_idf;
                m_token_norm[s] += x * x;
            }
        }
    }
    for (auto& n : m_token_norm) {
        n = std::sqrt(n);
    }
}

std::optional<TermId> InvertedIndex::find(std::string_view term) const
{
    auto it = m_term_ids.find(std::string(term));
    if (it == m_term_ids.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<DocNo> InvertedIndex::docno(std::string_view id) const
{
    auto it = m_doc_ids.find(std::string(id));
    if (it == m_doc_ids.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint32_t InvertedIndex::slot(DocNo d, std::int32_t formula) const
{
    if (d >= m_docs.size() || formula < 0 ||
        static_cast<std::size_t>(formula) >= m_docs[d].formulas.size()) {
        throw std::out_of_range("no formula " + std::to_string(formula) + " in document " +
                                std::to_string(d));
    }
    return m_formula_base[d] + static_cast<std::uint32_t>(formula);
}

void InvertedIndex::save(std::filesystem::path const& dir) const
{
    std::filesystem::create_directories(dir);
    {
        auto out = create(dir / "vocab.tsv");
        out << kMagic << "\tvocab\t" << m_terms.size() << '\n';
        for (TermId t = 0; t < m_terms.size(); ++t) {
            out << t << '\t' << tsv_escape(m_terms[t]) << '\n';
        }
    }
    {
        std::string buf = std::string(kMagic) + "\n";
        put_varint(buf, m_postings.size());
        for (auto const& list : m_postings) {
            put_varint(buf, list.size());
            DocNo prev = 0;
            for (auto const& p : list) {
                put_varint(buf, p.doc - prev);
                put_varint(buf, static_cast<std::uint64_t>(p.formula + 1));
                put_varint(buf, p.tf);
                prev = p.doc;
            }
        }
        auto out = create(dir / "postings.bin");
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    {
        auto out = create(dir / "docs.tsv");
        out << kMagic << "\tdocs\t" << m_docs.size() << '\n';
        for (DocNo d = 0; d < m_docs.size(); ++d) {
            auto const& doc = m_docs[d];
            out << d << '\t' << tsv_escape(doc.id) << '\t' << doc.length << '\t'
                << doc.formulas.size() << '\t' << tsv_escape(doc.text) << '\n';
        }
    }
    {
        auto out = create(dir / "formulas.tsv");
        out << kMagic << "\tformulas\t" << m_formula_refs.size() << '\n';
        for (auto [d, f] : m_formula_refs) {
            auto const& entry = m_docs[d].formulas[static_cast<std::size_t>(f)];
            out << d << '\t' << f << '\t' << tsv_escape(entry.visual_id) << '\t'
                << tsv_escape(entry.latex) << '\n';
        }
    }
    {
        auto out = create(dir / "stats.tsv");
        char avg[64];
        std::snprintf(avg, sizeof avg, "%.17g", m_avg_length);
        out << kMagic << "\tstats\n"
            << "N\t" << m_docs.size() << '\n'
            << "formulas\t" << m_formula_refs.size() << '\n'
            << "terms\t" << m_terms.size() << '\n'
            << "avg_doc_length\t" << avg << '\n'
            << "families\t" << config_families(m_config) << '\n'
            << "slt_max_path\t" << m_config.slt_max_path << '\n';
    }
}

InvertedIndex InvertedIndex::load(std::filesystem::path const& dir)
{
    InvertedIndex idx;
    std::string line;

    std::map<std::string, std::string> stats;
    {
        auto in = open_checked(dir / "stats.tsv", "stats");
        while (std::getline(in, line)) {
            auto f = split_tabs(line);
            if (f.size() != 2) {
                throw IndexFormatError("stats.tsv: bad line '" + line + "'");
            }
            stats[f[0]] = f[1];
        }
        for (auto key : {"N", "avg_doc_length", "families", "slt_max_path"}) {
            if (!stats.count(key)) {
                throw IndexFormatError(std::string("stats.tsv: missing ") + key);
            }
        }
        ExtractorConfig config;
        config.slt = config.opt = config.wikimirs = config.tokens = config.text = false;
        std::stringstream families(stats["families"]);
        std::string name;
        while (std::getline(families, name, ',')) {
            try {
                switch (family_from_name(name)) {
                case TermFamily::Slt: config.slt = true; break;
                case TermFamily::Opt: config.opt = true; break;
                case TermFamily::WikiMirs: config.wikimirs = true; break;
                case TermFamily::Token: config.tokens = true; break;
                case TermFamily::Text: config.text = true; break;
                }
            } catch (std::invalid_argument const& e) {
                throw IndexFormatError(std::string("stats.tsv: ") + e.what());
            }
        }
        config.slt_max_path = static_cast<int>(to_u64(stats["slt_max_path"], "stats.tsv"));
        idx.m_config = config;
        idx.m_avg_length = std::strtod(stats["avg_doc_length"].c_str(), nullptr);
    }
    {
        auto in = open_checked(dir / "docs.tsv", "docs");
        while (std::getline(in, line)) {
            auto f = split_tabs(line);
            if (f.size() != 5 || to_u64(f[0], "docs.tsv") != idx.m_docs.size()) {
                throw IndexFormatError("docs.tsv: bad line '" + line + "'");
            }
            DocEntry doc{tsv_unescape(f[1]), tsv_unescape(f[4]),
                         static_cast<std::uint32_t>(to_u64(f[2], "docs.tsv")), {}};
            doc.formulas.resize(to_u64(f[3], "docs.tsv"));
            idx.m_docs.push_back(std::move(doc));
        }
        if (idx.m_docs.size() != to_u64(stats["N"], "stats.tsv")) {
            throw IndexFormatError("docs.tsv: document count disagrees with stats.tsv");
        }
    }
    {
        auto in = open_checked(dir / "formulas.tsv", "formulas");
        while (std::getline(in, line)) {
            auto f = split_tabs(line);
            if (f.size() != 4) {
                throw IndexFormatError("formulas.tsv: bad line '" + line + "'");
            }
            auto d = to_u64(f[0], "formulas.tsv");
            auto k = to_u64(f[1], "formulas.tsv");
            if (d >= idx.m_docs.size() || k >= idx.m_docs[d].formulas.size()) {
                throw IndexFormatError("formulas.tsv: reference out of range");
            }
            idx.m_docs[d].formulas[k] = {tsv_unescape(f[3]), tsv_unescape(f[2])};
        }
    }
    {
        auto in = open_checked(dir / "vocab.tsv", "vocab");
        while (std::getline(in, line)) {
            auto f = split_tabs(line);
            if (f.size() != 2 || to_u64(f[0], "vocab.tsv") != idx.m_terms.size()) {
                throw IndexFormatError("vocab.tsv: bad line '" + line + "'");
            }
            idx.m_terms.push_back(tsv_unescape(f[1]));
        }
    }
    {
        std::ifstream in(dir / "postings.bin", std::ios::binary);
        if (!in) {
            throw IndexFormatError("cannot open " + (dir / "postings.bin").string());
        }
        std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::string magic = std::string(kMagic) + "\n";
        if (buf.compare(0, magic.size(), magic) != 0) {
            throw IndexFormatError("postings.bin: bad header");
        }
        std::size_t pos = magic.size();
        auto count = get_varint(buf, pos);
        if (count != idx.m_terms.size()) {
            throw IndexFormatError("postings.bin: term count disagrees with vocab.tsv");
        }
        for (std::uint64_t t = 0; t < count; ++t) {
            auto n = get_varint(buf, pos);
            std::vector<Posting> list;
            list.reserve(n);
            DocNo prev = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                Posting p;
                p.doc = prev + static_cast<DocNo>(get_varint(buf, pos));
                p.formula = static_cast<std::int32_t>(get_varint(buf, pos)) - 1;
                p.tf = static_cast<std::uint32_t>(get_varint(buf, pos));
                if (p.doc >= idx.m_docs.size() ||
                    (p.formula >= 0 &&
                     static_cast<std::size_t>(p.formula) >= idx.m_docs[p.doc].formulas.size())) {
                    throw IndexFormatError("postings.bin: posting out of range");
                }
                prev = p.doc;
                list.push_back(p);
            }
            idx.m_postings.push_back(std::move(list));
        }
        if (pos != buf.size()) {
            throw IndexFormatError("postings.bin: trailing bytes");
        }
    }
    try {
        idx.finalize();
    } catch (std::invalid_argument const& e) {
        throw IndexFormatError(std::string("vocab.tsv: ") + e.what());
    }
    return idx;
}

double idf(std::size_t N, std::size_t n)
{
    return std::log(static_cast<double>(N) / static_cast<double>(n));
}

double idf(TermId term, InvertedIndex const& index)
{
    return idf(index.doc_count(), index.df(term));
}

double idf(std::string_view term, InvertedIndex const& index)
{
    auto id = index.find(term);
    if (!id) {
        throw UnknownTerm("unknown term '" + std::string(term) + "'");
    }
    return idf(*id, index);
}

}  // namespace mathfind
