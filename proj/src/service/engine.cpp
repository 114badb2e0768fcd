#include "mathfind/service/engine.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace mathfind {

namespace {

constexpr std::array<std::pair<EngineKind, std::string_view>, 7> kEngines{{
    {EngineKind::Slt, "slt"},
    {EngineKind::Opt, "opt"},
    {EngineKind::WikiMirs, "wikimirs"},
    {EngineKind::DlmfText, "dlmf-text"},
    {EngineKind::Bm25Text, "bm25-text"},
    {EngineKind::Phoc, "phoc"},
    {EngineKind::Fused, "fused"},
}};

constexpr std::array<std::pair<FusionMethod, std::string_view>, 4> kFusions{{
    {FusionMethod::Linear, "linear"},
    {FusionMethod::Rrf, "rrf"},
    {FusionMethod::Borda, "borda"},
    {FusionMethod::Interleave, "interleave"},
}};

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double parse_weight(std::string_view s)
{
    std::string str(s);
    std::size_t used = 0;
    double w = 0.0;
    try {
        w = std::stod(str, &used);
    } catch (std::exception const&) {
        used = 0;
    }
    if (used != str.size() || str.empty() || !std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("bad fusion weight: '" + str + "'");
    }
    return w;
}

std::string format_weight(double w)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", w);
    return buf;
}

}  // namespace

std::string_view engine_name(EngineKind e) noexcept
{
    for (auto const& [k, n] : kEngines) {
        if (k == e) {
            return n;
        }
    }
    return "?";
}

EngineKind engine_from_name(std::string_view name)
{
    for (auto const& [k, n] : kEngines) {
        if (n == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown engine: '" + std::string(name) + "'");
}

std::string_view fusion_name(FusionMethod m) noexcept
{
    for (auto const& [k, n] : kFusions) {
        if (k == m) {
            return n;
        }
    }
    return "?";
}

FusionMethod fusion_from_name(std::string_view name)
{
    for (auto const& [k, n] : kFusions) {
        if (n == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown fusion method: '" + std::string(name) + "'");
}

bool is_text_engine(EngineKind e) noexcept
{
    return e == EngineKind::Bm25Text;
}

EngineSpec EngineSpec::parse(std::string_view text)
{
    EngineSpec spec;
    auto slash = text.find('/');
    std::string_view engine = text.substr(0, slash);
    if (slash != std::string_view::npos) {
        spec.rerank = rerank_from_name(text.substr(slash + 1));
    }
    if (!engine.starts_with("fused")) {
        spec.engine = engine_from_name(engine);
        return spec;
    }
    auto parts = split(engine, ':');
    if (parts.size() != 3 || parts[0] != "fused") {
        throw std::invalid_argument("fused engine must be fused:<method>:<a>+<b>[+...]");
    }
    spec.engine = EngineKind::Fused;
    spec.fusion = fusion_from_name(parts[1]);
    for (auto comp : split(parts[2], '+')) {
        auto eq = comp.find('=');
        auto kind = engine_from_name(comp.substr(0, eq));
        if (kind == EngineKind::Fused) {
            throw std::invalid_argument("fused engines cannot be nested");
        }
        double w = 1.0;
        if (eq != std::string_view::npos) {
            if (spec.fusion != FusionMethod::Linear) {
                throw std::invalid_argument("weights are only allowed with linear fusion");
            }
            w = parse_weight(comp.substr(eq + 1));
        }
        spec.components.push_back(kind);
        spec.weights.push_back(w);
    }
    if (spec.components.size() < 2) {
        throw std::invalid_argument("fused engine needs at least two components");
    }
    return spec;
}

std::string EngineSpec::str() const
{
    std::string out;
    if (engine == EngineKind::Fused) {
        out = "fused:";
        out += fusion_name(fusion);
        out += ':';
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (i) {
                out += '+';
            }
            out += engine_name(components[i]);
            if (fusion == FusionMethod::Linear) {
                out += '=' + format_weight(weights.at(i));
            }
        }
    } else {
        out = engine_name(engine);
    }
    if (rerank != RerankMethod::None) {
        out += '/';
        out += rerank_name(rerank);
    }
    return out;
}

std::string EngineSpec::run_tag() const
{
    auto s = str();
    char buf[24];
    std::snprintf(buf, sizeof buf, "~%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return s + buf;
}

bool EngineSpec::document_level() const noexcept
{
    if (engine != EngineKind::Fused) {
        return is_text_engine(engine);
    }
    for (auto c : components) {
        if (is_text_engine(c)) {
            return true;
        }
    }
    return false;
}

std::uint64_t fnv1a64(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace mathfind
