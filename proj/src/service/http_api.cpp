#include "mathfind/service/http_api.hpp"

#include <httplib.h>

#include <charconv>
#include <json.hpp>
#include <mutex>
#include <stdexcept>

#include "mathfind/error.hpp"
#include "mathfind/service/commands.hpp"
#include "mathfind/version.hpp"

namespace mathfind {

namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxK = 10000;

ApiResponse reply(int status, json const& body)
{
    return {status, body.dump(-1, ' ', false, json::error_handler_t::replace)};
}

ApiResponse error(int status, std::string const& message)
{
    return reply(status, json{{"error", message}});
}

/// Client errors that map to 400.
struct BadRequest : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json parse_body(std::string_view body)
{
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw BadRequest("request body must be a JSON object");
    }
    return j;
}

std::size_t get_k(json const& j, std::size_t fallback)
{
    if (!j.contains("k")) {
        return fallback;
    }
    auto const& v = j["k"];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 ||
        v.get<std::int64_t>() > static_cast<std::int64_t>(kMaxK)) {
        throw BadRequest("k must be an integer in 1.." + std::to_string(kMaxK));
    }
    return v.get<std::size_t>();
}

std::string get_string(json const& j, char const* key, std::string fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_string()) {
        throw BadRequest(std::string(key) + " must be a string");
    }
    return j[key].get<std::string>();
}

json formula_id_json(std::int32_t f)
{
    return f < 0 ? json(nullptr) : json(f);
}

ApiResponse do_search(LoadedIndex const& li, std::string_view body, SearchOptions const& options)
{
    auto j = parse_body(body);
    if (!j.contains("query") || !j["query"].is_string()) {
        throw BadRequest("query must be a string");
    }
    auto spec = EngineSpec::parse(get_string(j, "engine", "slt"));
    auto rr = get_string(j, "rerank", "");
    if (!rr.empty()) {
        spec.rerank = rerank_from_name(rr);
    }
    spec.k = get_k(j, spec.k);
    auto hits = search(li, Query::parse(j["query"].get<std::string>()), spec, options);
    json arr = json::array();
    for (auto const& h : hits) {
        arr.push_back({{"docId", h.doc_id},
                       {"formulaId", formula_id_json(h.formula)},
                       {"item", h.item},
                       {"latex", h.latex},
                       {"score", h.score},
                       {"matchedTerms", h.matched_terms}});
    }
    return reply(200, json{{"engine", spec.run_tag()}, {"hits", std::move(arr)}});
}

SymbolBox symbol_from_json(json const& s)
{
    if (s.is_string()) {
        return {s.get<std::string>()};
    }
    if (!s.is_object() || !s.contains("label") || !s["label"].is_string()) {
        throw BadRequest("a symbol is a label or {label, x0, y0, x1, y1}");
    }
    SymbolBox b{s["label"].get<std::string>()};
    for (auto [key, field] : {std::pair{"x0", &b.x0}, std::pair{"y0", &b.y0},
                              std::pair{"x1", &b.x1}, std::pair{"y1", &b.y1}}) {
        if (!s.contains(key) || !s[key].is_number()) {
            throw BadRequest(std::string("symbol box needs numeric ") + key);
        }
        *field = s[key].get<double>();
    }
    if (!(b.x0 <= b.x1 && b.y0 <= b.y1)) {
        throw BadRequest("symbol box corners are out of order");
    }
    return b;
}

ApiResponse do_autocomplete(LoadedIndex const& li, std::string_view body)
{
    auto j = parse_body(body);
    if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty()) {
        throw BadRequest("symbols must be a non-empty array");
    }
    std::vector<SymbolBox> boxes;
    bool all_labels = true;
    for (auto const& s : j["symbols"]) {
        boxes.push_back(symbol_from_json(s));
        all_labels = all_labels && s.is_string();
    }
    if (all_labels) {
        std::vector<std::string> labels;
        for (auto const& b : boxes) {
            labels.push_back(b.label);
        }
        boxes = row_of_symbols(labels);
    }
    json arr = json::array();
    for (auto const& h : autocomplete(boxes, li.phoc, get_k(j, 10))) {
        auto const& doc = li.index.doc(h.doc);
        arr.push_back({{"docId", doc.id},
                       {"formulaId", h.formula},
                       {"latex", doc.formulas.at(static_cast<std::size_t>(h.formula)).latex},
                       {"score", h.score}});
    }
    return reply(200, json{{"candidates", std::move(arr)}});
}

ApiResponse do_formula(LoadedIndex const& li, std::string_view rest)
{
    auto slash = rest.rfind('/');
    if (slash == std::string_view::npos || slash == 0) {
        return error(404, "expected /formula/{doc}/{id}");
    }
    auto doc_id = std::string(rest.substr(0, slash));
    auto id_str = rest.substr(slash + 1);
    std::int32_t f = -1;
    auto [p, ec] = std::from_chars(id_str.data(), id_str.data() + id_str.size(), f);
    auto d = li.index.docno(doc_id);
    if (ec != std::errc{} || p != id_str.data() + id_str.size() || f < 0 || !d ||
        static_cast<std::size_t>(f) >= li.index.doc(*d).formulas.size()) {
        return error(404, "unknown formula " + doc_id + "/" + std::string(id_str));
    }
    auto const& doc = li.index.doc(*d);
    auto const& fe = doc.formulas[static_cast<std::size_t>(f)];
    return reply(200, json{{"docId", doc.id},
                           {"formulaId", f},
                           {"latex", fe.latex},
                           {"visualId", fe.visual_id},
                           {"text", doc.text}});
}

ApiResponse do_health(LoadedIndex const& li)
{
    return reply(200, json{{"status", "ok"},
                           {"version", kVersion},
                           {"documents", li.index.doc_count()},
                           {"formulas", li.index.formula_count()},
                           {"terms", li.index.term_count()},
                           {"phocRegions", li.phoc.scheme().region_count()}});
}

}  // namespace

struct ApiServer::Impl {
    SearchOptions options;
    mutable std::mutex mutex;
    std::shared_ptr<LoadedIndex const> index;
    httplib::Server http;
};

ApiServer::ApiServer(SearchOptions options) : m_impl(std::make_unique<Impl>())
{
    m_impl->options = options;
    auto forward = [this](httplib::Request const& req, httplib::Response& res) {
        auto r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json; charset=utf-8");
    };
    m_impl->http.Get(".*", forward);
    m_impl->http.Post(".*", forward);
    m_impl->http.Put(".*", forward);
    m_impl->http.Delete(".*", forward);
}

ApiServer::~ApiServer()
{
    stop();
}

void ApiServer::swap_index(std::shared_ptr<LoadedIndex const> next)
{
    std::lock_guard lock(m_impl->mutex);
    m_impl->index.swap(next);
}

std::shared_ptr<LoadedIndex const> ApiServer::current() const
{
    std::lock_guard lock(m_impl->mutex);
    return m_impl->index;
}

ApiResponse ApiServer::handle(std::string_view method, std::string_view path,
                              std::string_view body) const
{
    constexpr std::string_view formula_prefix = "/formula/";
    bool const known = path == "/search" || path == "/autocomplete" || path == "/health" ||
                       path.starts_with(formula_prefix);
    if (!known) {
        return error(404, "no such endpoint: " + std::string(path));
    }
    bool const post = path == "/search" || path == "/autocomplete";
    if (method != (post ? "POST" : "GET")) {
        return error(405, std::string(method) + " not allowed on " + std::string(path));
    }
    auto li = current();
    if (!li) {
        return error(503, "index loading");
    }
    try {
        if (path == "/health") {
            return do_health(*li);
        }
        if (path == "/search") {
            return do_search(*li, body, m_impl->options);
        }
        if (path == "/autocomplete") {
            return do_autocomplete(*li, body);
        }
        return do_formula(*li, path.substr(formula_prefix.size()));
    } catch (BadRequest const& e) {
        return error(400, e.what());
    } catch (std::invalid_argument const& e) {
        return error(400, e.what());
    } catch (ParseError const& e) {
        return error(400, e.what());
    } catch (TranslateError const& e) {
        return error(400, e.what());
    } catch (EmptyQuery const& e) {
        return error(400, e.what());
    } catch (std::exception const& e) {
        return error(500, e.what());
    }
}

int ApiServer::bind(std::string const& host, int port)
{
    int bound = port;
    if (port == 0) {
        bound = m_impl->http.bind_to_any_port(host);
    } else if (!m_impl->http.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    return bound;
}

void ApiServer::run()
{
    m_impl->http.listen_after_bind();
}

void ApiServer::stop()
{
    m_impl->http.stop();
}

}  // namespace mathfind
