#include "mathfind/index/collection.hpp"

#include <fstream>

#include "json.hpp"
#include "mathfind/error.hpp"

namespace mathfind {

std::vector<DocInput> read_collection(std::istream& in)
{
    std::vector<DocInput> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (nlohmann::json::parse_error const& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
            throw FormatError("missing string field 'id'", lineno);
        }
        DocInput doc;
        doc.id = j["id"].get<std::string>();
        if (j.contains("text")) {
            if (!j["text"].is_string()) {
                throw FormatError("field 'text' must be a string", lineno);
            }
            doc.text = j["text"].get<std::string>();
        }
        if (j.contains("formulas")) {
            if (!j["formulas"].is_array()) {
                throw FormatError("field 'formulas' must be an array", lineno);
            }
            for (auto const& f : j["formulas"]) {
                if (!f.is_string()) {
                    throw FormatError("formulas must be strings", lineno);
                }
                doc.formulas.push_back(f.get<std::string>());
            }
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<DocInput> read_collection(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_collection(in);
}

}  // namespace mathfind
