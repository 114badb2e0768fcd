#include "mathfind/wp/aris.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "mathfind/error.hpp"

namespace mathfind {

std::string_view verb_category_name(VerbCategory c) noexcept
{
    switch (c) {
    case VerbCategory::Observation: return "observation";
    case VerbCategory::Positive: return "positive";
    case VerbCategory::Negative: return "negative";
    case VerbCategory::PositiveTransfer: return "positive-transfer";
    case VerbCategory::NegativeTransfer: return "negative-transfer";
    case VerbCategory::Construct: return "construct";
    case VerbCategory::Destroy: return "destroy";
    }
    return "?";
}

VerbLexicon const& default_verb_lexicon()
{
    static VerbLexicon const lexicon{
        {"had", VerbCategory::Observation},       {"has", VerbCategory::Observation},
        {"have", VerbCategory::Observation},      {"owns", VerbCategory::Observation},
        {"owned", VerbCategory::Observation},     {"got", VerbCategory::Positive},
        {"gets", VerbCategory::Positive},         {"found", VerbCategory::Positive},
        {"finds", VerbCategory::Positive},        {"bought", VerbCategory::Positive},
        {"buys", VerbCategory::Positive},         {"picked", VerbCategory::Positive},
        {"earned", VerbCategory::Positive},       {"lost", VerbCategory::Negative},
        {"loses", VerbCategory::Negative},        {"ate", VerbCategory::Negative},
        {"eats", VerbCategory::Negative},         {"spent", VerbCategory::Negative},
        {"sold", VerbCategory::Negative},         {"used", VerbCategory::Negative},
        {"broke", VerbCategory::Negative},        {"gave", VerbCategory::NegativeTransfer},
        {"gives", VerbCategory::NegativeTransfer}, {"lent", VerbCategory::NegativeTransfer},
        {"passed", VerbCategory::NegativeTransfer}, {"received", VerbCategory::PositiveTransfer},
        {"receives", VerbCategory::PositiveTransfer}, {"took", VerbCategory::PositiveTransfer},
        {"borrowed", VerbCategory::PositiveTransfer}, {"planted", VerbCategory::Construct},
        {"built", VerbCategory::Construct},       {"made", VerbCategory::Construct},
        {"cut", VerbCategory::Destroy},           {"destroyed", VerbCategory::Destroy},
    };
    return lexicon;
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> tokenize(std::string const& sentence)
{
    std::istringstream ss(sentence);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) {
        while (!t.empty() && std::string_view(".,!?;:").find(t.back()) != std::string_view::npos) {
            t.pop_back();
        }
        if (!t.empty()) {
            out.push_back(t);
        }
    }
    return out;
}

std::string singular(std::string w)
{
    w = lower(std::move(w));
    if (w.size() > 3 && w.ends_with("ies")) {
        return w.substr(0, w.size() - 3) + "y";
    }
    if (w.size() > 1 && w.back() == 's' && !w.ends_with("ss")) {
        w.pop_back();
    }
    return w;
}

bool is_pronoun(std::string const& w)
{
    static std::set<std::string> const p{"he", "she", "they", "it", "him", "her", "them"};
    return p.contains(lower(w));
}

bool is_possessive(std::string const& w)
{
    static std::set<std::string> const p{"her", "his", "their", "its", "my", "our", "your"};
    return p.contains(lower(w));
}

bool is_stop(std::string const& w)
{
    static std::set<std::string> const s{"and", "to", "from", "with", "left"};
    return s.contains(lower(w));
}

Quantity operator+(Quantity a, Quantity const& b)
{
    a.constant += b.constant;
    for (auto const& [k, v] : b.terms) {
        auto& slot = a.terms[k];
        slot += v;
        if (slot.is_zero()) {
            a.terms.erase(k);
        }
    }
    return a;
}

Quantity operator-(Quantity const& a, Quantity b)
{
    b.constant = -b.constant;
    for (auto& [k, v] : b.terms) {
        v = -v;
    }
    return a + b;
}

struct Container {
    Quantity initial;
    Quantity current;
};

struct Key {
    std::string subject;
    std::string attribute;
    std::string entity;
    auto operator<=>(Key const&) const = default;
};

struct Phrase {
    Quantity quantity;
    std::string attribute;
    std::string entity;
};

class World {
  public:
    explicit World(VerbLexicon const& lexicon) : m_lexicon(lexicon) {}

    void sentence(std::string const& text, int index)
    {
        auto tok = tokenize(text);
        if (tok.size() < 3) {
            throw Error("sentence outside the grammar: '" + text + "'");
        }
        auto subject = resolve(tok[0]);
        auto verb = lower(tok[1]);
        auto it = m_lexicon.find(verb);
        if (it == m_lexicon.end()) {
            throw UnknownVerb("unknown verb '" + tok[1] + "'");
        }
        auto category = it->second;
        std::size_t i = 2;
        std::vector<Phrase> phrases;
        while (true) {
            phrases.push_back(phrase(tok, i, index, text));
            if (i + 1 < tok.size() && lower(tok[i]) == "and" && is_quantity(tok[i + 1])) {
                ++i;
                continue;
            }
            break;
        }
        std::optional<std::string> other;
        if (i < tok.size() && (lower(tok[i]) == "to" || lower(tok[i]) == "from" || lower(tok[i]) == "with")) {
            if (i + 1 >= tok.size() || is_pronoun(tok[i + 1])) {
                throw Error("expected a named second subject: '" + text + "'");
            }
            other = tok[i + 1];
            i += 2;
        }
        if (i < tok.size() && lower(tok[i]) == "left") {
            ++i;
        }
        if (i != tok.size()) {
            throw Error("unexpected '" + tok[i] + "' in '" + text + "'");
        }
        bool two = category == VerbCategory::PositiveTransfer || category == VerbCategory::NegativeTransfer ||
                   category == VerbCategory::Construct || category == VerbCategory::Destroy;
        if (two != other.has_value()) {
            throw Error(std::string(two ? "verb needs a second subject: '" : "unexpected second subject: '") +
                        text + "'");
        }
        m_last_subject = subject;

        for (auto const& p : phrases) {
            Key mine{subject, p.attribute, p.entity};
            switch (category) {
            case VerbCategory::Observation:
                if (auto c = m_containers.find(mine); c == m_containers.end()) {
                    m_containers.emplace(mine, Container{p.quantity, p.quantity});
                } else {
                    m_equations.push_back(c->second.current - p.quantity);
                }
                break;
            case VerbCategory::Positive: add(mine, p.quantity); break;
            case VerbCategory::Negative: add(mine, Quantity{} - p.quantity); break;
            case VerbCategory::PositiveTransfer:
                add(mine, p.quantity);
                add({*other, p.attribute, p.entity}, Quantity{} - p.quantity);
                break;
            case VerbCategory::NegativeTransfer:
                add(mine, Quantity{} - p.quantity);
                add({*other, p.attribute, p.entity}, p.quantity);
                break;
            case VerbCategory::Construct:
                add(mine, p.quantity);
                add({*other, p.attribute, p.entity}, p.quantity);
                break;
            case VerbCategory::Destroy:
                add(mine, Quantity{} - p.quantity);
                add({*other, p.attribute, p.entity}, Quantity{} - p.quantity);
                break;
            }
        }

        WorldState state{text, category, {}};
        state.containers.push_back(snapshot(subject));
        if (other) {
            state.containers.push_back(snapshot(*other));
        }
        m_states.push_back(std::move(state));
    }

    ArisSolution question(std::string const& text)
    {
        auto tok = tokenize(text);
        std::size_t i = 0;
        auto word = [&](std::size_t k) { return k < tok.size() ? lower(tok[k]) : std::string{}; };
        if (word(0) != "how" || word(1) != "many") {
            throw Error("question outside the grammar: '" + text + "'");
        }
        i = 2;
        std::vector<std::string> words;
        while (i < tok.size() && word(i) != "does" && word(i) != "did" && word(i) != "do") {
            words.push_back(lower(tok[i++]));
        }
        if (words.empty() || i + 1 >= tok.size()) {
            throw Error("question outside the grammar: '" + text + "'");
        }
        bool initial = word(i) == "did";
        auto subject = resolve(tok[i + 1]);
        i += 2;
        for (; i < tok.size(); ++i) {
            auto w = word(i);
            if (w == "left" || w == "now") {
                initial = false;
            } else if (w == "originally" || w == "initially") {
                initial = true;
            } else if (w != "have" && w != "has" && w != "own") {
                throw Error("unexpected '" + tok[i] + "' in '" + text + "'");
            }
        }
        auto entity = singular(words.back());
        words.pop_back();
        std::string attribute = join(words);

        Quantity asked;
        bool found = false;
        for (auto const& [key, c] : m_containers) {
            if (key.subject == subject && key.entity == entity &&
                (attribute.empty() || key.attribute == attribute)) {
                asked = asked + (initial ? c.initial : c.current);
                found = true;
            }
        }
        if (!found) {
            throw Unsolvable("nothing known about " + subject + "'s " + entity);
        }
        ArisSolution out;
        out.solved = solve();
        out.answer = asked.constant;
        for (auto const& [k, v] : asked.terms) {
            auto s = out.solved.find(k);
            if (s == out.solved.end()) {
                throw Unsolvable(m_names[static_cast<std::size_t>(k)] + " is not determined");
            }
            out.answer += v * s->second;
        }
        out.states = m_states;
        out.unknowns = m_names;
        return out;
    }

  private:
    static std::string join(std::vector<std::string> const& words)
    {
        std::string out;
        for (auto const& w : words) {
            out += (out.empty() ? "" : " ") + w;
        }
        return out;
    }

    std::string resolve(std::string const& w) const
    {
        if (!is_pronoun(w)) {
            return w;
        }
        if (m_last_subject.empty()) {
            throw Error("pronoun '" + w + "' without an earlier subject");
        }
        return m_last_subject;
    }

    static bool is_quantity(std::string const& w)
    {
        if (lower(w) == "some") {
            return true;
        }
        try {
            (void)Rational::parse(w);
            return true;
        } catch (EvalError const&) {
            return false;
        }
    }

    int fresh(std::string name)
    {
        while (std::find(m_names.begin(), m_names.end(), name) != m_names.end()) {
            name += "'";
        }
        m_names.push_back(std::move(name));
        return static_cast<int>(m_names.size()) - 1;
    }

    Phrase phrase(std::vector<std::string> const& tok, std::size_t& i, int index, std::string const& text)
    {
        if (i >= tok.size() || !is_quantity(tok[i])) {
            throw Error("expected a quantity in '" + text + "'");
        }
        Phrase p;
        if (lower(tok[i]) == "some") {
            p.quantity.terms[fresh("L" + std::to_string(index))] = Rational(1);
        } else {
            p.quantity.constant = Rational::parse(tok[i]);
        }
        ++i;
        if (i + 1 < tok.size() && lower(tok[i]) == "of" && is_possessive(tok[i + 1])) {
            i += 2;
        }
        std::vector<std::string> words;
        while (i < tok.size() && !is_stop(tok[i])) {
            words.push_back(lower(tok[i++]));
        }
        if (words.empty()) {
            throw Error("expected an entity in '" + text + "'");
        }
        p.entity = singular(words.back());
        words.pop_back();
        p.attribute = join(words);
        return p;
    }

    void add(Key const& key, Quantity const& delta)
    {
        auto it = m_containers.find(key);
        if (it == m_containers.end()) {
            Quantity start;
            start.terms[fresh(key.subject.substr(0, 1) + "0")] = Rational(1);
            it = m_containers.emplace(key, Container{start, start}).first;
        }
        it->second.current = it->second.current + delta;
    }

    ContainerState snapshot(std::string const& subject) const
    {
        ContainerState out{subject, {}};
        for (auto const& [key, c] : m_containers) {
            if (key.subject == subject) {
                out.entities.push_back({c.current, key.entity, key.attribute});
            }
        }
        return out;
    }

    // Gauss-Jordan elimination; returns the unknowns with a unique value.
    std::map<int, Rational> solve() const
    {
        auto const n = m_names.size();
        std::vector<std::vector<Rational>> rows;
        for (auto const& eq : m_equations) {
            std::vector<Rational> row(n + 1);
            for (auto const& [k, v] : eq.terms) {
                row[static_cast<std::size_t>(k)] = v;
            }
            row[n] = -eq.constant;
            rows.push_back(std::move(row));
        }
        std::vector<std::size_t> pivot_col;
        std::size_t r = 0;
        for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
            auto p = r;
            while (p < rows.size() && rows[p][c].is_zero()) {
                ++p;
            }
            if (p == rows.size()) {
                continue;
            }
            std::swap(rows[r], rows[p]);
            auto inv = Rational(1) / rows[r][c];
            for (auto& v : rows[r]) {
                v *= inv;
            }
            for (std::size_t o = 0; o < rows.size(); ++o) {
                if (o != r && !rows[o][c].is_zero()) {
                    auto f = rows[o][c];
                    for (std::size_t k = 0; k <= n; ++k) {
                        rows[o][k] -= f * rows[r][k];
                    }
                }
            }
            pivot_col.push_back(c);
            ++r;
        }
        for (std::size_t o = r; o < rows.size(); ++o) {
            if (!rows[o][n].is_zero()) {
                throw Unsolvable("the sentences contradict each other");
            }
        }
        std::map<int, Rational> out;
        for (std::size_t k = 0; k < pivot_col.size(); ++k) {
            bool free_terms = false;
            for (std::size_t c = 0; c < n; ++c) {
                free_terms = free_terms || (c != pivot_col[k] && !rows[k][c].is_zero());
            }
            if (!free_terms) {
                out.emplace(static_cast<int>(pivot_col[k]), rows[k][n]);
            }
        }
        return out;
    }

    VerbLexicon const& m_lexicon;
    std::map<Key, Container> m_containers;
    std::vector<Quantity> m_equations;
    std::vector<std::string> m_names;
    std::vector<WorldState> m_states;
    std::string m_last_subject;
};

}  // namespace

ArisSolution aris_solve(std::vector<std::string> const& sentences, std::string const& question,
                        VerbLexicon const& lexicon)
{
    World world(lexicon);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        world.sentence(sentences[i], static_cast<int>(i));
    }
    return world.question(question);
}

ArisSolution aris_solve_text(std::string const& text, VerbLexicon const& lexicon)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        cur += c;
        if (c == '.' || c == '!' || c == '?') {
            auto b = cur.find_first_not_of(" \t\r\n");
            if (b != std::string::npos) {
                parts.push_back(cur.substr(b));
            }
            cur.clear();
        }
    }
    if (cur.find_first_not_of(" \t\r\n") != std::string::npos) {
        parts.push_back(cur.substr(cur.find_first_not_of(" \t\r\n")));
    }
    auto q = std::find_if(parts.rbegin(), parts.rend(), [](auto const& s) { return s.back() == '?'; });
    if (q == parts.rend()) {
        throw Error("no question in the problem text");
    }
    auto qi = static_cast<std::size_t>(std::distance(q, parts.rend()) - 1);
    std::vector<std::string> sentences(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(qi));
    return aris_solve(sentences, parts[qi], lexicon);
}

}  // namespace mathfind
