#include "mathfind/formula/symbol.hpp"

namespace mathfind {

char kind_tag(SymbolKind kind) noexcept
{
    switch (kind) {
    case SymbolKind::Variable: return 'V';
    case SymbolKind::Number: return 'N';
    case SymbolKind::OpOrdered: return 'O';
    case SymbolKind::OpUnordered: return 'U';
    case SymbolKind::Function: return 'F';
    case SymbolKind::Container: return 'C';
    case SymbolKind::Wildcard: return 'W';
    }
    return '?';
}

std::string_view kind_name(SymbolKind kind) noexcept
{
    switch (kind) {
    case SymbolKind::Variable: return "VARIABLE";
    case SymbolKind::Number: return "NUMBER";
    case SymbolKind::OpOrdered: return "OP_ORDERED";
    case SymbolKind::OpUnordered: return "OP_UNORDERED";
    case SymbolKind::Function: return "FUNCTION";
    case SymbolKind::Container: return "CONTAINER";
    case SymbolKind::Wildcard: return "WILDCARD";
    }
    return "?";
}

std::string_view relation_name(Relation r) noexcept
{
    switch (r) {
    case Relation::Next: return "NEXT";
    case Relation::Sub: return "SUB";
    case Relation::Sup: return "SUP";
    case Relation::PreSub: return "PRESUB";
    case Relation::PreSup: return "PRESUP";
    case Relation::Inside: return "INSIDE";
    case Relation::Above: return "ABOVE";
    case Relation::Below: return "BELOW";
    }
    return "?";
}

char relation_code(Relation r) noexcept
{
    switch (r) {
    case Relation::Next: return 'n';
    case Relation::Sub: return 'b';
    case Relation::Sup: return 'a';
    case Relation::PreSub: return 'd';
    case Relation::PreSup: return 'c';
    case Relation::Inside: return 'w';
    case Relation::Above: return 'o';
    case Relation::Below: return 'u';
    }
    return '?';
}

}  // namespace mathfind
