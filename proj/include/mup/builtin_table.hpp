#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>

namespace mup {

struct BuiltinInfo {
    bool deterministic = true;
    bool performs_io = false;
    bool may_error = false;
};

using PredicateKey = std::pair<std::string, std::size_t>;

// Predicates resolved by the engine before any clause lookup. User programs
// may not define clauses for these.
inline const std::map<PredicateKey, BuiltinInfo> &builtin_table() {
    static const std::map<PredicateKey, BuiltinInfo> table = {
        {{"true", 0}, {}},
        {{"fail", 0}, {}},
        {{"false", 0}, {}},
        {{"<", 2}, {true, false, true}},
        {{">", 2}, {true, false, true}},
        {{"=<", 2}, {true, false, true}},
        {{">=", 2}, {true, false, true}},
        {{"=:=", 2}, {true, false, true}},
        {{"=\\=", 2}, {true, false, true}},
        {{"is", 2}, {true, false, true}},
        {{"=", 2}, {}},
        {{"read", 1}, {true, true, true}},
        {{"write", 1}, {true, true, false}},
        {{"nl", 0}, {true, true, false}},
    };
    return table;
}

inline bool is_builtin(const std::string &name, std::size_t arity) {
    return builtin_table().count({name, arity}) != 0;
}

} // namespace mup
