#pragma once

#include <optional>
#include <string>

namespace mup {

enum class Grammar {
    Standard,    // `#` is choice, `!` and `*->` are rejected
    Verification // output of the translator: `!` and `*->` allowed, `#` is not an operator
};

enum class OpType { xfx, xfy, yfx, fy };

struct OpDef {
    int priority;
    OpType type;
};

inline std::optional<OpDef> infix_op(const std::string &name, Grammar g) {
    if (name == ":-")
        return OpDef{1200, OpType::xfx};
    if (name == ";")
        return OpDef{1100, OpType::xfy};
    if (name == "#")
        return g == Grammar::Standard ? std::optional<OpDef>(OpDef{1100, OpType::xfy}) : std::nullopt;
    if (name == "*->")
        return g == Grammar::Verification ? std::optional<OpDef>(OpDef{1050, OpType::xfy}) : std::nullopt;
    if (name == ",")
        return OpDef{1000, OpType::xfy};
    if (name == "=" || name == "<" || name == ">" || name == "=<" || name == ">=" || name == "is" ||
        name == "=:=" || name == "=\\=")
        return OpDef{700, OpType::xfx};
    if (name == "+" || name == "-")
        return OpDef{500, OpType::yfx};
    if (name == "*" || name == "/" || name == "//" || name == "mod")
        return OpDef{400, OpType::yfx};
    return std::nullopt;
}

inline std::optional<OpDef> prefix_op(const std::string &name) {
    if (name == "-")
        return OpDef{200, OpType::fy};
    return std::nullopt;
}

inline int left_max(const OpDef &op) { return op.type == OpType::yfx ? op.priority : op.priority - 1; }
inline int right_max(const OpDef &op) {
    return (op.type == OpType::xfy || op.type == OpType::fy) ? op.priority : op.priority - 1;
}

} // namespace mup
