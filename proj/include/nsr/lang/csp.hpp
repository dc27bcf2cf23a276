#pragma once

#include <string>
#include <vector>

#include "nsr/lang/diagnostics.hpp"

namespace nsr::lang {

struct CspEnum {
    std::string name;
    std::vector<std::string> members;

    bool operator==(const CspEnum&) const = default;
};

struct CspArray {
    std::string name;
    std::string index_enum;
    long long lo = 1;
    long long hi = 1;

    bool operator==(const CspArray&) const = default;
};

enum class CmpOp { lt, gt, eq, le, ge };

std::string to_string(CmpOp op);
bool eval_cmp(CmpOp op, long long lhs, long long rhs);

// One side of a comparison: either an integer literal or array[Member]+offset.
struct CspOperand {
    bool is_literal = false;
    long long literal = 0;
    std::string array;
    std::string member;
    long long offset = 0;

    bool operator==(const CspOperand&) const = default;

    static CspOperand lit(long long v) {
        CspOperand o;
        o.is_literal = true;
        o.literal = v;
        return o;
    }
    static CspOperand var(std::string arr, std::string mem, long long off = 0) {
        CspOperand o;
        o.array = std::move(arr);
        o.member = std::move(mem);
        o.offset = off;
        return o;
    }
};

struct CspConstraint {
    enum class Kind { all_different, compare };

    Kind kind = Kind::compare;
    std::string array;  // all_different: the array in the comprehension
    CspOperand lhs, rhs;
    CmpOp op = CmpOp::eq;

    bool operator==(const CspConstraint&) const = default;
};

// Satisfy-only subset of the MiniZinc-style ordering models.
struct CspModel {
    std::vector<CspEnum> enums;
    std::vector<CspArray> arrays;
    std::vector<CspConstraint> constraints;

    bool operator==(const CspModel&) const = default;

    const CspEnum* find_enum(const std::string& name) const;
    const CspArray* find_array(const std::string& name) const;
};

// Accepts: include "globals.mzn"; (ignored), % comments, enum declarations,
// array[ENUM] of var lo..hi declarations, all_different over an array
// comprehension, binary comparisons with optional integer offsets, and
// solve satisfy;. Anything else is a diagnostic naming the construct.
ParseResult<CspModel> parse_csp(const std::string& text);

std::string pretty_print(const CspModel& m);

}  // namespace nsr::lang
