#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsr/lang/diagnostics.hpp"

namespace nsr::lang {

// Exact rational; numeric literals never go through floating point.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_integer() const { return den == 1; }
    std::string str() const;
};

enum class SmtSort { int_sort, real_sort, bool_sort };

std::string to_string(SmtSort s);

struct SmtTerm {
    enum class Kind { symbol, numeral, boolean, app };

    Kind kind = Kind::symbol;
    std::string symbol;           // Kind::symbol
    Rational number;              // Kind::numeral
    bool boolean_value = false;   // Kind::boolean
    std::string op;               // Kind::app: and/or/not/>/</>=/<=/=
    std::vector<SmtTerm> args;

    bool operator==(const SmtTerm&) const = default;

    static SmtTerm sym(std::string s) {
        SmtTerm t;
        t.kind = Kind::symbol;
        t.symbol = std::move(s);
        return t;
    }
    static SmtTerm num(Rational r) {
        SmtTerm t;
        t.kind = Kind::numeral;
        t.number = r;
        return t;
    }
    static SmtTerm boolean(bool b) {
        SmtTerm t;
        t.kind = Kind::boolean;
        t.boolean_value = b;
        return t;
    }
    static SmtTerm app(std::string op_name, std::vector<SmtTerm> as) {
        SmtTerm t;
        t.kind = Kind::app;
        t.op = std::move(op_name);
        t.args = std::move(as);
        return t;
    }
};

struct SmtDecl {
    std::string name;
    SmtSort sort = SmtSort::int_sort;

    bool operator==(const SmtDecl&) const = default;
};

struct SmtScript {
    std::vector<SmtDecl> declarations;
    std::vector<SmtTerm> assertions;
    int check_sat_count = 0;

    bool operator==(const SmtScript&) const = default;

    const SmtDecl* find_decl(const std::string& name) const;
};

// S-expression reader for declare-const / assert / check-sat scripts.
// Comments start with ';'. Validates declaration-before-use, operator
// arity/sorts and exactly one check-sat.
ParseResult<SmtScript> parse_smt(const std::string& text);

std::string pretty_print(const SmtScript& s);
std::string to_string(const SmtTerm& t);

}  // namespace nsr::lang
