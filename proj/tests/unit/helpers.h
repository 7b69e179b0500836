#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "indep/model.h"

namespace indep::testing {

inline Signature sig_of(const std::string &relations) {
    Signature s;
    // "R/1 S/2" style list
    std::size_t i = 0;
    while (i < relations.size()) {
        const auto slash = relations.find('/', i);
        if (slash == std::string::npos) break;
        const auto end = relations.find(' ', slash);
        s.add_relation(relations.substr(i, slash - i), std::stoi(relations.substr(slash + 1, end - slash - 1)));
        if (end == std::string::npos) break;
        i = end + 1;
    }
    return s;
}

/// Domain {0, .., n-1} named by the digits; unary R holding on `r`.
inline Structure numbered(std::size_t n, const std::vector<Element> &r = {}) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    Structure m(names);
    m.declare_relation("R", 1);
    for (Element e : r) m.add_tuple("R", {e});
    return m;
}

inline Team team(std::vector<std::string> vars, std::vector<Row> rows) { return Team(std::move(vars), rows); }

} // namespace indep::testing

namespace indep {

inline void PrintTo(const FoFormula &f, std::ostream *os) { *os << to_string(f); }
inline void PrintTo(const IlFormula &f, std::ostream *os) { *os << to_string(f); }

} // namespace indep
