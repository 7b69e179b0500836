#pragma once

#include <string>
#include <vector>

#include "indep/model.h"

namespace indep {

/// Parses one or more `model <name> { ... }` blocks.
std::vector<Structure> parse_structures(const std::string &text);
/// Exactly one structure block.
Structure parse_structure(const std::string &text);

struct NamedTeam {
    std::string name;
    Team team;
};

/// Parses `team <name> over (x, y) { (e1, e2) ... }` blocks. Element names
/// are resolved against `m`.
std::vector<NamedTeam> parse_teams(const std::string &text, const Structure &m);
Team parse_team(const std::string &text, const Structure &m);

std::string format_structure(const Structure &m);
std::string format_team(const Team &x, const Structure &m, const std::string &name = "X");

std::string read_file(const std::string &path);

} // namespace indep
