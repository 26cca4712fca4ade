#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace svgnum {

// One path-data command. `op` is an SVG opcode (MLHVCSQTAZ, either case) and
// `params` holds exactly arity(op) values in user units.
struct PathCommand {
    char op = 'Z';
    std::vector<double> params;

    bool operator==(const PathCommand&) const = default;
};

// Parameter count of an opcode (case-insensitive); -1 for unknown letters.
int command_arity(char op);

bool is_path_opcode(char op);
bool is_relative_opcode(char op);

// Parses SVG path data. Implicit command repetition is expanded (a repeat
// after M/m becomes L/l), so the result never contains implicit commands.
// Throws Error{MalformedPath} carrying the byte offset of the defect.
std::vector<PathCommand> parse_path(std::string_view d);

// Canonical text form: opcodes and numbers separated by single spaces,
// numbers formatted per format_number(value, precision).
std::string serialize_path(const std::vector<PathCommand>& commands, int precision);

// Rewrites every command as its absolute-opcode equivalent, tracking the
// current point and subpath start. H/V/S/T/A keep their opcode shape; only
// coordinates move to absolute positions (A radii/rotation/flags unchanged).
std::vector<PathCommand> to_absolute(const std::vector<PathCommand>& commands);

// Throws Error{MalformedPath} if any command breaks the arity table or the
// A-command flag/radius constraints.
void validate_commands(const std::vector<PathCommand>& commands);

} // namespace svgnum
