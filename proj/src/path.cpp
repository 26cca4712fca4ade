#include "svgnum/path.hpp"

#include <cctype>
#include <cmath>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"

namespace svgnum {

namespace {

bool is_sep(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == ',';
}

std::size_t skip_seps(std::string_view s, std::size_t i) {
    while (i < s.size() && is_sep(s[i])) ++i;
    return i;
}

bool starts_number(std::string_view s, std::size_t i) {
    if (i >= s.size()) return false;
    char c = s[i];
    if (c >= '0' && c <= '9') return true;
    if (c == '+' || c == '-' || c == '.') {
        if (i + 1 >= s.size()) return c == '.';
        char d = s[i + 1];
        return (d >= '0' && d <= '9') || (c != '.' && d == '.');
    }
    return false;
}

} // namespace

int command_arity(char op) {
    switch (std::toupper(static_cast<unsigned char>(op))) {
    case 'M':
    case 'L':
    case 'T': return 2;
    case 'H':
    case 'V': return 1;
    case 'C': return 6;
    case 'S':
    case 'Q': return 4;
    case 'A': return 7;
    case 'Z': return 0;
    default: return -1;
    }
}

bool is_path_opcode(char op) { return command_arity(op) >= 0; }

bool is_relative_opcode(char op) {
    return is_path_opcode(op) && std::islower(static_cast<unsigned char>(op));
}

std::vector<PathCommand> parse_path(std::string_view d) {
    std::vector<PathCommand> out;
    std::size_t i = skip_seps(d, 0);
    char pending = '\0'; // opcode an implicit repeat would use; '\0' = none

    while (i < d.size()) {
        char op;
        std::size_t op_at = i;
        if (is_path_opcode(d[i])) {
            op = d[i];
            ++i;
        } else if (starts_number(d, i)) {
            if (pending == '\0')
                fail(Errc::MalformedPath, "number with no active command", i);
            op = pending;
            op_at = i;
        } else {
            fail(Errc::MalformedPath,
                 std::string("unknown opcode '") + d[i] + "'", i);
        }

        const int arity = command_arity(op);
        PathCommand cmd{op, {}};
        cmd.params.reserve(arity);
        for (int p = 0; p < arity; ++p) {
            i = skip_seps(d, i);
            // A/a flag parameters are single '0'/'1' characters and may be
            // jammed against the next number ("...0 01.5" parses as 0,0,1.5).
            if ((op == 'A' || op == 'a') && (p == 3 || p == 4)) {
                if (i >= d.size() || (d[i] != '0' && d[i] != '1'))
                    fail(Errc::MalformedPath, "arc flag must be 0 or 1", i);
                cmd.params.push_back(d[i] == '1' ? 1.0 : 0.0);
                ++i;
                continue;
            }
            auto num = scan_number(d, i);
            if (!num)
                fail(Errc::MalformedPath,
                     "expected number for parameter " + std::to_string(p + 1) +
                         " of '" + std::string(1, op) + "'",
                     i);
            cmd.params.push_back(num->value);
            i = num->end;
        }
        if ((op == 'A' || op == 'a') && (cmd.params[0] < 0 || cmd.params[1] < 0))
            fail(Errc::MalformedPath, "negative arc radius", op_at);
        out.push_back(std::move(cmd));

        switch (op) {
        case 'M': pending = 'L'; break;
        case 'm': pending = 'l'; break;
        case 'Z':
        case 'z': pending = '\0'; break; // nothing may repeat a closepath
        default: pending = op; break;
        }
        i = skip_seps(d, i);
    }
    return out;
}

std::string serialize_path(const std::vector<PathCommand>& commands, int precision) {
    std::string out;
    for (const auto& cmd : commands) {
        if (!out.empty()) out.push_back(' ');
        out.push_back(cmd.op);
        for (double p : cmd.params) {
            out.push_back(' ');
            out.append(format_number(p, precision));
        }
    }
    return out;
}

std::vector<PathCommand> to_absolute(const std::vector<PathCommand>& commands) {
    std::vector<PathCommand> out;
    out.reserve(commands.size());
    double cx = 0, cy = 0;       // current point
    double sx = 0, sy = 0;       // subpath start
    for (const auto& cmd : commands) {
        const bool rel = is_relative_opcode(cmd.op);
        const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd.op)));
        PathCommand abs{up, cmd.params};
        switch (up) {
        case 'M':
        case 'L':
        case 'T':
            if (rel) { abs.params[0] += cx; abs.params[1] += cy; }
            cx = abs.params[0];
            cy = abs.params[1];
            if (up == 'M') { sx = cx; sy = cy; }
            break;
        case 'H':
            if (rel) abs.params[0] += cx;
            cx = abs.params[0];
            break;
        case 'V':
            if (rel) abs.params[0] += cy;
            cy = abs.params[0];
            break;
        case 'C':
            if (rel)
                for (int k = 0; k < 6; k += 2) { abs.params[k] += cx; abs.params[k + 1] += cy; }
            cx = abs.params[4];
            cy = abs.params[5];
            break;
        case 'S':
        case 'Q':
            if (rel)
                for (int k = 0; k < 4; k += 2) { abs.params[k] += cx; abs.params[k + 1] += cy; }
            cx = abs.params[2];
            cy = abs.params[3];
            break;
        case 'A':
            // rx ry rotation large-arc sweep x y: only the endpoint translates
            if (rel) { abs.params[5] += cx; abs.params[6] += cy; }
            cx = abs.params[5];
            cy = abs.params[6];
            break;
        case 'Z':
            cx = sx;
            cy = sy;
            break;
        }
        out.push_back(std::move(abs));
    }
    return out;
}

void validate_commands(const std::vector<PathCommand>& commands) {
    for (const auto& cmd : commands) {
        const int arity = command_arity(cmd.op);
        if (arity < 0)
            fail(Errc::MalformedPath, std::string("unknown opcode '") + cmd.op + "'");
        if (static_cast<int>(cmd.params.size()) != arity)
            fail(Errc::MalformedPath,
                 std::string("arity mismatch for '") + cmd.op + "': got " +
                     std::to_string(cmd.params.size()) + ", want " + std::to_string(arity));
        if (cmd.op == 'A' || cmd.op == 'a') {
            if (cmd.params[0] < 0 || cmd.params[1] < 0)
                fail(Errc::MalformedPath, "negative arc radius");
            for (int k : {3, 4})
                if (cmd.params[k] != 0.0 && cmd.params[k] != 1.0)
                    fail(Errc::MalformedPath, "arc flag must be 0 or 1");
        }
        for (double p : cmd.params)
            if (!std::isfinite(p))
                fail(Errc::MalformedPath, "non-finite parameter");
    }
}

} // namespace svgnum
