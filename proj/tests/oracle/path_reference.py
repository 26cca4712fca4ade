#!/usr/bin/env python3
"""Reference SVG path-data parser used to freeze expectations for the C++
parser tests. Implemented independently, straight from the SVG 1.1 path
grammar (https://www.w3.org/TR/SVG11/paths.html#PathDataBNF), with regex
lexing rather than a hand-rolled scanner.

Writes tests/golden/path_oracle.json: for each fixture d-string, the fully
expanded command list (implicit repeats resolved, M-repeat becomes L).

Usage: python3 tests/oracle/path_reference.py
"""

import json
import os
import re

ARITY = {"M": 2, "L": 2, "T": 2, "H": 1, "V": 1, "C": 6, "S": 4, "Q": 4, "A": 7, "Z": 0}

NUMBER = re.compile(
    r"[+-]?(?:\d+\.\d*|\d+|\.\d+)(?:[eE][+-]?\d+)?"
)
FLAG = re.compile(r"[01]")
SEP = re.compile(r"[\s,]*")


def parse(d: str):
    pos = SEP.match(d, 0).end()
    out = []
    pending = None
    while pos < len(d):
        ch = d[pos]
        if ch.upper() in ARITY:
            op = ch
            pos += 1
        elif pending is not None and (ch.isdigit() or ch in "+-."):
            op = pending
        else:
            raise ValueError(f"unexpected character {ch!r} at {pos}")
        params = []
        for i in range(ARITY[op.upper()]):
            pos = SEP.match(d, pos).end()
            if op.upper() == "A" and i in (3, 4):
                m = FLAG.match(d, pos)
                if not m:
                    raise ValueError(f"bad arc flag at {pos}")
            else:
                m = NUMBER.match(d, pos)
                if not m:
                    raise ValueError(f"expected number at {pos} for {op}")
            params.append(float(m.group()))
            pos = m.end()
        out.append([op, params])
        if op == "M":
            pending = "L"
        elif op == "m":
            pending = "l"
        elif op in ("Z", "z"):
            pending = None
        else:
            pending = op
        pos = SEP.match(d, pos).end()
    return out


FIXTURES = [
    "M 123.456 234.567",
    "z",
    "M 0 0 10 10 20 0",
    "m 5 5 1 1 2 2",
    "M1,2L3,4",
    "M 1 2 L 3 4 L 5 6 Z",
    "M0 0L1.5.5",          # jammed fraction: 1.5 then .5
    "M0 0l1-2",            # jammed sign: 1 then -2
    "M 1e2 -2E-1",
    "M 0 0 C 1 1 2 2 3 3 4 4 5 5 6 6",   # implicit C repeat
    "M 0 0 H 10 20 30",                    # implicit H repeats
    "M 0 0 a1 1 0 011,0",                  # jammed arc flags
    "M 0 0 A 5 5 0 1 0 10 10",
    "M 0 0 Q 1 2 3 4 T 5 6",
    "M 0 0 S 1 1 2 2 s 1 1 2 2",
    "M 3. .5 L +4 -.25",
    "M 0 0 V 1 2 3 z m 1 1 h 2 v 2 z",
    "  M \t 7 , 8  ",
]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    golden = os.path.join(here, "..", "golden")
    os.makedirs(golden, exist_ok=True)
    records = [{"d": d, "commands": parse(d)} for d in FIXTURES]
    with open(os.path.join(golden, "path_oracle.json"), "w") as f:
        json.dump(records, f, indent=1)
    print(f"wrote {len(records)} records")


if __name__ == "__main__":
    main()
