"""Generate data/knot_table.txt from standard constructions.

Each entry is built from its Conway notation (rational and Montesinos
knots) or a braid word, then validated against the knot's published
determinant before being written.  A mismatch aborts the run: the table
must never contain an unvalidated code.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from unknot.construct import braid_knot, montesinos_knot, rational_knot
from unknot.diagrams import serialize_pd
from unknot.invariants import determinant
from unknot.portgraph import PortDiagram

# name -> (kind, parameters, determinant from the standard knot tables)
KNOTS = {
    "3_1": ("rational", [3], 3),
    "4_1": ("rational", [2, 2], 5),
    "5_1": ("rational", [5], 5),
    "5_2": ("rational", [3, 2], 7),
    "6_1": ("rational", [4, 2], 9),
    "6_2": ("rational", [3, 1, 2], 11),
    "6_3": ("rational", [2, 1, 1, 2], 13),
    "7_1": ("rational", [7], 7),
    "7_2": ("rational", [5, 2], 11),
    "7_3": ("rational", [4, 3], 13),
    "7_4": ("rational", [3, 1, 3], 15),
    "7_5": ("rational", [3, 2, 2], 17),
    "7_6": ("rational", [2, 1, 2, 2], 19),
    "7_7": ("rational", [2, 1, 1, 1, 2], 21),
    "8_1": ("rational", [6, 2], 13),
    "8_2": ("rational", [5, 1, 2], 17),
    "8_3": ("rational", [4, 4], 17),
    "8_4": ("rational", [4, 1, 3], 19),
    "8_5": ("montesinos", [[3], [3], [2]], 21),
    "8_6": ("rational", [3, 3, 2], 23),
    "8_7": ("rational", [4, 1, 1, 2], 23),
    "8_8": ("rational", [2, 3, 1, 2], 25),
    "8_9": ("rational", [3, 1, 1, 3], 25),
    "8_10": ("montesinos", [[3], [2, 1], [2]], 27),
    "8_11": ("rational", [3, 2, 1, 2], 27),
    "8_12": ("rational", [2, 2, 2, 2], 29),
    "8_13": ("rational", [3, 1, 1, 1, 2], 29),
    "8_14": ("rational", [2, 2, 1, 1, 2], 31),
    "8_15": ("montesinos", [[2, 1], [2, 1], [2]], 33),
    "8_16": ("braid", [-1, -1, 2, -1, -1, 2, -1, 2], 35),
    "8_17": ("braid", [-1, -1, 2, -1, 2, -1, 2, 2], 37),
    "8_18": ("braid", [-1, 2, -1, 2, -1, 2, -1, 2], 45),
    "8_19": ("montesinos", [[3], [3], [-2]], 3),
    "8_20": ("montesinos", [[3], [2, 1], [-2]], 9),
    "8_21": ("montesinos", [[2, 1], [2, 1], [-2]], 15),
}

BUILDERS = {
    "rational": rational_knot,
    "montesinos": montesinos_knot,
    "braid": braid_knot,
}


def main() -> None:
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "knot_table.txt"
    lines = ["# name  PD code; every entry determinant-validated at generation"]
    for name, (kind, params, det) in KNOTS.items():
        d = BUILDERS[kind](params)
        crossings = int(name.split("_")[0])
        if len(d.crossings) != crossings:
            raise SystemExit(f"{name}: built {len(d.crossings)} crossings, "
                             f"want {crossings}")
        if not PortDiagram.from_diagram(d).is_planar():
            raise SystemExit(f"{name}: diagram is not planar")
        got = determinant(d)
        if got != det:
            raise SystemExit(f"{name}: determinant {got}, want {det}")
        lines.append(f"{name}\t{serialize_pd(d)}")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(lines) - 1} entries)")


if __name__ == "__main__":
    main()
