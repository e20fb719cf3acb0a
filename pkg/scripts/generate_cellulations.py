"""Regenerate the shipped dual-cellulation cycle data.

Builds the fixed catalog (tetrahedron, cube, dodecahedron, bigon-4/6/8/12)
from the flag structure of the matching rank-3 finite systems and writes
src/coxwall/data/cellulations.json.  Pure integer combinatorics; safe to
rerun, output is deterministic.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from coxwall.even_polytopes import _bigon_cellulation, _polyhedron_cellulation

EXPECTED_COUNTS = {
    "tetrahedron": {"V": 4, "E": 6, "F": 4},
    "cube": {"V": 8, "E": 12, "F": 6},
    "dodecahedron": {"V": 20, "E": 30, "F": 12},
    "bigon-4": {"V": 2, "E": 2, "F": 2},
    "bigon-6": {"V": 2, "E": 3, "F": 3},
    "bigon-8": {"V": 2, "E": 4, "F": 4},
    "bigon-12": {"V": 2, "E": 6, "F": 6},
}


def main() -> None:
    data = {
        "tetrahedron": _polyhedron_cellulation(3),
        "cube": _polyhedron_cellulation(4),
        "dodecahedron": _polyhedron_cellulation(5),
        "bigon-4": _bigon_cellulation(4),
        "bigon-6": _bigon_cellulation(6),
        "bigon-8": _bigon_cellulation(8),
        "bigon-12": _bigon_cellulation(12),
    }
    for cid, cell in data.items():
        counts = cell["counts"]
        assert counts == EXPECTED_COUNTS[cid], (cid, counts)
        v, e, f = counts["V"], counts["E"], counts["F"]
        assert v - e + f == 2, "base cellulation must be a sphere: %s" % cid
        flags = len(cell["three_cycles"])
        assert len(cell["edges"]) == 3 * flags // 2, cid
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "coxwall" / "data"
    target = out / "cellulations.json"
    target.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    print("wrote %s (%d cellulations)" % (target, len(data)))


if __name__ == "__main__":
    main()
