"""Regenerate the frozen files under tests/golden/.

Run from the repository root after a change that is meant to move the numbers:

    python3 tools/make_goldens.py
"""

import json
from pathlib import Path

from bdcbounds import baa, bounds, cli

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

FIG4_ARGS = ["bounds", "--bounds", "c1,c2,c3,c4,tl", "--d-min", "0", "--d-max", "1",
             "--d-step", "0.01", "--L-max", "6", "--tol", "1e-10"]


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    values = {
        "f_3_2": baa.f_value(3, 2, tol=1e-10),
        "dg_lower_0.5": bounds.dg_lower_bound(0.5),
        "dm_lower_0.5": bounds.dm_lower_bound(0.5),
    }
    (GOLDEN / "values.json").write_text(json.dumps(values, indent=2) + "\n")
    text, _ = cli.fibdc_report(4, 0.5, 1e-10)
    (GOLDEN / "fibdc_L4_d0.5.txt").write_text(text)
    if cli.main(FIG4_ARGS + ["--out", str(GOLDEN / "fig4.csv")]) != 0:
        raise SystemExit("bounds export failed")


if __name__ == "__main__":
    main()
