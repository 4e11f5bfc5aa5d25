"""Regenerate the embedded knot tables from a KnotInfo CSV export.

Usage:
    python scripts/build_corpus.py /path/to/knotinfo_data_complete.csv

The CSV ships inside the ``database_knotinfo`` wheel (pipe-delimited).  This
script is only needed to refresh the data assets; the package does not import it.
"""

import csv
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "knotdetect" / "data"
REF = ROOT / "tests" / "data"

EXTRA = {"11n_34": "11n34", "11n_42": "11n42"}
REF_COLUMNS = [
    "jones_polynomial",
    "homfly_polynomial",
    "alexander_polynomial",
    "signature",
    "determinant",
    "khovanov_unreduced_integral_polynomial",
    "symmetry_type",
]


def pd_text(raw: str) -> str:
    quads = json.loads(raw)
    return ";".join("X(%d,%d,%d,%d)" % tuple(q) for q in quads)


def dt_text(raw: str) -> str:
    return " ".join(str(v) for v in json.loads(raw))


def main(src: str) -> None:
    csv.field_size_limit(10**9)
    with open(src, newline="") as fh:
        reader = csv.reader(fh, delimiter="|")
        header = next(reader)
        next(reader)  # human-readable column titles
        rows = [dict(zip(header, r)) for r in reader]

    table, extra, ref = [], [], []
    for r in rows:
        cn = r["crossing_number"]
        if not cn.isdigit():
            continue
        if not (3 <= int(cn) <= 10 or r["name"] in EXTRA):
            continue
        rec = {
            "name": EXTRA.get(r["name"], r["name"]),
            "crossing_number": cn,
            "alternating": "true" if r["alternating"] == "Y" else "false",
            "dt_code": dt_text(r["dt_notation"]),
            "pd_code": pd_text(r["pd_notation"]),
        }
        if 3 <= int(cn) <= 10:
            table.append(rec)
        else:
            extra.append(rec)
        ref.append({"name": rec["name"], **{c: r[c] for c in REF_COLUMNS}})

    fields = ["name", "crossing_number", "alternating", "dt_code", "pd_code"]
    DATA.mkdir(parents=True, exist_ok=True)
    for path, recs in ((DATA / "knots_3_10.csv", table), (DATA / "mutants_11.csv", extra)):
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            w.writerows(recs)
    REF.mkdir(parents=True, exist_ok=True)
    with open(REF / "knotinfo_reference.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["name"] + REF_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(ref)
    print(f"{len(table)} table knots, {len(extra)} extra, {len(ref)} reference rows")


if __name__ == "__main__":
    main(sys.argv[1])
