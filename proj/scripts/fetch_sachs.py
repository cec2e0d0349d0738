#!/usr/bin/env python3
"""Convert the Sachs et al. (2005) observational flow-cytometry table into
the CSV layout the benchmark expects: data/sachs_observational.csv with a
header row of the 11 protein names and one numeric row per cell.

The source data is not redistributed with this repository. Obtain the
observational (anti-CD3/CD28, no intervention) table, 853 rows x 11 columns,
from the original publication's supplementary material or a public mirror,
export
it as CSV/TSV if it is an Excel sheet, then run:

    python3 scripts/fetch_sachs.py path/to/source.csv

or, if you have a direct URL to a delimited text version:

    python3 scripts/fetch_sachs.py --url https://example.org/sachs.csv

Column names are matched case-insensitively against the usual aliases
(praf/Raf, pmek/Mek, plcg/Plcg, PIP2, PIP3, p44/42/Erk, pakts473/Akt, PKA,
PKC, P38, pjnk/Jnk); any other column is an error.
"""

import argparse
import csv
import io
import pathlib
import sys
import urllib.request

ALIASES = {
    "Raf": {"raf", "praf"},
    "Mek": {"mek", "pmek", "mek12"},
    "Plcg": {"plcg", "plc", "plcgamma"},
    "PIP2": {"pip2"},
    "PIP3": {"pip3"},
    "Erk": {"erk", "p44/42", "p44.42", "erk12"},
    "Akt": {"akt", "pakts473", "akts473"},
    "PKA": {"pka"},
    "PKC": {"pkc"},
    "P38": {"p38"},
    "Jnk": {"jnk", "pjnk"},
}


def canonical(name: str) -> str:
    key = name.strip().lower()
    for canon, alts in ALIASES.items():
        if key == canon.lower() or key in alts:
            return canon
    raise SystemExit(f"unrecognized column name: {name!r}")


def sniff_rows(text: str):
    """Yields rows from comma-, tab-, or whitespace-delimited text."""
    first = text.splitlines()[0] if text else ""
    if "," in first:
        yield from csv.reader(io.StringIO(text))
    elif "\t" in first:
        yield from csv.reader(io.StringIO(text), delimiter="\t")
    else:
        for line in text.splitlines():
            if line.strip():
                yield line.split()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source", nargs="?", help="local delimited text file")
    ap.add_argument("--url", help="download a delimited text version instead")
    ap.add_argument(
        "--out",
        default=str(pathlib.Path(__file__).resolve().parent.parent
                    / "data" / "sachs_observational.csv"),
        help="output path (default: data/sachs_observational.csv)")
    args = ap.parse_args()

    if bool(args.source) == bool(args.url):
        ap.error("give exactly one of: a source file, or --url")

    if args.url:
        print(f"downloading {args.url}")
        with urllib.request.urlopen(args.url) as r:
            text = r.read().decode("utf-8-sig")
    else:
        text = pathlib.Path(args.source).read_text(encoding="utf-8-sig")

    rows = list(sniff_rows(text))
    if len(rows) < 2:
        raise SystemExit("source has no data rows")
    header = [canonical(c) for c in rows[0]]
    if sorted(header) != sorted(ALIASES):
        raise SystemExit(f"expected the 11 protein columns, found {rows[0]}")

    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise SystemExit(f"row {lineno}: expected {len(header)} fields, "
                             f"found {len(row)}")
        try:
            data.append([float(c) for c in row])
        except ValueError as e:
            raise SystemExit(f"row {lineno}: {e}")

    if len(data) != 853:
        print(f"warning: expected 853 observational rows, found {len(data)}; "
              "make sure this is the no-intervention (cd3/cd28) table",
              file=sys.stderr)

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(data)
    print(f"wrote {out} ({len(data)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
