"""Rebuild the worked example b = (-1, 17, 89, 257, 769) and compare it with
the golden files under fixtures/paper-example/ (or rewrite them with --write)."""
import argparse
import json
import sys
from pathlib import Path

from quartic_hasse.arith import ParamTuple
from quartic_hasse.certify import run_certify
from quartic_hasse.conic import construct

B = (-1, 17, 89, 257, 769)
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "paper-example"


def build() -> dict[str, str]:
    params = ParamTuple(B, ParamTuple.default_u(B))
    bundle = construct(params.a, params.u)
    cert = run_certify(params).to_json()
    cert.pop("versions")
    return {
        "F.txt": bundle.F.to_text() + "\n",
        "g.txt": bundle.g.to_text() + "\n",
        "h.txt": bundle.h.to_text() + "\n",
        "quartic.txt": bundle.quartic.to_text() + "\n",
        "certificate.json": json.dumps(cert, indent=2) + "\n",
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--write", action="store_true", help="overwrite the golden files")
    args = ap.parse_args()
    files = build()
    if args.write:
        FIXTURES.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (FIXTURES / name).write_text(text)
        print(f"wrote {len(files)} files to {FIXTURES}")
        return 0
    bad = [n for n, t in files.items() if (FIXTURES / n).read_text() != t]
    for n in files:
        print(f"{n}: {'MISMATCH' if n in bad else 'ok'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
