"""Search a fresh parameter tuple and certify the resulting quartic,
re-sampling u if the first quartic is singular."""
import argparse
import json
import sys

from quartic_hasse.arith import search_params
from quartic_hasse.certify import CertificationFailure, certify_with_retry

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--bound", type=int, default=2000)
ap.add_argument("--seed", type=int, default=1)
ap.add_argument("--out", default=None)
args = ap.parse_args()

params = search_params(args.bound, args.seed)
print("b =", params.b)
try:
    cert = certify_with_retry(params)
except CertificationFailure as exc:
    print(json.dumps(exc.to_json(), indent=2))
    sys.exit(1)
print(cert.quartic)
print(cert.verdicts)
if args.out:
    with open(args.out, "w") as fh:
        json.dump(cert.to_json(), fh, indent=2)
sys.exit(0 if cert.passed else 1)
