#!/usr/bin/env python3
"""Worked example: two rank-2 diagonal states with identical spectra that
no power trace can tell apart, separated by a degenerate-block invariant.

Writes the two state files, prints both signatures' block invariants and
the full comparison verdict.
"""

import argparse
import json
from pathlib import Path

import numpy as np

import luequiv as lq
from luequiv.io import save_state


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="demo_states", help="where to write the state files")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    rho_a = lq.validate_density(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), 2)
    rho_b = lq.validate_density(np.diag([0.5, 0.0, 0.5, 0.0]).astype(complex), 2)
    save_state(outdir / "flat_a.json", rho_a.matrix, 2, label="diag(1/2,1/2,0,0)")
    save_state(outdir / "flat_b.json", rho_b.matrix, 2, label="diag(1/2,0,1/2,0)")
    print(f"wrote {outdir}/flat_a.json and {outdir}/flat_b.json")

    print("\npower traces (identical spectra):")
    print("  a:", np.round(lq.power_traces(rho_a), 6))
    print("  b:", np.round(lq.power_traces(rho_b), 6))

    print("\ndegenerate-block invariants:")
    for name, rho in (("a", rho_a), ("b", rho_b)):
        sig = lq.fingerprint(rho)
        for key, val in sorted(sig.block_invariants.items()):
            if "len2" in key or "len1" in key:
                print(f"  {name} {key} = {val.real:g}")

    verdict = lq.decide(rho_a, rho_b)
    print(f"\nverdict: {verdict.outcome} ({verdict.reason})")
    if verdict.witness:
        w = verdict.witness
        print(f"witness: {w.kind} {w.key}: {w.value_a.real:g} vs {w.value_b.real:g}")
    print(json.dumps({"outcome": verdict.outcome, "reason": verdict.reason}))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
