#!/usr/bin/env python3
"""Oracle run that derives the ratio-asymptotic thresholds.

Measures |P_{n}/P_{n-1}(z) - f(z)| at n = 200, z = 2i for the Christoffel
and Geronimus transforms of each preset, then freezes a threshold of
min(1e-6, max(1000 * measured, 1e-12)) into
src/darbouxjac/fixtures/thresholds.json.  Rerun after any change to the
transform machinery; the acceptance suite and the CLI verify command read
this file.
"""
from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from darbouxjac.core import CHEBYSHEV_KINDS, family_coeffs  # noqa: E402
from darbouxjac.darboux import TransformPoint, christoffel, geronimus  # noqa: E402
from darbouxjac.spectral import ratio_asymptotic_check  # noqa: E402

KAPPA = 0 + 1j
S0STAR = 1 + 0j
Z = 2j
N_CHECK = 200


def threshold(measured: float) -> float:
    return float(min(1e-6, max(measured * 1e3, 1e-12)))


def main() -> None:
    table = {}
    for kind in CHEBYSHEV_KINDS:
        m = family_coeffs(kind)
        tc = christoffel(m, TransformPoint(KAPPA))
        err_c = float(ratio_asymptotic_check(tc.coeffs, [Z], N_CHECK).errors[0])
        tg = geronimus(m, TransformPoint(KAPPA, s0star=S0STAR))
        err_g = float(ratio_asymptotic_check(tg.coeffs, [Z], N_CHECK).errors[0])
        table[kind] = {
            "z": [Z.real, Z.imag],
            "n_check": N_CHECK,
            "kappa": [KAPPA.real, KAPPA.imag],
            "s0star": [S0STAR.real, S0STAR.imag],
            "measured_christoffel": err_c,
            "measured_geronimus": err_g,
            "christoffel_threshold": threshold(err_c),
            "geronimus_threshold": threshold(err_g),
        }
        print(f"{kind}: christoffel {err_c:.3e}  geronimus {err_g:.3e}")
    doc = {"v": 1, "ratio_asymptotic": table}
    out = (
        pathlib.Path(__file__).resolve().parents[1]
        / "src"
        / "darbouxjac"
        / "fixtures"
        / "thresholds.json"
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
