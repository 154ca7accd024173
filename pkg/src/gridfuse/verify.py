"""Self-checks of the rasteriser against a direct meshgrid construction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CountMismatch
from .geo import GeoPoint
from .rasterize import TRIVIAL, derive_spec, rasterize

# (resolution, extra metres added to s * r); extra stays below r / 2 so A / r still rounds to s
SWEEP_CASES = ((500.0, 0.0), (333.0, 100.0), (250.0, 60.0))


def meshgrid_offsets(spec):
    """Grid centres built directly: ``((i + 0.5) - s/2) * B`` in half-metres, sorted by (dy, dx)."""
    k = 2 * np.arange(spec.s, dtype=np.int64) + 1 - spec.s
    dy, dx = np.meshgrid(k * spec.b_real_m, k * spec.b_real_m, indexing="ij")
    return list(zip(dx.ravel().tolist(), dy.ravel().tolist()))


def expected_virtual_counts(spec):
    if spec.parity == TRIVIAL or spec.i_total == 1:
        return ()
    return tuple((n + 2) ** 2 for n in range(spec.i_vir))


@dataclass
class SweepResult:
    s: int
    a_m: float
    r_m: float
    ok: bool
    detail: str = ""


def check_spec(spec, center=GeoPoint(0.0, 0.0), rasterize_fn=rasterize):
    try:
        out = rasterize_fn(center, spec)
    except CountMismatch as exc:
        return False, str(exc)
    got = [(o.dx, o.dy) for o in out.offsets]
    if len(got) != spec.g:
        return False, f"#latlon={len(got)} != G={spec.g}"
    if got != meshgrid_offsets(spec):
        return False, "centres differ from meshgrid oracle"
    if tuple(out.virtual_counts) != expected_virtual_counts(spec):
        return False, f"virtual counts {tuple(out.virtual_counts)} are not perfect squares from 4"
    return True, ""


def sweep(max_s, rasterize_fn=rasterize, cases=SWEEP_CASES):
    """Check every step count ``1..max_s`` for each ``(r, extra)`` case."""
    if max_s < 1:
        raise ValueError(f"max_s must be >= 1, got {max_s}")
    results = []
    for s in range(1, max_s + 1):
        for r_m, extra in cases:
            a_m = s * r_m + extra
            spec = derive_spec(a_m, r_m)
            if spec.s != s:
                results.append(SweepResult(s, a_m, r_m, False, f"derived s={spec.s}"))
                continue
            ok, detail = check_spec(spec, rasterize_fn=rasterize_fn)
            results.append(SweepResult(s, a_m, r_m, ok, detail))
    return results
