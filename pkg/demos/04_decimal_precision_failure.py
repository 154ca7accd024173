# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Why duplicates are checked on integers
#
# Expanding vertices directly in degrees and spotting duplicates by rounding
# works only while the grid spacing is comfortably above the rounding step.
# At 100 m cells the spacing is about 0.0009 degrees, so 3 decimal places
# merge neighbouring centres.

from gridfuse import CountMismatch, GeoPoint, derive_spec, meters_to_degrees, rasterize, rasterize_quantized

center = GeoPoint(0.0, 0.0)
for r in (500, 250, 100):
    spec = derive_spec(3000, r)
    spacing = meters_to_degrees(spec.b_real_m, center.lat)[0]
    for decimals in (3, 4):
        try:
            n = len(rasterize_quantized(center, spec, decimals))
            verdict = "ok"
        except CountMismatch as exc:
            n, verdict = exc.got, "COUNT MISMATCH"
        print(f"r={r:4d} spacing={spacing:.5f} deg decimals={decimals}: {n:4d}/{spec.g} {verdict}")

# The integer lattice has no such parameter to tune:

print(len(rasterize(center, derive_spec(3000, 100))))
