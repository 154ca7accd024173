# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Rasterising a square city with perfect-square layers
#
# A city of side `A` metres is cut into `s x s` cells matching a raster of
# resolution `r`. The cell centres are reached from the city centre by
# repeatedly expanding every vertex into the four corners of a box.

from gridfuse import GeoPoint, derive_spec, rasterize

# Even case: 3 km city at 500 m.

spec = derive_spec(3000, 500)
spec

centers = rasterize(GeoPoint(-37.8136, 144.9631), spec)
print("virtual vertex counts:", centers.virtual_counts)
print("grid centres:", len(centers), "== G:", len(centers) == spec.g)

# The odd case needs more iterations with smaller virtual boxes.

odd = derive_spec(2500, 500)
print(odd.parity, odd.i_total, rasterize(GeoPoint(0.0, 0.0), odd).virtual_counts)

# Offsets are exact half-metres from the centre; decoding to degrees happens last.

for off, p in list(zip(centers.offsets, centers.decoded))[:4]:
    print(off, f"{p.lat:.7f}", f"{p.lon:.7f}")

# The centre list as `lat,lon` CSV:

print(centers.to_csv()[:200])

# Sweep step counts and see that the vertex counts always follow 4, 9, 16, ...

for s in range(2, 10):
    c = rasterize(GeoPoint(0.0, 0.0), derive_spec(s * 500, 500))
    print(s, c.virtual_counts, len(c))
