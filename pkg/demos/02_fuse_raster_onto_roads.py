# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Assigning raster values to road edges
#
# A synthetic city comes with a random road graph and a raster whose pixel
# values are their own indices, so it is easy to see which pixel each road
# picked up.

from gridfuse import derive_spec, fuse, make_synthetic, rasterize

city = make_synthetic(seed=42, a_m=3000, r_m=500, edges_per_cell=3, feature_name="pm25")
spec = derive_spec(city.a_m, city.r_m)
centers = rasterize(city.center, spec)
print(len(city.graph.nodes), "nodes,", len(city.graph.edges), "edges")
print(city.raster.values)

fused, report = fuse(city.graph, city.raster, centers, spec, "pm25", city_id=city.city_id)
print(report.to_json())

# Every edge keeps its id, geometry and attributes; only `pm25` is new.

for before, after in list(zip(city.graph.edges, fused.edges))[:5]:
    print(before.id, before.attrs, "->", after.attrs)

# Sampling the pixel under each cell centre instead of averaging the
# pixels inside the cell gives the same answer when resolutions agree.

point, _ = fuse(city.graph, city.raster, centers, spec, "pm25", sampling="point")
print(all(a.attrs == b.attrs for a, b in zip(fused.edges, point.edges)))
