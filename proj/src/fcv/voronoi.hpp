#pragma once

#include "fcv/core.hpp"

namespace fcv {

/// Voronoi weights on the torus (d = 1 or 2), in node order, summing to 1.
/// d=1 uses periodic half-gaps; d=2 intersects perpendicular-bisector
/// half-planes against the 3x3 periodic tiling and takes shoelace areas.
/// A guard rejects configurations where a cell diameter reaches 1.
rvec voronoi_weights_torus(const NodeSet& nodes);

/// Interval weights from the arccos substitution y = arccos x: sorted-y
/// half-gaps with the boundary cells extended to 0 and pi; sum is pi.
rvec voronoi_weights_interval(const NodeSet& nodes);

/// Spherical Voronoi cell areas via the convex hull of the node vectors
/// (hull facets are the Delaunay triangles, normalized facet normals the
/// Voronoi vertices); cell areas by spherical excess accumulated per fan
/// triangle. Needs >= 4 nodes not all on one great circle. Sum is 4 pi.
rvec voronoi_weights_sphere(const NodeSet& nodes);

/// Dispatch on the node set's domain.
rvec voronoi_weights(const NodeSet& nodes);

}  // namespace fcv
