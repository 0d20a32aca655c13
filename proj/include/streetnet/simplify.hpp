#pragma once

#include <set>

#include "streetnet/graph.hpp"

namespace streetnet {

enum class SimplifyMode { Strict, NonStrict };

/// Whether v is a true graph-theoretic node that survives simplification:
/// it self-loops, has a neighbor count other than two, does not pass
/// traffic straight through (degree outside {2, 4} or an in/out pattern
/// that is not a clean one-way or two-way continuation), or, in non-strict
/// mode, joins edges from different OSM ways.
/// Throws Error(UnknownNode).
bool is_endpoint(const StreetGraph& g, NodeId v, SimplifyMode mode);

std::set<NodeId> endpoints(const StreetGraph& g, SimplifyMode mode);

/// Replaces every maximal chain of interstitial nodes between endpoints with
/// a single edge carrying the concatenated geometry, summed length, and
/// merged attributes. Rings without any endpoint keep their minimum-id node.
/// Throws Error(AlreadySimplified).
StreetGraph simplify_graph(const StreetGraph& g, SimplifyMode mode = SimplifyMode::Strict);

}  // namespace streetnet
