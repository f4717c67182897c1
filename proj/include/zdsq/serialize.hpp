#pragma once

// JSON and SVG emission. JSON uses insertion-ordered objects and exact
// rational strings so repeated runs are byte-identical.

#include <string>

#include "json.hpp"
#include "zdsq/invariants.hpp"
#include "zdsq/partition.hpp"
#include "zdsq/rectset.hpp"
#include "zdsq/witness.hpp"

namespace zdsq {

using Json = nlohmann::ordered_json;

Json verdict_json(const Verdict& v);
Json invariants_json(const Invariants& inv);
Json normalize_json(const NormalizeResult& r);

/// {stage, points:[{xy, cell, kernel, isoRank}], cells:[{id,label,members}]}
/// with points in lexicographic coordinate order and ids remapped to match.
Json presentation_json(const Presentation& p);

/// [{cellId, label, diameter, memberPoints, provenance}] over the canonical
/// point order of the presentation.
Json cell_family_json(const CellFamily& fam, const Presentation& p);

Json net_family_json(const NetFamily& nets, const AllRanksResult& res,
                     const Presentation& p);

Json witness_json(const StageWitness& w);
Json removal_json(const RemovalWitness& w, const Presentation& p);
Json family_json(const Family& fam);

/// Derivative stages of a product of ordinal intervals as rectangle lists.
Json oracle_rank_json(const std::vector<ScatteredForm>& space);

/// Planar drawing for presentations of a single atom (1- or 2-dimensional
/// layouts); higher-dimensional products get a labeled cell grid instead.
std::string presentation_svg(const Presentation& p);

/// Text rendering: one point per line plus a cell table.
std::string presentation_text(const Presentation& p);

}  // namespace zdsq
