#include "zdsq/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace zdsq {

namespace {

// Canonical output order: lexicographic on the coordinate tuples.
std::vector<int> canonical_order(const Presentation& p) {
  std::vector<int> order(p.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return p.points[a].x < p.points[b].x;
  });
  return order;
}

std::vector<int> inverse_permutation(const std::vector<int>& order) {
  std::vector<int> inv(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    inv[order[i]] = static_cast<int>(i);
  }
  return inv;
}

std::string svg_coord(const Q& q, double lo, double hi) {
  double v = mpq_get_d(q.get_mpq_t());
  double out = lo + v * (hi - lo);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", out);
  return buf;
}

}  // namespace

Json verdict_json(const Verdict& v) {
  Json j;
  switch (v.kind) {
    case Verdict::Kind::Homeo:
      j["verdict"] = "homeo";
      break;
    case Verdict::Kind::NotHomeo:
      j["verdict"] = "not-homeo";
      break;
    case Verdict::Kind::Unknown:
      j["verdict"] = "unknown";
      break;
  }
  j["trace"] = v.trace;
  if (v.certificate.has_value()) {
    Json c;
    c["invariant"] = v.certificate->invariant;
    c["lhs"] = v.certificate->lhs;
    c["rhs"] = v.certificate->rhs;
    if (v.certificate->witness.has_value()) {
      c["witness"] = *v.certificate->witness;
    } else {
      c["witness"] = nullptr;
    }
    j["certificate"] = c;
  } else {
    j["certificate"] = nullptr;
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

namespace {

Json natset_json(const NatSet& s) {
  Json j;
  j["kind"] = s.is_cofinite() ? "cofinite" : "finite";
  j[s.is_cofinite() ? "complement" : "members"] = s.data();
  return j;
}

}  // namespace

Json invariants_json(const Invariants& inv) {
  Json j;
  j["cardinality"] = inv.cardinality.to_string();
  if (inv.countable_form.has_value()) {
    Json f;
    f["rank"] = inv.countable_form->rank.to_string();
    f["mult"] = inv.countable_form->mult;
    j["countableForm"] = f;
  } else {
    j["countableForm"] = nullptr;
  }
  j["spectrum"] = natset_json(inv.spectrum);
  Json oz;
  switch (inv.open_z.kind) {
    case OpenZ::Kind::Unknown:
      oz["kind"] = "unknown";
      break;
    case OpenZ::Kind::Finite:
      oz["kind"] = "finite";
      oz["members"] = inv.open_z.finite;
      break;
    case OpenZ::Kind::Periodic:
      oz["kind"] = "eventually-periodic";
      oz["set"] = inv.open_z.ep->to_string();
      break;
  }
  j["openZ"] = oz;
  return j;
}

Json normalize_json(const NormalizeResult& r) {
  Json j;
  j["normalForm"] = r.form.to_string();
  j["trace"] = r.trace;
  return j;
}

Json presentation_json(const Presentation& p) {
  auto order = canonical_order(p);
  auto inv = inverse_permutation(order);
  Json j;
  j["stage"] = p.stage;
  Json points = Json::array();
  for (int id : order) {
    const PresPoint& pt = p.points[id];
    Json pj;
    Json xy = Json::array();
    for (const Q& q : pt.x) xy.push_back(q_to_string(q));
    pj["xy"] = xy;
    pj["cell"] = pt.cell;
    pj["kernel"] = pt.kernel;
    pj["isoRank"] = pt.iso_rank.has_value() ? Json(pt.iso_rank->to_string())
                                            : Json(nullptr);
    points.push_back(pj);
  }
  j["points"] = points;
  Json cells = Json::array();
  for (const PresCell& c : p.cells) {
    Json cj;
    cj["id"] = c.id;
    cj["label"] = c.label.to_string();
    std::vector<int> members;
    for (int id : c.members) members.push_back(inv[id]);
    std::sort(members.begin(), members.end());
    cj["members"] = members;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j;
}

Json cell_family_json(const CellFamily& fam, const Presentation& p) {
  auto inv = inverse_permutation(canonical_order(p));
  Json j = Json::array();
  for (size_t i = 0; i < fam.cells.size(); ++i) {
    const PCell& c = fam.cells[i];
    Json cj;
    cj["cellId"] = i;
    cj["label"] = c.label.to_string();
    cj["diameter"] = q_to_string(c.diameter);
    std::vector<int> members;
    for (int id : c.members) members.push_back(inv[id]);
    std::sort(members.begin(), members.end());
    cj["memberPoints"] = members;
    cj["provenance"] = c.provenance;
    j.push_back(cj);
  }
  return j;
}

Json net_family_json(const NetFamily& nets, const AllRanksResult& res,
                     const Presentation& p) {
  auto inv = inverse_permutation(canonical_order(p));
  Json j;
  Json levels = Json::array();
  for (const NetLevel& lv : nets.levels) {
    Json lj;
    lj["n"] = lv.n;
    lj["beta"] = lv.beta;
    lj["netLevel"] = lv.net_level;
    std::vector<int> net;
    for (int id : lv.net_points) net.push_back(inv[id]);
    std::sort(net.begin(), net.end());
    lj["netPoints"] = net;
    lj["eps"] = q_to_string(lv.eps);
    lj["coveringRadius"] = q_to_string(lv.covering_radius);
    lj["maxDistToNet"] = q_to_string(lv.max_dist_to_net);
    lj["maxDiameter"] = q_to_string(lv.max_diameter);
    lj["maxDistToKernel"] = q_to_string(lv.max_dist_to_kernel);
    lj["pieces"] = lv.piece_indices;
    levels.push_back(lj);
  }
  j["levels"] = levels;
  j["levelsBuilt"] = res.levels_built;
  Json cov = Json::array();
  for (const Q& q : res.coverage_bounds) cov.push_back(q_to_string(q));
  j["coverageBounds"] = cov;
  j["family"] = cell_family_json(res.family, p);
  return j;
}

Json witness_json(const StageWitness& w) {
  Json j;
  Json pairs = Json::array();
  for (const TracePair& pr : w.trace.pairs) {
    Json pj;
    pj["a"] = pr.a_cell;
    pj["b"] = pr.b_cell;
    pj["color"] = pr.color;
    pj["bound"] = q_to_string(pr.bound);
    pj["withinSchedule"] = pr.achieved;
    pj["lead"] = pr.even_step ? "left" : "right";
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  j["kernelMap"] = w.trace.kernel_map_description;
  j["distortion"] = q_to_string(w.distortion);
  j["labelsPreserved"] = w.labels_preserved;
  Json subs = Json::array();
  for (const SubWitness& sw : w.sub_witnesses) {
    Json sj;
    sj["a"] = sw.a_cell;
    sj["b"] = sw.b_cell;
    sj["kind"] = sw.recursive ? "recursive" : "label-equality";
    sj["matched"] = sw.matched;
    subs.push_back(sj);
  }
  j["subWitnesses"] = subs;
  j["densityReport"] = w.trace.density_report;
  return j;
}

Json removal_json(const RemovalWitness& w, const Presentation& p) {
  auto inv = inverse_permutation(canonical_order(p));
  Json j;
  j["removed"] = inv[w.removed];
  std::vector<int> seq;
  for (int id : w.sequence) seq.push_back(inv[id]);
  j["sequence"] = seq;
  Json shift = Json::array();
  for (auto [a, b] : w.shift) {
    shift.push_back(Json::array({inv[a], inv[b]}));
  }
  j["shift"] = shift;
  j["overflowFrom"] = w.overflow_from.has_value() ? Json(inv[*w.overflow_from])
                                                  : Json(nullptr);
  j["note"] = w.note;
  return j;
}

Json family_json(const Family& fam) {
  Json j;
  Json members = Json::array();
  for (const EPSet& m : fam.members) members.push_back(m.to_string());
  j["members"] = members;
  Json certs = Json::array();
  for (const FamilyCertificate& c : fam.certificates) {
    Json cj;
    cj["i"] = c.i;
    cj["j"] = c.j;
    cj["witness"] = c.witness;
    cj["invariant"] = "open-z";
    certs.push_back(cj);
  }
  j["certificates"] = certs;
  return j;
}

Json oracle_rank_json(const std::vector<ScatteredForm>& space) {
  Json j;
  Json factors = Json::array();
  for (const auto& f : space) {
    Json fj;
    fj["rank"] = f.rank.to_string();
    fj["mult"] = f.mult;
    factors.push_back(fj);
  }
  j["factors"] = factors;
  Json stages = Json::array();
  for (const RectSet& s : derivative_stages(space)) {
    Json stage = Json::array();
    for (const Rect& r : s.rects()) {
      Json rect = Json::array();
      for (const RectAtom& a : r) rect.push_back(a.to_string());
      stage.push_back(rect);
    }
    stages.push_back(stage);
  }
  j["stages"] = stages;
  auto rm = rank_and_mult(space);
  j["rank"] = rm.first.to_string();
  j["mult"] = rm.second;
  return j;
}

std::string presentation_svg(const Presentation& p) {
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" "
      "height=\"600\" viewBox=\"0 0 600 600\">\n";
  if (p.kind == Presentation::Kind::Product) {
    // Labeled cell grid: one box per cell.
    size_t cols = 1;
    while (cols * cols < p.cells.size()) ++cols;
    for (size_t i = 0; i < p.cells.size(); ++i) {
      size_t r = i / cols, c = i % cols;
      double w = 560.0 / cols;
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                    "height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n"
                    "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\">%s "
                    "(%zu)</text>\n",
                    20 + c * w, 20 + r * w, w - 4, w - 4, 24 + c * w,
                    34 + r * w, p.cells[i].label.to_string().c_str(),
                    p.cells[i].members.size());
      svg += buf;
    }
    return svg + "</svg>\n";
  }
  bool planar = p.dim >= 2;
  svg += "<line x1=\"20\" y1=\"560\" x2=\"580\" y2=\"560\" "
         "stroke=\"#ccc\"/>\n";
  for (int id : canonical_order(p)) {
    const PresPoint& pt = p.points[id];
    std::string x = svg_coord(pt.x[0], 20, 580);
    std::string y = planar ? svg_coord(pt.x[1], 560, 40) : "560";
    if (pt.kernel) {
      svg += "<rect x=\"" + x + "\" y=\"" + y +
             "\" width=\"4\" height=\"4\" fill=\"#c22\"/>\n";
    } else {
      svg += "<circle cx=\"" + x + "\" cy=\"" + y +
             "\" r=\"2.5\" fill=\"#226\"/>\n";
    }
  }
  return svg + "</svg>\n";
}

std::string presentation_text(const Presentation& p) {
  auto order = canonical_order(p);
  std::string out = "stage " + std::to_string(p.stage) + ", " +
                    std::to_string(p.points.size()) + " points, " +
                    std::to_string(p.cells.size()) + " cells\n";
  for (int id : order) {
    const PresPoint& pt = p.points[id];
    out += "(";
    for (size_t c = 0; c < pt.x.size(); ++c) {
      if (c > 0) out += ", ";
      out += q_to_string(pt.x[c]);
    }
    out += ") cell=" + std::to_string(pt.cell);
    out += pt.kernel ? " kernel" : (" rank=" + pt.iso_rank->to_string());
    out += "\n";
  }
  for (const PresCell& c : p.cells) {
    out += "cell " + std::to_string(c.id) + ": " + c.label.to_string() +
           " (" + std::to_string(c.members.size()) + " points)\n";
  }
  return out;
}

}  // namespace zdsq
