// Command-line front end for the space calculus: parsing and
// normalization, homeomorphism queries with certificates, finite-stage
// presentations and partitions, back-and-forth witnesses and the family
// generator. Exit codes: 0 on success, 1 on errors, 2 when the decision
// procedure answers Unknown.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "zdsq/serialize.hpp"

using namespace zdsq;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"calculus of compact zero-dimensional spaces and their squares"};
  app.require_subcommand(1);

  std::string expr1, expr2, format = "json", epsilon = "1/2";
  Nat stage = 3;
  Nat count = 8;
  Nat alpha = 1;
  bool refine = false, all_ranks = false;

  auto* c_norm = app.add_subcommand("normalize", "rewrite to normal form");
  c_norm->add_option("expr", expr1)->required();
  c_norm->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* c_homeo =
      app.add_subcommand("homeo", "decide whether two spaces are homeomorphic");
  c_homeo->add_option("lhs", expr1)->required();
  c_homeo->add_option("rhs", expr2)->required();

  auto* c_inv = app.add_subcommand("invariants", "computable invariants");
  c_inv->add_option("expr", expr1)->required();

  auto* c_pres = app.add_subcommand("present", "finite-stage metric model");
  c_pres->add_option("expr", expr1)->required();
  c_pres->add_option("--stage", stage)->check(CLI::PositiveNumber);
  c_pres->add_option("--format", format)
      ->check(CLI::IsMember({"json", "svg", "text"}));

  auto* c_part = app.add_subcommand("partition", "clopen partition at stage");
  c_part->add_option("expr", expr1)->required();
  c_part->add_option("--stage", stage)->check(CLI::PositiveNumber);
  c_part->add_option("--epsilon", epsilon, "mesh bound as p/q");
  c_part->add_flag("--refine-null", refine, "apply the dyadic refinement");
  c_part->add_flag("--all-ranks", all_ranks,
                   "run the rank-targeted construction (needs --alpha)");
  c_part->add_option("--alpha", alpha, "rank bound for --all-ranks");

  auto* c_sq = app.add_subcommand("square-witness",
                                  "witness that the square re-embeds");
  c_sq->add_option("expr", expr1, "a single X{...} atom")->required();
  c_sq->add_option("--stage", stage)->check(CLI::PositiveNumber);

  auto* c_fam = app.add_subcommand(
      "family", "pairwise non-homeomorphic index sets with certificates");
  c_fam->add_option("--count", count)->check(CLI::PositiveNumber);

  auto* c_oracle = app.add_subcommand(
      "oracle-rank", "derivative stages of a countable product");
  c_oracle->add_option("expr", expr1, "a product of Fin and O atoms")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems follow the error contract
  }

  try {
    if (c_norm->parsed()) {
      NormalizeResult r = normalize(parse_expr(expr1));
      if (format == "text") {
        std::cout << r.form.to_string() << "\n";
      } else {
        std::cout << normalize_json(r).dump(2) << "\n";
      }
      return 0;
    }
    if (c_homeo->parsed()) {
      Verdict v = decide_homeo(parse_expr(expr1), parse_expr(expr2));
      std::cout << verdict_json(v).dump(2) << "\n";
      return v.kind == Verdict::Kind::Unknown ? 2 : 0;
    }
    if (c_inv->parsed()) {
      Invariants inv = compute_invariants(parse_expr(expr1));
      std::cout << invariants_json(inv).dump(2) << "\n";
      return 0;
    }
    if (c_pres->parsed()) {
      PresPtr p = present_expr(parse_expr(expr1), stage);
      if (format == "svg") {
        std::cout << presentation_svg(*p);
      } else if (format == "text") {
        std::cout << presentation_text(*p);
      } else {
        std::cout << presentation_json(*p).dump(2) << "\n";
      }
      return 0;
    }
    if (c_part->parsed()) {
      PresPtr p = present_expr(parse_expr(expr1), stage);
      if (all_ranks) {
        AllRanksResult res = partition_all_ranks(p, alpha);
        std::cout << net_family_json(res.nets, res, *p).dump(2) << "\n";
        return 0;
      }
      NormalForm nf = normalize(parse_expr(expr1)).form;
      CellFamily fam = partition_member(nf, q_parse(epsilon), p);
      if (refine) fam = refine_null(fam, p);
      std::cout << cell_family_json(fam, *p).dump(2) << "\n";
      return 0;
    }
    if (c_sq->parsed()) {
      SpaceExpr e = parse_expr(expr1);
      if (e.atoms.size() != 1 || e.atoms[0].kind != Atom::Kind::X) {
        throw std::invalid_argument(
            "square-witness expects a single X{...} atom");
      }
      SquareWitnessResult res = square_witness(e.atoms[0].index, stage);
      Json j = witness_json(res.witness);
      j["familySize"] = res.family_size;
      j["labels"] = res.labels;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (c_fam->parsed()) {
      Family fam = family_generate(count);
      // Validate every certificate through the decision procedure.
      for (const auto& cert : fam.certificates) {
        SpaceExpr a, b;
        a.atoms.push_back({Atom::Kind::X, 0, fam.members[cert.i], 0});
        b.atoms.push_back({Atom::Kind::X, 0, fam.members[cert.j], 0});
        Verdict v = decide_homeo(a, b);
        if (v.kind != Verdict::Kind::NotHomeo) {
          throw std::logic_error("family certificate failed validation");
        }
      }
      std::cout << family_json(fam).dump(2) << "\n";
      return 0;
    }
    if (c_oracle->parsed()) {
      SpaceExpr e = parse_expr(expr1);
      std::vector<ScatteredForm> space;
      for (const Atom& a : e.atoms) {
        if (a.kind == Atom::Kind::Fin) {
          space.push_back(ScatteredForm(Ordinal(), a.param));
        } else if (a.kind == Atom::Kind::O) {
          space.push_back(ScatteredForm(Ordinal::finite(a.param), 1));
        } else {
          throw std::invalid_argument(
              "oracle-rank handles countable products of Fin and O only");
        }
      }
      std::cout << oracle_rank_json(space).dump(2) << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const StageTooCoarse& e) {
    std::cerr << "stage too coarse: " << e.what() << "\n";
    return 1;
  } catch (const PartitionConditionError& e) {
    std::cerr << "construction condition violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
