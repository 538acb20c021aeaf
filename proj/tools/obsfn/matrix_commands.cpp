#include <cmath>

#include "cli.hpp"
#include "obsfn/context.hpp"
#include "obsfn/error.hpp"
#include "obsfn/vn.hpp"

namespace obsfn::cli {

namespace {

Json mat(const CMatrix& m) { return Json::parse(io::matrix_json(m)); }

Json spectrum_of(const CMatrix& a, const Tolerances& tol) {
  auto fam = spectral_family_of(a, tol);
  Json rows = Json::array();
  for (std::size_t i = 0; i < fam.lambdas.size(); ++i) {
    Json row;
    row["lambda"] = fam.lambdas[i];
    row["rank"] = projection_rank(fam.projections[i]);
    row["E"] = mat(fam.projections[i]);
    rows.push_back(row);
  }
  return rows;
}

VNSubalgebra algebra(const std::string& file, const CMatrix& like, const Tolerances& tol) {
  auto gens = io::load_generators(input(file));
  for (const auto& g : gens)
    if (g.rows() != like.rows() || g.cols() != like.cols())
      throw InputError("generator size does not match the operator");
  return VNSubalgebra::generated_by(like.rows(), gens, tol);
}

void add_vn(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("vn", "Matrices, projections and subalgebras");
  cmd->require_subcommand(1);
  static std::vector<std::string> files;
  static std::string op_file, alg_file, proj_file, map = "rho";

  auto* sf = cmd->add_subcommand("spectral-family", "Eigenvalues and cumulative eigenprojections");
  sf->add_option("-i,--input,matrix", files, "Hermitian matrix file")->required()->expected(1);
  sf->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto tol = cfg.tol();
      auto a = io::load_matrix(input(files.at(0)));
      auto e = eigen_hermitian(a, tol);
      Report rep;
      rep.body["eigenvalues"] = e.values;
      rep.body["sweeps"] = e.sweeps;
      rep.body["breakpoints"] = spectrum_of(a, tol);
      return rep;
    };
  });

  auto* order = cmd->add_subcommand("order", "Spectral order, meet and join of two operators");
  order->add_option("-i,--input,matrices", files, "A.json B.json")->required()->expected(2);
  order->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto tol = cfg.tol();
      auto a = io::load_matrix(input(files.at(0)));
      auto b = io::load_matrix(input(files.at(1)));
      Report rep;
      rep.body["A_leq_B"] = spectral_leq(a, b, tol);
      rep.body["B_leq_A"] = spectral_leq(b, a, tol);
      rep.body["meet"] = mat(spectral_meet({a, b}, tol));
      rep.body["join"] = mat(spectral_join({a, b}, tol));
      return rep;
    };
  });

  auto* restrict = cmd->add_subcommand("restrict", "Coarse-grain an operator to a subalgebra");
  restrict->add_option("--algebra", alg_file, "Generators file")->required();
  restrict->add_option("-i,--input,--op", op_file, "Operator file")->required();
  restrict->add_option("--map", map, "rho (core, from above) or sigma (support, from below)")
      ->check(CLI::IsMember({"rho", "sigma"}))
      ->capture_default_str();
  restrict->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto tol = cfg.tol();
      auto a = io::load_matrix(input(op_file));
      auto m = algebra(alg_file, a, tol);
      auto r = map == "rho" ? rho_restrict(m, a) : sigma_restrict(m, a);
      Report rep;
      rep.body["map"] = map;
      rep.body["algebra_dim"] = m.dim();
      rep.body["result"] = mat(r);
      rep.body["in_algebra"] = m.contains(r);
      rep.body["spectrum"] = eigen_hermitian(r, tol).values;
      return rep;
    };
  });

  auto* core_cmd = cmd->add_subcommand("core", "Core and support of a projection");
  core_cmd->add_option("--algebra", alg_file, "Generators file")->required();
  core_cmd->add_option("-i,--input,--proj", proj_file, "Projection file")->required();
  core_cmd->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto tol = cfg.tol();
      auto q = io::load_matrix(input(proj_file));
      auto m = algebra(alg_file, q, tol);
      auto c = core(m, q), s = support(m, q);
      Report rep;
      rep.body["rank"] = projection_rank(q);
      rep.body["core_rank"] = projection_rank(c);
      rep.body["support_rank"] = projection_rank(s);
      rep.body["core"] = mat(c);
      rep.body["support"] = mat(s);
      return rep;
    };
  });
}

Json value_row(const ContextDiagram& d, const GluedValue& v) {
  Json row;
  row["context"] = d.context(v.context).name;
  row["mask"] = v.mask;
  row["rank"] = projection_rank(v.projection);
  row["value"] = v.value;
  return row;
}

void add_context(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("context", "Context diagrams and global sections");
  cmd->require_subcommand(1);
  static std::string diagram_file, sections_file, op_file;

  auto* glue = cmd->add_subcommand("glue", "Check a family of per-context observables and glue it");
  glue->add_option("--diagram", diagram_file, "Diagram file")->required();
  glue->add_option("-i,--input,--sections", sections_file, "Sections file")->required();
  glue->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto d = io::load_diagram(input(diagram_file), cfg.load());
      auto s = io::load_sections(input(sections_file), d);
      Report rep;
      auto& b = rep.body;
      Json ctx = Json::array();
      for (const auto& c : d.contexts()) {
        Json row;
        row["name"] = c.name;
        row["atoms"] = c.atoms();
        row["inserted"] = c.inserted;
        ctx.push_back(row);
      }
      b["contexts"] = ctx;
      auto sr = is_global_section(s, d);
      b["global_section"] = sr.holds;
      if (!sr.holds) {
        const auto [i, j] = *sr.contexts;
        Json w;
        w["contexts"] = {d.context(i).name, d.context(j).name};
        w["projection"] = mat(d.context(d.meet(i, j)).projection(sr.mask));
        w["values"] = {sr.left, sr.right};
        b["witness"] = w;
        rep.code = check_failed;
        return rep;
      }
      auto g = glue_section(s, d);
      Json vals = Json::array();
      for (const auto& v : g.values) vals.push_back(value_row(d, v));
      b["values"] = vals;
      b["commuting_families_ok"] = g.commuting_ok;
      b["commuting_families_checked"] = g.commuting_checked;
      b["commuting_families_skipped"] = g.commuting_skipped;
      b["completely_increasing"] = g.completely_increasing;
      if (!g.completely_increasing) {
        Json w = Json::array();
        for (auto k : g.increasing_witness) {
          Json e;
          e["projection"] = mat(g.values[k].projection);
          e["value"] = g.values[k].value;
          w.push_back(e);
        }
        b["increasing_witness"] = w;
      }
      b["extendable"] = g.extendable;
      if (g.op) b["operator"] = mat(*g.op);
      b["rank_one_pattern_violation"] = g.rank_one_pattern_violation;
      if (!g.detail.empty()) b["detail"] = g.detail;
      return rep;
    };
  });

  auto* from = cmd->add_subcommand("from-operator", "The global section an operator induces (sections file)");
  from->add_option("-i,--input,--op", op_file, "Operator file")->required();
  from->add_option("--diagram", diagram_file, "Diagram file")->required();
  from->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto d = io::load_diagram(input(diagram_file), cfg.load());
      auto a = io::load_matrix(input(op_file));
      if (a.rows() != d.ambient_dim() || a.cols() != d.ambient_dim())
        throw InputError("operator size does not match the diagram");
      auto s = section_from_operator(a, d);
      Json ctx = Json::object();
      for (std::size_t i = 0; i < d.contexts().size(); ++i) {
        const auto& c = d.context(i);
        if (c.inserted) continue;
        Json list = Json::array();
        for (std::size_t k = 0; k < c.atoms(); ++k) {
          Json e;
          e["proj"] = mat(c.minimal[k]);
          e["value"] = s.tables[i][std::uint64_t{1} << k];
          list.push_back(e);
        }
        ctx[c.name] = list;
      }
      Report rep;
      rep.body["contexts"] = ctx;
      return rep;
    };
  });
}

}  // namespace

void add_matrix_commands(CLI::App& app, Action& action) {
  add_vn(app, action);
  add_context(app, action);
}

}  // namespace obsfn::cli
