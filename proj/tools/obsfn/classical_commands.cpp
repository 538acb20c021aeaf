#include <cmath>
#include <limits>
#include <optional>

#include "cli.hpp"
#include "obsfn/error.hpp"
#include "obsfn/presheaf.hpp"
#include "obsfn/stone.hpp"
#include "obsfn/suite.hpp"
#include "obsfn/topology.hpp"

namespace obsfn::cli {

namespace {

Json points(const FiniteTopSpace& s, PointSet set) {
  Json out = Json::array();
  set.for_each([&](std::size_t x) { out.push_back(s.name(x)); });
  return out;
}

Json family_rows(const TopSpectralFamily& f) {
  Json rows = Json::array();
  for (const auto& b : f.breakpoints()) {
    Json row;
    row["lambda"] = b.lambda;
    row["value"] = points(f.space(), b.value);
    rows.push_back(row);
  }
  return rows;
}

Json continuity(const TopSpectralFamily& f, const ContinuityReport& c) {
  Json j;
  j["continuous"] = c.continuous;
  if (c.witness) {
    const auto [l, m] = *c.witness;
    Json w;
    w["lambda"] = l;
    w["mu"] = m;
    w["closure_of_sigma_lambda"] = points(f.space(), f.space().closure(f.eval(l)));
    w["sigma_mu"] = points(f.space(), f.eval(m));
    j["witness"] = w;
  } else {
    j["values_regular_open"] = c.values_regular_open;
    j["domain_open"] = c.domain_open;
  }
  j["domain_dense"] = c.domain_dense;
  return j;
}

std::optional<FiniteTopSpace> given_space(const std::string& file) {
  if (file.empty()) return std::nullopt;
  return io::load_space(input(file));
}

void add_classical(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("classical", "Spectral families of open sets");
  cmd->require_subcommand(1);
  static std::string space_file, fn_file, family_file, family_name = "abs", grid = "-2:2:0.25";
  static double resolution = 0;

  auto* induce = cmd->add_subcommand("induce", "sigma_f of a function and the function it induces");
  induce->add_option("--space", space_file, "Topology file (else the function file's own)");
  induce->add_option("-i,--input,--fn", fn_file, "Function file")->required();
  induce->callback([&action] {
    action = [](const RunConfig&) {
      auto sp = given_space(space_file);
      auto lf = io::load_function(input(fn_file), sp ? &*sp : nullptr);
      const auto& s = lf.space;
      auto sigma = sigma_from_function(s, lf.values);
      Report rep;
      auto& b = rep.body;
      b["continuous_function"] = is_continuous_function(s, lf.values);
      b["base"] = points(s, sigma.base());
      b["sigma"] = family_rows(sigma);
      b["admissible_domain"] = points(s, sigma.admissible_domain());
      Json rows = Json::array();
      bool same = true;
      for (std::size_t x = 0; x < s.size(); ++x) {
        Json row;
        row["point"] = s.name(x);
        row["f"] = lf.values[x];
        if (sigma.admissible_domain().contains(x)) {
          double v = sigma.induced_function(x);
          row["induced"] = v;
          same = same && v == lf.values[x];
        } else {
          row["induced"] = nullptr;
          same = false;
        }
        rows.push_back(row);
      }
      b["points"] = rows;
      b["round_trip"] = same;
      auto sp_rep = spectrum_and_resolvent(sigma);
      b["spectrum"] = std::vector<double>(sp_rep.spectrum.begin(), sp_rep.spectrum.end());
      rep.dot = s.to_dot();
      return rep;
    };
  });

  auto* check = cmd->add_subcommand("check-continuity", "Continuity of a family (or of sigma_f)");
  check->add_option("--space", space_file, "Topology file (else the input's own)");
  auto* fn = check->add_option("--fn", fn_file, "Function file");
  check->add_option("-i,--input,--family", family_file, "Family file")->excludes(fn);
  check->add_option("--resolution", resolution, "Only compare lambda < mu with mu - lambda >= this")
      ->capture_default_str();
  check->callback([&action] {
    action = [](const RunConfig&) {
      auto sp = given_space(space_file);
      const FiniteTopSpace* given = sp ? &*sp : nullptr;
      std::optional<TopSpectralFamily> f;
      if (!family_file.empty()) {
        f = io::load_top_family(input(family_file), given);
      } else if (!fn_file.empty()) {
        auto lf = io::load_function(input(fn_file), given);
        f = sigma_from_function(lf.space, lf.values);
      } else {
        throw InputError("check-continuity needs --family or --fn");
      }
      auto c = is_continuous_family(*f, resolution);
      Report rep;
      rep.body = continuity(*f, c);
      rep.body["sigma"] = family_rows(*f);
      if (!c.continuous) rep.code = check_failed;
      rep.dot = f->space().to_dot();
      return rep;
    };
  });

  auto* demo = cmd->add_subcommand("demo", "Grid realization of the id, abs, ln and step families");
  demo->add_option("--family", family_name, "id, abs, ln, step or step-literal")
      ->check(CLI::IsMember({"id", "abs", "ln", "step", "step-literal"}))
      ->capture_default_str();
  demo->add_option("--grid", grid, "x0:x1:step")->capture_default_str();
  demo->callback([&action] {
    action = [](const RunConfig&) {
      auto g = CellGrid::parse(grid);
      const bool literal = family_name == "step-literal";
      auto f = literal ? grid_step_literal(g) : grid_family(g, family_name);
      auto sample = sample_induced(g, f);
      Report rep;
      auto& b = rep.body;
      b["family"] = family_name;
      b["grid"] = grid;
      Json rows = Json::array();
      std::size_t off = 0;
      for (std::size_t i = 0; i < sample.points.size(); ++i) {
        Json row;
        row["x"] = sample.points[i];
        row["induced"] = sample.values[i];
        if (!literal) {
          double t = grid_target(family_name, sample.points[i]);
          row["target"] = t;
          bool hit = std::abs(sample.values[i] - t) <=
                     2 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
          row["match"] = hit;
          off += hit ? 0 : 1;
        }
        rows.push_back(row);
      }
      b["samples"] = rows;
      if (!literal) b["off_target"] = off;
      std::size_t outside = 0;
      for (std::size_t j = 0; j < g.vertices(); ++j)
        if (!f.admissible_domain().contains(g.vertex(j))) ++outside;
      b["grid_points_outside_domain"] = outside;
      auto sp = f.spectrum();
      b["spectrum"] = std::vector<double>(sp.begin(), sp.end());
      b["continuity_at_grid_resolution"] = continuity(f, is_continuous_family(f, g.step));
      if (off > 0) rep.code = check_failed;
      rep.dot = g.space.to_dot();
      return rep;
    };
  });
}

Json witness(const FinitePresheaf& s, const SheafWitness& w) {
  const auto& l = s.lattice();
  Json j;
  j["element"] = l.name(w.element);
  j["cover"] = Json::array();
  j["family"] = Json::array();
  for (std::size_t i = 0; i < w.cover.size(); ++i) {
    j["cover"].push_back(l.name(w.cover[i]));
    j["family"].push_back(s.labels(w.cover[i]).at(w.family[i]));
  }
  j["gluings"] = w.gluings;
  return j;
}

void add_presheaf(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("presheaf", "Presheaves of finite sets on a lattice");
  cmd->require_subcommand(1);
  static std::string file;

  auto* check = cmd->add_subcommand("check", "Presheaf laws and the sheaf condition");
  check->add_option("-i,--input", file, "Presheaf file")->required();
  check->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto s = io::load_presheaf(input(file), cfg.load());
      const auto& l = s.lattice();
      Report rep;
      auto& b = rep.body;
      Json sizes = Json::object();
      for (ElementId a = 0; a < l.size(); ++a) sizes[l.name(a)] = s.size(a);
      b["sizes"] = sizes;
      auto pr = check_presheaf(s);
      b["presheaf"] = pr.holds;
      if (!pr.holds) {
        Json w;
        Json chain = Json::array();
        for (auto e : pr.chain) chain.push_back(l.name(e));
        w["chain"] = chain;
        w["section"] = s.labels(pr.chain.back()).at(pr.value);
        w["detail"] = pr.detail;
        b["witness"] = w;
        rep.code = check_failed;
        return rep;
      }
      auto sr = check_sheaf_condition(s);
      b["sheaf"] = sr.holds;
      b["existence"] = sr.existence;
      b["uniqueness"] = sr.uniqueness;
      b["covers_checked"] = sr.covers_checked;
      b["families_checked"] = sr.families_checked;
      if (sr.existence_witness || sr.uniqueness_witness) {
        Json w;
        if (sr.existence_witness) w["ungluable"] = witness(s, *sr.existence_witness);
        if (sr.uniqueness_witness) w["ambiguous"] = witness(s, *sr.uniqueness_witness);
        b["witness"] = w;
      }
      if (!sr.holds) rep.code = check_failed;
      return rep;
    };
  });

  auto* sheafify_cmd = cmd->add_subcommand("sheafify", "Stalks at the quasipoints and the sections they glue to");
  sheafify_cmd->add_option("-i,--input", file, "Presheaf file")->required();
  sheafify_cmd->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto s = io::load_presheaf(input(file), cfg.load());
      const auto& l = s.lattice();
      auto sh = sheafify(s);
      Report rep;
      auto& b = rep.body;
      Json stalks = Json::array();
      for (const auto& st : sh.stalks) {
        Json row;
        row["atom"] = l.name(st.atom);
        row["germs"] = st.germs;
        stalks.push_back(row);
      }
      b["stalks"] = stalks;
      Json rows = Json::array();
      for (ElementId a = 0; a < l.size(); ++a) {
        Json row;
        row["element"] = l.name(a);
        row["sections"] = s.size(a);
        row["glued"] = sh.sheaf.size(static_cast<ElementId>(sh.basis[a]));
        std::set<std::size_t> image(sh.canonical[a].begin(), sh.canonical[a].end());
        row["image"] = image.size();
        rows.push_back(row);
      }
      b["elements"] = rows;
      b["result_is_sheaf"] = check_sheaf_condition(sh.sheaf).holds;
      return rep;
    };
  });
}

}  // namespace

void add_classical_commands(CLI::App& app, Action& action) {
  add_classical(app, action);
  add_presheaf(app, action);
}

void add_suite_command(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("suite", "Run the property suite");
  static std::vector<int> ids;
  static bool serial = false;
  cmd->add_option("--criterion,-c", ids, "Criterion ids (default: all)")->check(CLI::Range(1, 9));
  cmd->add_flag("--serial", serial, "Run criteria one after another");
  cmd->callback([&action] {
    action = [](const RunConfig& cfg) {
      suite::Config sc;
      sc.seed = cfg.seed;
      sc.tol = cfg.tol();
      sc.parallel = !serial;
      auto results = suite::run_all(sc, ids);
      Report rep;
      Json rows = Json::array();
      std::size_t failed = 0;
      for (const auto& r : results) {
        Json row;
        row["id"] = r.id;
        row["status"] = r.pass ? "PASS" : "FAIL";
        row["title"] = r.title;
        row["summary"] = r.summary;
        if (!r.witness.empty()) row["witness"] = Json::parse(r.witness);
        rows.push_back(row);
        failed += r.pass ? 0 : 1;
        rep.text += std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " +
                    r.summary + "\n";
        if (!r.pass) rep.text += "       witness: " + r.witness + "\n";
      }
      rep.text += std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " passed\n";
      rep.body["seed"] = cfg.seed;
      rep.body["criteria"] = rows;
      rep.body["failed"] = failed;
      if (failed > 0) rep.code = check_failed;
      return rep;
    };
  });
}

}  // namespace obsfn::cli
