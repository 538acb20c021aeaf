#include "cli.hpp"
#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/stone.hpp"
#include "obsfn/suite.hpp"

namespace obsfn::cli {

namespace {

Json names(const Lattice& l, ElementSet s) {
  Json out = Json::array();
  s.for_each([&](ElementId e) { out.push_back(l.name(e)); });
  return out;
}

template <typename Seq>
Json names(const Lattice& l, const Seq& ids) {
  Json out = Json::array();
  for (auto e : ids) out.push_back(l.name(e));
  return out;
}

LatticePtr corpus_lattice(const std::string& name) {
  for (const auto& e : corpus::standard()) {
    std::string stem = suite::corpus_file(e.name);
    stem.resize(stem.size() - 5);
    if (name == e.name || name == stem) return e.lattice;
  }
  throw InputError("no corpus lattice named " + name);
}

Json family_body(const SpectralFamily& e, const std::string& lattice_ref) {
  return Json::parse(io::family_json(e, lattice_ref));
}

Json axiom(const StoneSpectrum& s, const AxiomReport& r) {
  Json j;
  j["holds"] = r.holds;
  if (!r.holds) {
    Json w;
    w["ideals"] = ideal_keys(s, r.ideals);
    w["elements"] = names(s.lattice(), r.elements);
    w["detail"] = r.detail;
    j["witness"] = w;
  }
  return j;
}

void add_lattice(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("lattice", "Lattice checks and export");
  cmd->require_subcommand(1);

  static std::string file, corpus_name;
  auto* check = cmd->add_subcommand("check", "Distributivity, orthomodularity, atoms, center");
  check->add_option("-i,--input,--lattice", file, "Lattice file")->required();
  check->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto l = io::load_lattice(input(file), cfg.load());
      Report rep;
      auto& b = rep.body;
      b["elements"] = l->size();
      b["ortho"] = l->has_ortho();
      auto d = is_distributive(*l);
      b["distributive"] = d.distributive;
      if (d.witness) b["distributive_witness"] = names(*l, *d.witness);
      if (l->has_ortho()) {
        if (auto v = ortho_violation(*l)) {
          b["ortholattice"] = false;
          b["ortho_violation"] = *v;
        } else {
          auto om = is_orthomodular(*l);
          b["orthomodular"] = om.orthomodular;
          if (om.witness) b["orthomodular_witness"] = names(*l, std::vector<ElementId>{om.witness->first, om.witness->second});
          if (om.orthomodular) b["center"] = names(*l, center(*l));
        }
      }
      b["atoms"] = names(*l, atoms(*l));
      b["atomistic"] = is_atomistic(*l);
      rep.dot = to_dot(*l);
      return rep;
    };
  });

  auto* dot = cmd->add_subcommand("dot", "Hasse diagram in DOT");
  dot->add_option("-i,--input,--lattice", file, "Lattice file")->required();
  dot->callback([&action] {
    action = [](const RunConfig& cfg) {
      Report rep;
      rep.dot = to_dot(*io::load_lattice(input(file), cfg.load()));
      return rep;
    };
  });

  auto* show = cmd->add_subcommand("show", "Print a lattice file or a corpus lattice as JSON");
  auto* in = show->add_option("-i,--input,--lattice", file, "Lattice file");
  show->add_option("--corpus", corpus_name, "Corpus name (MO2, 2^3, chain4, ... or mo2, boolean3, ...)")
      ->excludes(in);
  show->callback([&action] {
    action = [](const RunConfig& cfg) {
      if (file.empty() && corpus_name.empty()) throw InputError("lattice show needs --input or --corpus");
      auto l = corpus_name.empty() ? io::load_lattice(input(file), cfg.load()) : corpus_lattice(corpus_name);
      Report rep;
      rep.body = Json::parse(io::lattice_json(*l));
      rep.dot = to_dot(*l);
      return rep;
    };
  });
}

void add_stone(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("stone", "Dual ideals and quasipoints");
  cmd->require_subcommand(1);
  static std::string file;
  auto make = [](bool only_quasipoints) {
    return [only_quasipoints](const RunConfig& cfg) {
      auto l = io::load_lattice(input(file), cfg.load());
      StoneSpectrum s(l, cfg.cap);
      Report rep;
      Json rows = Json::array();
      std::vector<bool> is_q(s.dual_ideals().size(), false);
      for (auto q : s.quasipoints()) is_q[q] = true;
      for (std::size_t i = 0; i < s.dual_ideals().size(); ++i) {
        if (only_quasipoints && !is_q[i]) continue;
        Json row;
        row["index"] = i;
        row["generator"] = l->name(l->meet(s.ideal(i).members));
        row["members"] = ideal_key(*l, s.ideal(i));
        if (!only_quasipoints) row["quasipoint"] = is_q[i];
        rows.push_back(row);
      }
      rep.body["dual_ideals"] = s.dual_ideals().size();
      rep.body["quasipoints"] = s.quasipoints().size();
      rep.body[only_quasipoints ? "quasipoint_table" : "ideal_table"] = rows;
      rep.dot = s.to_dot();
      return rep;
    };
  };
  for (bool q : {true, false}) {
    auto* sub = cmd->add_subcommand(q ? "quasipoints" : "dual-ideals",
                                    q ? "Maximal dual ideals" : "All dual ideals; --dot gives the inclusion diagram");
    sub->add_option("-i,--input,--lattice", file, "Lattice file")->required();
    sub->callback([&action, make, q] { action = make(q); });
  }
}

void add_spectral(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("spectral", "Spectral families in a lattice");
  cmd->require_subcommand(1);
  static std::string file, element;
  static double lambda = 0;

  auto* eval = cmd->add_subcommand("eval", "E(lambda)");
  eval->add_option("-i,--input,--family", file, "Family file")->required();
  eval->add_option("--lambda,-l", lambda, "Real argument")->required();
  eval->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto lf = io::load_family(input(file), cfg.load());
      Report rep;
      rep.body["lambda"] = lambda;
      rep.body["value"] = lf.family.lattice().name(lf.family.eval(lambda));
      return rep;
    };
  });

  auto* restrict = cmd->add_subcommand("restrict", "lambda -> E(lambda) meet a");
  restrict->add_option("-i,--input,--family", file, "Family file")->required();
  restrict->add_option("--to,-a", element, "Element a")->required();
  restrict->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto lf = io::load_family(input(file), cfg.load());
      auto r = lf.family.restrict(lf.family.lattice().id(element));
      Report rep;
      rep.body = family_body(r, lf.lattice_ref);
      return rep;
    };
  });

  auto* spec = cmd->add_subcommand("spectrum", "Breakpoints of the canonical form");
  spec->add_option("-i,--input,--family", file, "Family file")->required();
  spec->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto lf = io::load_family(input(file), cfg.load());
      auto sp = lf.family.spectrum();
      Report rep;
      rep.body["spectrum"] = std::vector<double>(sp.begin(), sp.end());
      rep.body["canonical"] = family_body(lf.family, lf.lattice_ref);
      return rep;
    };
  });
}

void add_obs(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("obs", "Observable functions on dual ideals");
  cmd->require_subcommand(1);
  static std::string file, ideal;

  auto* eval = cmd->add_subcommand("eval", "f_E at one dual ideal, or the whole table");
  eval->add_option("-i,--input,--family", file, "Family file")->required();
  eval->add_option("--ideal", ideal, "Dual ideal by its members, e.g. \"a,1\"");
  eval->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto lf = io::load_family(input(file), cfg.load());
      Report rep;
      if (!ideal.empty()) {
        const auto& l = lf.family.lattice();
        auto j = parse_ideal(l, ideal);
        rep.body["ideal"] = ideal_key(l, j);
        rep.body["value"] = observable_from_spectral(lf.family, j);
        return rep;
      }
      auto space = std::make_shared<const StoneSpectrum>(lf.family.lattice_ptr(), cfg.cap);
      rep.body = Json::parse(io::table_json(observable_from_spectral(lf.family, space), lf.lattice_ref));
      return rep;
    };
  });

  auto* rec = cmd->add_subcommand("reconstruct", "Spectral family of an observable table");
  rec->add_option("-i,--input,--table", file, "Table file")->required();
  rec->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto path = input(file);
      auto f = io::load_table(path, cfg.load());
      auto e = reconstruct(f);
      Report rep;
      rep.body["family"] = Json::parse(io::family_json(e, io::reference(path, "lattice")));
      auto image = f.image();
      rep.body["image"] = image;
      return rep;
    };
  });

  auto* check = cmd->add_subcommand("check", "Intersection condition and upper semicontinuity");
  check->add_option("-i,--input,--table", file, "Table file")->required();
  check->callback([&action] {
    action = [](const RunConfig& cfg) {
      auto f = io::load_table(input(file), cfg.load());
      auto ic = check_intersection_condition(f);
      auto us = check_upper_semicontinuous(f);
      Report rep;
      rep.body["intersection"] = axiom(f.space(), ic);
      rep.body["upper_semicontinuous"] = axiom(f.space(), us);
      if (ic.holds && us.holds) {
        auto r = r_from_f(f);
        Json rj = Json::object();
        for (ElementId p = 0; p < f.lattice().size(); ++p)
          if (p != f.lattice().zero()) rj[f.lattice().name(p)] = r.at(p);
        rep.body["r"] = rj;
      } else {
        rep.code = check_failed;
      }
      return rep;
    };
  });
}

}  // namespace

void add_order_commands(CLI::App& app, Action& action) {
  add_lattice(app, action);
  add_stone(app, action);
  add_spectral(app, action);
  add_obs(app, action);
}

}  // namespace obsfn::cli
