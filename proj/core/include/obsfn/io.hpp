#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "obsfn/context.hpp"
#include "obsfn/lattice.hpp"
#include "obsfn/matrix.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/presheaf.hpp"
#include "obsfn/spectral_family.hpp"
#include "obsfn/topology.hpp"

namespace obsfn::io {

namespace fs = std::filesystem;

/// Reads a whole file; InputError if it cannot be opened.
std::string read_text(const fs::path& p);

/// Directories searched after the referencing file's own directory: the
/// corpus root (OBS_CORPUS_DIR, else `fallback`) and its immediate subdirectories.
void set_corpus_fallback(fs::path dir);
std::vector<fs::path> corpus_dirs();

/// `ref` as is when absolute, else relative to `base`, else in the corpus.
fs::path resolve(const std::string& ref, const fs::path& base);

/// The string field `key` of the JSON object in `p` (a file reference, as written).
std::string reference(const fs::path& p, const std::string& key);

struct LoadOptions {
  LatticeOptions lattice;
  std::size_t ideal_cap = 64;
  Tolerances tol;
};

// ---- lattices -------------------------------------------------------------
// {"elements":[...], "leq":[[a,b],...], "ortho":{"a":"a'"}}

LatticePtr parse_lattice(const std::string& text, const LoadOptions& opt = {});
LatticePtr load_lattice(const fs::path& p, const LoadOptions& opt = {});
/// Cover pairs only; ortho listed once per pair.
std::string lattice_json(const Lattice& l);

// ---- spectral families ----------------------------------------------------
// {"lattice":"mo2.json", "breakpoints":[[1.0,"a"],[2.0,"1"]], "top":"1"}

struct LoadedFamily {
  std::string lattice_ref;  // as written in the file
  SpectralFamily family;
};
LoadedFamily load_family(const fs::path& p, const LoadOptions& opt = {});
std::string family_json(const SpectralFamily& e, const std::string& lattice_ref);

// ---- observable tables ----------------------------------------------------
// {"lattice":"mo2.json", "values":{"a,1":1.0, ...}}; every dual ideal must
// appear, keyed by its members (any order).

ObservableFunction load_table(const fs::path& p, const LoadOptions& opt = {});
std::string table_json(const ObservableFunction& f, const std::string& lattice_ref);

// ---- matrices -------------------------------------------------------------
// [[[re,im],...],...]; plain numbers are accepted for real entries.

CMatrix parse_matrix(const std::string& text);
CMatrix load_matrix(const fs::path& p);
std::string matrix_json(const CMatrix& m);

/// {"generators":["P.json", [[...]]]}: a list of file references or inline matrices.
std::vector<CMatrix> load_generators(const fs::path& p);

// ---- topologies -----------------------------------------------------------
// {"points":["1","2"], "opens":[[],["1"],["1","2"]]}

FiniteTopSpace load_space(const fs::path& p);
std::string space_json(const FiniteTopSpace& s);

/// {"space":"s.json", "values":{"1":0.0, ...}}: a total real function.
/// `space`, when given, replaces the file's own "space" entry.
struct LoadedFunction {
  FiniteTopSpace space;
  std::vector<double> values;
};
LoadedFunction load_function(const fs::path& p, const FiniteTopSpace* space = nullptr);

/// {"space":"s.json", "base":[], "breakpoints":[[1.0,["1"]],...], "unbounded":false}
TopSpectralFamily load_top_family(const fs::path& p, const FiniteTopSpace* space = nullptr);

// ---- contexts -------------------------------------------------------------
// Diagram: {"ambient_dim":2, "contexts":{"Az":["Pz.json"], ...}} (file order kept).
// Sections: {"contexts":{"Az":[{"proj":"Pz.json","value":1.0}, {"vector":[1,0],"value":1}]}};
// unlisted masks of a listed context get the maximum over their minimal
// projections, unlisted contexts are filled by restriction.

ContextDiagram load_diagram(const fs::path& p, const LoadOptions& opt = {});
GlobalSection load_sections(const fs::path& p, const ContextDiagram& d);

// ---- presheaves -----------------------------------------------------------
// {"kind":"spectral", "lattice":"mo2.json", "lambdas":[1,2]}
// {"kind":"constant", "lattice":..., "values":["x","y"]}
// {"kind":"function", "space":"s.json", "values":["0","1"]}
// {"kind":"explicit", "lattice":..., "sets":{"a":["x"]}, "restrictions":[["a","1",[0,0]]]}

FinitePresheaf load_presheaf(const fs::path& p, const LoadOptions& opt = {});

}  // namespace obsfn::io
