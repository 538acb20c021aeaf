#include "obsfn/context.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"

namespace obsfn {

namespace {

bool equivalent(const VNSubalgebra& x, const VNSubalgebra& y) {
  if (x.dim() != y.dim()) return false;
  return std::all_of(y.basis().begin(), y.basis().end(), [&](const CMatrix& b) { return x.contains(b); });
}

bool subalgebra_of(const VNSubalgebra& x, const VNSubalgebra& y) {
  return std::all_of(x.basis().begin(), x.basis().end(), [&](const CMatrix& b) { return y.contains(b); });
}

std::vector<CMatrix> minimal_projections(const VNSubalgebra& a, const Tolerances& tol) {
  const std::size_t m = a.dim();
  if (m > 6) throw ResourceError("context has " + std::to_string(m) + " minimal projections (limit 6)");
  std::vector<CMatrix> herm;
  for (const auto& x : a.basis()) {
    herm.push_back(hermitian_part(x));
    herm.push_back(hermitian_part(x * cplx(0, -1)));
  }
  for (int attempt = 0; attempt < 5; ++attempt) {
    CMatrix g(a.ambient_dim(), a.ambient_dim());
    for (std::size_t k = 0; k < herm.size(); ++k) {
      g += herm[k] * cplx(std::sqrt(2.0 + static_cast<double>(k) + 11.0 * attempt), 0);
    }
    auto fam = spectral_family_of(g, tol);
    if (fam.lambdas.size() != m) continue;
    std::vector<CMatrix> out;
    CMatrix prev(a.ambient_dim(), a.ambient_dim());
    bool ok = true;
    for (const auto& e : fam.projections) {
      CMatrix p = hermitian_part(e - prev);
      prev = e;
      ok = ok && is_projection(p, tol) && a.contains(p);
      out.push_back(p);
    }
    if (ok) return out;
  }
  throw NumericError("could not separate the minimal projections of a context");
}

nlohmann::json matrix_json(const CMatrix& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < p.cols(); ++j) row.push_back({p(i, j).real(), p(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

double value_of(const std::vector<double>& table, std::uint64_t mask) { return table.at(mask); }

bool table_increasing(const std::vector<double>& t, std::size_t m, const Tolerances& tol) {
  if (t.size() != (std::size_t{1} << m)) return false;
  for (std::uint64_t mask = 1; mask < t.size(); ++mask) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j)
      if ((mask >> j) & 1U) mx = std::max(mx, t[std::uint64_t{1} << j]);
    if (!std::isfinite(t[mask]) || !same_value(t[mask], mx, tol)) return false;
  }
  return true;
}

// inf { l_i | p <= E_i }
double r_of(const OperatorSpectralFamily& fam, const CMatrix& p, const Tolerances& tol) {
  for (std::size_t i = 0; i < fam.lambdas.size(); ++i)
    if (proj_leq(p, fam.projections[i], tol)) return fam.lambdas[i];
  throw ConsistencyError("projection is not below the identity");
}

}  // namespace

bool same_value(double a, double b, const Tolerances& tol) {
  return std::abs(a - b) <= tol.rec * std::max({1.0, std::abs(a), std::abs(b)});
}

CMatrix Context::projection(std::uint64_t mask) const {
  if (minimal.empty()) throw PreconditionError("context has no projections");
  CMatrix p(minimal.front().rows(), minimal.front().cols());
  for (std::size_t j = 0; j < minimal.size(); ++j)
    if ((mask >> j) & 1U) p += minimal[j];
  return p;
}

std::optional<std::uint64_t> Context::find(const CMatrix& p, const Tolerances& tol) const {
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < minimal.size(); ++j)
    if (proj_leq(minimal[j], p, tol)) mask |= std::uint64_t{1} << j;
  if (mask == 0 || !proj_equal(projection(mask), p, tol)) return std::nullopt;
  return mask;
}

ContextDiagram ContextDiagram::build(std::size_t dim,
                                     const std::vector<std::pair<std::string, std::vector<CMatrix>>>& contexts,
                                     const Tolerances& tol) {
  if (dim == 0 || dim > 16) throw InputError("ambient dimension must be between 1 and 16");
  ContextDiagram d;
  d.dim_ = dim;
  d.tol_ = tol;
  auto has_name = [&](const std::string& n) {
    return std::any_of(d.contexts_.begin(), d.contexts_.end(), [&](const Context& c) { return c.name == n; });
  };
  for (const auto& [name, gens] : contexts) {
    if (name.empty() || has_name(name)) throw InputError("context names must be nonempty and distinct");
    for (const auto& g : gens)
      if (g.rows() != dim || g.cols() != dim) throw InputError("generator of " + name + " has the wrong size");
    Context c;
    c.name = name;
    c.algebra = VNSubalgebra::generated_by(dim, gens, tol);
    if (!c.algebra.is_abelian()) throw InputError("context " + name + " is not abelian");
    d.contexts_.push_back(std::move(c));
  }
  auto find_equivalent = [&](const VNSubalgebra& a) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < d.contexts_.size(); ++i)
      if (equivalent(d.contexts_[i].algebra, a)) return i;
    return std::nullopt;
  };
  auto insert = [&](std::string name, VNSubalgebra a) {
    std::string n = name;
    for (int k = 2; has_name(n); ++k) n = name + "#" + std::to_string(k);
    Context c;
    c.name = n;
    c.algebra = std::move(a);
    c.inserted = true;
    d.contexts_.push_back(std::move(c));
  };
  auto trivial = VNSubalgebra::generated_by(dim, {}, tol);
  if (!find_equivalent(trivial)) insert("CI", trivial);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < d.contexts_.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < d.contexts_.size() && !changed; ++j) {
        auto c = VNSubalgebra::intersection(d.contexts_[i].algebra, d.contexts_[j].algebra);
        if (!find_equivalent(c)) {
          insert(d.contexts_[i].name + "&" + d.contexts_[j].name, std::move(c));
          changed = true;
        }
      }
    }
    if (d.contexts_.size() > 64) throw ResourceError("context diagram exceeds 64 contexts");
  }
  for (auto& c : d.contexts_) {
    c.minimal = minimal_projections(c.algebra, tol);
    c.lattice = corpus::boolean(c.minimal.size());
  }
  const std::size_t n = d.contexts_.size();
  d.incl_.assign(n, std::vector<bool>(n, false));
  d.meet_.assign(n, std::vector<std::size_t>(n, 0));
  d.embedding_.assign(n, std::vector<std::vector<std::uint64_t>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d.incl_[i][j] = i == j || subalgebra_of(d.contexts_[i].algebra, d.contexts_[j].algebra);
      auto m = find_equivalent(VNSubalgebra::intersection(d.contexts_[i].algebra, d.contexts_[j].algebra));
      if (!m) throw ConsistencyError("intersection missing from the diagram");
      d.meet_[i][j] = *m;
      if (!d.incl_[i][j]) continue;
      for (const auto& p : d.contexts_[i].minimal) {
        auto mask = d.contexts_[j].find(p, tol);
        if (!mask) throw ConsistencyError("projection of " + d.contexts_[i].name + " not found in " +
                                          d.contexts_[j].name);
        d.embedding_[i][j].push_back(*mask);
      }
    }
  }
  return d;
}

std::size_t ContextDiagram::index(const std::string& name) const {
  for (std::size_t i = 0; i < contexts_.size(); ++i)
    if (contexts_[i].name == name) return i;
  throw InputError("unknown context: " + name);
}

std::uint64_t ContextDiagram::embed(std::size_t sub, std::size_t sup, std::uint64_t mask) const {
  if (!includes(sub, sup)) {
    throw PreconditionError(contexts_.at(sub).name + " is not contained in " + contexts_.at(sup).name);
  }
  std::uint64_t out = 0;
  const auto& e = embedding_[sub][sup];
  for (std::size_t j = 0; j < e.size(); ++j)
    if ((mask >> j) & 1U) out |= e[j];
  return out;
}

void fill_restrictions(GlobalSection& s, const ContextDiagram& d) {
  const std::size_t n = d.contexts().size();
  if (s.tables.size() != n) s.tables.resize(n);
  std::vector<bool> given(n);
  for (std::size_t i = 0; i < n; ++i) given[i] = !s.tables[i].empty();
  for (std::size_t i = 0; i < n; ++i) {
    if (given[i]) continue;
    std::optional<std::size_t> src;
    for (std::size_t j = 0; j < n && !src; ++j)
      if (given[j] && d.includes(i, j)) src = j;
    if (!src) throw InputError("no table for context " + d.context(i).name + " or any context above it");
    const auto& c = d.context(i);
    std::vector<double> t(std::size_t{1} << c.atoms(), std::numeric_limits<double>::quiet_NaN());
    for (std::uint64_t mask = 1; mask <= c.full_mask(); ++mask)
      t[mask] = value_of(s.tables[*src], d.embed(i, *src, mask));
    s.tables[i] = std::move(t);
  }
}

GlobalSection section_from_operator(const CMatrix& a, const ContextDiagram& d) {
  const auto& tol = d.tolerances();
  if (a.rows() != d.ambient_dim() || a.cols() != d.ambient_dim()) throw InputError("operator has the wrong size");
  if (!is_hermitian(a, tol)) throw InputError("operator is not Hermitian");
  auto fam = spectral_family_of(a, tol);
  GlobalSection s;
  for (const auto& c : d.contexts()) {
    auto rest = spectral_family_of(rho_restrict(c.algebra, a), tol);
    std::vector<double> t(std::size_t{1} << c.atoms(), std::numeric_limits<double>::quiet_NaN());
    for (std::uint64_t mask = 1; mask <= c.full_mask(); ++mask) {
      CMatrix p = c.projection(mask);
      t[mask] = r_of(fam, p, tol);
      double via_core = r_of(rest, p, tol);
      if (std::abs(via_core - t[mask]) > tol.cluster * std::max(1.0, std::abs(t[mask]))) {
        throw ConsistencyError("core-based restriction disagrees on context " + c.name);
      }
    }
    s.tables.push_back(std::move(t));
  }
  auto rep = is_global_section(s, d);
  if (!rep.holds) throw ConsistencyError("operator section is not compatible; tolerance breach");
  return s;
}

SectionReport is_global_section(const GlobalSection& s, const ContextDiagram& d) {
  const auto& tol = d.tolerances();
  const std::size_t n = d.contexts().size();
  if (s.tables.size() != n) throw InputError("one table per context is required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!table_increasing(s.tables[i], d.context(i).atoms(), tol)) {
      throw PreconditionError("table of context " + d.context(i).name + " is not completely increasing");
    }
  }
  SectionReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t k = d.meet(i, j);
      for (std::uint64_t mask = 1; mask <= d.context(k).full_mask(); ++mask) {
        double x = s.tables[i][d.embed(k, i, mask)];
        double y = s.tables[j][d.embed(k, j, mask)];
        if (!same_value(x, y, tol)) {
          rep.holds = false;
          rep.contexts = std::make_pair(i, j);
          rep.mask = mask;
          rep.left = x;
          rep.right = y;
          return rep;
        }
      }
    }
  }
  return rep;
}

GlueReport glue_section(const GlobalSection& s, const ContextDiagram& d, std::size_t family_cap) {
  const auto& tol = d.tolerances();
  const std::size_t n = d.contexts().size();
  if (s.tables.size() != n) throw InputError("one table per context is required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!table_increasing(s.tables[i], d.context(i).atoms(), tol)) {
      throw PreconditionError("table of context " + d.context(i).name + " is not completely increasing");
    }
  }
  GlueReport rep;
  auto& u = rep.values;
  auto locate = [&](const CMatrix& p) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < u.size(); ++k)
      if (proj_equal(u[k].projection, p, tol)) return k;
    return std::nullopt;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = d.context(i);
    for (std::uint64_t mask = 1; mask <= c.full_mask(); ++mask) {
      CMatrix p = c.projection(mask);
      double v = s.tables[i][mask];
      if (auto k = locate(p)) {
        if (!same_value(u[*k].value, v, tol)) {
          nlohmann::json w = {{"axiom", "overlap"},
                              {"contexts", {d.context(u[*k].context).name, c.name}},
                              {"values", {u[*k].value, v}},
                              {"projection", matrix_json(p)},
                              {"detail", "one projection carries two values"}};
          throw CheckFailure("contexts " + d.context(u[*k].context).name + " and " + c.name +
                                 " disagree on a shared projection",
                             w.dump());
        }
        continue;
      }
      u.push_back({p, v, i, mask});
    }
  }
  const std::size_t m = u.size();

  // gs7 (i): cliques of the commutation graph
  std::vector<std::vector<bool>> commute(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      CMatrix x = u[a].projection * u[b].projection - u[b].projection * u[a].projection;
      commute[a][b] = x.frobenius() <= tol.rec;
    }
  std::vector<std::size_t> clique;
  std::size_t budget = family_cap;
  std::function<void(std::size_t, const CMatrix&, double)> grow = [&](std::size_t start, const CMatrix& join,
                                                                       double mx) {
    if (!rep.commuting_ok) return;
    if (clique.size() >= 2) {
      if (budget-- == 0) throw ResourceError("commuting-family scan exceeds the cap");
      auto k = locate(join);
      if (!k) {
        ++rep.commuting_skipped;
      } else {
        ++rep.commuting_checked;
        if (!same_value(u[*k].value, mx, tol)) {
          rep.commuting_ok = false;
          rep.commuting_witness = clique;
          return;
        }
      }
    }
    for (std::size_t b = start; b < m; ++b) {
      bool ok = std::all_of(clique.begin(), clique.end(), [&](std::size_t a) { return commute[a][b]; });
      if (!ok) continue;
      clique.push_back(b);
      CMatrix nj = clique.size() == 1 ? u[b].projection : proj_join(join, u[b].projection, tol);
      grow(b + 1, nj, clique.size() == 1 ? u[b].value : std::max(mx, u[b].value));
      clique.pop_back();
    }
  };
  grow(0, CMatrix(), 0.0);

  // complete increasingness on families of two and three
  for (std::size_t a = 0; a < m && rep.completely_increasing; ++a) {
    for (std::size_t b = a + 1; b < m && rep.completely_increasing; ++b) {
      CMatrix jab = proj_join(u[a].projection, u[b].projection, tol);
      double mab = std::max(u[a].value, u[b].value);
      if (auto k = locate(jab); k && !same_value(u[*k].value, mab, tol)) {
        rep.completely_increasing = false;
        rep.increasing_witness = {a, b};
        break;
      }
      for (std::size_t c = b + 1; c < m; ++c) {
        CMatrix j = proj_join(jab, u[c].projection, tol);
        auto k = locate(j);
        if (k && !same_value(u[*k].value, std::max(mab, u[c].value), tol)) {
          rep.completely_increasing = false;
          rep.increasing_witness = {a, b, c};
          break;
        }
      }
    }
  }

  // extendability: the smallest candidate family E_v = join { P | f(P) <= v }
  // reproduces f iff any Hermitian operator does
  auto top = locate(CMatrix::identity(d.ambient_dim()));
  if (!top) throw ConsistencyError("identity missing from the diagram");
  const double fmax = u[*top].value;
  std::vector<double> vals;
  for (const auto& g : u) vals.push_back(g.value);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end(), [&](double x, double y) { return same_value(x, y, tol); }),
             vals.end());
  std::vector<double> lambdas;
  std::vector<CMatrix> projs;
  CMatrix acc(d.ambient_dim(), d.ambient_dim());
  bool overshoot = false;
  for (double v : vals) {
    if (v > fmax && !same_value(v, fmax, tol)) {
      overshoot = true;
      break;
    }
    if (same_value(v, fmax, tol)) break;
    for (const auto& g : u)
      if (g.value <= v || same_value(g.value, v, tol)) acc = proj_join(acc, g.projection, tol);
    lambdas.push_back(v);
    projs.push_back(acc);
  }
  lambdas.push_back(fmax);
  projs.push_back(CMatrix::identity(d.ambient_dim()));
  auto cand = make_family(lambdas, projs, tol);
  bool reproduces = !overshoot;
  for (const auto& g : u) {
    if (!reproduces) break;
    reproduces = same_value(r_of(cand, g.projection, tol), g.value, tol);
  }

  // rank-1 value pattern
  std::vector<std::size_t> low;
  for (std::size_t k = 0; k < m; ++k)
    if (projection_rank(u[k].projection) == 1 && u[k].value < fmax && !same_value(u[k].value, fmax, tol))
      low.push_back(k);
  if (d.ambient_dim() == 2 && low.size() >= 2) {
    rep.rank_one_pattern_violation = true;
    rep.detail = "two distinct rank-1 projections carry values below the maximum";
  } else if (d.ambient_dim() == 3 && !low.empty()) {
    CMatrix span(3, 3);
    double m2 = -std::numeric_limits<double>::infinity();
    for (auto k : low) {
      span = proj_join(span, u[k].projection, tol);
      m2 = std::max(m2, u[k].value);
    }
    std::size_t below = 0;
    for (auto k : low)
      if (!same_value(u[k].value, m2, tol)) ++below;
    if (projection_rank(span) == 3) {
      rep.rank_one_pattern_violation = true;
      rep.detail = "rank-1 projections below the maximum span the whole space";
    } else if (below >= 2) {
      rep.rank_one_pattern_violation = true;
      rep.detail = "two distinct rank-1 projections sit below the second value";
    }
  }
  if (reproduces) {
    if (rep.rank_one_pattern_violation) throw ConsistencyError("extendable section violates the rank-1 pattern");
    CMatrix op = synthesize(cand);
    auto again = section_from_operator(op, d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint64_t mask = 1; mask <= d.context(i).full_mask(); ++mask)
        if (!same_value(again.tables[i][mask], s.tables[i][mask], tol)) {
          throw ConsistencyError("candidate operator does not reproduce the section");
        }
    rep.extendable = true;
    rep.op = op;
    rep.detail = "induced by the Hermitian operator with the smallest compatible spectral family";
  } else if (!rep.rank_one_pattern_violation) {
    rep.detail = overshoot ? "a projection exceeds the value of I"
                           : "the smallest compatible spectral family does not reproduce the section";
  }
  return rep;
}

GlobalSection split_function(const std::vector<GluedValue>& f, const ContextDiagram& d) {
  GlobalSection s;
  for (const auto& c : d.contexts()) {
    std::vector<double> t(std::size_t{1} << c.atoms(), std::numeric_limits<double>::quiet_NaN());
    for (std::uint64_t mask = 1; mask <= c.full_mask(); ++mask) {
      CMatrix p = c.projection(mask);
      auto it = std::find_if(f.begin(), f.end(),
                             [&](const GluedValue& g) { return proj_equal(g.projection, p, d.tolerances()); });
      if (it == f.end()) throw InputError("function misses a projection of context " + c.name);
      t[mask] = it->value;
    }
    s.tables.push_back(std::move(t));
  }
  return s;
}

SectionSearch search_non_operator_sections(const ContextDiagram& d, const std::vector<double>& values,
                                           std::size_t cap, std::size_t keep) {
  if (values.empty()) throw InputError("search needs at least one value");
  const auto& tol = d.tolerances();
  // distinct minimal projections and, per context, their positions
  std::vector<CMatrix> atoms;
  std::vector<std::vector<std::size_t>> where;
  for (const auto& c : d.contexts()) {
    std::vector<std::size_t> w;
    for (const auto& p : c.minimal) {
      auto it = std::find_if(atoms.begin(), atoms.end(), [&](const CMatrix& q) { return proj_equal(p, q, tol); });
      if (it == atoms.end()) {
        w.push_back(atoms.size());
        atoms.push_back(p);
      } else {
        w.push_back(static_cast<std::size_t>(it - atoms.begin()));
      }
    }
    where.push_back(std::move(w));
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    total *= values.size();
    if (total > cap) throw ResourceError("section search exceeds " + std::to_string(cap) + " assignments");
  }
  SectionSearch out;
  std::vector<double> assign(atoms.size());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& a : assign) {
      a = values[c % values.size()];
      c /= values.size();
    }
    ++out.assignments;
    GlobalSection s;
    for (std::size_t i = 0; i < d.contexts().size(); ++i) {
      const auto& ctx = d.context(i);
      std::vector<double> t(std::size_t{1} << ctx.atoms(), std::numeric_limits<double>::quiet_NaN());
      for (std::uint64_t mask = 1; mask <= ctx.full_mask(); ++mask) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ctx.atoms(); ++j)
          if ((mask >> j) & 1U) mx = std::max(mx, assign[where[i][j]]);
        t[mask] = mx;
      }
      s.tables.push_back(std::move(t));
    }
    if (!is_global_section(s, d).holds) continue;
    ++out.global_sections;
    auto g = glue_section(s, d);
    if (!g.extendable) {
      ++out.non_operator;
      if (out.examples.size() < keep) out.examples.push_back(s);
    }
  }
  return out;
}

}  // namespace obsfn
