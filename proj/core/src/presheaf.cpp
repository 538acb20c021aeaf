#include "obsfn/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "obsfn/corpus.hpp"
#include "obsfn/error.hpp"
#include "obsfn/spectral_family.hpp"

namespace obsfn {

FinitePresheaf::FinitePresheaf(LatticePtr lattice) : lattice_(std::move(lattice)) {
  if (!lattice_) throw InputError("presheaf needs a lattice");
  labels_.resize(lattice_->size());
}

void FinitePresheaf::set_values(ElementId a, std::vector<std::string> labels) {
  lattice_->require(a);
  labels_[a] = std::move(labels);
}

void FinitePresheaf::set_restriction(ElementId a, ElementId b, std::vector<std::size_t> map) {
  lattice_->require(a);
  lattice_->require(b);
  if (!lattice_->leq(a, b)) {
    throw InputError("restriction needs " + lattice_->name(a) + " <= " + lattice_->name(b));
  }
  maps_[{a, b}] = std::move(map);
}

std::size_t FinitePresheaf::restrict(ElementId a, ElementId b, std::size_t i) const {
  auto it = maps_.find({a, b});
  if (it == maps_.end()) {
    throw InputError("missing restriction " + lattice_->name(b) + " -> " + lattice_->name(a));
  }
  return it->second.at(i);
}

void FinitePresheaf::validate() const {
  const auto& l = *lattice_;
  for (ElementId b = 0; b < l.size(); ++b) {
    l.down(b).for_each([&](ElementId a) {
      auto it = maps_.find({a, b});
      if (it == maps_.end()) throw InputError("missing restriction " + l.name(b) + " -> " + l.name(a));
      if (it->second.size() != size(b)) {
        throw InputError("restriction " + l.name(b) + " -> " + l.name(a) + " is not total");
      }
      for (auto v : it->second)
        if (v >= size(a)) throw InputError("restriction " + l.name(b) + " -> " + l.name(a) + " leaves S(" +
                                           l.name(a) + ")");
    });
  }
}

PresheafReport check_presheaf(const FinitePresheaf& s) {
  s.validate();
  const auto& l = s.lattice();
  PresheafReport rep;
  for (ElementId a = 0; a < l.size(); ++a) {
    for (std::size_t i = 0; i < s.size(a); ++i) {
      if (s.restrict(a, a, i) != i) {
        rep.holds = false;
        rep.chain = {a, a, a};
        rep.value = i;
        rep.detail = "restriction " + l.name(a) + " -> " + l.name(a) + " is not the identity";
        return rep;
      }
    }
  }
  for (ElementId c = 0; c < l.size(); ++c) {
    for (ElementId b : l.down(c).members()) {
      for (ElementId a : l.down(b).members()) {
        for (std::size_t i = 0; i < s.size(c); ++i) {
          if (s.restrict(a, b, s.restrict(b, c, i)) != s.restrict(a, c, i)) {
            rep.holds = false;
            rep.chain = {a, b, c};
            rep.value = i;
            rep.detail = "restrictions along " + l.name(a) + " <= " + l.name(b) + " <= " + l.name(c) +
                         " do not compose";
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

SheafReport check_sheaf_condition(const FinitePresheaf& s, std::size_t cap) {
  s.validate();
  const auto& l = s.lattice();
  SheafReport rep;
  std::size_t budget = cap;
  auto spend = [&]() {
    if (budget == 0) throw ResourceError("sheaf check exceeds " + std::to_string(cap) + " families");
    --budget;
  };
  auto record = [&](ElementId a, const std::vector<ElementId>& cover, const std::vector<std::size_t>& fam,
                    std::size_t gluings) {
    SheafWitness w{a, cover, fam, gluings};
    if (gluings == 0 && rep.existence) {
      rep.existence = false;
      rep.existence_witness = w;
    }
    if (gluings > 1 && rep.uniqueness) {
      rep.uniqueness = false;
      rep.uniqueness_witness = w;
    }
  };

  // the empty cover of 0
  ++rep.covers_checked;
  ++rep.families_checked;
  record(l.zero(), {}, {}, s.size(l.zero()));

  for (ElementId a = 0; a < l.size(); ++a) {
    if (a == l.zero()) continue;
    std::vector<ElementId> cand;
    l.down(a).for_each([&](ElementId b) {
      if (b != a && b != l.zero()) cand.push_back(b);
    });
    // restriction tuples of every section over a, per candidate
    std::vector<ElementId> cover;
    std::function<void(std::size_t)> covers = [&](std::size_t k) {
      if (!rep.existence && !rep.uniqueness) return;
      if (k == cand.size()) {
        if (cover.size() < 2 || l.join(std::span<const ElementId>(cover)) != a) return;
        ++rep.covers_checked;
        const std::size_t n = cover.size();
        std::vector<std::size_t> fam(n);
        std::function<void(std::size_t)> pick = [&](std::size_t i) {
          if (i == n) {
            spend();
            ++rep.families_checked;
            std::size_t gluings = 0;
            for (std::size_t x = 0; x < s.size(a); ++x) {
              bool ok = true;
              for (std::size_t j = 0; j < n && ok; ++j) ok = s.restrict(cover[j], a, x) == fam[j];
              if (ok) ++gluings;
            }
            record(a, cover, fam, gluings);
            return;
          }
          for (std::size_t v = 0; v < s.size(cover[i]); ++v) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
              ElementId m = l.meet(cover[i], cover[j]);
              if (m == l.zero()) continue;
              ok = s.restrict(m, cover[i], v) == s.restrict(m, cover[j], fam[j]);
            }
            if (!ok) continue;
            fam[i] = v;
            pick(i + 1);
          }
        };
        pick(0);
        return;
      }
      covers(k + 1);
      ElementId b = cand[k];
      bool comparable = std::any_of(cover.begin(), cover.end(),
                                    [&](ElementId c) { return l.leq(b, c) || l.leq(c, b); });
      if (!comparable) {
        cover.push_back(b);
        covers(k + 1);
        cover.pop_back();
      }
    };
    if (cand.size() > 24) throw ResourceError("sheaf check limited to 24 elements below " + l.name(a));
    covers(0);
  }
  rep.holds = rep.existence && rep.uniqueness;
  return rep;
}

// ---- example presheaves ---------------------------------------------------------

namespace {

std::string family_label(const SpectralFamily& e) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& b : e.breakpoints()) {
    if (!first) os << ",";
    os << "(" << b.lambda << "," << e.lattice().name(b.value) << ")";
    first = false;
  }
  os << "]";
  return os.str();
}

}  // namespace

FinitePresheaf spectral_presheaf(const LatticePtr& l, const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw InputError("spectral presheaf needs at least one lambda");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i - 1] < lambdas[i])) throw InputError("lambdas must be strictly increasing");
  FinitePresheaf s(l);
  std::vector<std::vector<SpectralFamily>> fams(l->size());
  std::vector<std::map<std::string, std::size_t>> index(l->size());
  s.set_values(l->zero(), {"[]"});
  for (ElementId a = 0; a < l->size(); ++a) {
    if (a == l->zero()) continue;
    std::vector<ElementId> seq(lambdas.size());
    seq.back() = a;
    std::vector<std::string> labels;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      // seq[k..] fixed, choose seq[k-1] <= seq[k]
      if (k == 0) {
        std::vector<Breakpoint> bps;
        for (std::size_t i = 0; i < seq.size(); ++i) bps.push_back({lambdas[i], seq[i]});
        SpectralFamily e(l, a, bps);
        index[a][family_label(e)] = labels.size();
        labels.push_back(family_label(e));
        fams[a].push_back(std::move(e));
        return;
      }
      for (ElementId b : l->down(seq[k]).members()) {
        seq[k - 1] = b;
        rec(k - 1);
      }
    };
    rec(lambdas.size() - 1);
    s.set_values(a, std::move(labels));
  }
  for (ElementId b = 0; b < l->size(); ++b) {
    l->down(b).for_each([&](ElementId a) {
      std::vector<std::size_t> map(s.size(b), 0);
      if (a != l->zero()) {
        for (std::size_t i = 0; i < map.size(); ++i) map[i] = index[a].at(family_label(fams[b][i].restrict(a)));
      }
      s.set_restriction(a, b, std::move(map));
    });
  }
  return s;
}

FinitePresheaf constant_presheaf(const LatticePtr& l, const std::vector<std::string>& values) {
  FinitePresheaf s(l);
  std::vector<std::size_t> id(values.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  for (ElementId b = 0; b < l->size(); ++b) {
    s.set_values(b, values);
    l->down(b).for_each([&](ElementId a) { s.set_restriction(a, b, id); });
  }
  return s;
}

FinitePresheaf function_presheaf(const FiniteTopSpace& space, const std::vector<std::string>& values) {
  if (values.empty()) throw InputError("function presheaf needs at least one value");
  auto l = space.open_set_lattice();
  auto us = space.opens();
  FinitePresheaf s(l);
  const std::size_t k = values.size();
  auto count = [&](PointSet u) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < u.size(); ++i) {
      c *= k;
      if (c > 100'000) throw ResourceError("function presheaf exceeds 100000 sections on " + space.format(u));
    }
    return c;
  };
  // section index: mixed radix over the members of U in increasing order
  auto digits = [&](PointSet u, std::size_t idx) {
    std::map<ElementId, std::size_t> f;
    for (auto x : u.members()) {
      f[x] = idx % k;
      idx /= k;
    }
    return f;
  };
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<std::string> labels;
    for (std::size_t idx = 0; idx < count(us[i]); ++idx) {
      std::string lab = "{";
      bool first = true;
      for (const auto& [x, v] : digits(us[i], idx)) {
        if (!first) lab += ",";
        lab += space.name(x) + ":" + values[v];
        first = false;
      }
      labels.push_back(lab + "}");
    }
    s.set_values(i, std::move(labels));
  }
  for (std::size_t b = 0; b < us.size(); ++b) {
    l->down(b).for_each([&](ElementId a) {
      std::vector<std::size_t> map(s.size(b));
      for (std::size_t idx = 0; idx < map.size(); ++idx) {
        auto f = digits(us[b], idx);
        std::size_t out = 0, mul = 1;
        for (auto x : us[a].members()) {
          out += f.at(x) * mul;
          mul *= k;
        }
        map[idx] = out;
      }
      s.set_restriction(a, b, std::move(map));
    });
  }
  return s;
}

// ---- stalks and sheafification ----------------------------------------------------

Stalk stalk(const FinitePresheaf& s, const StoneSpectrum& space, std::size_t quasipoint) {
  if (space.lattice_ptr() != s.lattice_ptr()) throw PreconditionError("stalk: presheaf and spectrum differ");
  const auto& qs = space.quasipoints();
  if (std::find(qs.begin(), qs.end(), quasipoint) == qs.end()) {
    throw PreconditionError("stalk: index is not a quasipoint");
  }
  Stalk st;
  st.atom = s.lattice().meet(space.ideal(quasipoint).members);
  st.germs = s.labels(st.atom);
  return st;
}

std::size_t germ(const FinitePresheaf& s, const Stalk& st, ElementId b, std::size_t i) {
  if (!s.lattice().leq(st.atom, b)) throw PreconditionError("germ: element not in the quasipoint");
  return s.restrict(st.atom, b, i);
}

Sheafification sheafify(const FinitePresheaf& s, std::size_t cap) {
  s.validate();
  auto space = StoneSpectrum(s.lattice_ptr());
  const auto& qs = space.quasipoints();
  const std::size_t m = qs.size();
  if (m == 0) throw PreconditionError("sheafify: lattice has no quasipoints");
  if (m > 6) throw ResourceError("sheafify is limited to 6 quasipoints");
  std::vector<Stalk> stalks;
  for (auto q : qs) stalks.push_back(stalk(s, space, q));

  auto bl = corpus::boolean(m);
  FinitePresheaf plus(bl);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  auto members = [&](std::uint64_t u) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < m; ++q)
      if ((u >> q) & 1U) out.push_back(q);
    return out;
  };
  auto sections = [&](std::uint64_t u) {
    std::size_t c = 1;
    for (auto q : members(u)) {
      c *= stalks[q].germs.size();
      if (c > cap) throw ResourceError("sheafify exceeds " + std::to_string(cap) + " sections");
    }
    return c;
  };
  auto tuple = [&](std::uint64_t u, std::size_t idx) {
    std::vector<std::size_t> t;
    for (auto q : members(u)) {
      std::size_t r = stalks[q].germs.size();
      t.push_back(r == 0 ? 0 : idx % r);
      if (r) idx /= r;
    }
    return t;
  };
  auto encode = [&](std::uint64_t u, const std::map<std::size_t, std::size_t>& g) {
    std::size_t out = 0, mul = 1;
    for (auto q : members(u)) {
      out += g.at(q) * mul;
      mul *= stalks[q].germs.size();
    }
    return out;
  };
  for (std::uint64_t u = 0; u <= full; ++u) {
    std::vector<std::string> labels;
    auto mem = members(u);
    for (std::size_t idx = 0; idx < sections(u); ++idx) {
      auto t = tuple(u, idx);
      std::string lab = "(";
      for (std::size_t j = 0; j < mem.size(); ++j) {
        if (j) lab += ";";
        lab += s.lattice().name(stalks[mem[j]].atom) + ":" + stalks[mem[j]].germs[t[j]];
      }
      labels.push_back(lab + ")");
    }
    plus.set_values(static_cast<ElementId>(u), std::move(labels));
  }
  for (std::uint64_t v = 0; v <= full; ++v) {
    for (std::uint64_t u = 0; u <= full; ++u) {
      if ((u & ~v) != 0) continue;
      std::vector<std::size_t> map(plus.size(v));
      auto mv = members(v);
      for (std::size_t idx = 0; idx < map.size(); ++idx) {
        auto t = tuple(v, idx);
        std::map<std::size_t, std::size_t> g;
        for (std::size_t j = 0; j < mv.size(); ++j) g[mv[j]] = t[j];
        map[idx] = encode(u, g);
      }
      plus.set_restriction(static_cast<ElementId>(u), static_cast<ElementId>(v), std::move(map));
    }
  }

  Sheafification out{std::move(plus), stalks, {}, {}};
  const auto& l = s.lattice();
  for (ElementId a = 0; a < l.size(); ++a) {
    std::uint64_t u = 0;
    for (std::size_t q = 0; q < m; ++q)
      if (l.leq(stalks[q].atom, a)) u |= std::uint64_t{1} << q;
    out.basis.push_back(u);
    std::vector<std::size_t> can(s.size(a));
    for (std::size_t i = 0; i < can.size(); ++i) {
      std::map<std::size_t, std::size_t> g;
      for (auto q : members(u)) g[q] = germ(s, stalks[q], a, i);
      can[i] = encode(u, g);
    }
    out.canonical.push_back(std::move(can));
  }
  return out;
}

}  // namespace obsfn
