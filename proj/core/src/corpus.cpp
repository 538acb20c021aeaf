#include "obsfn/corpus.hpp"

#include "obsfn/error.hpp"

namespace obsfn::corpus {

LatticePtr boolean(std::size_t n) {
  if (n == 0 || n > 6) throw InputError("boolean(n) needs 1 <= n <= 6");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::string> names(size);
  for (std::size_t s = 0; s < size; ++s) {
    if (s == 0) {
      names[s] = "0";
    } else if (s == size - 1) {
      names[s] = "1";
    } else {
      std::string txt = "{";
      for (std::size_t i = 0; i < n; ++i) {
        if ((s >> i) & 1U) {
          if (txt.size() > 1) txt += ",";
          txt += std::to_string(i + 1);
        }
      }
      names[s] = txt + "}";
    }
  }
  std::vector<std::pair<ElementId, ElementId>> order;
  std::vector<std::pair<ElementId, ElementId>> ortho;
  for (std::size_t s = 0; s < size; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      if (((s >> i) & 1U) == 0) order.emplace_back(s, s | (std::size_t{1} << i));
    }
    ortho.emplace_back(s, (size - 1) ^ s);
  }
  return Lattice::from_order(std::move(names), order, ortho);
}

LatticePtr chain(std::size_t n) {
  if (n < 2) throw InputError("chain(n) needs n >= 2");
  std::vector<std::string> names{"0"};
  for (std::size_t i = 1; i + 1 < n; ++i) names.push_back(n == 3 ? "m" : "m" + std::to_string(i));
  names.push_back("1");
  std::vector<std::pair<ElementId, ElementId>> order;
  for (std::size_t i = 0; i + 1 < n; ++i) order.emplace_back(i, i + 1);
  std::vector<std::pair<ElementId, ElementId>> ortho;
  if (n == 2) ortho.emplace_back(0, 1);
  return Lattice::from_order(std::move(names), order, ortho);
}

LatticePtr mo(std::size_t n) {
  if (n == 0 || n > 26) throw InputError("mo(n) needs 1 <= n <= 26");
  std::vector<std::string> names{"0"};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string atom(1, static_cast<char>('a' + i));
    names.push_back(atom);
    names.push_back(atom + "'");
  }
  names.push_back("1");
  const ElementId top = names.size() - 1;
  std::vector<std::pair<ElementId, ElementId>> order;
  std::vector<std::pair<ElementId, ElementId>> ortho;
  for (ElementId e = 1; e < top; ++e) {
    order.emplace_back(0, e);
    order.emplace_back(e, top);
  }
  for (std::size_t i = 0; i < n; ++i) ortho.emplace_back(1 + 2 * i, 2 + 2 * i);
  return Lattice::from_order(std::move(names), order, ortho);
}

LatticePtr o6() {
  return Lattice::from_named_order({"0", "a", "b", "b'", "a'", "1"},
                                   {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "b'"}, {"b'", "a'"}, {"a'", "1"}},
                                   {{"a", "a'"}, {"b", "b'"}});
}

std::vector<Entry> standard() {
  std::vector<Entry> out;
  for (std::size_t n = 1; n <= 4; ++n) out.push_back({"2^" + std::to_string(n), boolean(n)});
  for (std::size_t n = 2; n <= 6; ++n) out.push_back({"chain" + std::to_string(n), chain(n)});
  out.push_back({"MO2", mo(2)});
  out.push_back({"MO3", mo(3)});
  out.push_back({"O6", o6()});
  out.push_back({"MO2x2", product(*mo(2), *boolean(1))});
  out.push_back({"2^2xchain3", product(*boolean(2), *chain(3))});
  return out;
}

std::vector<Entry> ortholattices() {
  std::vector<Entry> out;
  for (auto& e : standard()) {
    if (e.lattice->has_ortho()) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace obsfn::corpus
