#pragma once

#include <string>
#include <vector>

#include "obsfn/lattice.hpp"

namespace obsfn::corpus {

/// Powerset of {1..n}, ordered by inclusion, complement as ortho.
/// Elements are named "0", "1" (full set) and "{i,j,...}" otherwise.
LatticePtr boolean(std::size_t n);

/// 0 < m1 < ... < 1 with n elements in total; the 3-chain names its middle "m".
LatticePtr chain(std::size_t n);

/// The horizontal sum of n four-element Boolean blocks: 0, a, a', b, b', ..., 1.
LatticePtr mo(std::size_t n);

/// The benzene ring: 0 < a < b < 1, 0 < b' < a' < 1; ortholattice, not orthomodular.
LatticePtr o6();

struct Entry {
  std::string name;
  LatticePtr lattice;
};

/// The standard corpus: 2^1..2^4, chains of 2..6 elements, MO2, MO3, O6,
/// MO2 x 2 and 2^2 x chain3.
std::vector<Entry> standard();

/// The entries above that carry an orthocomplement.
std::vector<Entry> ortholattices();

}  // namespace obsfn::corpus
