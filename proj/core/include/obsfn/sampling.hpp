#pragma once

#include <random>

#include "obsfn/matrix.hpp"
#include "obsfn/spectral_family.hpp"

namespace obsfn {

/// Random family on [0, top]: a random strictly increasing chain ending at
/// `top`, with lambdas drawn from the half-integers in [-10, 10].
SpectralFamily random_family(const LatticePtr& l, ElementId top, std::mt19937_64& rng);
SpectralFamily random_family(const LatticePtr& l, std::mt19937_64& rng);

/// Entries with real and imaginary parts uniform in [-1, 1], made Hermitian.
CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng);
/// Haar-ish unitary from Gram-Schmidt on a random complex matrix.
CMatrix random_unitary(std::size_t n, std::mt19937_64& rng);
/// Projection of the given rank onto a random subspace.
CMatrix random_projection(std::size_t n, std::size_t rank, std::mt19937_64& rng);

}  // namespace obsfn
