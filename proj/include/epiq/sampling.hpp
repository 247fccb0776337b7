#pragma once

#include <utility>
#include <vector>

#include "epiq/born.hpp"
#include "epiq/density.hpp"
#include "epiq/linalg.hpp"
#include "epiq/rng.hpp"

namespace epiq {

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
CMatrix random_unitary(std::size_t d, Rng& rng);

/// Unit vector uniform on the complex sphere.
CVector random_unit_vector(std::size_t d, Rng& rng);

/// Full-rank state U diag(p) U^dagger with p uniform on the simplex.
DensityMatrix random_density_matrix(std::size_t d, Rng& rng);

/// Effect over a Haar-random basis with weights uniform in [0, 1].
Effect random_effect(std::size_t d, Rng& rng);

/// Two decompositions of one effect: weights repeat on the first two basis
/// vectors, and the second decomposition mixes those two vectors by a random
/// 2x2 unitary. Requires d >= 2.
std::pair<Effect, Effect> degenerate_effect_pair(std::size_t d, Rng& rng);

/// Effects over `bases` Haar-random bases, each with random weights; together
/// they span the Hermitian matrices with probability one once bases >= d + 1.
std::vector<Effect> random_effect_sample(std::size_t d, std::size_t bases, Rng& rng);

} // namespace epiq
