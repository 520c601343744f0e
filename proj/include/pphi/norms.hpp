#pragma once

#include <vector>

#include "pphi/field.hpp"

namespace pphi {

/// Smooth dyadic partition of unity on the dual set, blocks j = -1 .. j_max.
/// Bumps are built from a C-infinity compactly supported profile, radially in
/// the max-norm |k|_inf = 2*pi*max(|k1|,|k2|); the top block is defined by
/// complementation so the partition sums to 1 exactly.
struct DyadicPartition {
    LatticeGeometry geom;
    int j_max = -1;                            // blocks run j = -1 .. j_max
    std::vector<std::vector<double>> blocks;   // blocks[j+1], storage layout

    explicit DyadicPartition(const LatticeGeometry& g);

    const std::vector<double>& block(int j) const;
};

/// Normalized-measure L^p norm (eps^2 sum |f|^p)^(1/p); max |f| for p = inf.
double lp_norm(const RealField& f, double p);

/// Discrete Sobolev norm with continuum weights:
/// sqrt( sum_k (1+|k|^2)^alpha |f_hat(k)|^2 ).
double sobolev_norm(const RealField& f, double alpha);

/// Littlewood-Paley projector Delta_j f (spectral multiplication by block j).
RealField lp_block(const RealField& f, int j, const DyadicPartition& partition);

/// Besov norm [ sum_j (2^(alpha j) ||Delta_j f||_p)^q ]^(1/q), ell-inf outer
/// norm for q = inf. B^alpha_{inf,inf} realizes the Hoelder-scale C^alpha norm.
double besov_norm(const RealField& f, double p, double q, double alpha,
                  const DyadicPartition& partition);

/// C^alpha norm of the trigonometric extension, approximated on a grid
/// refined by the given factor: sup-seminorm over refined grid pairs with the
/// torus metric, plus the L^inf part. O((refine*n)^4) pairs.
double holder_norm(const RealField& f, double alpha, int refine = 8);

}  // namespace pphi
