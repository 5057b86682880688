#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hclab/dynamics.hpp"
#include "hclab/eigenfields.hpp"
#include "hclab/polyspec.hpp"
#include "hclab/recurrence.hpp"
#include "hclab/reduction.hpp"

namespace hclab {

using Json = nlohmann::ordered_json;

// Polynomials: JSON array of [re, im] pairs, lowest degree first.
Json poly_to_json(const ComplexPoly& p);
ComplexPoly poly_from_json(const Json& j);

// Block matrices: envelope {n, d, form, blocks} with blocks a row-major
// n x n array of d x d arrays of [re, im] pairs.
Json block_matrix_to_json(const BlockOperatorMatrix& m);
BlockOperatorMatrix block_matrix_from_json(const Json& j);

// Subspace bases: {nd, rank, columns}, one [re, im]-pair array per column.
Json basis_to_json(const SubspaceBasis& basis);

// Eigenfunction samples: CSV with columns x, re, im.
void write_eigenfunction_csv(std::ostream& os, const RealVec& x, const Vec& f);

// Trajectories: CSV with column t then interleaved re/im per component,
// plus a JSON metadata sidecar {form, n, d, dt, t_max}.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Json trajectory_meta(const Trajectory& traj);

// Density curves: CSV with columns t, ratio.
void write_density_csv(std::ostream& os, const DensityEstimate& est);

Json density_to_json(const DensityEstimate& est);

// Harness reports: {target, mode, densityProxy, nearestApproach, horizon,
// seed} plus the surrogate disclaimer.
Json harness_report_to_json(const HarnessReport& rep, const TargetSpec& target,
                            std::uint64_t seed);

std::string format_double(double v);

}  // namespace hclab
