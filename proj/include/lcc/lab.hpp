#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lcc/groups.hpp"
#include "lcc/rng.hpp"

namespace lcc::lab {

/// Reproducible experiment record: a pure function of (name, parameters,
/// seed). Serialized as JSON and as a flat CSV table.
struct ExperimentReport {
    std::string name;
    std::string parameters_json; // resolved parameters, ordered keys
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> notes; // scalar stats
    bool pass = false;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Eigenvalue beta_s of the Johnson-style graph J(2k,k,d) on the middle
/// slice (vertices adjacent at Hamming distance 2d), exact:
/// beta_s = sum_r (-1)^(s-r) C(s,r) C(k-r,k-d-r) C(k-s+r,d-s+r).
mpz_class johnson_eigenvalue(std::uint32_t k, std::uint32_t d, std::uint32_t s);

/// Multiplicity of beta_s: C(2k,s) - C(2k,s-1).
mpz_class johnson_multiplicity(std::uint32_t two_k, std::uint32_t s);

/// Compares the closed-form spectrum (with multiplicities) against the
/// numerically diagonalized adjacency matrix of the explicitly built graph.
/// Max absolute deviation across the sorted spectra must stay below tol.
struct SpectrumCheck {
    bool pass = false;
    double max_deviation = 0.0;
    std::vector<std::pair<mpz_class, mpz_class>> formula; // (beta_s, multiplicity)
};
SpectrumCheck johnson_spectrum_check(std::uint32_t two_k, std::uint32_t d,
                                     double tol = 1e-9);

/// Density of random middle-slice sets under random 2-to-1 coordinate
/// pairings: mean absolute deviation per k, expected to decrease along the
/// grid. Also measures the structured set {x : x_1 != x_2}, whose
/// intersection with the pairing cube is empty with probability ~ 1/(2k-1).
ExperimentReport slice_sampling_experiment(const std::vector<std::uint32_t>& k_grid,
                                           const mpq_class& density,
                                           std::uint32_t trials, std::uint64_t seed);

/// Empirical Pr[Q(x) != 0] for sparsity-s degree-d polynomials over Z;
/// passes when the measured probability clears 1/2^(d-1) - slack/sqrt(s)
/// on every grid point.
ExperimentReport anticoncentration_experiment(std::uint32_t d,
                                              const std::vector<std::uint32_t>& s_grid,
                                              std::uint32_t trials, double slack,
                                              std::uint64_t seed);

/// Frequency of >= (1 - 1/2^d + eta) * t simultaneous vanishings among t
/// disjoint-leading-monomial polynomials over Z_p; passes when the
/// frequency is strictly decreasing along the t grid.
ExperimentReport tail_bound_experiment(std::uint32_t d,
                                       const std::vector<std::uint32_t>& t_grid,
                                       double eta, std::uint32_t trials,
                                       unsigned long prime, std::uint64_t seed);

/// Maximum observed list sizes at each epsilon by full enumeration on a
/// small cube, over random tables plus stitched and majority-style
/// adversarial functions. Passes when every list stays within list_cap.
ExperimentReport list_size_experiment(std::uint32_t n, std::uint32_t d,
                                      const groups::GroupSpecPtr& spec,
                                      const std::vector<mpq_class>& eps_grid,
                                      std::uint32_t random_tables,
                                      std::uint32_t list_cap, std::uint64_t seed);

} // namespace lcc::lab
