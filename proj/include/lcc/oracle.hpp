#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lcc/cube.hpp"
#include "lcc/groups.hpp"
#include "lcc/poly.hpp"

namespace lcc::oracle {

/// Query-counted access to a function {0,1}^n -> G. This is the trust
/// boundary every decoder sees: one query() call increments the counter by
/// exactly one, and counting stays accurate under concurrent queries.
///
/// An oracle may carry an optional raw lane returning cyclic residues as
/// u64 without allocating; query_u64 counts exactly like query.
class FunctionOracle {
public:
    using Fn = std::function<groups::GroupValue(const CubePoint&)>;
    using RawFn = std::function<std::uint64_t(const CubePoint&)>;

    FunctionOracle(std::uint32_t n, groups::GroupSpecPtr spec, Fn fn,
                   std::string source, RawFn raw = nullptr)
        : n_(n), spec_(std::move(spec)), fn_(std::move(fn)),
          raw_(std::move(raw)), source_(std::move(source)) {}

    std::uint32_t dim() const { return n_; }
    const groups::GroupSpecPtr& spec() const { return spec_; }
    const std::string& source() const { return source_; }

    groups::GroupValue query(const CubePoint& x) const {
        check_dim(x);
        count_.fetch_add(1, std::memory_order_relaxed);
        return fn_(x);
    }

    bool has_raw_lane() const { return static_cast<bool>(raw_); }

    /// Counted query returning the cyclic residue directly.
    std::uint64_t query_u64(const CubePoint& x) const {
        check_dim(x);
        count_.fetch_add(1, std::memory_order_relaxed);
        if (raw_) return raw_(x);
        return groups::residue_u64(fn_(x));
    }

    std::uint64_t query_count() const { return count_.load(std::memory_order_relaxed); }

private:
    void check_dim(const CubePoint& x) const {
        if (x.size() != n_)
            throw std::invalid_argument("oracle query: dimension mismatch");
    }

    std::uint32_t n_;
    groups::GroupSpecPtr spec_;
    Fn fn_;
    RawFn raw_;
    std::string source_;
    mutable std::atomic<std::uint64_t> count_{0};
};

using OraclePtr = std::shared_ptr<FunctionOracle>;

/// How corrupted outputs are produced at error points.
enum class ErrorValueModel {
    fixed_offset,   // clean value plus a fixed nonzero offset
    random_nonzero, // clean value plus a per-point pseudorandom nonzero element
};

/// Where the oracle disagrees with the clean polynomial.
///
/// planted-set mode lists the error points explicitly, so the distance to
/// the clean polynomial is exactly |points| / 2^n. iid-rate mode corrupts
/// each point independently with probability `rate` via a seeded PRF, for
/// dimensions too large to enumerate.
struct CorruptionSpec {
    enum class Mode { planted_set, iid_rate };

    Mode mode = Mode::planted_set;
    std::vector<CubePoint> points; // planted_set
    mpq_class rate = 0;            // iid_rate, in [0, 1]
    ErrorValueModel value_model = ErrorValueModel::fixed_offset;
    std::optional<groups::GroupValue> offset; // defaults to canonical nonzero

    static CorruptionSpec none() { return CorruptionSpec{}; }
    static CorruptionSpec planted(std::vector<CubePoint> pts,
                                  ErrorValueModel vm = ErrorValueModel::fixed_offset);
    static CorruptionSpec iid(const mpq_class& rate,
                              ErrorValueModel vm = ErrorValueModel::fixed_offset);
};

/// Oracle agreeing with P off the corruption's error set; reproducible from
/// the seed. Planted points must lie in {0,1}^n; a rate above 1 is an error.
OraclePtr make_corrupted_oracle(const poly::MultilinearPoly& p,
                                const CorruptionSpec& corruption,
                                std::uint64_t seed);

OraclePtr make_poly_oracle(const poly::MultilinearPoly& p);

OraclePtr make_table_oracle(std::uint32_t n, groups::GroupSpecPtr spec,
                            std::vector<groups::GroupValue> table);

/// Wraps a closure (for decoder-backed virtual oracles). Inner query counts
/// accumulate in the inner oracle automatically since the closure holds it.
OraclePtr make_virtual_oracle(std::uint32_t n, groups::GroupSpecPtr spec,
                              FunctionOracle::Fn fn, std::string source);

/// Reads the oracle's full truth table (n <= 26); 2^n counted queries.
std::vector<groups::GroupValue> read_table(const FunctionOracle& f);

/// f(x) = p1(x) when x_{split+1} = 0, p2(x) otherwise. Used for stitched
/// list-decoding instances where two polynomials are simultaneously close.
OraclePtr make_stitched_oracle(const poly::MultilinearPoly& p1,
                               const poly::MultilinearPoly& p2,
                               std::uint32_t split_coord);

/// Adversarial planted error sets for stress tests.
/// Ball: the `count` points nearest to `center` in Hamming distance.
std::vector<CubePoint> cluster_error_points(std::uint32_t n, const CubePoint& center,
                                            std::uint64_t count);
/// All points of a low-dimensional embedded subcube.
std::vector<CubePoint> subcube_error_points(const subcube::SubcubeEmbedding& c);

/// Instance files: polynomial + corruption spec + seed, JSON, round-trippable.
struct Instance {
    poly::MultilinearPoly clean;
    CorruptionSpec corruption;
    std::uint64_t seed = 0;

    OraclePtr make_oracle() const { return make_corrupted_oracle(clean, corruption, seed); }
};

std::string write_instance(const Instance& inst);
Instance read_instance(const std::string& json_text);
void write_instance_file(const std::string& path, const Instance& inst);
Instance read_instance_file(const std::string& path);

} // namespace lcc::oracle
