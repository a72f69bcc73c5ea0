#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "lcc/rng.hpp"

namespace lcc::groups {

class GroupSpec;
using GroupSpecPtr = std::shared_ptr<const GroupSpec>;

/// Description of a concrete Abelian group. Instances are immutable and
/// shared; values hold a pointer to their spec.
///
/// Supported kinds: the integers Z, the rationals Q, cyclic groups Z%m
/// (m >= 2), and finite products of these. Text form: "Z", "Q", "Z%4",
/// "Z%2 x Z%3".
class GroupSpec {
public:
    enum class Kind { integers, rationals, cyclic, product };

    static GroupSpecPtr integers();
    static GroupSpecPtr rationals();
    static GroupSpecPtr cyclic(const mpz_class& modulus);
    static GroupSpecPtr product(std::vector<GroupSpecPtr> factors);

    Kind kind() const { return kind_; }
    const mpz_class& modulus() const { return modulus_; }
    const std::vector<GroupSpecPtr>& factors() const { return factors_; }

    /// True when every element has finite order.
    bool torsion() const;

    /// Least common multiple of element orders; absent for Z and Q.
    std::optional<mpz_class> exponent() const;

    /// Number of elements for finite groups; absent otherwise.
    std::optional<mpz_class> order() const;

    bool same(const GroupSpec& other) const;

    std::string to_string() const;
    static GroupSpecPtr parse(const std::string& text);

private:
    explicit GroupSpec(Kind k) : kind_(k) {}

    Kind kind_;
    mpz_class modulus_;
    std::vector<GroupSpecPtr> factors_;
};

/// An element of a concrete Abelian group, stored exactly.
///
/// Cyclic residues are kept reduced into [0, m). Equality is exact; there
/// is no floating point anywhere in the representation.
class GroupValue {
public:
    GroupValue() = default;

    static GroupValue zero(const GroupSpecPtr& spec);
    static GroupValue from_integer(const GroupSpecPtr& spec, const mpz_class& v);
    static GroupValue rational(const mpq_class& v);
    static GroupValue tuple(const GroupSpecPtr& spec, std::vector<GroupValue> parts);

    const GroupSpecPtr& spec() const { return spec_; }
    bool is_zero() const;

    const mpz_class& integer_payload() const { return std::get<mpz_class>(payload_); }
    const mpq_class& rational_payload() const { return std::get<mpq_class>(payload_); }
    const std::vector<GroupValue>& parts() const {
        return std::get<std::vector<GroupValue>>(payload_);
    }

    std::string to_string() const;
    static GroupValue parse(const GroupSpecPtr& spec, const std::string& text);

    /// In-place this += other (or -= when subtract); avoids reallocation on
    /// hot accumulation loops. Spec mismatch is an error.
    void accumulate(const GroupValue& other, bool subtract = false);

    friend GroupValue operator+(const GroupValue& a, const GroupValue& b);
    friend GroupValue operator-(const GroupValue& a, const GroupValue& b);
    friend GroupValue operator-(const GroupValue& a);
    friend bool operator==(const GroupValue& a, const GroupValue& b);
    friend bool operator!=(const GroupValue& a, const GroupValue& b) { return !(a == b); }

private:
    GroupSpecPtr spec_;
    std::variant<mpz_class, mpq_class, std::vector<GroupValue>> payload_;

    friend GroupValue int_scale(const mpz_class& n, const GroupValue& g);
    friend std::optional<mpz_class> element_order(const GroupValue& g);
    friend int canonical_compare(const GroupValue& a, const GroupValue& b);
    friend std::uint64_t residue_u64(const GroupValue& g);
};

/// n-fold group sum of g (negated repetition for n < 0).
GroupValue int_scale(const mpz_class& n, const GroupValue& g);

/// Least n >= 1 with n*g = 0, or absent for elements of infinite order.
std::optional<mpz_class> element_order(const GroupValue& g);

/// Deterministic total order on values of one group, consistent with the
/// serialized form; used for plurality tie-breaking and canonical sorting.
int canonical_compare(const GroupValue& a, const GroupValue& b);
inline bool canonical_less(const GroupValue& a, const GroupValue& b) {
    return canonical_compare(a, b) < 0;
}

/// Residue of a cyclic value as u64 (modulus must fit). Fast-path helper.
std::uint64_t residue_u64(const GroupValue& g);

/// Uniform element of a finite group. For Z the value is drawn from a small
/// symmetric integer range, for Q from small fractions; both documented
/// stand-ins since no uniform distribution exists on infinite groups.
GroupValue random_element(const GroupSpecPtr& spec, SplitRng& rng);
GroupValue random_nonzero(const GroupSpecPtr& spec, SplitRng& rng);

/// Canonical nonzero element (1 in Z, Q, Z%m; first-coordinate 1 in products).
GroupValue canonical_nonzero(const GroupSpecPtr& spec);

} // namespace lcc::groups
