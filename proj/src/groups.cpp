#include "lcc/groups.hpp"

#include <sstream>
#include <stdexcept>

#include "lcc/util.hpp"

namespace lcc::groups {

namespace {

void require_same_spec(const GroupValue& a, const GroupValue& b) {
    if (!a.spec() || !b.spec() || !a.spec()->same(*b.spec()))
        throw std::invalid_argument("group spec mismatch");
}

mpz_class reduce_mod(const mpz_class& v, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

GroupSpecPtr GroupSpec::integers() {
    static GroupSpecPtr inst(new GroupSpec(Kind::integers));
    return inst;
}

GroupSpecPtr GroupSpec::rationals() {
    static GroupSpecPtr inst(new GroupSpec(Kind::rationals));
    return inst;
}

GroupSpecPtr GroupSpec::cyclic(const mpz_class& modulus) {
    if (modulus < 2) throw std::invalid_argument("cyclic group needs modulus >= 2");
    auto s = new GroupSpec(Kind::cyclic);
    s->modulus_ = modulus;
    return GroupSpecPtr(s);
}

GroupSpecPtr GroupSpec::product(std::vector<GroupSpecPtr> factors) {
    if (factors.empty()) throw std::invalid_argument("product group needs factors");
    auto s = new GroupSpec(Kind::product);
    s->factors_ = std::move(factors);
    return GroupSpecPtr(s);
}

bool GroupSpec::torsion() const {
    switch (kind_) {
        case Kind::integers:
        case Kind::rationals: return false;
        case Kind::cyclic: return true;
        case Kind::product:
            for (const auto& f : factors_)
                if (!f->torsion()) return false;
            return true;
    }
    return false;
}

std::optional<mpz_class> GroupSpec::exponent() const {
    switch (kind_) {
        case Kind::integers:
        case Kind::rationals: return std::nullopt;
        case Kind::cyclic: return modulus_;
        case Kind::product: {
            mpz_class e = 1;
            for (const auto& f : factors_) {
                auto fe = f->exponent();
                if (!fe) return std::nullopt;
                mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), fe->get_mpz_t());
            }
            return e;
        }
    }
    return std::nullopt;
}

std::optional<mpz_class> GroupSpec::order() const {
    switch (kind_) {
        case Kind::integers:
        case Kind::rationals: return std::nullopt;
        case Kind::cyclic: return modulus_;
        case Kind::product: {
            mpz_class o = 1;
            for (const auto& f : factors_) {
                auto fo = f->order();
                if (!fo) return std::nullopt;
                o *= *fo;
            }
            return o;
        }
    }
    return std::nullopt;
}

bool GroupSpec::same(const GroupSpec& other) const {
    if (this == &other) return true;
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::integers:
        case Kind::rationals: return true;
        case Kind::cyclic: return modulus_ == other.modulus_;
        case Kind::product: {
            if (factors_.size() != other.factors_.size()) return false;
            for (std::size_t i = 0; i < factors_.size(); ++i)
                if (!factors_[i]->same(*other.factors_[i])) return false;
            return true;
        }
    }
    return false;
}

std::string GroupSpec::to_string() const {
    switch (kind_) {
        case Kind::integers: return "Z";
        case Kind::rationals: return "Q";
        case Kind::cyclic: return "Z%" + modulus_.get_str();
        case Kind::product: {
            std::string out;
            for (std::size_t i = 0; i < factors_.size(); ++i) {
                if (i) out += " x ";
                out += factors_[i]->to_string();
            }
            return out;
        }
    }
    return "";
}

GroupSpecPtr GroupSpec::parse(const std::string& text) {
    // Split on 'x' separators first; each factor is Z, Q or Z%m.
    std::vector<GroupSpecPtr> factors;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nxt = text.find('x', pos);
        std::string part = strip(nxt == std::string::npos ? text.substr(pos)
                                                          : text.substr(pos, nxt - pos));
        if (part.empty()) throw std::invalid_argument("bad group spec: " + text);
        if (part == "Z") {
            factors.push_back(integers());
        } else if (part == "Q") {
            factors.push_back(rationals());
        } else if (part.rfind("Z%", 0) == 0) {
            mpz_class m;
            if (m.set_str(part.substr(2), 10) != 0 || m < 2)
                throw std::invalid_argument("bad cyclic modulus in: " + text);
            factors.push_back(cyclic(m));
        } else {
            throw std::invalid_argument("bad group spec: " + text);
        }
        if (nxt == std::string::npos) break;
        pos = nxt + 1;
    }
    if (factors.empty()) throw std::invalid_argument("empty group spec");
    if (factors.size() == 1) return factors[0];
    return product(std::move(factors));
}

GroupValue GroupValue::zero(const GroupSpecPtr& spec) {
    GroupValue v;
    v.spec_ = spec;
    switch (spec->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic: v.payload_ = mpz_class(0); break;
        case GroupSpec::Kind::rationals: v.payload_ = mpq_class(0); break;
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(spec->factors().size());
            for (const auto& f : spec->factors()) parts.push_back(zero(f));
            v.payload_ = std::move(parts);
            break;
        }
    }
    return v;
}

GroupValue GroupValue::from_integer(const GroupSpecPtr& spec, const mpz_class& n) {
    GroupValue v;
    v.spec_ = spec;
    switch (spec->kind()) {
        case GroupSpec::Kind::integers: v.payload_ = n; break;
        case GroupSpec::Kind::cyclic: v.payload_ = reduce_mod(n, spec->modulus()); break;
        case GroupSpec::Kind::rationals: v.payload_ = mpq_class(n); break;
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(spec->factors().size());
            for (const auto& f : spec->factors()) parts.push_back(from_integer(f, n));
            v.payload_ = std::move(parts);
            break;
        }
    }
    return v;
}

GroupValue GroupValue::rational(const mpq_class& q) {
    GroupValue v;
    v.spec_ = GroupSpec::rationals();
    mpq_class c = q;
    c.canonicalize();
    v.payload_ = c;
    return v;
}

GroupValue GroupValue::tuple(const GroupSpecPtr& spec, std::vector<GroupValue> parts) {
    if (spec->kind() != GroupSpec::Kind::product ||
        parts.size() != spec->factors().size())
        throw std::invalid_argument("tuple: spec/parts mismatch");
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!parts[i].spec()->same(*spec->factors()[i]))
            throw std::invalid_argument("tuple: component spec mismatch");
    GroupValue v;
    v.spec_ = spec;
    v.payload_ = std::move(parts);
    return v;
}

bool GroupValue::is_zero() const {
    switch (spec_->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic: return integer_payload() == 0;
        case GroupSpec::Kind::rationals: return rational_payload() == 0;
        case GroupSpec::Kind::product:
            for (const auto& p : parts())
                if (!p.is_zero()) return false;
            return true;
    }
    return false;
}

void GroupValue::accumulate(const GroupValue& other, bool subtract) {
    require_same_spec(*this, other);
    switch (spec_->kind()) {
        case GroupSpec::Kind::integers: {
            mpz_class& z = std::get<mpz_class>(payload_);
            if (subtract) z -= other.integer_payload();
            else z += other.integer_payload();
            break;
        }
        case GroupSpec::Kind::cyclic: {
            mpz_class& z = std::get<mpz_class>(payload_);
            if (subtract) z -= other.integer_payload();
            else z += other.integer_payload();
            mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), spec_->modulus().get_mpz_t());
            break;
        }
        case GroupSpec::Kind::rationals: {
            mpq_class& q = std::get<mpq_class>(payload_);
            if (subtract) q -= other.rational_payload();
            else q += other.rational_payload();
            break;
        }
        case GroupSpec::Kind::product: {
            auto& mine = std::get<std::vector<GroupValue>>(payload_);
            for (std::size_t i = 0; i < mine.size(); ++i)
                mine[i].accumulate(other.parts()[i], subtract);
            break;
        }
    }
}

GroupValue operator+(const GroupValue& a, const GroupValue& b) {
    require_same_spec(a, b);
    GroupValue v;
    v.spec_ = a.spec_;
    switch (a.spec_->kind()) {
        case GroupSpec::Kind::integers:
            v.payload_ = mpz_class(a.integer_payload() + b.integer_payload());
            break;
        case GroupSpec::Kind::cyclic:
            v.payload_ = reduce_mod(a.integer_payload() + b.integer_payload(),
                                    a.spec_->modulus());
            break;
        case GroupSpec::Kind::rationals:
            v.payload_ = mpq_class(a.rational_payload() + b.rational_payload());
            break;
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(a.parts().size());
            for (std::size_t i = 0; i < a.parts().size(); ++i)
                parts.push_back(a.parts()[i] + b.parts()[i]);
            v.payload_ = std::move(parts);
            break;
        }
    }
    return v;
}

GroupValue operator-(const GroupValue& a) {
    GroupValue v;
    v.spec_ = a.spec_;
    switch (a.spec_->kind()) {
        case GroupSpec::Kind::integers:
            v.payload_ = mpz_class(-a.integer_payload());
            break;
        case GroupSpec::Kind::cyclic:
            v.payload_ = reduce_mod(-a.integer_payload(), a.spec_->modulus());
            break;
        case GroupSpec::Kind::rationals:
            v.payload_ = mpq_class(-a.rational_payload());
            break;
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(a.parts().size());
            for (const auto& p : a.parts()) parts.push_back(-p);
            v.payload_ = std::move(parts);
            break;
        }
    }
    return v;
}

GroupValue operator-(const GroupValue& a, const GroupValue& b) { return a + (-b); }

bool operator==(const GroupValue& a, const GroupValue& b) {
    require_same_spec(a, b);
    switch (a.spec_->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic: return a.integer_payload() == b.integer_payload();
        case GroupSpec::Kind::rationals: return a.rational_payload() == b.rational_payload();
        case GroupSpec::Kind::product: {
            for (std::size_t i = 0; i < a.parts().size(); ++i)
                if (!(a.parts()[i] == b.parts()[i])) return false;
            return true;
        }
    }
    return false;
}

GroupValue int_scale(const mpz_class& n, const GroupValue& g) {
    // Direct multiplication per kind; meets the O(log|n|) group-operation
    // budget with room to spare.
    GroupValue v;
    v.spec_ = g.spec_;
    switch (g.spec_->kind()) {
        case GroupSpec::Kind::integers:
            v.payload_ = mpz_class(n * g.integer_payload());
            break;
        case GroupSpec::Kind::cyclic:
            v.payload_ = reduce_mod(n * g.integer_payload(), g.spec_->modulus());
            break;
        case GroupSpec::Kind::rationals:
            v.payload_ = mpq_class(mpq_class(n) * g.rational_payload());
            break;
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(g.parts().size());
            for (const auto& p : g.parts()) parts.push_back(int_scale(n, p));
            v.payload_ = std::move(parts);
            break;
        }
    }
    return v;
}

std::optional<mpz_class> element_order(const GroupValue& g) {
    switch (g.spec_->kind()) {
        case GroupSpec::Kind::integers:
            if (g.integer_payload() == 0) return mpz_class(1);
            return std::nullopt;
        case GroupSpec::Kind::rationals:
            if (g.rational_payload() == 0) return mpz_class(1);
            return std::nullopt;
        case GroupSpec::Kind::cyclic: {
            mpz_class gcd;
            mpz_gcd(gcd.get_mpz_t(), g.integer_payload().get_mpz_t(),
                    g.spec_->modulus().get_mpz_t());
            return mpz_class(g.spec_->modulus() / gcd);
        }
        case GroupSpec::Kind::product: {
            mpz_class ord = 1;
            for (const auto& p : g.parts()) {
                auto po = element_order(p);
                if (!po) return std::nullopt;
                mpz_lcm(ord.get_mpz_t(), ord.get_mpz_t(), po->get_mpz_t());
            }
            return ord;
        }
    }
    return std::nullopt;
}

int canonical_compare(const GroupValue& a, const GroupValue& b) {
    require_same_spec(a, b);
    switch (a.spec_->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic:
            return mpz_cmp(a.integer_payload().get_mpz_t(), b.integer_payload().get_mpz_t());
        case GroupSpec::Kind::rationals:
            return mpq_cmp(a.rational_payload().get_mpq_t(), b.rational_payload().get_mpq_t());
        case GroupSpec::Kind::product: {
            for (std::size_t i = 0; i < a.parts().size(); ++i) {
                int c = canonical_compare(a.parts()[i], b.parts()[i]);
                if (c) return c;
            }
            return 0;
        }
    }
    return 0;
}

std::uint64_t residue_u64(const GroupValue& g) {
    if (g.spec_->kind() != GroupSpec::Kind::cyclic)
        throw std::invalid_argument("residue_u64: cyclic groups only");
    return mpz_get_ui(g.integer_payload().get_mpz_t());
}

std::string GroupValue::to_string() const {
    switch (spec_->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic: return integer_payload().get_str();
        case GroupSpec::Kind::rationals: return rational_payload().get_str();
        case GroupSpec::Kind::product: {
            std::string out = "(";
            for (std::size_t i = 0; i < parts().size(); ++i) {
                if (i) out += ",";
                out += parts()[i].to_string();
            }
            return out + ")";
        }
    }
    return "";
}

GroupValue GroupValue::parse(const GroupSpecPtr& spec, const std::string& text) {
    std::string s = strip(text);
    switch (spec->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic: {
            mpz_class n;
            if (n.set_str(s, 10) != 0)
                throw std::invalid_argument("bad integer value: " + s);
            return from_integer(spec, n);
        }
        case GroupSpec::Kind::rationals:
            return rational(rational_from_string(s));
        case GroupSpec::Kind::product: {
            if (s.size() < 2 || s.front() != '(' || s.back() != ')')
                throw std::invalid_argument("bad tuple value: " + s);
            std::string inner = s.substr(1, s.size() - 2);
            std::vector<std::string> fields;
            int depth = 0;
            std::string cur;
            for (char c : inner) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (c == ',' && depth == 0) {
                    fields.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            fields.push_back(cur);
            if (fields.size() != spec->factors().size())
                throw std::invalid_argument("tuple arity mismatch: " + s);
            std::vector<GroupValue> parts;
            for (std::size_t i = 0; i < fields.size(); ++i)
                parts.push_back(parse(spec->factors()[i], fields[i]));
            return tuple(spec, std::move(parts));
        }
    }
    throw std::invalid_argument("bad value: " + s);
}

GroupValue random_element(const GroupSpecPtr& spec, SplitRng& rng) {
    switch (spec->kind()) {
        case GroupSpec::Kind::cyclic: {
            // Uniform residue; moduli in this project fit comfortably in u64.
            std::uint64_t m = mpz_get_ui(spec->modulus().get_mpz_t());
            return GroupValue::from_integer(spec, mpz_class(rng.uniform(m)));
        }
        case GroupSpec::Kind::integers:
            // Desk-scale stand-in: uniform on [-4, 4].
            return GroupValue::from_integer(spec, mpz_class(static_cast<long>(rng.uniform(9)) - 4));
        case GroupSpec::Kind::rationals: {
            long num = static_cast<long>(rng.uniform(9)) - 4;
            long den = static_cast<long>(rng.uniform(4)) + 1;
            return GroupValue::rational(mpq_class(num, den));
        }
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            parts.reserve(spec->factors().size());
            for (const auto& f : spec->factors()) parts.push_back(random_element(f, rng));
            return GroupValue::tuple(spec, std::move(parts));
        }
    }
    throw std::logic_error("unreachable");
}

GroupValue random_nonzero(const GroupSpecPtr& spec, SplitRng& rng) {
    for (;;) {
        GroupValue v = random_element(spec, rng);
        if (!v.is_zero()) return v;
    }
}

GroupValue canonical_nonzero(const GroupSpecPtr& spec) {
    switch (spec->kind()) {
        case GroupSpec::Kind::integers:
        case GroupSpec::Kind::cyclic:
        case GroupSpec::Kind::rationals:
            return GroupValue::from_integer(spec, 1);
        case GroupSpec::Kind::product: {
            std::vector<GroupValue> parts;
            for (std::size_t i = 0; i < spec->factors().size(); ++i)
                parts.push_back(i == 0 ? canonical_nonzero(spec->factors()[i])
                                       : GroupValue::zero(spec->factors()[i]));
            return GroupValue::tuple(spec, std::move(parts));
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace lcc::groups
