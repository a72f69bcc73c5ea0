#include "lcc/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

namespace lcc::poly {

using groups::GroupSpecPtr;
using groups::GroupValue;

Monomial::Monomial(std::vector<std::uint32_t> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 1; i < vars_.size(); ++i)
        if (vars_[i - 1] >= vars_[i])
            throw std::invalid_argument("monomial indices must be strictly increasing");
}

bool Monomial::contains(std::uint32_t v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
}

std::uint64_t Monomial::mask64() const {
    std::uint64_t m = 0;
    for (std::uint32_t v : vars_) {
        if (v >= 64) throw std::invalid_argument("mask64: variable index >= 64");
        m |= std::uint64_t(1) << v;
    }
    return m;
}

bool Monomial::operator<(const Monomial& o) const {
    if (vars_.size() != o.vars_.size()) return vars_.size() < o.vars_.size();
    return vars_ < o.vars_;
}

int Monomial::graded_lex_compare(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    // Equal degree: at the least index where supports differ, the monomial
    // containing that variable is the larger one.
    std::size_t i = 0, j = 0;
    while (i < a.vars_.size() && j < b.vars_.size()) {
        if (a.vars_[i] == b.vars_[j]) {
            ++i;
            ++j;
        } else if (a.vars_[i] < b.vars_[j]) {
            return 1; // a contains the least differing index
        } else {
            return -1;
        }
    }
    return 0; // equal supports
}

std::string Monomial::to_string() const {
    if (vars_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out += "*";
        out += "x" + std::to_string(vars_[i] + 1);
    }
    return out;
}

std::vector<Monomial> monomial_basis(std::uint32_t n, std::uint32_t d) {
    std::vector<Monomial> out;
    out.push_back(Monomial::empty());
    std::vector<std::uint32_t> cur;
    // Depth-first enumeration by degree level keeps the storage order.
    for (std::uint32_t deg = 1; deg <= std::min(d, n); ++deg) {
        cur.assign(deg, 0);
        for (std::uint32_t i = 0; i < deg; ++i) cur[i] = i;
        for (;;) {
            out.push_back(Monomial(cur));
            // next combination
            int i = static_cast<int>(deg) - 1;
            while (i >= 0 && cur[i] == n - deg + i) --i;
            if (i < 0) break;
            ++cur[i];
            for (std::uint32_t j = i + 1; j < deg; ++j) cur[j] = cur[j - 1] + 1;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

MultilinearPoly::MultilinearPoly(std::uint32_t n, std::uint32_t d, GroupSpecPtr spec)
    : n_(n), d_(d), spec_(std::move(spec)) {}

MultilinearPoly MultilinearPoly::from_terms(
    std::uint32_t n, std::uint32_t d, GroupSpecPtr spec,
    std::vector<std::pair<Monomial, GroupValue>> terms) {
    MultilinearPoly p(n, d, spec);
    std::map<Monomial, GroupValue> acc;
    for (auto& [m, c] : terms) {
        if (m.degree() > d)
            throw std::invalid_argument("term degree exceeds bound");
        if (!m.vars().empty() && m.vars().back() >= n)
            throw std::invalid_argument("term variable out of range");
        if (!c.spec()->same(*spec))
            throw std::invalid_argument("coefficient spec mismatch");
        auto it = acc.find(m);
        if (it == acc.end()) acc.emplace(m, std::move(c));
        else it->second = it->second + c;
    }
    for (auto& [m, c] : acc)
        if (!c.is_zero()) p.terms_.emplace_back(m, c);
    return p;
}

std::uint32_t MultilinearPoly::degree() const {
    std::uint32_t deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
    return deg;
}

GroupValue MultilinearPoly::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), m,
        [](const auto& t, const Monomial& key) { return t.first < key; });
    if (it != terms_.end() && it->first == m) return it->second;
    return GroupValue::zero(spec_);
}

GroupValue MultilinearPoly::evaluate(const CubePoint& x) const {
    if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    GroupValue acc = GroupValue::zero(spec_);
    for (const auto& [m, c] : terms_)
        if (m.evaluates_one(x)) acc.accumulate(c);
    return acc;
}

std::vector<GroupValue> MultilinearPoly::evaluate_table() const {
    if (n_ > 26) throw std::invalid_argument("evaluate_table: n too large");
    std::uint64_t size = std::uint64_t(1) << n_;
    std::vector<GroupValue> table(size, GroupValue::zero(spec_));
    for (const auto& [m, c] : terms_) table[m.mask64()] = c;
    // Zeta transform over subsets: afterwards table[x] = sum_{m subseteq x} c_m.
    for (std::uint32_t b = 0; b < n_; ++b) {
        std::uint64_t bit = std::uint64_t(1) << b;
        for (std::uint64_t x = 0; x < size; ++x)
            if (x & bit) table[x].accumulate(table[x ^ bit]);
    }
    return table;
}

MultilinearPoly MultilinearPoly::restrict_to_subcube(
    const subcube::SubcubeEmbedding& c) const {
    if (c.ambient_dim() != n_)
        throw std::invalid_argument("restrict: embedding lives in wrong dimension");
    std::uint32_t k = c.dim;
    MultilinearPoly out(k, d_, spec_);
    std::map<Monomial, GroupValue> acc;

    // Substitute x_i = y_{h(i)} xor a_i per term and expand. The expansion
    // of one term is a +-1 integer combination of monomials in y.
    std::map<std::vector<std::uint32_t>, long> expansion, next;
    for (const auto& [m, coeff] : terms_) {
        expansion.clear();
        expansion[{}] = 1;
        bool dead = false;
        for (std::uint32_t v : m.vars()) {
            std::uint32_t j = c.map[v];
            bool negated = c.base.bit(v); // x_v = 1 xor y_j
            next.clear();
            for (const auto& [mono, mult] : expansion) {
                bool has_j = std::binary_search(mono.begin(), mono.end(), j);
                std::vector<std::uint32_t> with_j = mono;
                if (!has_j) with_j.insert(
                    std::lower_bound(with_j.begin(), with_j.end(), j), j);
                if (!negated) {
                    next[with_j] += mult; // multiply by y_j (idempotent)
                } else {
                    next[mono] += mult;   // multiply by (1 - y_j)
                    next[with_j] -= mult;
                }
            }
            expansion.swap(next);
            if (expansion.empty()) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        for (const auto& [mono, mult] : expansion) {
            if (mult == 0) continue;
            GroupValue delta = groups::int_scale(mult, coeff);
            if (delta.is_zero()) continue;
            Monomial key{std::vector<std::uint32_t>(mono)};
            auto it = acc.find(key);
            if (it == acc.end()) acc.emplace(std::move(key), std::move(delta));
            else it->second = it->second + delta;
        }
    }
    for (auto& [m, v] : acc)
        if (!v.is_zero()) out.terms_.emplace_back(m, v);
    return out;
}

Monomial MultilinearPoly::leading_monomial() const {
    if (terms_.empty())
        throw std::invalid_argument("leading_monomial: zero polynomial");
    const Monomial* best = &terms_.front().first;
    for (const auto& [m, c] : terms_)
        if (Monomial::graded_lex_compare(m, *best) > 0) best = &m;
    return *best;
}

MultilinearPoly MultilinearPoly::operator+(const MultilinearPoly& o) const {
    if (n_ != o.n_) throw std::invalid_argument("add: dimension mismatch");
    if (!spec_->same(*o.spec_)) throw std::invalid_argument("add: spec mismatch");
    std::vector<std::pair<Monomial, GroupValue>> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j >= o.terms_.size() ||
            (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
            merged.push_back(terms_[i++]);
        } else if (i >= terms_.size() || o.terms_[j].first < terms_[i].first) {
            merged.push_back(o.terms_[j++]);
        } else {
            GroupValue s = terms_[i].second + o.terms_[j].second;
            if (!s.is_zero()) merged.emplace_back(terms_[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
    MultilinearPoly out(n_, std::max(d_, o.d_), spec_);
    out.terms_ = std::move(merged);
    return out;
}

MultilinearPoly MultilinearPoly::operator-(const MultilinearPoly& o) const {
    MultilinearPoly neg(o.n_, o.d_, o.spec_);
    neg.terms_.reserve(o.terms_.size());
    for (const auto& [m, c] : o.terms_) neg.terms_.emplace_back(m, -c);
    return *this + neg;
}

bool MultilinearPoly::operator==(const MultilinearPoly& o) const {
    if (n_ != o.n_ || !spec_->same(*o.spec_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].first != o.terms_[i].first ||
            terms_[i].second != o.terms_[i].second)
            return false;
    return true;
}

std::string MultilinearPoly::to_text() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += " + ";
        const auto& [m, c] = terms_[i];
        out += c.to_string();
        if (m.degree() > 0) {
            for (std::uint32_t v : m.vars()) out += "*x" + std::to_string(v + 1);
        }
    }
    return out;
}

MultilinearPoly MultilinearPoly::parse_text(std::uint32_t n, std::uint32_t d,
                                            const GroupSpecPtr& spec,
                                            const std::string& text) {
    std::vector<std::pair<Monomial, GroupValue>> terms;
    std::string body = text;
    // Split on '+' at depth 0 (tuples may contain parentheses with commas).
    std::vector<std::string> chunks;
    {
        int depth = 0;
        std::string cur;
        for (char ch : body) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == '+' && depth == 0) {
                chunks.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        chunks.push_back(cur);
    }
    for (std::string chunk : chunks) {
        // trim
        auto a = chunk.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        auto b = chunk.find_last_not_of(" \t");
        chunk = chunk.substr(a, b - a + 1);
        if (chunk == "0") continue;

        // Split into '*'-separated factors: one optional coefficient plus x_i's.
        std::vector<std::string> factors;
        {
            int depth = 0;
            std::string cur;
            for (char ch : chunk) {
                if (ch == '(') ++depth;
                if (ch == ')') --depth;
                if (ch == '*' && depth == 0) {
                    factors.push_back(cur);
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            factors.push_back(cur);
        }
        std::string coeff_text;
        std::vector<std::uint32_t> vars;
        for (std::string f : factors) {
            auto fa = f.find_first_not_of(" \t");
            auto fb = f.find_last_not_of(" \t");
            if (fa == std::string::npos) throw std::invalid_argument("empty factor");
            f = f.substr(fa, fb - fa + 1);
            if (f[0] == 'x') {
                unsigned long idx = std::stoul(f.substr(1));
                if (idx == 0 || idx > n)
                    throw std::invalid_argument("variable out of range: " + f);
                vars.push_back(static_cast<std::uint32_t>(idx - 1));
            } else {
                if (!coeff_text.empty())
                    throw std::invalid_argument("two coefficients in one term");
                coeff_text = f;
            }
        }
        std::sort(vars.begin(), vars.end());
        if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
            throw std::invalid_argument("repeated variable in term");
        GroupValue c = coeff_text.empty()
                           ? groups::canonical_nonzero(spec)
                           : GroupValue::parse(spec, coeff_text);
        terms.emplace_back(Monomial(vars), std::move(c));
    }
    return from_terms(n, d, spec, std::move(terms));
}

mpq_class distance(const MultilinearPoly& p, const MultilinearPoly& q,
                   std::uint32_t enumeration_cap) {
    if (p.n() != q.n()) throw std::invalid_argument("distance: dimension mismatch");
    if (p.n() > enumeration_cap)
        throw std::invalid_argument("distance: n exceeds enumeration cap");
    MultilinearPoly diff = p - q;
    std::uint64_t count = 0;
    auto table = diff.evaluate_table();
    for (const auto& v : table)
        if (!v.is_zero()) ++count;
    mpq_class result(count, 1);
    mpq_class denom(mpz_class(1) << p.n());
    result /= denom;
    result.canonicalize();
    return result;
}

std::uint64_t slice_nonzero_count(const MultilinearPoly& p, std::uint32_t k) {
    std::uint64_t count = 0;
    for_each_slice_point(p.n(), k, [&](const CubePoint& x) {
        if (!p.evaluate(x).is_zero()) ++count;
    });
    return count;
}

MultilinearPoly random_poly(std::uint32_t n, std::uint32_t d,
                            const GroupSpecPtr& spec,
                            const RandomPolyModel& model, SplitRng& rng) {
    auto basis = monomial_basis(n, d);
    std::vector<std::pair<Monomial, GroupValue>> terms;
    switch (model.kind) {
        case RandomPolyModel::Kind::uniform_dense:
            for (const auto& m : basis) {
                GroupValue c = groups::random_element(spec, rng);
                if (!c.is_zero()) terms.emplace_back(m, std::move(c));
            }
            break;
        case RandomPolyModel::Kind::sparsity: {
            if (model.sparsity > basis.size())
                throw std::invalid_argument("sparsity exceeds basis size");
            // Partial Fisher-Yates over the basis indices.
            std::vector<std::uint32_t> idx(basis.size());
            for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (std::uint32_t i = 0; i < model.sparsity; ++i) {
                std::uint32_t j =
                    i + static_cast<std::uint32_t>(rng.uniform(idx.size() - i));
                std::swap(idx[i], idx[j]);
                terms.emplace_back(basis[idx[i]], groups::random_nonzero(spec, rng));
            }
            break;
        }
    }
    return MultilinearPoly::from_terms(n, d, spec, std::move(terms));
}

std::vector<MultilinearPoly> random_disjoint_lm_batch(
    std::uint32_t n, std::uint32_t d, std::uint32_t t, std::uint32_t tail_terms,
    const GroupSpecPtr& spec, SplitRng& rng) {
    if (d == 0) throw std::invalid_argument("disjoint-LM batch needs d >= 1");
    if (static_cast<std::uint64_t>(t) * d > n)
        throw std::invalid_argument("disjoint-LM batch needs n >= t*d");
    std::vector<MultilinearPoly> out;
    out.reserve(t);
    for (std::uint32_t i = 0; i < t; ++i) {
        std::vector<std::uint32_t> block(d);
        for (std::uint32_t j = 0; j < d; ++j) block[j] = i * d + j;
        std::vector<std::pair<Monomial, GroupValue>> terms;
        terms.emplace_back(Monomial(block), groups::random_nonzero(spec, rng));
        // Strictly lower-degree monomials over the same block never disturb
        // the leading monomial.
        auto sub_basis = monomial_basis(d, d > 0 ? d - 1 : 0);
        for (std::uint32_t s = 0; s < tail_terms && s < sub_basis.size(); ++s) {
            std::uint32_t pick =
                static_cast<std::uint32_t>(rng.uniform(sub_basis.size()));
            std::vector<std::uint32_t> vars;
            for (std::uint32_t v : sub_basis[pick].vars()) vars.push_back(block[v]);
            terms.emplace_back(Monomial(vars), groups::random_element(spec, rng));
        }
        out.push_back(MultilinearPoly::from_terms(n, d, spec, std::move(terms)));
    }
    return out;
}

} // namespace lcc::poly
