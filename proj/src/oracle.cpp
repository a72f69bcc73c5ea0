#include "lcc/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "lcc/rng.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

namespace lcc::oracle {

using groups::GroupSpecPtr;
using groups::GroupValue;

namespace {

std::uint64_t point_stream(std::uint64_t seed, const CubePoint& x) {
    return SplitRng::mix(seed, x.hash());
}

/// Corrupt-iff hash(x) < rate, evaluated exactly on 64-bit fixed point.
/// The realized rate matches the requested one to within 2^-64.
std::uint64_t rate_threshold(const mpq_class& rate) {
    mpz_class scaled = rate.get_num();
    scaled <<= 64;
    scaled /= rate.get_den();
    if (scaled > mpz_class(1) << 64) throw std::invalid_argument("rate > 1");
    if (scaled == mpz_class(1) << 64) return UINT64_MAX; // rate == 1, off by 2^-64
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, scaled.get_mpz_t());
    return out;
}

GroupValue corrupt_value(const GroupValue& clean, const CorruptionSpec& c,
                         std::uint64_t seed, const CubePoint& x) {
    switch (c.value_model) {
        case ErrorValueModel::fixed_offset: {
            const GroupValue& off =
                c.offset ? *c.offset : groups::canonical_nonzero(clean.spec());
            return clean + off;
        }
        case ErrorValueModel::random_nonzero: {
            SplitRng rng(point_stream(seed ^ 0x5bf0371337ULL, x));
            return clean + groups::random_nonzero(clean.spec(), rng);
        }
    }
    return clean;
}

} // namespace

CorruptionSpec CorruptionSpec::planted(std::vector<CubePoint> pts, ErrorValueModel vm) {
    CorruptionSpec c;
    c.mode = Mode::planted_set;
    c.points = std::move(pts);
    c.value_model = vm;
    return c;
}

CorruptionSpec CorruptionSpec::iid(const mpq_class& rate, ErrorValueModel vm) {
    if (rate < 0 || rate > 1) throw std::invalid_argument("iid rate must be in [0,1]");
    CorruptionSpec c;
    c.mode = Mode::iid_rate;
    c.rate = rate;
    c.value_model = vm;
    return c;
}

OraclePtr make_corrupted_oracle(const poly::MultilinearPoly& p,
                                const CorruptionSpec& corruption,
                                std::uint64_t seed) {
    const std::uint32_t n = p.n();
    GroupSpecPtr spec = p.spec();

    // Flat term list: contiguous scan beats repeated map walks in trials.
    struct Term {
        std::uint64_t mask;
        GroupValue coeff;
    };
    auto eval_terms = std::make_shared<std::vector<Term>>();
    bool masks_ok = n <= 64;
    if (masks_ok)
        for (const auto& [m, c] : p.terms())
            eval_terms->push_back({m.mask64(), c});
    auto ppoly = std::make_shared<poly::MultilinearPoly>(p);

    auto eval_clean = [eval_terms, ppoly, spec, masks_ok](const CubePoint& x) {
        if (!masks_ok) return ppoly->evaluate(x);
        GroupValue acc = GroupValue::zero(spec);
        std::uint64_t bits = x.index();
        for (const auto& t : *eval_terms)
            if ((t.mask & ~bits) == 0) acc.accumulate(t.coeff);
        return acc;
    };

    if (corruption.mode == CorruptionSpec::Mode::planted_set) {
        auto bad = std::make_shared<std::unordered_set<CubePoint, CubePointHash>>();
        for (const auto& pt : corruption.points) {
            if (pt.size() != n)
                throw std::invalid_argument("planted point has wrong dimension");
            bad->insert(pt);
        }
        CorruptionSpec cs = corruption;
        FunctionOracle::Fn fn = [eval_clean, bad, cs, seed](const CubePoint& x) {
            GroupValue clean = eval_clean(x);
            if (bad->count(x)) return corrupt_value(clean, cs, seed, x);
            return clean;
        };
        FunctionOracle::RawFn raw = nullptr;
        if (spec->kind() == groups::GroupSpec::Kind::cyclic &&
            spec->modulus().fits_ulong_p()) {
            raw = [fn](const CubePoint& x) { return groups::residue_u64(fn(x)); };
        }
        return std::make_shared<FunctionOracle>(n, spec, std::move(fn),
                                                "polynomial+planted", std::move(raw));
    }

    std::uint64_t threshold = rate_threshold(corruption.rate);
    CorruptionSpec cs = corruption;
    FunctionOracle::Fn fn = [eval_clean, cs, seed, threshold](const CubePoint& x) {
        GroupValue clean = eval_clean(x);
        if (point_stream(seed, x) < threshold) return corrupt_value(clean, cs, seed, x);
        return clean;
    };
    FunctionOracle::RawFn raw = nullptr;
    if (spec->kind() == groups::GroupSpec::Kind::cyclic && spec->modulus().fits_ulong_p()) {
        raw = [fn](const CubePoint& x) { return groups::residue_u64(fn(x)); };
    }
    return std::make_shared<FunctionOracle>(n, spec, std::move(fn),
                                            "polynomial+iid", std::move(raw));
}

OraclePtr make_poly_oracle(const poly::MultilinearPoly& p) {
    return make_corrupted_oracle(p, CorruptionSpec::none(), 0);
}

OraclePtr make_table_oracle(std::uint32_t n, GroupSpecPtr spec,
                            std::vector<GroupValue> table) {
    if (n > 26 || table.size() != (std::uint64_t(1) << n))
        throw std::invalid_argument("table oracle: bad table size");
    auto shared = std::make_shared<std::vector<GroupValue>>(std::move(table));
    FunctionOracle::Fn fn = [shared](const CubePoint& x) { return (*shared)[x.index()]; };
    FunctionOracle::RawFn raw = nullptr;
    if (spec->kind() == groups::GroupSpec::Kind::cyclic && spec->modulus().fits_ulong_p()) {
        auto residues = std::make_shared<std::vector<std::uint64_t>>();
        residues->reserve(shared->size());
        for (const auto& v : *shared) residues->push_back(groups::residue_u64(v));
        raw = [residues](const CubePoint& x) { return (*residues)[x.index()]; };
    }
    return std::make_shared<FunctionOracle>(n, std::move(spec), std::move(fn),
                                            "table", std::move(raw));
}

OraclePtr make_virtual_oracle(std::uint32_t n, GroupSpecPtr spec,
                              FunctionOracle::Fn fn, std::string source) {
    return std::make_shared<FunctionOracle>(n, std::move(spec), std::move(fn),
                                            std::move(source));
}

std::vector<GroupValue> read_table(const FunctionOracle& f) {
    if (f.dim() > 26) throw std::invalid_argument("read_table: dimension too large");
    std::vector<GroupValue> out;
    out.reserve(std::uint64_t(1) << f.dim());
    for_each_point(f.dim(), [&](const CubePoint& x) { out.push_back(f.query(x)); });
    return out;
}

OraclePtr make_stitched_oracle(const poly::MultilinearPoly& p1,
                               const poly::MultilinearPoly& p2,
                               std::uint32_t split_coord) {
    if (p1.n() != p2.n() || !p1.spec()->same(*p2.spec()))
        throw std::invalid_argument("stitched oracle: mismatched polynomials");
    auto a = std::make_shared<poly::MultilinearPoly>(p1);
    auto b = std::make_shared<poly::MultilinearPoly>(p2);
    FunctionOracle::Fn fn = [a, b, split_coord](const CubePoint& x) {
        return x.bit(split_coord) ? b->evaluate(x) : a->evaluate(x);
    };
    auto spec = p1.spec();
    FunctionOracle::RawFn raw = nullptr;
    if (spec->kind() == groups::GroupSpec::Kind::cyclic && spec->modulus().fits_ulong_p())
        raw = [fn](const CubePoint& x) { return groups::residue_u64(fn(x)); };
    return std::make_shared<FunctionOracle>(p1.n(), spec, std::move(fn), "stitched",
                                            std::move(raw));
}

std::vector<CubePoint> cluster_error_points(std::uint32_t n, const CubePoint& center,
                                            std::uint64_t count) {
    if (n > 26) throw std::invalid_argument("cluster_error_points: n too large");
    std::vector<CubePoint> out;
    out.reserve(count);
    // Grow a Hamming ball around the center, nearest shells first.
    for (std::uint32_t radius = 0; radius <= n && out.size() < count; ++radius) {
        for_each_slice_point(n, radius, [&](const CubePoint& offset) {
            if (out.size() < count) out.push_back(center ^ offset);
        });
    }
    out.resize(std::min<std::uint64_t>(count, out.size()));
    return out;
}

std::vector<CubePoint> subcube_error_points(const subcube::SubcubeEmbedding& c) {
    if (c.dim > 26) throw std::invalid_argument("subcube_error_points: dim too large");
    std::vector<CubePoint> out;
    std::unordered_set<CubePoint, CubePointHash> seen;
    for_each_point(c.dim, [&](const CubePoint& y) {
        CubePoint x = c.lift(y);
        if (seen.insert(x).second) out.push_back(x);
    });
    return out;
}

namespace {

nlohmann::ordered_json corruption_to_json(const CorruptionSpec& c) {
    nlohmann::ordered_json j;
    j["mode"] = c.mode == CorruptionSpec::Mode::planted_set ? "planted-set" : "iid-rate";
    if (c.mode == CorruptionSpec::Mode::planted_set) {
        auto& pts = j["points"] = nlohmann::ordered_json::array();
        for (const auto& p : c.points) pts.push_back(p.to_string());
    } else {
        j["rate"] = rational_to_string(c.rate);
    }
    j["value_model"] =
        c.value_model == ErrorValueModel::fixed_offset ? "fixed-offset" : "random-nonzero";
    if (c.offset) j["offset"] = c.offset->to_string();
    return j;
}

CorruptionSpec corruption_from_json(const nlohmann::json& j, const GroupSpecPtr& spec) {
    CorruptionSpec c;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "planted-set") {
        c.mode = CorruptionSpec::Mode::planted_set;
        for (const auto& p : j.at("points"))
            c.points.push_back(CubePoint::from_bits(p.get<std::string>()));
    } else if (mode == "iid-rate") {
        c.mode = CorruptionSpec::Mode::iid_rate;
        c.rate = rational_from_string(j.at("rate").get<std::string>());
    } else {
        throw std::invalid_argument("bad corruption mode: " + mode);
    }
    std::string vm = j.value("value_model", "fixed-offset");
    c.value_model = vm == "random-nonzero" ? ErrorValueModel::random_nonzero
                                           : ErrorValueModel::fixed_offset;
    if (j.contains("offset"))
        c.offset = GroupValue::parse(spec, j.at("offset").get<std::string>());
    return c;
}

} // namespace

std::string write_instance(const Instance& inst) {
    nlohmann::ordered_json j;
    j["group"] = inst.clean.spec()->to_string();
    j["n"] = inst.clean.n();
    j["d"] = inst.clean.degree_bound();
    j["poly"] = inst.clean.to_text();
    j["corruption"] = corruption_to_json(inst.corruption);
    j["seed"] = inst.seed;
    return j.dump(2) + "\n";
}

Instance read_instance(const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    GroupSpecPtr spec = groups::GroupSpec::parse(j.at("group").get<std::string>());
    std::uint32_t n = j.at("n").get<std::uint32_t>();
    std::uint32_t d = j.at("d").get<std::uint32_t>();
    Instance inst{
        poly::MultilinearPoly::parse_text(n, d, spec, j.at("poly").get<std::string>()),
        corruption_from_json(j.at("corruption"), spec),
        j.at("seed").get<std::uint64_t>()};
    return inst;
}

void write_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << write_instance(inst);
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return read_instance(text);
}

} // namespace lcc::oracle
