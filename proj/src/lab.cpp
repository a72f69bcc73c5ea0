#include "lcc/lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "lcc/cube.hpp"
#include "lcc/listdecode.hpp"
#include "lcc/oracle.hpp"
#include "lcc/poly.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

namespace lcc::lab {

std::string ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["parameters"] = nlohmann::ordered_json::parse(
        parameters_json.empty() ? "{}" : parameters_json);
    j["seed"] = seed;
    j["columns"] = columns;
    j["rows"] = rows;
    auto& jn = j["notes"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : notes) jn[k] = v;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    out.setf(std::ios::fmtflags(0), std::ios::floatfield);
    out.precision(12);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

mpz_class johnson_eigenvalue(std::uint32_t k, std::uint32_t d, std::uint32_t s) {
    if (s > k || d > k) throw std::invalid_argument("johnson_eigenvalue: range");
    mpz_class acc = 0;
    for (std::uint32_t r = 0; r <= s; ++r) {
        mpz_class term = binomial(s, r);
        term *= binomial(static_cast<long>(k) - r, static_cast<long>(k) - d - r);
        term *= binomial(static_cast<long>(k) - s + r, static_cast<long>(d) - s + r);
        if ((s - r) & 1) acc -= term;
        else acc += term;
    }
    return acc;
}

mpz_class johnson_multiplicity(std::uint32_t two_k, std::uint32_t s) {
    if (2 * s > two_k) throw std::invalid_argument("johnson_multiplicity: range");
    return binomial(two_k, s) - binomial(two_k, static_cast<long>(s) - 1);
}

SpectrumCheck johnson_spectrum_check(std::uint32_t two_k, std::uint32_t d, double tol) {
    if (two_k % 2 != 0 || two_k > 16)
        throw std::invalid_argument("johnson_spectrum_check: need even 2k <= 16");
    std::uint32_t k = two_k / 2;

    std::vector<CubePoint> vertices;
    for_each_slice_point(two_k, k, [&](const CubePoint& p) { vertices.push_back(p); });
    const std::size_t nv = vertices.size();

    // Distance 0 (d = 0) is the identity relation: self-loops only.
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(nv, nv);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = i; j < nv; ++j)
            if ((vertices[i] ^ vertices[j]).weight() == 2 * d)
                adj(i, j) = adj(j, i) = 1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
    std::vector<double> numeric(solver.eigenvalues().data(),
                                solver.eigenvalues().data() + nv);
    std::sort(numeric.begin(), numeric.end());

    SpectrumCheck out;
    std::vector<double> formula;
    for (std::uint32_t s = 0; s <= k; ++s) {
        mpz_class beta = johnson_eigenvalue(k, d, s);
        mpz_class mult = johnson_multiplicity(two_k, s);
        out.formula.emplace_back(beta, mult);
        for (mpz_class c = 0; c < mult; ++c) formula.push_back(beta.get_d());
    }
    std::sort(formula.begin(), formula.end());

    if (formula.size() != numeric.size()) {
        out.pass = false;
        out.max_deviation = std::numeric_limits<double>::infinity();
        return out;
    }
    double worst = 0;
    for (std::size_t i = 0; i < formula.size(); ++i)
        worst = std::max(worst, std::abs(formula[i] - numeric[i]));
    out.max_deviation = worst;
    out.pass = worst <= tol;
    return out;
}

namespace {

std::uint64_t density_threshold(const mpq_class& density) {
    mpz_class scaled = density.get_num();
    scaled <<= 64;
    scaled /= density.get_den();
    std::uint64_t out = 0;
    if (scaled >= mpz_class(1) << 64) return UINT64_MAX;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, scaled.get_mpz_t());
    return out;
}

} // namespace

ExperimentReport slice_sampling_experiment(const std::vector<std::uint32_t>& k_grid,
                                           const mpq_class& density,
                                           std::uint32_t trials, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "slice-sampling";
    rep.seed = seed;
    rep.columns = {"k", "mean_deviation", "structured_empty_freq",
                   "structured_empty_expected"};
    {
        nlohmann::ordered_json p;
        p["k_grid"] = k_grid;
        p["density"] = rational_to_string(density);
        p["trials"] = trials;
        rep.parameters_json = p.dump();
    }

    const std::uint32_t sets_per_k = 4;
    std::uint64_t threshold = density_threshold(density);
    std::vector<double> means;

    SplitRng root(seed);
    for (std::size_t gi = 0; gi < k_grid.size(); ++gi) {
        std::uint32_t k = k_grid[gi];
        if (k % 2 != 0 || 2 * k > 32)
            throw std::invalid_argument("slice sampling: need even k with 2k <= 32");
        std::uint32_t two_k = 2 * k;

        // Middle slice of the inner cube, reused across trials.
        std::vector<CubePoint> inner_slice;
        for_each_slice_point(k, k / 2,
                             [&](const CubePoint& y) { inner_slice.push_back(y); });
        double slice_size = static_cast<double>(inner_slice.size());

        double dev_sum = 0;
        std::uint64_t dev_count = 0;
        std::uint64_t structured_empty = 0, structured_trials = 0;

        for (std::uint32_t set_idx = 0; set_idx < sets_per_k; ++set_idx) {
            std::uint64_t set_seed = root.split(1000 * k + set_idx).base_seed();
            auto member = [&](const CubePoint& x) {
                return SplitRng::mix(set_seed, x.hash()) < threshold;
            };
            // Exact density of this sampled set on the middle slice.
            std::uint64_t in_set = 0, total = 0;
            for_each_slice_point(two_k, k, [&](const CubePoint& x) {
                ++total;
                if (member(x)) ++in_set;
            });
            double mu = static_cast<double>(in_set) / static_cast<double>(total);

            SplitRng trial_rng = root.split(7000 * k + set_idx);
            std::uint32_t per_set = std::max(1u, trials / sets_per_k);
            for (std::uint32_t trial = 0; trial < per_set; ++trial) {
                auto rho = subcube::random_two_to_one(two_k, trial_rng);
                subcube::SubcubeEmbedding c(CubePoint(two_k), rho, k);
                std::uint64_t hit = 0;
                std::uint64_t structured_hit = 0;
                for (const auto& y : inner_slice) {
                    CubePoint x = c.lift(y);
                    if (member(x)) ++hit;
                    if (x.bit(0) != x.bit(1)) ++structured_hit;
                }
                dev_sum += std::abs(static_cast<double>(hit) / slice_size - mu);
                ++dev_count;
                ++structured_trials;
                if (structured_hit == 0) ++structured_empty;
            }
        }
        double mean_dev = dev_sum / static_cast<double>(dev_count);
        means.push_back(mean_dev);
        rep.rows.push_back({static_cast<double>(k), mean_dev,
                            static_cast<double>(structured_empty) /
                                static_cast<double>(structured_trials),
                            1.0 / static_cast<double>(two_k - 1)});
    }

    rep.pass = true;
    for (std::size_t i = 1; i < means.size(); ++i)
        if (!(means[i] < means[i - 1])) rep.pass = false;
    rep.notes.emplace_back("trend", "mean deviation must strictly decrease in k");
    return rep;
}

ExperimentReport anticoncentration_experiment(std::uint32_t d,
                                              const std::vector<std::uint32_t>& s_grid,
                                              std::uint32_t trials, double slack,
                                              std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("anticoncentration: d >= 1");
    ExperimentReport rep;
    rep.name = "anticoncentration";
    rep.seed = seed;
    rep.columns = {"s", "measured_nonzero_prob", "lower_bound", "structured_prob"};
    {
        nlohmann::ordered_json p;
        p["d"] = d;
        p["s_grid"] = s_grid;
        p["trials"] = trials;
        p["slack"] = slack;
        rep.parameters_json = p.dump();
    }

    auto spec = groups::GroupSpec::integers();
    SplitRng root(seed);
    rep.pass = true;
    for (std::uint32_t s : s_grid) {
        // Enough variables for s random monomials of degree <= d and for the
        // structured chain family (which spans s + d - 1 variables).
        std::uint32_t n = d;
        while (binomial(n, std::min(n, d)).get_ui() < 2 * s && n < 4096) ++n;
        n = std::max(n + d, s + d + 1);

        SplitRng rng = root.split(s);
        std::uint64_t nonzero = 0;
        auto q = poly::random_poly(n, d, spec, poly::RandomPolyModel::with_sparsity(s),
                                   rng);
        for (std::uint32_t trial = 0; trial < trials; ++trial) {
            CubePoint x(n);
            for (std::uint32_t i = 0; i < n; ++i) x.set(i, rng.coin());
            if (!q.evaluate(x).is_zero()) ++nonzero;
        }
        double measured = static_cast<double>(nonzero) / trials;
        double bound = 1.0 / std::pow(2.0, static_cast<double>(d) - 1) -
                       slack / std::sqrt(static_cast<double>(s));

        // Structured family: top monomial chain times a dense linear form.
        std::uint64_t structured_nonzero = 0;
        {
            std::vector<std::pair<poly::Monomial, groups::GroupValue>> terms;
            for (std::uint32_t i = 0; i < s; ++i) {
                std::vector<std::uint32_t> vars;
                for (std::uint32_t j = 0; j + 1 < d; ++j) vars.push_back(j);
                vars.push_back(d - 1 + i);
                terms.emplace_back(poly::Monomial(vars),
                                   groups::canonical_nonzero(spec));
            }
            auto structured =
                poly::MultilinearPoly::from_terms(n, d, spec, std::move(terms));
            for (std::uint32_t trial = 0; trial < trials; ++trial) {
                CubePoint x(n);
                for (std::uint32_t i = 0; i < n; ++i) x.set(i, rng.coin());
                if (!structured.evaluate(x).is_zero()) ++structured_nonzero;
            }
        }
        double structured_prob = static_cast<double>(structured_nonzero) / trials;

        rep.rows.push_back({static_cast<double>(s), measured, bound, structured_prob});
        if (measured < bound) rep.pass = false;
    }
    rep.notes.emplace_back("bound", "measured >= 1/2^(d-1) - slack/sqrt(s)");
    return rep;
}

ExperimentReport tail_bound_experiment(std::uint32_t d,
                                       const std::vector<std::uint32_t>& t_grid,
                                       double eta, std::uint32_t trials,
                                       unsigned long prime, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "tail-bound";
    rep.seed = seed;
    rep.columns = {"t", "measured_tail_freq", "exact_binomial_tail"};
    {
        nlohmann::ordered_json p;
        p["d"] = d;
        p["t_grid"] = t_grid;
        p["eta"] = eta;
        p["trials"] = trials;
        p["prime"] = prime;
        rep.parameters_json = p.dump();
    }

    auto spec = groups::GroupSpec::cyclic(prime);
    double alpha = 1.0 - 1.0 / std::pow(2.0, d);
    SplitRng root(seed);
    std::vector<double> freqs;
    for (std::uint32_t t : t_grid) {
        std::uint32_t n = t * d;
        SplitRng rng = root.split(t);
        auto batch = poly::random_disjoint_lm_batch(n, d, t, 0, spec, rng);
        std::uint64_t threshold =
            static_cast<std::uint64_t>(std::ceil((alpha + eta) * t));
        std::uint64_t hits = 0;
        for (std::uint32_t trial = 0; trial < trials; ++trial) {
            CubePoint x(n);
            for (std::uint32_t i = 0; i < n; ++i) x.set(i, rng.coin());
            std::uint64_t vanished = 0;
            for (const auto& s_poly : batch)
                if (s_poly.evaluate(x).is_zero()) ++vanished;
            if (vanished >= threshold) ++hits;
        }
        double freq = static_cast<double>(hits) / trials;
        freqs.push_back(freq);

        // Pure-monomial batches vanish independently with probability alpha:
        // the exact binomial upper tail is the oracle for the measurement.
        mpq_class exact = 0;
        mpq_class p_vanish(mpz_class((mpz_class(1) << d) - 1), mpz_class(1) << d);
        for (std::uint64_t j = threshold; j <= t; ++j) {
            mpq_class term = mpq_class(binomial(t, static_cast<long>(j)));
            for (std::uint64_t i = 0; i < j; ++i) term *= p_vanish;
            for (std::uint64_t i = j; i < t; ++i) term *= (1 - p_vanish);
            exact += term;
        }
        rep.rows.push_back({static_cast<double>(t), freq, exact.get_d()});
    }
    // Linear decrease of log-frequency: later per-t slopes must keep at
    // least half the first slope (a measured frequency of zero counts as
    // having hit the floor).
    rep.pass = true;
    for (std::size_t i = 1; i < freqs.size(); ++i)
        if (!(freqs[i] < freqs[i - 1])) rep.pass = false;
    if (rep.pass && freqs.size() >= 3 && freqs[1] > 0) {
        double first_slope = (std::log(freqs[1]) - std::log(freqs[0])) /
                             (static_cast<double>(t_grid[1]) - t_grid[0]);
        for (std::size_t i = 2; i < freqs.size(); ++i) {
            if (freqs[i] == 0) break;
            double slope = (std::log(freqs[i]) - std::log(freqs[i - 1])) /
                           (static_cast<double>(t_grid[i]) - t_grid[i - 1]);
            if (!(slope <= 0.5 * first_slope)) rep.pass = false;
        }
    }
    rep.notes.emplace_back(
        "trend", "tail frequency strictly decreasing; log-frequency decreasing "
                 "at least linearly in t (slope floor half the first slope)");
    return rep;
}

ExperimentReport list_size_experiment(std::uint32_t n, std::uint32_t d,
                                      const groups::GroupSpecPtr& spec,
                                      const std::vector<mpq_class>& eps_grid,
                                      std::uint32_t random_tables,
                                      std::uint32_t list_cap, std::uint64_t seed) {
    if (n > 4 * d || n > 8)
        throw std::invalid_argument("list_size_experiment: n too large to enumerate");
    ExperimentReport rep;
    rep.name = "list-size";
    rep.seed = seed;
    rep.columns = {"eps", "max_list_random", "max_list_structured", "max_list"};
    {
        nlohmann::ordered_json p;
        p["n"] = n;
        p["d"] = d;
        p["group"] = spec->to_string();
        auto eps_strings = nlohmann::ordered_json::array();
        for (const auto& e : eps_grid) eps_strings.push_back(rational_to_string(e));
        p["eps_grid"] = eps_strings;
        p["random_tables"] = random_tables;
        p["list_cap"] = list_cap;
        rep.parameters_json = p.dump();
    }

    const std::uint64_t size = std::uint64_t(1) << n;
    SplitRng root(seed);

    // Random tables plus stitched / majority-style adversarial functions.
    std::vector<std::pair<std::vector<groups::GroupValue>, bool>> tables; // (table, structured)
    for (std::uint32_t i = 0; i < random_tables; ++i) {
        SplitRng rng = root.split(i + 1);
        std::vector<groups::GroupValue> table;
        table.reserve(size);
        for (std::uint64_t x = 0; x < size; ++x)
            table.push_back(groups::random_element(spec, rng));
        tables.emplace_back(std::move(table), false);
    }
    if (n >= 3) {
        // f = x1 on one half, x2 on the other, split by x3.
        std::vector<groups::GroupValue> table;
        auto one = groups::canonical_nonzero(spec);
        auto zero = groups::GroupValue::zero(spec);
        for (std::uint64_t x = 0; x < size; ++x) {
            bool pick_second = (x >> 2) & 1;
            bool v = pick_second ? ((x >> 1) & 1) : (x & 1);
            table.push_back(v ? one : zero);
        }
        tables.emplace_back(std::move(table), true);
    }
    {
        // Majority-style: g on points of weight > n/2, zero elsewhere.
        std::vector<groups::GroupValue> table;
        auto g = groups::canonical_nonzero(spec);
        auto zero = groups::GroupValue::zero(spec);
        for (std::uint64_t x = 0; x < size; ++x) {
            std::uint32_t w = static_cast<std::uint32_t>(__builtin_popcountll(x));
            table.push_back(2 * w > n ? g : zero);
        }
        tables.emplace_back(std::move(table), true);
    }
    {
        // A codeword itself: its own list is exactly {f} at every radius
        // below the minimum distance.
        SplitRng rng = root.split(0xC0DE);
        auto p = poly::random_poly(n, d, spec, poly::RandomPolyModel::dense(), rng);
        tables.emplace_back(p.evaluate_table(), true);
    }

    rep.pass = true;
    for (const auto& eps : eps_grid) {
        mpq_class radius(1, mpz_class(1) << d);
        radius -= eps;
        radius.canonicalize();
        std::uint64_t max_random = 0, max_structured = 0;
        for (const auto& [table, structured] : tables) {
            auto list = listdec::brute_force_list_decode(
                table, n, d, radius, spec, std::uint64_t(1) << 26, list_cap);
            auto& slot = structured ? max_structured : max_random;
            slot = std::max<std::uint64_t>(slot, list.size());
        }
        rep.rows.push_back({mpq_class(eps).get_d(), static_cast<double>(max_random),
                            static_cast<double>(max_structured),
                            static_cast<double>(std::max(max_random, max_structured))});
    }
    rep.notes.emplace_back("cap", "every observed list within list_cap");
    return rep;
}

} // namespace lcc::lab
