#include "lcc/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcc/correct.hpp"
#include "lcc/interpolate.hpp"
#include "lcc/lab.hpp"
#include "lcc/listdecode.hpp"
#include "lcc/oracle.hpp"
#include "lcc/util.hpp"

namespace lcc::cli {

namespace {

using nlohmann::ordered_json;

void emit(const ordered_json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

/// Values from --config override command-line flags, by design: a pinned
/// config file is the replayable record of a run.
void apply_config_overrides(const std::string& path, ordered_json& resolved) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    auto overrides = nlohmann::json::parse(in);
    for (auto it = overrides.begin(); it != overrides.end(); ++it)
        resolved[it.key()] = it.value();
}

std::vector<std::uint32_t> parse_dims(const std::string& text) {
    std::vector<std::uint32_t> dims;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) dims.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return dims;
}

int cmd_correct(const ordered_json& cfg) {
    auto inst = oracle::read_instance_file(cfg.at("instance").get<std::string>());
    CubePoint a = CubePoint::from_bits(cfg.at("point").get<std::string>());

    correct::CorrectorConfig cc;
    cc.d = cfg.at("d").get<std::uint32_t>();
    cc.seed = cfg.at("seed").get<std::uint64_t>();
    cc.a_const = cfg.value("a_const", 4.0);
    if (cfg.contains("k")) cc.k_override = cfg.at("k").get<std::uint32_t>();
    if (cfg.contains("er_dims"))
        cc.er_stage_dims = parse_dims(cfg.at("er_dims").get<std::string>());
    bool sub_constant = cfg.value("sub_constant", false);

    auto f = inst.make_oracle();
    groups::GroupValue value = sub_constant ? correct::correct_low_error(f, a, cc)
                                            : correct::unique_local_correct(f, a, cc);

    ordered_json out;
    out["command"] = "correct";
    out["config"] = cfg;
    out["stages"] = sub_constant ? std::vector<std::uint32_t>{} : cc.stages();
    out["value"] = value.to_string();
    out["queries"] = f->query_count();
    out["query_formula"] = sub_constant
                               ? correct::low_error_query_count(f->dim(), cc)
                               : correct::composed_query_count(f->dim(), cc);
    emit(out, cfg.value("out", ""));
    return 0;
}

int cmd_correct_torsion(const ordered_json& cfg) {
    auto inst = oracle::read_instance_file(cfg.at("instance").get<std::string>());
    CubePoint a = CubePoint::from_bits(cfg.at("point").get<std::string>());
    std::uint32_t d = cfg.at("d").get<std::uint32_t>();
    mpz_class exponent(cfg.at("exponent").get<std::string>());
    std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

    auto f = inst.make_oracle();
    auto value = correct::const_torsion_correct(f, a, d, exponent, seed);
    auto sc = interp::slice_coefficients(d, exponent);

    ordered_json out;
    out["command"] = "correct-torsion";
    out["config"] = cfg;
    out["slice_k"] = sc.k;
    out["unit"] = sc.unit.get_str();
    out["value"] = value.to_string();
    out["queries"] = f->query_count();
    out["query_formula"] = sc.query_count().get_str();
    emit(out, cfg.value("out", ""));
    return 0;
}

int cmd_list_correct(const ordered_json& cfg) {
    auto inst = oracle::read_instance_file(cfg.at("instance").get<std::string>());
    listdec::ListConfig lc;
    lc.d = inst.clean.degree_bound();
    lc.epsilon = rational_from_string(cfg.at("epsilon").get<std::string>());
    lc.k_list = cfg.at("k").get<std::uint32_t>();
    lc.ell = cfg.at("ell").get<std::uint32_t>();
    lc.seed = cfg.at("seed").get<std::uint64_t>();
    lc.list_cap = cfg.value("list_cap", 64u);
    std::uint32_t samples = cfg.value("samples", 50u);

    auto f = inst.make_oracle();
    auto triples = listdec::build_advice(f, lc);
    std::uint64_t advice_queries = f->query_count();

    ordered_json out;
    out["command"] = "list-correct";
    out["config"] = cfg;
    out["advice_count"] = triples.size();
    out["advice_queries"] = advice_queries;
    out["advice_query_formula"] = lc.ell * (std::uint64_t(1) << lc.k_list);

    // Per-oracle agreement statistics on seeded sample points.
    auto& arr = out["oracles"] = ordered_json::array();
    SplitRng rng(lc.seed ^ 0xA9A9A9);
    std::vector<CubePoint> sample;
    for (std::uint32_t s = 0; s < samples; ++s) {
        CubePoint x(f->dim());
        for (std::uint32_t i = 0; i < f->dim(); ++i) x.set(i, rng.coin());
        sample.push_back(x);
    }
    for (std::size_t t = 0; t < triples.size(); ++t) {
        std::uint64_t agree_clean = 0, agree_f = 0;
        for (const auto& x : sample) {
            auto v = listdec::psi_evaluate(f, triples[t], x, lc);
            if (v == inst.clean.evaluate(x)) ++agree_clean;
            if (v == f->query(x)) ++agree_f;
        }
        ordered_json o;
        o["index"] = t;
        o["advice_poly"] = triples[t].q.to_text();
        o["psi_agreement_with_clean"] =
            static_cast<double>(agree_clean) / sample.size();
        o["psi_agreement_with_oracle"] = static_cast<double>(agree_f) / sample.size();
        arr.push_back(o);
    }
    emit(out, cfg.value("out", ""));
    return 0;
}

int cmd_build_set(const ordered_json& cfg) {
    std::uint32_t d = cfg.at("d").get<std::uint32_t>();
    std::uint32_t k = cfg.at("k").get<std::uint32_t>();
    auto set = interp::cached_interpolating_set(d, k);

    ordered_json out;
    out["command"] = "build-set";
    out["config"] = cfg;
    out["size"] = set->points().size();
    out["total_weight"] = set->total_weight().get_str();
    out["slack"] = set->slack().get_str();
    out["balance"] = set->balance_holds() ? "pass" : "fail";
    auto& weights = out["weights"] = ordered_json::array();
    for (const auto& w : set->weights()) weights.push_back(w.get_str());
    auto& pts = out["points"] = ordered_json::array();
    for (const auto& p : set->points()) pts.push_back(p.to_string());
    if (cfg.contains("coeffs_for")) {
        CubePoint b = CubePoint::from_bits(cfg.at("coeffs_for").get<std::string>());
        auto c = set->coefficients_for(b);
        auto& arr = out["coefficients"] = ordered_json::array();
        for (const auto& v : c) arr.push_back(v.get_str());
    }
    emit(out, cfg.value("out", ""));
    return set->balance_holds() ? 0 : 3;
}

int cmd_verify_set(const ordered_json& cfg) {
    std::uint32_t d = cfg.at("d").get<std::uint32_t>();
    std::uint32_t k = cfg.at("k").get<std::uint32_t>();
    auto spec = groups::GroupSpec::parse(cfg.value("group", "Z%2"));
    std::uint32_t samples = cfg.value("samples", 200u);
    std::uint64_t seed = cfg.value("seed", std::uint64_t(1));

    auto set = interp::cached_interpolating_set(d, k);
    SplitRng rng(seed);

    std::uint64_t vanish_failures = 0;
    for (std::uint32_t s = 0; s < samples; ++s) {
        poly::MultilinearPoly q = poly::random_poly(
            k, d, spec, poly::RandomPolyModel::dense(), rng);
        if (q.is_zero()) continue;
        bool hit = false;
        for (const auto& u : set->points())
            if (!q.evaluate(u).is_zero()) {
                hit = true;
                break;
            }
        if (!hit) ++vanish_failures;
    }

    std::uint64_t moment_failures = 0;
    std::uint32_t targets = cfg.value("targets", 5u);
    for (std::uint32_t t = 0; t < targets; ++t) {
        CubePoint b(k);
        for (std::uint32_t i = 0; i < k; ++i) b.set(i, rng.coin());
        auto c = set->coefficients_for(b);
        for (std::uint32_t rep = 0; rep < 10; ++rep) {
            auto q = poly::random_poly(k, d, spec, poly::RandomPolyModel::dense(), rng);
            groups::GroupValue acc = groups::GroupValue::zero(spec);
            for (std::size_t u = 0; u < set->points().size(); ++u)
                if (c[u] != 0)
                    acc = acc + groups::int_scale(c[u], q.evaluate(set->points()[u]));
            if (!(acc == q.evaluate(b))) ++moment_failures;
        }
    }

    ordered_json out;
    out["command"] = "verify-set";
    out["config"] = cfg;
    out["size"] = set->points().size();
    out["balance"] = set->balance_holds() ? "pass" : "fail";
    out["nonvanishing_failures"] = vanish_failures;
    out["moment_identity_failures"] = moment_failures;
    bool ok = set->balance_holds() && vanish_failures == 0 && moment_failures == 0;
    out["verdict"] = ok ? "pass" : "fail";
    emit(out, cfg.value("out", ""));
    return ok ? 0 : 3;
}

int cmd_eigen(const ordered_json& cfg) {
    std::uint32_t two_k = cfg.at("twok").get<std::uint32_t>();
    std::uint32_t d = cfg.at("d").get<std::uint32_t>();
    bool check = cfg.value("check", false);
    if (two_k == 0 || two_k % 2 != 0 || d > two_k / 2)
        throw std::invalid_argument("eigen: need even 2k > 0 and d <= k");

    ordered_json out;
    out["command"] = "eigen";
    out["config"] = cfg;
    auto& arr = out["spectrum"] = ordered_json::array();
    std::uint32_t k = two_k / 2;
    for (std::uint32_t s = 0; s <= k; ++s) {
        ordered_json row;
        row["s"] = s;
        row["beta"] = lab::johnson_eigenvalue(k, d, s).get_str();
        row["multiplicity"] = lab::johnson_multiplicity(two_k, s).get_str();
        arr.push_back(row);
    }
    int code = 0;
    if (check) {
        auto res = lab::johnson_spectrum_check(two_k, d);
        out["numeric_max_deviation"] = res.max_deviation;
        out["numeric_check"] = res.pass ? "pass" : "fail";
        if (!res.pass) code = 3;
    }
    emit(out, cfg.value("out", ""));
    return code;
}

int cmd_experiment(const ordered_json& cfg) {
    std::string name = cfg.at("name").get<std::string>();
    std::uint64_t seed = cfg.value("seed", std::uint64_t(1));
    std::uint32_t trials = cfg.value("trials", 200u);

    lab::ExperimentReport rep;
    if (name == "slice-sampling") {
        std::vector<std::uint32_t> grid = {6, 10, 14};
        if (cfg.contains("k_grid")) grid = parse_dims(cfg.at("k_grid").get<std::string>());
        mpq_class density = rational_from_string(cfg.value("density", "1/2"));
        rep = lab::slice_sampling_experiment(grid, density, trials, seed);
    } else if (name == "anticoncentration") {
        std::vector<std::uint32_t> grid = {25, 100, 400};
        if (cfg.contains("s_grid")) grid = parse_dims(cfg.at("s_grid").get<std::string>());
        std::uint32_t d = cfg.value("d", 1u);
        double slack = cfg.value("slack", 10.0);
        rep = lab::anticoncentration_experiment(d, grid, trials, slack, seed);
    } else if (name == "tail-bound") {
        std::vector<std::uint32_t> grid = {20, 40, 80};
        if (cfg.contains("t_grid")) grid = parse_dims(cfg.at("t_grid").get<std::string>());
        std::uint32_t d = cfg.value("d", 1u);
        double eta = cfg.value("eta", 0.1);
        unsigned long prime = cfg.value("prime", 2ul);
        rep = lab::tail_bound_experiment(d, grid, eta, trials, prime, seed);
    } else if (name == "list-size") {
        std::uint32_t n = cfg.value("n", 4u);
        std::uint32_t d = cfg.value("d", 1u);
        auto spec = groups::GroupSpec::parse(cfg.value("group", "Z%2"));
        std::vector<mpq_class> eps_grid;
        for (const auto& e : parse_dims(cfg.value("eps_percent", "10,25,40")))
            eps_grid.push_back(mpq_class(e, 100));
        rep = lab::list_size_experiment(n, d, spec, eps_grid,
                                        cfg.value("random_tables", 20u),
                                        cfg.value("list_cap", 64u), seed);
    } else {
        throw CLI::ValidationError("unknown experiment: " + name);
    }

    std::string out_prefix = cfg.value("out", "");
    if (!out_prefix.empty()) {
        write_file(out_prefix + ".json", rep.to_json());
        write_file(out_prefix + ".csv", rep.to_csv());
    } else {
        std::cout << rep.to_json();
    }
    return rep.pass ? 0 : 3;
}

int cmd_bench(const ordered_json& cfg) {
    std::uint32_t d = cfg.value("d", 1u);
    std::vector<std::uint32_t> n_grid = {32, 64, 128, 256};
    if (cfg.contains("n_grid")) n_grid = parse_dims(cfg.at("n_grid").get<std::string>());
    correct::CorrectorConfig cc;
    cc.d = d;
    cc.a_const = cfg.value("a_const", 4.0);
    if (cfg.contains("er_dims"))
        cc.er_stage_dims = parse_dims(cfg.at("er_dims").get<std::string>());

    ordered_json out;
    out["command"] = "bench";
    out["config"] = cfg;
    auto& arr = out["rows"] = ordered_json::array();
    for (std::uint32_t n : n_grid) {
        ordered_json row;
        std::uint32_t k = correct::choose_k(n, d, cc.a_const);
        auto set = interp::cached_interpolating_set(d, k);
        row["n"] = n;
        row["k"] = k;
        row["set_size"] = set->points().size();
        row["low_error_queries"] = correct::low_error_query_count(n, cc);
        row["composed_queries"] = correct::composed_query_count(n, cc);
        arr.push_back(row);
    }
    emit(out, cfg.value("out", ""));
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"local correction for low-degree polynomials on the Boolean cube"};
    app.require_subcommand(1);

    // Flags shared across subcommands are collected into a JSON blob so a
    // --config file can override them uniformly.
    struct Common {
        std::string instance, point, out, config;
        std::string epsilon = "1/5", exponent = "2", er_dims, k_grid, s_grid, t_grid,
                    eps_percent, density, group, name, coeffs_for, n_grid;
        std::uint64_t seed = 1;
        std::uint32_t d = 1, k = 0, ell = 4, twok = 4, trials = 200, samples = 50,
                      targets = 5, list_cap = 64, n = 4, random_tables = 20;
        double a_const = 4.0, slack = 10.0, eta = 0.1;
        unsigned long prime = 2;
        bool sub_constant = false, check = false;
    } cm;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cm.config, "JSON config file (overrides flags)");
        sub->add_option("--out", cm.out, "output path (default stdout)");
        sub->add_option("--seed", cm.seed, "random seed");
    };

    auto* c_correct = app.add_subcommand("correct", "unique local correction");
    c_correct->add_option("--instance", cm.instance, "instance file")->required();
    c_correct->add_option("--point", cm.point, "target point bits")->required();
    c_correct->add_option("--d", cm.d, "degree bound");
    c_correct->add_option("--epsilon", cm.epsilon, "radius margin (documentation)");
    c_correct->add_option("--a-const", cm.a_const, "k multiplier");
    c_correct->add_option("--k", cm.k, "override interpolating-set dimension");
    c_correct->add_option("--er-dims", cm.er_dims, "error-reduction stage dims, comma separated");
    c_correct->add_flag("--sub-constant", cm.sub_constant,
                        "skip error reduction (sub-constant error regime)");
    add_common(c_correct);

    auto* c_torsion = app.add_subcommand("correct-torsion", "constant-query torsion correction");
    c_torsion->add_option("--instance", cm.instance)->required();
    c_torsion->add_option("--point", cm.point)->required();
    c_torsion->add_option("--d", cm.d);
    c_torsion->add_option("--exponent", cm.exponent, "group exponent M");
    add_common(c_torsion);

    auto* c_list = app.add_subcommand("list-correct", "local list correction");
    c_list->add_option("--instance", cm.instance)->required();
    c_list->add_option("--epsilon", cm.epsilon, "list radius margin");
    c_list->add_option("--k", cm.k, "advice cube dimension")->required();
    c_list->add_option("--ell", cm.ell, "advice repetitions");
    c_list->add_option("--list-cap", cm.list_cap);
    c_list->add_option("--samples", cm.samples, "agreement sample points");
    add_common(c_list);

    auto* c_build = app.add_subcommand("build-set", "build the interpolating set");
    c_build->add_option("--d", cm.d)->required();
    c_build->add_option("--k", cm.k)->required();
    c_build->add_option("--coeffs-for", cm.coeffs_for, "emit coefficients for this point");
    add_common(c_build);

    auto* c_verify = app.add_subcommand("verify-set", "verify interpolating-set properties");
    c_verify->add_option("--d", cm.d)->required();
    c_verify->add_option("--k", cm.k)->required();
    c_verify->add_option("--group", cm.group, "coefficient group");
    c_verify->add_option("--samples", cm.samples);
    c_verify->add_option("--targets", cm.targets);
    add_common(c_verify);

    auto* c_eigen = app.add_subcommand("eigen", "Johnson graph spectrum");
    c_eigen->add_option("--twok", cm.twok)->required();
    c_eigen->add_option("--d", cm.d)->required();
    c_eigen->add_flag("--check", cm.check, "cross-check numerically");
    add_common(c_eigen);

    auto* c_exp = app.add_subcommand("experiment", "verification experiments");
    c_exp->add_option("--name", cm.name,
                      "slice-sampling | anticoncentration | tail-bound | list-size")
        ->required();
    c_exp->add_option("--trials", cm.trials);
    c_exp->add_option("--d", cm.d);
    c_exp->add_option("--k-grid", cm.k_grid);
    c_exp->add_option("--s-grid", cm.s_grid);
    c_exp->add_option("--t-grid", cm.t_grid);
    c_exp->add_option("--eps-percent", cm.eps_percent, "epsilon grid, percent");
    c_exp->add_option("--density", cm.density);
    c_exp->add_option("--group", cm.group);
    c_exp->add_option("--n", cm.n);
    c_exp->add_option("--eta", cm.eta);
    c_exp->add_option("--slack", cm.slack);
    c_exp->add_option("--prime", cm.prime);
    c_exp->add_option("--random-tables", cm.random_tables);
    c_exp->add_option("--list-cap", cm.list_cap);
    add_common(c_exp);

    auto* c_bench = app.add_subcommand("bench", "query-count table");
    c_bench->add_option("--d", cm.d);
    c_bench->add_option("--n-grid", cm.n_grid);
    c_bench->add_option("--a-const", cm.a_const);
    c_bench->add_option("--er-dims", cm.er_dims);
    add_common(c_bench);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ordered_json cfg;
        cfg["seed"] = cm.seed;
        if (!cm.instance.empty()) cfg["instance"] = cm.instance;
        if (!cm.point.empty()) cfg["point"] = cm.point;
        if (!cm.out.empty()) cfg["out"] = cm.out;
        cfg["d"] = cm.d;
        if (cm.k) cfg["k"] = cm.k;
        if (!cm.er_dims.empty()) cfg["er_dims"] = cm.er_dims;
        cfg["a_const"] = cm.a_const;

        auto dispatch = [&](CLI::App* sub, auto&& fn, ordered_json extra) -> int {
            if (!sub->parsed()) return -1;
            for (auto it = extra.begin(); it != extra.end(); ++it)
                cfg[it.key()] = it.value();
            apply_config_overrides(cm.config, cfg);
            return fn(cfg);
        };

        int rc;
        if ((rc = dispatch(c_correct, cmd_correct,
                           {{"epsilon", cm.epsilon}, {"sub_constant", cm.sub_constant}})) >= 0)
            return rc;
        if ((rc = dispatch(c_torsion, cmd_correct_torsion, {{"exponent", cm.exponent}})) >= 0)
            return rc;
        if ((rc = dispatch(c_list, cmd_list_correct,
                           {{"epsilon", cm.epsilon},
                            {"ell", cm.ell},
                            {"list_cap", cm.list_cap},
                            {"samples", cm.samples}})) >= 0)
            return rc;
        if ((rc = dispatch(c_build, cmd_build_set,
                           cm.coeffs_for.empty()
                               ? ordered_json::object()
                               : ordered_json{{"coeffs_for", cm.coeffs_for}})) >= 0)
            return rc;
        if ((rc = dispatch(c_verify, cmd_verify_set,
                           {{"group", cm.group.empty() ? "Z%2" : cm.group},
                            {"samples", cm.samples},
                            {"targets", cm.targets}})) >= 0)
            return rc;
        if ((rc = dispatch(c_eigen, cmd_eigen, {{"twok", cm.twok}, {"check", cm.check}})) >= 0)
            return rc;
        if (c_exp->parsed()) {
            ordered_json extra{{"name", cm.name}, {"trials", cm.trials}};
            if (!cm.k_grid.empty()) extra["k_grid"] = cm.k_grid;
            if (!cm.s_grid.empty()) extra["s_grid"] = cm.s_grid;
            if (!cm.t_grid.empty()) extra["t_grid"] = cm.t_grid;
            if (!cm.eps_percent.empty()) extra["eps_percent"] = cm.eps_percent;
            if (!cm.density.empty()) extra["density"] = cm.density;
            if (!cm.group.empty()) extra["group"] = cm.group;
            extra["n"] = cm.n;
            extra["eta"] = cm.eta;
            extra["slack"] = cm.slack;
            extra["prime"] = cm.prime;
            extra["random_tables"] = cm.random_tables;
            extra["list_cap"] = cm.list_cap;
            if ((rc = dispatch(c_exp, cmd_experiment, extra)) >= 0) return rc;
        }
        if (c_bench->parsed()) {
            ordered_json extra = ordered_json::object();
            if (!cm.n_grid.empty()) extra["n_grid"] = cm.n_grid;
            if ((rc = dispatch(c_bench, cmd_bench, extra)) >= 0) return rc;
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lcc::cli
