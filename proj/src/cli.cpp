#include "fkummer/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fkummer/hv.hpp"

namespace fk {

using Json = nlohmann::ordered_json;

namespace {

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

void finish(SuiteReport& r, double tol) {
    r.max_residual = 0;
    for (const auto& [n, v] : r.residuals)
        r.max_residual = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(r.max_residual, v);
    r.pass = r.max_residual <= tol;
}

void check_order(int order, int lo, int fallback_cap) {
    const int cap = max_order_from_env(fallback_cap);
    if (order < lo || order > cap)
        throw UsageError("order must lie in [" + std::to_string(lo) + ", " + std::to_string(cap) + "]");
}

void check_tol(double tol) {
    if (!(tol > 0)) throw UsageError("tolerance must be positive");
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

int max_order_from_env(int fallback) {
    const char* s = std::getenv("FREEKUMMER_MAX_ORDER");
    if (!s || !*s) return fallback;
    int v = 0;
    const char* end = s + std::strlen(s);
    auto res = std::from_chars(s, end, v);
    if (res.ec != std::errc() || res.ptr != end || v < 1) throw UsageError("FREEKUMMER_MAX_ORDER must be a positive integer");
    return std::min(v, fallback);
}

// ---------------------------------------------------------------------------

SuiteReport suite_hv(double alpha, double beta, double gamma, int order, double tol, bool exploratory) {
    check_tol(tol);
    const HvReport r = verify_hv_property(alpha, beta, gamma, order, tol, exploratory);
    SuiteReport s;
    s.suite = "hv";
    s.residuals = {{"moments of U vs K(alpha+beta, alpha, gamma)", r.deviation_U},
                   {"moments of V vs nu(alpha, 1/gamma)", r.deviation_V}};
    for (int k = 1; k <= order; ++k) {
        s.values.emplace_back("phi(U^" + std::to_string(k) + ")", r.computed.U[k]);
        s.values.emplace_back("phi(V^" + std::to_string(k) + ")", r.computed.V[k]);
    }
    finish(s, tol);
    if (exploratory) s.pass.reset();
    return s;
}

SuiteReport suite_k(std::uint64_t seed, int order, double tol, int pairs) {
    check_tol(tol);
    if (order < 2) throw UsageError("k suite needs order >= 2");
    const std::vector<RFunc> tags{RFunc::unit(), RFunc::r(), RFunc::r_over_one_minus_r(), RFunc::one_minus_r()};
    const Rng root(seed);
    double kdiff = 0, closed = 0, gbyh = 0, hbyg = 0, eta = 0, cum = 0;
    for (int i = 0; i < pairs; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        const MomentOracle o = random_oracle(rng, true);
        for (RFunc g1 : tags)
            for (RFunc g2 : tags)
                kdiff = std::max(kdiff, max_coeff_diff(k_series_bruteforce(o, g1, g2, order),
                                                       k_series_closedform(o, g1, g2, order)));
        for (RFunc h : tags) {
            const GHSeries gh = GH_series(o, h, std::min(order, 5));
            closed = std::max(closed, gh.closed_form_residual);
            gbyh = std::max(gbyh, gh.g_by_h_residual);
            hbyg = std::max(hbyg, gh.h_by_g_residual);
            eta = std::max(eta, gh.eta_decomposition_residual);
            cum = std::max(cum, gh.cumulant_residual);
        }
    }
    SuiteReport s;
    s.suite = "k";
    s.residuals = {{"k closed form vs brute force", kdiff},
                   {"G, H closed forms", closed},
                   {"G by H", gbyh},
                   {"H by G", hbyg},
                   {"eta^h(z, w) decomposition", eta},
                   {"r_n, y_n vs omega coefficients", cum}};
    finish(s, tol);
    return s;
}

SuiteReport suite_subordination(std::uint64_t seed, int order, double tol, const std::vector<double>& grid,
                                int pairs) {
    check_tol(tol);
    const Rng root(seed);
    UsefulIdentityReport worst;
    double cum = 0, cond = 0;
    for (int i = 0; i < pairs; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        const MomentOracle o = random_oracle(rng);
        const SubordinationPair p = subordination_series(o, order);
        const UsefulIdentityReport r = verify_useful_identity(p, order, grid, 0.01);
        worst.composition_series = std::max(worst.composition_series, r.composition_series);
        worst.product_series = std::max(worst.product_series, r.product_series);
        worst.composition_pointwise = std::max(worst.composition_pointwise, r.composition_pointwise);
        worst.product_pointwise = std::max(worst.product_pointwise, r.product_pointwise);
        worst.series_vs_pointwise = std::max(worst.series_vs_pointwise, r.series_vs_pointwise);
        cum = std::max(cum, p.series.cumulant_residual);
        cond = std::max(cond, verify_conditional_subordination(o, RFunc::r(), order));
    }
    SuiteReport s;
    s.suite = "subordination";
    s.residuals = {{"M_Y(omega1) = M_R(omega2) = M_U, series", worst.composition_series},
                   {"omega1 omega2 = z eta_U, series", worst.product_series},
                   {"M_Y(omega1) = M_R(omega2) = M_U, pointwise", worst.composition_pointwise},
                   {"omega1 omega2 = z eta_U, pointwise", worst.product_pointwise},
                   {"series vs pointwise at z = -0.01", worst.series_vs_pointwise},
                   {"omega coefficients vs Boolean cumulants", cum},
                   {"conditional subordination, h(R) = R", cond}};
    finish(s, tol);
    return s;
}

SuiteReport suite_partitions(std::uint64_t seed, double tol, int pairs) {
    check_tol(tol);
    const Rng root(seed);
    double round = 0, product = 0, moment_formula = 0, cumulant_formula = 0;
    for (int i = 0; i < pairs; ++i) {
        Rng rng = root.split(static_cast<std::uint64_t>(i));
        const MomentOracle o = random_oracle(rng);
        std::vector<double> m;
        for (int k = 1; k <= 10; ++k) m.push_back(o.y.moment(k));
        const auto back = boolean_cumulants_to_moments(moments_to_boolean_cumulants(m));
        for (int k = 0; k < 10; ++k) round = std::max(round, std::abs(back[k] - m[k]) / std::max(1.0, std::abs(m[k])));
        Rng words = rng.split(3);
        for (int n = 1; n <= 6; ++n) {
            MixedWord w;
            for (int j = 0; j < n; ++j)
                w.push_back(words.uniform_int(0, 1) ? Letter::y(words.uniform_int(1, 2))
                                                   : Letter::rf(RFunc::r(words.uniform_int(1, 2))));
            for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
                std::vector<int> split{1};
                for (int j = 1; j < n; ++j) {
                    if (mask & (1u << (j - 1)))
                        split.push_back(1);
                    else
                        ++split.back();
                }
                product = std::max(product, verify_product_formula(split, w, o));
            }
            for (bool swap : {false, true}) {
                moment_formula = std::max(moment_formula, verify_alternating_formula(1, n, o, swap));
                cumulant_formula = std::max(cumulant_formula, verify_alternating_formula(3, n, o, swap));
            }
        }
    }
    SuiteReport s;
    s.suite = "partitions";
    s.residuals = {{"moment-cumulant round trip (relative)", round},
                   {"cumulants of products", product},
                   {"alternating moment formula (relative)", moment_formula},
                   {"alternating cumulant formula (relative)", cumulant_formula}};
    finish(s, tol);
    return s;
}

SuiteReport suite_characterize(int characterization, double alpha, double beta, double gamma, double tol,
                               const std::vector<double>& grid) {
    check_tol(tol);
    const CharacterizationReport r = characterize(characterization, alpha, beta, gamma, grid);
    SuiteReport s;
    s.suite = "characterize";
    s.residuals = r.residuals;
    s.residuals.emplace_back("recovered parameters", r.parameter_error);
    s.residuals.emplace_back("strict moment inequality", r.inequality ? 0.0 : std::numeric_limits<double>::infinity());
    for (const auto& [n, v] : r.constants.named()) s.values.emplace_back(n, v);
    if (r.recovered) {
        s.values.emplace_back("alpha_X", r.recovered->x.alpha);
        s.values.emplace_back("beta_X", r.recovered->x.beta);
        s.values.emplace_back("gamma_X", r.recovered->x.gamma);
        s.values.emplace_back("lambda_Y", r.recovered->y.lambda);
        s.values.emplace_back("scale_Y", r.recovered->y.scale);
    }
    s.values.emplace_back("smallest residual after perturbing one constant by 0.1", r.min_perturbed_residual);
    finish(s, tol);
    return s;
}

// ---------------------------------------------------------------------------

namespace {

struct Options {
    std::string dist = "kummer";
    double alpha = unset, beta = unset, gamma = unset, lambda = unset;
    double z = unset;
    int order = -1;
    double tol = unset;
    double grid_lo = unset, grid_hi = unset;
    int grid_n = -1;
    std::uint64_t seed = 1;
    std::string format;
    int characterization = 0;
    bool exploratory = false;
    std::string suite;
};

double need(double v, const char* name) {
    if (std::isnan(v)) throw UsageError(std::string("missing --") + name);
    return v;
}

Json params_json(const Options& o, const std::string& command) {
    Json p = Json::object();
    auto put = [&](const char* k, double v) {
        if (!std::isnan(v)) p[k] = v;
    };
    if (command == "density" || command == "moments") p["dist"] = o.dist;
    put("alpha", o.alpha);
    put("beta", o.beta);
    put("gamma", o.gamma);
    put("lambda", o.lambda);
    put("z", o.z);
    if (o.order >= 0) p["order"] = o.order;
    put("tol", o.tol);
    put("grid_lo", o.grid_lo);
    put("grid_hi", o.grid_hi);
    if (o.grid_n >= 0) p["grid_n"] = o.grid_n;
    if (command == "verify") {
        p["suite"] = o.suite;
        p["seed"] = o.seed;
        if (o.characterization) p["case"] = o.characterization;
        if (o.exploratory) p["exploratory"] = true;
    }
    return p;
}

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(const Table& t, const Options& o, const std::string& command, std::ostream& out) {
    if (o.format == "json") {
        Json j;
        j["version"] = cli_version;
        j["command"] = command;
        j["params"] = params_json(o, command);
        Json res;
        Json meta = Json::object();
        for (const auto& [k, v] : t.meta) meta[k] = v;
        res["metadata"] = meta;
        res["columns"] = t.columns;
        Json rows = Json::array();
        for (const auto& r : t.rows) rows.push_back(r);
        res["rows"] = rows;
        j["results"] = res;
        out << j.dump(2) << "\n";
        return;
    }
    if (!t.meta.empty()) {
        out << "#";
        for (std::size_t i = 0; i < t.meta.size(); ++i) out << (i ? "," : " ") << t.meta[i].first << "=" << t.meta[i].second;
        out << "\n";
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << num(r[i]);
        out << "\n";
    }
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw UsageError("grid needs grid-n >= 2 and grid-hi > grid-lo");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

std::vector<double> residual_grid(const Options& o) {
    const double lo = std::isnan(o.grid_lo) ? 0.05 : o.grid_lo;
    const double hi = std::isnan(o.grid_hi) ? 5 : o.grid_hi;
    return negative_log_grid(lo, hi, o.grid_n < 0 ? 40 : o.grid_n);
}

Table cmd_density(const Options& o) {
    Table t;
    t.columns = {"x", "density"};
    SpectralMeasure mu;
    if (o.dist == "kummer") {
        const FreeKummerParams p = FreeKummerParams::make(need(o.alpha, "alpha"), need(o.beta, "beta"), need(o.gamma, "gamma"));
        t.meta = {{"atom0", num(p.atom0())}, {"a", num(p.a)}, {"b", num(p.b)}, {"delta", num(p.delta)}};
        if (p.regime == KummerRegime::Sigma) t.meta.emplace_back("sigma", num(p.sigma));
        mu = kummer_measure(p);
    } else {
        const FreePoissonParams p(need(o.lambda, "lambda"), std::isnan(o.gamma) ? 1.0 : o.gamma);
        t.meta = {{"atom0", num(p.atom0())}, {"a", num(p.lo())}, {"b", num(p.hi())}};
        mu = mp_measure(p);
    }
    const double lo = std::isnan(o.grid_lo) ? mu.lo : o.grid_lo;
    const double hi = std::isnan(o.grid_hi) ? mu.hi : o.grid_hi;
    for (double x : linear_grid(lo, hi, o.grid_n < 0 ? 2001 : o.grid_n)) t.rows.push_back({x, mu.density(x)});
    return t;
}

Table cmd_moments(const Options& o) {
    const int n = o.order < 0 ? 8 : o.order;
    check_order(n, 1, 64);
    Table t;
    t.columns = {"k", "moment"};
    SpectralMeasure mu;
    if (o.dist == "kummer")
        mu = kummer_measure(need(o.alpha, "alpha"), need(o.beta, "beta"), need(o.gamma, "gamma"));
    else
        mu = mp_measure(FreePoissonParams(need(o.lambda, "lambda"), std::isnan(o.gamma) ? 1.0 : o.gamma));
    for (int k = 1; k <= n; ++k) t.rows.push_back({double(k), mu.moment(k)});
    return t;
}

Table cmd_endpoints(const Options& o) {
    const FreeKummerParams p = FreeKummerParams::make(need(o.alpha, "alpha"), need(o.beta, "beta"), need(o.gamma, "gamma"));
    Table t;
    t.meta = {{"regime", p.regime == KummerRegime::General          ? "general"
                         : p.regime == KummerRegime::ShiftedPoisson ? "shifted-poisson"
                                                                    : "sigma"}};
    t.columns = {"a", "b", "delta", "sigma", "endpoint_residual"};
    t.rows.push_back({p.a, p.b, p.delta, p.sigma, kummer_endpoint_residual(p.alpha, p.beta, p.gamma, {p.a, p.b})});
    return t;
}

Table cmd_subordination(const Options& o) {
    const int n = o.order < 0 ? 8 : o.order;
    check_order(n, 1, 16);
    const double tol = std::isnan(o.tol) ? 1e-8 : o.tol;
    check_tol(tol);
    const HvInstance inst = hv_instance(need(o.alpha, "alpha"), need(o.beta, "beta"), need(o.gamma, "gamma"));
    const SubordinationSeries s = subordination_series_t(inst.oracle, n);
    std::vector<double> zs;
    if (!std::isnan(o.z))
        zs = {o.z};
    else
        zs = residual_grid(o);
    const SpectralMeasure mu_Y = inst.mu_Y;
    RealFn M_Y = [mu_Y](double t) { return measure_moment_transform(mu_Y, t); };
    Table t;
    t.meta = {{"series_order", std::to_string(n)}, {"tol", num(tol)}};
    t.columns = {"z", "M_U", "omega1", "omega2", "omega2_series", "series_agrees"};
    for (double z : zs) {
        if (!(z < 0)) throw DomainError("subordination values are computed for z < 0");
        const double m = inst.transforms.M_U(z);
        const double w2 = inst.transforms.omega2(z);
        const double w1 = invert_M_on_negative_axis(M_Y, m);
        const double ser = s.omega2.evaluate(cplx(z)).real();
        t.rows.push_back({z, m, w1, w2, ser, std::abs(ser - w2) <= tol ? 1.0 : 0.0});
    }
    return t;
}

SuiteReport cmd_verify(const Options& o) {
    if (o.suite == "hv") {
        const int n = o.order < 0 ? 8 : o.order;
        check_order(n, 1, 8);
        return suite_hv(need(o.alpha, "alpha"), need(o.beta, "beta"), need(o.gamma, "gamma"), n,
                        std::isnan(o.tol) ? 1e-6 : o.tol, o.exploratory);
    }
    if (o.suite == "k") {
        const int n = o.order < 0 ? 6 : o.order;
        check_order(n, 2, 8);
        return suite_k(o.seed, n, std::isnan(o.tol) ? 1e-8 : o.tol);
    }
    if (o.suite == "subordination") {
        const int n = o.order < 0 ? 8 : o.order;
        check_order(n, 1, 12);
        return suite_subordination(o.seed, n, std::isnan(o.tol) ? 1e-9 : o.tol, residual_grid(o));
    }
    if (o.suite == "partitions") return suite_partitions(o.seed, std::isnan(o.tol) ? 1e-10 : o.tol);
    if (o.characterization == 0) throw UsageError("characterize needs --case");
    return suite_characterize(o.characterization, need(o.alpha, "alpha"), need(o.beta, "beta"),
                              need(o.gamma, "gamma"), std::isnan(o.tol) ? 1e-5 : o.tol, residual_grid(o));
}

void write_report(const SuiteReport& r, const Options& o, std::ostream& out) {
    if (o.format == "csv") {
        out << "name,value\n";
        for (const auto& [n, v] : r.residuals) out << '"' << n << "\"," << num(v) << "\n";
        out << "max_residual," << num(r.max_residual) << "\n";
        out << "pass," << (r.pass ? (*r.pass ? "true" : "false") : "") << "\n";
        return;
    }
    Json j;
    j["version"] = cli_version;
    j["command"] = "verify";
    j["params"] = params_json(o, "verify");
    Json res;
    res["suite"] = r.suite;
    Json arr = Json::array();
    for (const auto& [n, v] : r.residuals) arr.push_back(Json{{"name", n}, {"residual", v}});
    res["residuals"] = arr;
    res["max_residual"] = r.max_residual;
    if (!r.values.empty()) {
        Json vals = Json::object();
        for (const auto& [n, v] : r.values) vals[n] = v;
        res["values"] = vals;
    }
    j["results"] = res;
    j["pass"] = r.pass ? Json(*r.pass) : Json(nullptr);
    out << j.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Free-Kummer and free Poisson laws: densities, moments and verification suites", "freekummer"};
    app.require_subcommand(1);
    Options o;

    auto add_params = [&o](CLI::App* c) {
        c->add_option("--alpha", o.alpha, "alpha");
        c->add_option("--beta", o.beta, "beta");
        c->add_option("--gamma", o.gamma, "gamma (scale for --dist mp)");
        c->add_option("--lambda", o.lambda, "free Poisson rate");
    };
    auto add_grid = [&o](CLI::App* c) {
        c->add_option("--grid-lo", o.grid_lo, "grid start (|z| for negative grids)");
        c->add_option("--grid-hi", o.grid_hi, "grid end");
        c->add_option("--grid-n", o.grid_n, "grid points")->check(CLI::PositiveNumber);
    };
    auto add_format = [&o](CLI::App* c, const char* def) {
        o.format = "";
        c->add_option("--format", o.format, std::string("output format (default ") + def + ")")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* density = app.add_subcommand("density", "density on a grid");
    density->add_option("--dist", o.dist)->check(CLI::IsMember({"kummer", "mp"}));
    add_params(density);
    add_grid(density);
    add_format(density, "csv");

    CLI::App* moments = app.add_subcommand("moments", "moments by quadrature");
    moments->add_option("--dist", o.dist)->check(CLI::IsMember({"kummer", "mp"}));
    add_params(moments);
    moments->add_option("-n,--order", o.order, "highest order");
    add_format(moments, "csv");

    CLI::App* endpoints = app.add_subcommand("endpoints", "support endpoints of K(alpha, beta, gamma)");
    add_params(endpoints);
    add_format(endpoints, "csv");

    CLI::App* subord = app.add_subcommand("subordination", "omega values of the HV pair on the negative axis");
    add_params(subord);
    subord->add_option("--z", o.z, "single point z < 0");
    subord->add_option("--order,-n", o.order, "series order");
    subord->add_option("--tol", o.tol, "agreement tolerance for the series flag");
    add_grid(subord);
    add_format(subord, "csv");

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", o.suite, "hv | k | subordination | partitions | characterize")
        ->required()
        ->check(CLI::IsMember({"hv", "k", "subordination", "partitions", "characterize"}));
    add_params(verify);
    verify->add_option("--order,-n", o.order, "series or moment order");
    verify->add_option("--tol", o.tol, "pass tolerance");
    verify->add_option("--seed", o.seed, "seed for randomized pairs");
    verify->add_option("--case", o.characterization, "characterization case")->check(CLI::IsMember({1, 2, 3}));
    verify->add_flag("--exploratory", o.exploratory, "allow parameters outside the proven regime");
    add_grid(verify);
    add_format(verify, "json");

    std::vector<std::string> argv_store{"freekummer"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    std::ostringstream buf;
    try {
        if (verify->parsed()) {
            if (o.format.empty()) o.format = "json";
            const SuiteReport r = cmd_verify(o);
            write_report(r, o, buf);
            out << buf.str();
            return r.pass.value_or(true) ? 0 : 1;
        }
        if (o.format.empty()) o.format = "csv";
        std::string command;
        Table t;
        if (density->parsed()) {
            command = "density";
            t = cmd_density(o);
        } else if (moments->parsed()) {
            command = "moments";
            t = cmd_moments(o);
        } else if (endpoints->parsed()) {
            command = "endpoints";
            t = cmd_endpoints(o);
        } else {
            command = "subordination";
            t = cmd_subordination(o);
        }
        write_table(t, o, command, buf);
        out << buf.str();
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "regime error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    }
    return 2;
}

}  // namespace fk
