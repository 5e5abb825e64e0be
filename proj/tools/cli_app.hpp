#pragma once

// zeropack command-line front end. run() is kept in a header so the tests can
// drive it with in-memory streams.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <zeropack/zeropack.hpp>

namespace zeropack::cli
{

using nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numeric = 3;

/// Thrown for parameter problems found after parsing; maps to exit 2.
struct usage_error : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

inline ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

inline ordered_json complex_list_json(const std::vector<Complex> &v)
{
    ordered_json out = ordered_json::array();
    for (const Complex &z : v) {
        out.push_back(complex_json(z));
    }
    return out;
}

inline ordered_json report_json(const DiscrepancyReport &r)
{
    return {{"rho", r.rho}, {"m1", r.m1}, {"m2", r.m2}, {"b_opt", r.b_opt}, {"error_estimate", r.error_estimate}};
}

/// Accepts a JSON array whose entries are numbers, [re, im] pairs or
/// {"re": x, "im": y} objects. A leading '@' reads the JSON from a file.
inline std::vector<Complex> parse_coefficients(const std::string &text)
{
    std::string body = text;
    if (!body.empty() && body.front() == '@') {
        std::ifstream in(body.substr(1));
        if (!in) {
            throw usage_error("cannot read coefficient file " + body.substr(1));
        }
        std::stringstream ss;
        ss << in.rdbuf();
        body = ss.str();
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error &e) {
        throw usage_error(std::string("--coeffs: invalid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) {
        throw usage_error("--coeffs: expected a nonempty JSON array");
    }
    std::vector<Complex> out;
    for (const auto &e : j) {
        if (e.is_number()) {
            out.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else if (e.is_object() && e.contains("re") && e["re"].is_number()) {
            const double im = e.contains("im") && e["im"].is_number() ? e["im"].get<double>() : 0.0;
            out.emplace_back(e["re"].get<double>(), im);
        } else {
            throw usage_error("--coeffs: entries must be numbers, [re, im] pairs or {re, im} objects");
        }
        if (!is_finite(out.back())) {
            throw usage_error("--coeffs: non-finite coefficient");
        }
    }
    return out;
}

inline std::vector<double> parse_beta_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
            throw usage_error("--betas: empty entry");
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item.substr(first), &used);
        } catch (const std::exception &) {
            throw usage_error("--betas: cannot parse '" + item + "'");
        }
        if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
            throw usage_error("--betas: cannot parse '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw usage_error("--betas: empty list");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0) || !std::isfinite(out[i])) {
            throw usage_error("--betas: values must be positive");
        }
        if (i > 0 && !(out[i] > out[i - 1])) {
            throw usage_error("--betas: values must be strictly increasing");
        }
    }
    return out;
}

/// The flag value, replaced by ZEROPACK_THREADS when that is set; 0 means
/// the machine's hardware concurrency.
inline unsigned resolve_threads(unsigned flag)
{
    unsigned t = flag;
    if (const char *env = std::getenv("ZEROPACK_THREADS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v <= 0 || v > 4096) {
            throw usage_error("ZEROPACK_THREADS must be a positive integer");
        }
        t = static_cast<unsigned>(v);
    }
    if (t == 0) {
        t = std::max(1u, std::thread::hardware_concurrency());
    }
    return t;
}

struct Options
{
    unsigned threads_flag = 0;
    std::string out_path;
    bool timing = false;

    double beta = 1.0;
    int grid = 1024;

    std::string betas;

    std::string mode;
    double b = 0.0;
    std::optional<double> big_r;
    std::optional<double> small_r;
    int trials = 400;
    std::uint64_t seed = 0;
    std::optional<int> truncation;

    int n = 2;
    bool flow = false;
    double step = 0.5;
    int iters = 500;
    double tol = 1e-9;
    int polar = 256;
    int azimuth = 512;

    std::string coeffs;
    double r = 0.9;
    double alpha = 1.0;
    bool tight = false;
    int radial = 2048;
    int angular = 512;

    double omega = 0.25;
    bool solve = false;
    int fock_iters = 200;
    double fock_tol = 1e-12;
};

class Runner
{
public:
    Runner(std::ostream &out, std::ostream &err) : m_out(out), m_err(err) {}

    int run(int argc, const char *const *argv)
    {
        CLI::App app{"Zero packing discrepancy densities"};
        app.require_subcommand(1, 1);
        Options o;
        auto common = [&o](CLI::App *sub) {
            sub->add_option("--threads", o.threads_flag, "Worker threads (0 = hardware concurrency)")
                ->check(CLI::NonNegativeNumber);
            sub->add_option("--out", o.out_path, "Write the report here instead of stdout");
            sub->add_flag("--timing", o.timing, "Add wall time to the provenance block");
        };

        CLI::App *planar = app.add_subcommand("planar", "Triangular-lattice density rho_beta");
        planar->add_option("--beta", o.beta, "Exponent beta")->required()->check(CLI::PositiveNumber);
        planar->add_option("--grid", o.grid, "Midpoint grid size per side")->check(CLI::Range(16, 1 << 14));
        common(planar);

        CLI::App *curve = app.add_subcommand("curve", "rho_beta over a list of beta, as CSV");
        curve->add_option("--betas", o.betas, "Comma-separated increasing list")->required();
        curve->add_option("--grid", o.grid, "Midpoint grid size per side")->check(CLI::Range(16, 1 << 14));
        common(curve);

        CLI::App *gaf = app.add_subcommand("gaf", "Gaussian analytic function Monte Carlo");
        gaf->add_option("--mode", o.mode, "planar or hyperbolic")
            ->required()
            ->check(CLI::IsMember({"planar", "hyperbolic"}));
        gaf->add_option("--b", o.b, "Amplitude b")->required()->check(CLI::PositiveNumber);
        gaf->add_option("--R", o.big_r, "Planar disk radius")->check(CLI::PositiveNumber);
        gaf->add_option("--r", o.small_r, "Hyperbolic disk radius in (0, 1)")->check(CLI::Range(0.0, 1.0));
        gaf->add_option("--trials", o.trials, "Number of trials")->check(CLI::Range(2, 1000000));
        gaf->add_option("--seed", o.seed, "64-bit seed");
        gaf->add_option("--N", o.truncation, "Series truncation (default: smallest passing the tail bound)")
            ->check(CLI::PositiveNumber);
        common(gaf);

        CLI::App *sphere = app.add_subcommand("sphere", "Spherical monopole ensembles");
        CLI::App *flow = app.add_subcommand("flow", "Same as sphere --flow");
        for (CLI::App *sub : {sphere, flow}) {
            sub->add_option("--n", o.n, "Number of points")->check(CLI::Range(1, 10000));
            sub->add_option("--beta", o.beta, "Exponent beta")->check(CLI::Range(1e-12, 30.0));
            sub->add_option("--step", o.step, "Initial step size")->check(CLI::PositiveNumber);
            sub->add_option("--iters", o.iters, "Maximum flow iterations")->check(CLI::NonNegativeNumber);
            sub->add_option("--tol", o.tol, "Equilibrium residual tolerance")->check(CLI::NonNegativeNumber);
            sub->add_option("--seed", o.seed, "64-bit seed for the starting points");
            sub->add_option("--polar", o.polar, "Gauss nodes in theta")->check(CLI::Range(2, 1 << 14));
            sub->add_option("--azimuth", o.azimuth, "Uniform azimuth nodes (even)")->check(CLI::Range(4, 1 << 15));
            common(sub);
        }
        sphere->add_flag("--flow", o.flow, "Run the gradient flow");

        CLI::App *hyper = app.add_subcommand("hyperbolic", "Discrepancy of a candidate on D(0, r)");
        hyper->add_option("--coeffs", o.coeffs, "JSON array of coefficients")->required();
        hyper->add_option("--r", o.r, "Radius in (0, 1)")->required();
        hyper->add_option("--alpha", o.alpha, "Weight exponent alpha")->check(CLI::PositiveNumber);
        hyper->add_option("--beta", o.beta, "Modulus exponent beta")->check(CLI::PositiveNumber);
        hyper->add_flag("--tight", o.tight, "Tight variant over the whole disk");
        hyper->add_option("--radial", o.radial, "Radial Gauss nodes")->check(CLI::Range(2, 1 << 16));
        hyper->add_option("--angular", o.angular, "Angular nodes")->check(CLI::Range(2, 1 << 16));
        common(hyper);

        CLI::App *fock = app.add_subcommand("fock", "Cubic Bargmann-Fock projection");
        fock->add_option("--coeffs", o.coeffs, "JSON array of coefficients")->required();
        fock->add_option("--omega", o.omega, "Frequency omega")->required();
        fock->add_flag("--solve", o.solve, "Run the normalized fixed-point iteration");
        fock->add_option("--iters", o.fock_iters, "Maximum iterations")->check(CLI::Range(1, 1000000));
        fock->add_option("--tol", o.fock_tol, "Residual tolerance")->check(CLI::NonNegativeNumber);
        common(fock);

        CLI::App *verify = app.add_subcommand("verify", "Check the lower-bound proof constants");
        common(verify);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, m_out, m_err);
            return code == 0 ? exit_ok : exit_validation;
        }

        try {
            const unsigned threads = resolve_threads(o.threads_flag);
            if (planar->parsed()) {
                return run_planar(o, threads);
            }
            if (curve->parsed()) {
                return run_curve(o, threads);
            }
            if (gaf->parsed()) {
                return run_gaf(o, threads);
            }
            if (sphere->parsed() || flow->parsed()) {
                o.flow = o.flow || flow->parsed();
                return run_sphere(o, threads);
            }
            if (hyper->parsed()) {
                return run_hyperbolic(o, threads);
            }
            if (fock->parsed()) {
                return run_fock(o);
            }
            return run_verify(o);
        } catch (const numeric_error &e) {
            m_err << "numeric failure: " << e.what() << '\n';
            return exit_numeric;
        } catch (const std::domain_error &e) {
            m_err << "numeric failure: " << e.what() << '\n';
            return exit_numeric;
        } catch (const std::overflow_error &e) {
            m_err << "numeric failure: " << e.what() << '\n';
            return exit_numeric;
        } catch (const std::invalid_argument &e) {
            m_err << "invalid input: " << e.what() << '\n';
            return exit_validation;
        } catch (const std::ios_base::failure &e) {
            m_err << "i/o error: " << e.what() << '\n';
            return exit_validation;
        }
    }

private:
    using Clock = std::chrono::steady_clock;

    std::ostream &m_out;
    std::ostream &m_err;
    std::ofstream m_file;
    Clock::time_point m_start;

    // Opens --out before any computation so an unwritable path fails early.
    std::ostream &sink(const Options &o)
    {
        m_start = Clock::now();
        if (o.out_path.empty()) {
            return m_out;
        }
        m_file.open(o.out_path, std::ios::out | std::ios::trunc | std::ios::binary);
        if (!m_file) {
            throw usage_error("cannot open output file " + o.out_path);
        }
        return m_file;
    }

    ordered_json provenance(const Options &o, const std::string &anchor, unsigned threads) const
    {
        ordered_json p;
        p["anchor"] = anchor;
        p["threads"] = threads;
        if (o.timing) {
            p["wall_seconds"] = std::chrono::duration<double>(Clock::now() - m_start).count();
        }
        return p;
    }

    static void emit(std::ostream &os, const ordered_json &j)
    {
        os << j.dump(2) << '\n';
        os.flush();
        if (!os) {
            throw std::ios_base::failure("write failed");
        }
    }

    int run_planar(const Options &o, unsigned threads)
    {
        std::ostream &os = sink(o);
        const DiscrepancyReport r = planar_lattice_density(o.beta, o.grid, threads);
        ordered_json j;
        j["command"] = "planar";
        j["beta"] = o.beta;
        j.update(report_json(r));
        j["inverse_one_minus_rho"] = 1.0 / (1.0 - r.rho);
        ordered_json prov = provenance(o, "triangular lattice sigma profile, midpoint rule on one fundamental rhombus", threads);
        prov["grid"] = o.grid;
        prov["coarse_grid"] = o.grid / 2;
        j["provenance"] = prov;
        emit(os, j);
        return exit_ok;
    }

    int run_curve(const Options &o, unsigned threads)
    {
        const std::vector<double> betas = parse_beta_list(o.betas);
        std::ostream &os = sink(o);
        write_curve_csv(os, density_curve(betas, o.grid, threads));
        os.flush();
        if (!os) {
            throw std::ios_base::failure("write failed");
        }
        return exit_ok;
    }

    int run_gaf(const Options &o, unsigned threads)
    {
        ordered_json j;
        j["command"] = "gaf";
        j["mode"] = o.mode;
        j["b"] = o.b;
        McEstimate est;
        double expected = 0.0;
        ordered_json prov;
        if (o.mode == "planar") {
            if (!o.big_r || o.small_r) {
                throw usage_error("gaf --mode planar takes --R");
            }
            std::ostream &os = sink(o);
            est = planar_gaf_mc(*o.big_r, o.b, o.truncation, o.trials, o.seed, threads);
            expected = planar_gaf_expected(o.b);
            j["R"] = *o.big_r;
            prov = provenance(o, "planar GAF with unit-intensity zeros, average over D(0,R)", threads);
            const PolarGrid g = default_planar_grid(*o.big_r);
            prov["grid"] = {{"radial", g.radial}, {"angular", g.angular}};
            return finish_gaf(os, j, est, expected, o, prov);
        }
        if (!o.small_r || o.big_r) {
            throw usage_error("gaf --mode hyperbolic takes --r");
        }
        if (!(*o.small_r > 0.0 && *o.small_r < 1.0)) {
            throw usage_error("--r must lie in (0, 1)");
        }
        std::ostream &os = sink(o);
        const DiskGrid grid{};
        est = hyperbolic_gaf_mc(*o.small_r, o.b, o.truncation, o.trials, o.seed, threads, grid);
        expected = hyperbolic_gaf_expected(o.b);
        j["r"] = *o.small_r;
        prov = provenance(o, "hyperbolic GAF, hyperbolic average over D(0,r)", threads);
        prov["grid"] = {{"radial", grid.radial}, {"angular", grid.angular}};
        return finish_gaf(os, j, est, expected, o, prov);
    }

    int finish_gaf(std::ostream &os, ordered_json &j, const McEstimate &est, double expected, const Options &o,
                   ordered_json prov)
    {
        j["trials"] = o.trials;
        j["seed"] = o.seed;
        j["truncation"] = est.truncation;
        j["mean"] = est.mean;
        j["stderr"] = est.std_error;
        j["expected"] = expected;
        j["z_score"] = est.std_error > 0.0 ? (est.mean - expected) / est.std_error : 0.0;
        prov["seed"] = o.seed;
        j["provenance"] = prov;
        emit(os, j);
        return exit_ok;
    }

    int run_sphere(const Options &o, unsigned threads)
    {
        if (o.azimuth % 2 != 0) {
            throw usage_error("--azimuth must be even");
        }
        if (!(o.beta > 0.0)) {
            throw usage_error("--beta must be positive");
        }
        std::ostream &os = sink(o);
        const SphereQuadrature quad(o.polar, o.azimuth);
        RngStream rng(o.seed, 0);
        SphereConfiguration config = random_configuration(o.n, rng);

        int iters = 0;
        ordered_json j;
        j["command"] = "sphere";
        j["n"] = o.n;
        j["beta"] = o.beta;
        if (o.flow) {
            FlowOptions fo;
            fo.step = o.step;
            fo.max_iters = o.iters;
            fo.tol = o.tol;
            fo.threads = threads;
            FlowResult fr = gradient_flow(std::move(config), o.beta, fo, quad);
            config = fr.config;
            iters = fr.iterations;
            ordered_json trace = ordered_json::array();
            for (const FlowTraceRow &row : fr.trace) {
                trace.push_back({{"iter", row.iter}, {"objective", row.objective}, {"residual", row.residual}});
            }
            j["flow"] = {{"iterations", fr.iterations},
                         {"converged", fr.converged},
                         {"stalled", fr.stalled},
                         {"step", o.step},
                         {"tol", o.tol},
                         {"trace", trace}};
        }
        const DiscrepancyReport r = sphere_discrepancy(config, o.beta, quad, threads);
        j.update(report_json(r));
        j["z_beta"] = r.m1;
        j["z_2beta"] = r.m2;
        j["residual"] = equilibrium_residual(config, o.beta, quad, threads);
        j["iters"] = iters;
        ordered_json pts = ordered_json::array();
        for (const SpherePoint &p : config.points()) {
            pts.push_back({p.x, p.y, p.z});
        }
        j["points"] = pts;
        if (o.n == 1) {
            j["closed_form"] = rho1_closed(o.beta);
        } else if (o.n == 2) {
            j["p1_dot_p2"] = dot(config[0], config[1]);
            j["closed_form_antipodal"] = rho2_closed(o.beta);
        }
        ordered_json prov = provenance(o, "logarithmic monopoles on the unit-area sphere, Z_beta^2 / Z_2beta", threads);
        prov["grid"] = {{"polar", o.polar}, {"azimuth", o.azimuth}};
        prov["seed"] = o.seed;
        j["provenance"] = prov;
        emit(os, j);
        return exit_ok;
    }

    int run_hyperbolic(const Options &o, unsigned threads)
    {
        if (!(o.r > 0.0 && o.r < 1.0)) {
            throw usage_error("--r must lie in (0, 1)");
        }
        if (o.tight && (o.alpha != 1.0 || o.beta != 1.0)) {
            throw usage_error("--tight is defined for alpha = beta = 1");
        }
        const DiskFunction f(parse_coefficients(o.coeffs));
        std::ostream &os = sink(o);
        const DiskQuadrature quad(o.r, o.radial, o.angular);
        const DiskQuadrature coarse = quad.halved();

        ordered_json j;
        j["command"] = "hyperbolic";
        j["r"] = o.r;
        j["alpha"] = o.alpha;
        j["beta"] = o.beta;
        j["degree"] = f.degree();
        const double value = hyperbolic_discrepancy(f, o.r, o.alpha, o.beta, quad, threads);
        const double value_coarse = hyperbolic_discrepancy(f, o.r, o.alpha, o.beta, coarse, threads);
        j["value"] = value;
        j["error_estimate"] = std::abs(value - value_coarse);
        if (o.tight) {
            const TightDiscrepancy t = tight_discrepancy(f, o.r, quad, threads);
            j["tight"] = {{"value", t.value}, {"inner", t.inner}, {"annulus", t.annulus}, {"tail_bound", t.tail}};
        }
        j["kind"] = "upper_bound_witness";
        j["proven_lower_bound"] = 2e-8;
        ordered_json prov = provenance(o, "candidate average over D(0,r) in the measure dA/(1-|z|^2)", threads);
        prov["grid"] = {{"radial", o.radial}, {"angular", o.angular}};
        j["provenance"] = prov;
        emit(os, j);
        return exit_ok;
    }

    int run_fock(const Options &o)
    {
        if (!std::isfinite(o.omega) || (o.solve && o.omega == 0.0)) {
            throw usage_error("--omega must be finite and nonzero");
        }
        FockPolynomial f{parse_coefficients(o.coeffs)};
        if (f.degree() > fock_default_degree_cap) {
            throw usage_error("--coeffs: degree exceeds 64");
        }
        std::ostream &os = sink(o);
        ordered_json j;
        j["command"] = "fock";
        j["omega"] = o.omega;
        j["projection"] = complex_list_json(cubic_projection(f).coeffs);
        j["residual"] = stationary_residual(f, o.omega);
        int code = exit_ok;
        if (o.solve) {
            const FixedPointResult fp = fixed_point_solve(f, o.omega, o.fock_iters, o.fock_tol);
            j["solve"] = {{"solution", complex_list_json(fp.solution.coeffs)},
                          {"converged", fp.converged},
                          {"diverged", fp.diverged},
                          {"iterations", fp.residual_history.size() - 1},
                          {"residual_history", fp.residual_history}};
            if (fp.diverged) {
                m_err << "fixed-point iteration diverged\n";
                code = exit_numeric;
            }
        }
        ordered_json prov = provenance(o, "Gaussian moment formula for the lowest-Landau-level cubic projection", 1);
        prov["degree_cap"] = fock_default_degree_cap;
        j["provenance"] = prov;
        emit(os, j);
        return code;
    }

    int run_verify(const Options &o)
    {
        std::ostream &os = sink(o);
        const ProofConstantsReport rep = proof_constants_report();
        auto check = [](const ThresholdCheck &c) {
            return ordered_json{{"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
        };
        ordered_json j;
        j["case_iia"] = check(rep.case_iia);
        j["case_iiba"] = check(rep.case_iiba);
        j["case_iibb"] = check(rep.case_iibb);
        j["rho1"] = rep.rho1;
        j["rho2"] = rep.rho2;
        j["final_bound"] = check(rep.final_bound);
        emit(os, j);
        return rep.all_pass() ? exit_ok : exit_numeric;
    }
};

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    Runner runner(out, err);
    return runner.run(argc, argv);
}

} // namespace zeropack::cli
