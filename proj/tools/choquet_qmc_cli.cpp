// choquet-qmc: command-line front end.
//
//   integrate    estimate a distortion Choquet integral (QMC or MC), optionally with an error certificate
//   compare      QMC vs MC sweep over n, written as CSV (n,qmc,mc,seed)
//   discrepancy  star discrepancy of a Halton / pseudo-random / CSV point set
//   bound        error certificate for the QMC estimate
//
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "choquet_qmc.hpp"

namespace cq = choquet_qmc;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FunctionOptions {
    std::string function;
    std::size_t dim = 0;
    CLI::Option* dim_opt = nullptr;
    std::string psi = "avar:0.05";
    double lipschitz = 0.0;
    CLI::Option* lipschitz_opt = nullptr;
    double sup_norm = 0.0;
    CLI::Option* sup_norm_opt = nullptr;
};

struct PointOptions {
    std::size_t n = 4096;
    std::uint64_t seed = 0;
    std::uint64_t start_index = 1;
    bool halton = false;
    bool random = false;
    std::string input;
    std::string out;
};

struct DiscrepancyOptions {
    std::string mode = "auto";
    std::size_t grid = 8;
    double budget = cq::kDefaultDiscrepancyBudget;
};

void add_function_options(CLI::App* cmd, FunctionOptions& o) {
    cmd->add_option("--function", o.function, "builtin:<name> or expr:<text> (see docs/expressions.md)")->required();
    o.dim_opt = cmd->add_option("--dim", o.dim, "dimension d of the integration domain [0,1]^d");
    cmd->add_option("--psi", o.psi, "distortion: avar:<l> | power:<a> | identity | pwl:t1,y1;t2,y2;...")
        ->capture_default_str();
    o.lipschitz_opt = cmd->add_option("--lipschitz", o.lipschitz, "Lipschitz constant of f (max norm)");
    o.sup_norm_opt = cmd->add_option("--sup-norm", o.sup_norm, "bound on max |f|");
}

void add_discrepancy_options(CLI::App* cmd, DiscrepancyOptions& o) {
    cmd->add_option("--discrepancy-mode", o.mode, "auto | exact | lower")
        ->check(CLI::IsMember({"auto", "exact", "lower"}))
        ->capture_default_str();
    cmd->add_option("--grid", o.grid, "grid points per dimension for the lower bound")->capture_default_str();
    cmd->add_option("--budget", o.budget, "work budget for exact enumeration")->capture_default_str();
}

cq::Distortion make_psi(const std::string& spec) {
    try {
        return cq::parse_distortion(spec);
    } catch (const cq::InvalidInput& e) {
        throw UsageError(std::string("--psi: ") + e.what() + " (grammar: avar:<l> | power:<a> | identity | pwl:t,y;...)");
    }
}

cq::Integrand make_function(const FunctionOptions& o) {
    std::optional<std::size_t> dim;
    if (*o.dim_opt) dim = o.dim;
    try {
        cq::Integrand f = cq::parse_function_spec(o.function, dim);
        if (*o.lipschitz_opt) f = f.with_lipschitz_constant(o.lipschitz);
        if (*o.sup_norm_opt) f = f.with_sup_norm_bound(o.sup_norm);
        return f;
    } catch (const cq::ParseError& e) {
        throw UsageError(std::string("--function: ") + e.what() + " (grammar: docs/expressions.md)");
    } catch (const cq::InvalidInput& e) {
        throw UsageError(std::string("--function: ") + e.what());
    }
}

cq::PointSet make_points(const PointOptions& o, std::size_t dim) {
    if (static_cast<int>(o.halton) + static_cast<int>(o.random) + static_cast<int>(!o.input.empty()) > 1)
        throw UsageError("choose at most one of --halton, --random, --input");
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw std::runtime_error("cannot open " + o.input);
        cq::PointSet p = cq::read_csv(in);
        if (dim != 0 && p.dim() != dim)
            throw UsageError("--input has dimension " + std::to_string(p.dim()) + " but --dim is " + std::to_string(dim));
        return p;
    }
    if (dim == 0) throw UsageError("--dim is required unless --input is given");
    if (o.n < 1) throw UsageError("--n must be >= 1");
    if (o.random) return cq::pseudo_random(dim, o.n, o.seed);
    if (o.start_index < 1) throw UsageError("--start-index must be >= 1");
    return cq::halton(dim, o.n, o.start_index);
}

cq::DiscrepancyResult compute_discrepancy(const cq::PointSet& points, const DiscrepancyOptions& o) {
    if (o.grid < 2) throw UsageError("--grid must be >= 2");
    const auto strategy = o.mode == "exact"   ? cq::DiscrepancyStrategy::Exact
                          : o.mode == "lower" ? cq::DiscrepancyStrategy::LowerBound
                                              : cq::DiscrepancyStrategy::Auto;
    return cq::star_discrepancy(points, strategy, o.grid, o.budget);
}

json to_json(const cq::DiscrepancyResult& r) {
    return {{"value", r.value}, {"mode", cq::to_string(r.mode)}, {"n", r.n}, {"dim", r.dim}};
}

json to_json(const cq::ErrorBound& b, const cq::Distortion& psi) {
    json j = {{"branch", cq::to_string(b.branch)}, {"constant", b.constant}};
    j["value"] = b.branch == cq::BoundBranch::NoCertificate ? json(nullptr) : json(b.value);
    j["rho"] = b.rho ? json(*b.rho) : json(nullptr);
    j["discrepancy"] = b.discrepancy ? to_json(*b.discrepancy) : json(nullptr);
    const auto d0 = psi.right_derivative(0.0);
    j["psi_right_derivative_at_zero"] = d0.is_finite() ? json(d0.value()) : json("inf");
    if (!b.reason.empty()) j["reason"] = b.reason;
    return j;
}

void write_points_if_requested(const PointOptions& o, const cq::PointSet& points) {
    if (o.out.empty()) return;
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot write " + o.out);
    cq::write_csv(out, points);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-Monte Carlo integration of distortion Choquet integrals"};
    app.require_subcommand(1);

    // integrate
    FunctionOptions int_f;
    PointOptions int_p;
    DiscrepancyOptions int_d;
    std::string int_method = "qmc";
    bool int_bound = false;
    auto* integrate = app.add_subcommand("integrate", "estimate the Choquet integral of f(U)");
    add_function_options(integrate, int_f);
    integrate->add_option("--n", int_p.n, "number of points")->capture_default_str();
    integrate->add_option("--method", int_method, "qmc | mc")->check(CLI::IsMember({"qmc", "mc"}))->capture_default_str();
    integrate->add_option("--seed", int_p.seed, "seed for --method mc")->capture_default_str();
    integrate->add_option("--start-index", int_p.start_index, "first Halton index")->capture_default_str();
    integrate->add_flag("--bound", int_bound, "also report the error certificate");
    add_discrepancy_options(integrate, int_d);

    // compare
    FunctionOptions cmp_f;
    cq::SweepSpec sweep;
    std::string cmp_out;
    bool cmp_progress = false;
    auto* compare = app.add_subcommand("compare", "QMC vs MC estimates over an n sweep, as CSV");
    add_function_options(compare, cmp_f);
    compare->add_option("--n-start", sweep.n_start)->capture_default_str();
    compare->add_option("--n-end", sweep.n_end)->capture_default_str();
    compare->add_option("--n-step", sweep.n_step)->capture_default_str();
    compare->add_option("--seed", sweep.seed, "seed of the MC stream")->capture_default_str();
    compare->add_option("--start-index", sweep.start_index, "first Halton index")->capture_default_str();
    compare->add_option("--out", cmp_out, "CSV path (stdout if omitted)");
    compare->add_flag("--progress", cmp_progress, "row counter on stderr");

    // discrepancy
    PointOptions disc_p;
    DiscrepancyOptions disc_d;
    std::size_t disc_dim = 0;
    auto* discrepancy = app.add_subcommand("discrepancy", "star discrepancy of a point set");
    discrepancy->add_option("--dim", disc_dim);
    discrepancy->add_option("--n", disc_p.n)->capture_default_str();
    discrepancy->add_flag("--halton", disc_p.halton, "Halton points (default)");
    discrepancy->add_flag("--random", disc_p.random, "pseudo-random points");
    discrepancy->add_option("--seed", disc_p.seed)->capture_default_str();
    discrepancy->add_option("--start-index", disc_p.start_index)->capture_default_str();
    discrepancy->add_option("--input", disc_p.input, "point CSV (header u1,...,ud)");
    discrepancy->add_option("--out", disc_p.out, "also write the point set as CSV");
    add_discrepancy_options(discrepancy, disc_d);

    // bound
    FunctionOptions bnd_f;
    PointOptions bnd_p;
    DiscrepancyOptions bnd_d;
    auto* bound = app.add_subcommand("bound", "error certificate for the QMC estimate");
    add_function_options(bound, bnd_f);
    bound->add_option("--n", bnd_p.n)->capture_default_str();
    bound->add_flag("--halton", bnd_p.halton, "Halton points (default)");
    bound->add_flag("--random", bnd_p.random, "pseudo-random points");
    bound->add_option("--seed", bnd_p.seed)->capture_default_str();
    bound->add_option("--start-index", bnd_p.start_index)->capture_default_str();
    bound->add_option("--input", bnd_p.input, "point CSV (header u1,...,ud)");
    add_discrepancy_options(bound, bnd_d);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*integrate) {
            const cq::Integrand f = make_function(int_f);
            const cq::Distortion psi = make_psi(int_f.psi);
            if (int_p.n < 1) throw UsageError("--n must be >= 1");
            if (int_p.start_index < 1) throw UsageError("--start-index must be >= 1");
            const cq::PointSet points = int_method == "mc" ? cq::pseudo_random(f.dim(), int_p.n, int_p.seed)
                                                           : cq::halton(f.dim(), int_p.n, int_p.start_index);
            const cq::ChoquetEstimate est = int_method == "mc" ? cq::mc_estimate(f, f.dim(), int_p.n, int_p.seed, psi)
                                                               : cq::qmc_estimate(f, points, psi);
            json j = {{"value", est.value},         {"n", est.n},
                      {"method", cq::to_string(est.method.kind)},
                      {"min_value", est.min_value}, {"max_value", est.max_value},
                      {"dim", f.dim()},             {"psi", psi.to_string()}};
            if (est.method.seed) j["seed"] = *est.method.seed;
            if (int_bound) j["bound"] = to_json(cq::theorem1_bound(f, points, psi, compute_discrepancy(points, int_d)), psi);
            std::cout << j.dump() << '\n';
        } else if (*compare) {
            const cq::Integrand f = make_function(cmp_f);
            const cq::Distortion psi = make_psi(cmp_f.psi);
            if (sweep.n_start < 1 || sweep.n_step < 1 || sweep.n_start > sweep.n_end)
                throw UsageError("need 1 <= --n-start <= --n-end and --n-step >= 1");
            std::size_t done = 0;
            auto progress = [&](const cq::CompareRow& r) {
                if (cmp_progress) std::fprintf(stderr, "\rrow %zu (n = %zu)", ++done, r.n);
            };
            std::vector<cq::CompareRow> rows;
            try {
                rows = cq::compare_sweep(f, psi, sweep, progress);
            } catch (const cq::EvaluationError& e) {
                std::size_t n = sweep.n_start;
                if (e.has_point_index())
                    while (n <= e.point_index()) n += sweep.n_step;
                throw std::runtime_error("compare: estimator failed at n = " + std::to_string(n) + ": " + e.what());
            }
            if (cmp_progress) std::fputc('\n', stderr);
            if (cmp_out.empty()) {
                cq::write_compare_csv(std::cout, rows);
            } else {
                std::ofstream out(cmp_out);
                if (!out) throw std::runtime_error("cannot write " + cmp_out);
                cq::write_compare_csv(out, rows);
                if (!out) throw std::runtime_error("error writing " + cmp_out);
            }
        } else if (*discrepancy) {
            const cq::PointSet points = make_points(disc_p, disc_dim);
            write_points_if_requested(disc_p, points);
            std::cout << to_json(compute_discrepancy(points, disc_d)).dump() << '\n';
        } else if (*bound) {
            const cq::Integrand f = make_function(bnd_f);
            const cq::Distortion psi = make_psi(bnd_f.psi);
            const cq::PointSet points = make_points(bnd_p, f.dim());
            const auto result = cq::theorem1_bound(f, points, psi, compute_discrepancy(points, bnd_d));
            std::cout << to_json(result, psi).dump() << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
