// symporder: command-line front end.  Every subcommand writes one JSON
// document (sorted keys, 17 significant digits) to stdout or --out.
//
// Exit codes: 0 success, 1 invalid input / domain error / parse error,
// 2 numerical failure or a failed verify run.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symporder/acceptance.hpp"
#include "symporder/io.hpp"
#include "symporder/maslov.hpp"
#include "symporder/order_metric.hpp"
#include "symporder/prequantization.hpp"

namespace {

using json = nlohmann::json;
using namespace symporder;

constexpr const char *kVersion = "0.1.0";
constexpr const char *kConvention =
    "maslov values in radians: total change of arg det of the unitary polar factor; "
    "the rotation loop exp(2 pi t J) in Sp(2) has value 2 pi (one turn)";

struct Config {
    double tol = kStructuralTol;
    std::size_t grid = kDefaultSamples;
    int kmax = 8;
    int nmax = 64;
    std::uint64_t seed = 7;
    std::string out;
    std::string csv;
    std::optional<double> defect;

    [[nodiscard]] json tolerances() const {
        return {{"tol", tol}, {"grid", grid}, {"kmax", kmax}, {"nmax", nmax}};
    }
};

json verdict_json(const ConeVerdict &v) {
    return {{"status", to_string(v.status)},
            {"certified", v.certified()},
            {"min_eigenvalue_over_path", v.min_eigenvalue_over_path},
            {"discretization_error", v.discretization_error},
            {"representative", to_string(v.representative)},
            {"tol", v.tol}};
}

json estimate_json(const Estimate &e) { return {{"value", e.value}, {"lo", e.lo}, {"hi", e.hi}}; }

json element_json(const quant::QuantElement &a) {
    json j = io::grid_to_json(a.func);
    j["shift"] = a.shift;
    return j;
}

void write_csv(const std::string &file, const std::string &header, const std::vector<std::pair<double, double>> &rows) {
    if (file.empty()) return;
    std::ostringstream ss;
    ss.precision(17);
    ss << header << "\n";
    for (const auto &[a, b] : rows) ss << a << "," << b << "\n";
    io::write_text(file, ss.str());
}

double defect_for(const Config &cfg, Eigen::Index dim) {
    if (cfg.defect) return *cfg.defect;
    return acceptance::empirical_defect(cfg.seed, dim);
}

quant::QuantElement element(double shift, const std::string &file) { return {shift, io::read_grid(file)}; }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Order, growth and Maslov computations on Sp(2n) paths and grid quantomorphisms"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Config cfg;
    app.add_option("--tol", cfg.tol, "structural / positivity tolerance")->check(CLI::PositiveNumber);
    app.add_option("--grid", cfg.grid, "samples for synthesized paths")->check(CLI::Range(3, 1 << 20));
    app.add_option("--kmax", cfg.kmax, "homogenization depth")->check(CLI::Range(1, 1 << 12));
    app.add_option("--nmax", cfg.nmax, "largest growth level")->check(CLI::Range(1, 1 << 20));
    app.add_option("--seed", cfg.seed, "seed for randomized runs");
    app.add_option("--out", cfg.out, "output file (default stdout)");

    std::string path, path_x, path_y, func, func_b, matrix_file, family_file, suite = "all", fam = "general";
    double s = 0.0, t = 0.0, target = 0.0;
    int dim = 2, pairs = 64;
    bool with_trace = false;

    auto *c_maslov = app.add_subcommand("maslov", "Maslov index of a path");
    c_maslov->add_option("--path", path, "path file")->required();
    c_maslov->add_flag("--trace", with_trace, "also evaluate the trace quadrature (unitary paths)");

    auto *c_cone = app.add_subcommand("cone", "classify a path against the positive cone");
    c_cone->add_option("--path", path, "path file")->required();

    auto *c_order = app.add_subcommand("order", "certify Y <= X");
    c_order->add_option("--lower", path_y, "path file for Y")->required();
    c_order->add_option("--upper", path_x, "path file for X")->required();

    auto *c_synth = app.add_subcommand("synth-positive", "positive path from 1 to a symmetric positive symplectic P");
    c_synth->add_option("--matrix", matrix_file, "matrix file")->required();

    auto *c_redis = app.add_subcommand("redistribute", "PSD logarithm of e^{iA} with prescribed trace");
    c_redis->add_option("--hermitian", matrix_file, "hermitian matrix file")->required();
    c_redis->add_option("--target", target, "target trace (radians)")->required();

    auto *c_gamma = app.add_subcommand("gamma", "relative growth gamma(X, Y)");
    c_gamma->add_option("--x", path_x, "dominant path X")->required();
    c_gamma->add_option("--y", path_y, "path Y")->required();
    c_gamma->add_option("--defect", cfg.defect, "quasimorphism defect bound (default: sampled)");
    c_gamma->add_option("--csv", cfg.csv, "write the gamma_n series as CSV");

    auto *c_k = app.add_subcommand("kdist", "pseudo-distance K(X, Y)");
    c_k->add_option("--x", path_x, "dominant path X")->required();
    c_k->add_option("--y", path_y, "dominant path Y")->required();
    c_k->add_option("--defect", cfg.defect, "quasimorphism defect bound (default: sampled)");

    auto *c_z = app.add_subcommand("zcoord", "coordinate of a dominant on Z");
    c_z->add_option("--path", path, "dominant path")->required();
    c_z->add_option("--defect", cfg.defect, "quasimorphism defect bound (default: sampled)");
    c_z->add_option("--csv", cfg.csv, "write mu(X^k)/k as CSV");

    auto *c_def = app.add_subcommand("defect-sample", "sampled quasimorphism defect");
    c_def->add_option("--dim", dim, "matrix dimension 2n")->check(CLI::Range(2, 64));
    c_def->add_option("--pairs", pairs, "number of random pairs")->check(CLI::Range(1, 100000));
    c_def->add_option("--family", fam, "general | commuting | loops")
        ->check(CLI::IsMember({"general", "commuting", "loops"}));

    auto *c_qg = app.add_subcommand("quant-gamma", "gamma(a, b) for a = e^{is} f, b = e^{it} g");
    c_qg->add_option("--a", func, "grid file for F")->required();
    c_qg->add_option("--s", s, "shift of a")->required();
    c_qg->add_option("--b", func_b, "grid file for G")->required();
    c_qg->add_option("--t", t, "shift of b")->required();
    c_qg->add_option("--csv", cfg.csv, "write the gamma_n series as CSV");

    auto *c_qk = app.add_subcommand("quant-k", "K(a, b) on grid elements");
    c_qk->add_option("--a", func, "grid file for F")->required();
    c_qk->add_option("--s", s, "shift of a")->required();
    c_qk->add_option("--b", func_b, "grid file for G")->required();
    c_qk->add_option("--t", t, "shift of b")->required();

    auto *c_rot = app.add_subcommand("rot-distance", "distance from e^{is} f to the rotation curve");
    c_rot->add_option("--s", s, "shift")->required();
    c_rot->add_option("--func", func, "normalized grid file")->required();

    auto *c_emb = app.add_subcommand("embed", "F -> e^F into Z");
    c_emb->add_option("--func", func, "normalized grid file")->required();
    c_emb->add_option("--other", func_b, "second normalized grid file: also report K and the max distance");

    auto *c_cw = app.add_subcommand("cw", "Calabi-Weinstein invariant of a time-sampled family");
    c_cw->add_option("--family", family_file, "family file")->required();

    auto *c_ver = app.add_subcommand("verify", "run the acceptance checks");
    c_ver->add_option("--suite", suite, "linear | quant | all")->check(CLI::IsMember({"linear", "quant", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    json doc;
    doc["version"] = kVersion;
    doc["convention"] = kConvention;
    doc["tolerances"] = cfg.tolerances();
    json inputs, results;
    int exit_code = 0;
    MaslovOptions mopts;
    mopts.tol = cfg.tol;

    try {
        if (*c_maslov) {
            doc["command"] = "maslov";
            inputs["path"] = path;
            const SampledPath x = io::read_path(path, cfg.tol);
            const MaslovResult r = maslov_index(x, mopts);
            results["value"] = r.value;
            results["turns"] = r.turns();
            results["samples_used"] = r.samples_used;
            results["max_step"] = r.max_step;
            if (with_trace) results["trace_value"] = maslov_via_trace(x, cfg.tol);
        } else if (*c_cone) {
            doc["command"] = "cone";
            inputs["path"] = path;
            results = verdict_json(classify_cone(io::read_path(path, cfg.tol), cfg.tol));
        } else if (*c_order) {
            doc["command"] = "order";
            inputs["lower"] = path_y;
            inputs["upper"] = path_x;
            const SampledPath y = io::read_path(path_y, cfg.tol);
            const SampledPath x = io::read_path(path_x, cfg.tol);
            results["canonical"] = verdict_json(order_leq(y, x, cfg.tol));
            results["certificate"] = verdict_json(certify_order(y, x, cfg.tol, mopts));
        } else if (*c_synth) {
            doc["command"] = "synth-positive";
            inputs["matrix"] = matrix_file;
            inputs["grid"] = cfg.grid;
            const Matrix p = io::read_matrix(matrix_file);
            const SampledPath x = positive_path_to(p, cfg.grid, cfg.tol);
            results["path"] = io::path_to_json(x);
            results["maslov"] = maslov_index(x, mopts).value;
            results["endpoint_error"] = symporder::detail::max_abs(x.endpoint() - p);
            results["min_hamiltonian_eigenvalue"] = min_hamiltonian_eigenvalue(extract_hamiltonian(x));
        } else if (*c_redis) {
            doc["command"] = "redistribute";
            inputs["hermitian"] = matrix_file;
            inputs["target"] = target;
            const CMatrix a = io::read_hermitian(matrix_file);
            const RedistributedSpectrum r = redistribute_eigenvalues(a, target, cfg.tol);
            results["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
            results["shifts"] = r.shifts;
            const CMatrix b = r.reassembled();
            results["matrix"] = {{"n", b.rows()},
                                 {"real", io::row_major(b.real())},
                                 {"imag", io::row_major(b.imag())}};
            results["trace"] = r.eigenvalues.sum();
        } else if (*c_gamma) {
            doc["command"] = "gamma";
            inputs["x"] = path_x;
            inputs["y"] = path_y;
            const SampledPath x = io::read_path(path_x, cfg.tol);
            const SampledPath y = io::read_path(path_y, cfg.tol);
            const GrowthEstimate g = gamma_n_sequence(x, y, default_growth_levels(cfg.nmax), 4, cfg.tol);
            json seq = json::array();
            std::vector<std::pair<double, double>> rows;
            for (const auto &[n, v] : g.gamma_n_sequence) {
                seq.push_back({{"n", n}, {"gamma_n", v ? json(*v) : json(nullptr)}});
                if (v) rows.emplace_back(n, *v);
            }
            results["gamma_n"] = std::move(seq);
            results["limit_estimate"] = g.limit_estimate;
            if (is_unitary_path(x, cfg.tol) && is_unitary_path(y, cfg.tol)) {
                results["closed_form"] = gamma_closed_unitary(x, y, cfg.tol, mopts);
                results["closed_form_kind"] = "unitary";
            } else {
                const double c = defect_for(cfg, x.dim());
                inputs["defect"] = c;
                results["closed_form"] = estimate_json(gamma_closed_symplectic(x, y, cfg.kmax, c, cfg.tol, mopts));
                results["closed_form_kind"] = "homogenized";
            }
            write_csv(cfg.csv, "n,gamma_n", rows);
        } else if (*c_k) {
            doc["command"] = "kdist";
            inputs["x"] = path_x;
            inputs["y"] = path_y;
            const SampledPath x = io::read_path(path_x, cfg.tol);
            const SampledPath y = io::read_path(path_y, cfg.tol);
            const double c = defect_for(cfg, x.dim());
            inputs["defect"] = c;
            results = estimate_json(pseudo_distance_K(x, y, cfg.kmax, c, cfg.tol, mopts));
        } else if (*c_z) {
            doc["command"] = "zcoord";
            inputs["path"] = path;
            const SampledPath x = io::read_path(path, cfg.tol);
            const double c = defect_for(cfg, x.dim());
            inputs["defect"] = c;
            const ZPoint z = z_coordinate(x, cfg.kmax, c, cfg.tol, mopts);
            results = {{"value", z.coordinate}, {"lo", z.lo}, {"hi", z.hi}};
            const std::vector<double> seq = homogenize(x, cfg.kmax, mopts);
            results["homogenize"] = seq;
            std::vector<std::pair<double, double>> rows;
            for (std::size_t k = 0; k < seq.size(); ++k) rows.emplace_back(static_cast<double>(k + 1), seq[k]);
            write_csv(cfg.csv, "k,mu_k_over_k", rows);
        } else if (*c_def) {
            doc["command"] = "defect-sample";
            inputs["dim"] = dim;
            inputs["pairs"] = pairs;
            inputs["family"] = fam;
            inputs["seed"] = cfg.seed;
            const PairFamily family = fam == "loops"       ? PairFamily::loops
                                      : fam == "commuting" ? PairFamily::commuting_unitary
                                                           : PairFamily::general;
            const double d = quasimorphism_defect_sample(pairs, dim, cfg.seed, family, mopts);
            results["defect"] = d;
            results["c_emp"] = 2.0 * d;
        } else if (*c_qg) {
            doc["command"] = "quant-gamma";
            inputs = {{"a", func}, {"s", s}, {"b", func_b}, {"t", t}};
            const quant::QuantElement a = element(s, func);
            const quant::QuantElement b = element(t, func_b);
            results["gamma"] = quant::gamma_quant(a, b);
            json seq = json::array();
            std::vector<std::pair<double, double>> rows;
            for (long long n = 1; n <= cfg.nmax; n *= 10) {
                const long long g = quant::gamma_n_quant_bruteforce(a, b, n);
                seq.push_back({{"n", n}, {"gamma_n", g}});
                rows.emplace_back(static_cast<double>(n), static_cast<double>(g));
            }
            results["gamma_n"] = std::move(seq);
            write_csv(cfg.csv, "n,gamma_n", rows);
        } else if (*c_qk) {
            doc["command"] = "quant-k";
            inputs = {{"a", func}, {"s", s}, {"b", func_b}, {"t", t}};
            const quant::QuantElement a = element(s, func);
            const quant::QuantElement b = element(t, func_b);
            results["k"] = quant::k_quant(a, b);
            results["gamma_ab"] = quant::gamma_quant(a, b);
            results["gamma_ba"] = quant::gamma_quant(b, a);
        } else if (*c_rot) {
            doc["command"] = "rot-distance";
            inputs = {{"s", s}, {"func", func}};
            const quant::LeafFunction f = io::read_grid(func);
            const quant::RotationDistance r = quant::rotation_curve_distance(s, f);
            const quant::HoferProfile h = quant::hofer_norms(f);
            results = {{"value", r.distance}, {"t_star", r.t_star}, {"plus", h.plus}, {"minus", h.minus}};
        } else if (*c_emb) {
            doc["command"] = "embed";
            inputs["func"] = func;
            const quant::LeafFunction f = io::read_grid(func);
            const quant::QuantElement e = quant::embed_into_Z(f);
            results["element"] = element_json(e);
            if (!func_b.empty()) {
                inputs["other"] = func_b;
                const quant::LeafFunction g = io::read_grid(func_b);
                results["k"] = quant::k_quant(e, quant::embed_into_Z(g));
                results["max_distance"] = quant::max_distance(f, g);
            }
        } else if (*c_cw) {
            doc["command"] = "cw";
            inputs["family"] = family_file;
            const io::Family fam_in = io::read_family(family_file);
            results["value"] = quant::calabi_weinstein(fam_in.slices, fam_in.weights, fam_in.times);
        } else if (*c_ver) {
            doc["command"] = "verify";
            inputs = {{"suite", suite}, {"seed", cfg.seed}};
            const acceptance::Suite which = suite == "linear"  ? acceptance::Suite::linear
                                            : suite == "quant" ? acceptance::Suite::quant
                                                               : acceptance::Suite::all;
            json list = json::array();
            bool all = true;
            for (const acceptance::CheckResult &r : acceptance::run(which, cfg.seed)) {
                list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
                all = all && r.passed;
                std::cerr << acceptance::format_line(r) << "\n";
            }
            results["criteria"] = std::move(list);
            results["passed"] = all;
            if (!all) exit_code = 2;
        }
    } catch (const InvalidInput &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }

    doc["inputs"] = std::move(inputs);
    doc["results"] = std::move(results);
    const std::string text = doc.dump(2) + "\n";
    try {
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            io::write_text(cfg.out, text);
        }
    } catch (const InvalidInput &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
