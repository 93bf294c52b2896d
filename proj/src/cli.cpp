#include "fimstab/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "fimstab/bounds.hpp"
#include "fimstab/errors.hpp"
#include "fimstab/experiments.hpp"
#include "fimstab/version.hpp"

namespace fimstab::cli {

namespace {

using json = nlohmann::json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 0;
    double quad_tol = 1e-10;
};

QuadratureSettings quadrature(const Globals& g) { return QuadratureSettings{g.quad_tol}; }

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

// Writes the CSV and its manifest sidecar.
void emit(const std::string& subcommand, const json& params, const Globals& g, const std::filesystem::path& out,
          const std::string& csv) {
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["params"] = params;
    manifest["seed"] = g.seed;
    manifest["version"] = kVersion;
    manifest["quad_tol"] = g.quad_tol;
    manifest["output"] = out.string();
    write_file(out, csv);
    write_file(manifest_path_for(out), manifest.dump(2) + "\n");
}

std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw std::invalid_argument("t-range must be min:max:step, got '" + spec + "'");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) throw std::invalid_argument("t-range must be min:max:step, got '" + spec + "'");
    return parts;
}

int cmd_bounds(double amin, double amax, int steps, const std::filesystem::path& out, const Globals& g) {
    if (!(amin > 0.0) || !(amax > amin) || steps < 2) {
        throw std::invalid_argument("bounds needs 0 < alpha-min < alpha-max and steps >= 2");
    }
    const BoundCurve curve = bound_curve(amin, amax, steps, quadrature(g));
    std::string csv = "alpha,h_minus,h_plus\n";
    for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
        csv += format_number(curve.alphas[i]) + ',' + format_number(curve.h_minus[i]) + ',' +
               format_number(curve.h_plus[i]) + '\n';
    }
    emit("bounds", {{"alpha_min", amin}, {"alpha_max", amax}, {"steps", steps}}, g, out, csv);
    return kSuccess;
}

int cmd_threshold(double tol, const Globals& g, std::ostream& os) {
    if (!(tol >= 1e-6 && tol <= 1e-2)) throw std::invalid_argument("tol must lie in [1e-6, 1e-2]");
    const double alpha = stability_threshold(tol, quadrature(g));
    const int digits = static_cast<int>(std::ceil(-std::log10(tol) - 1e-9));
    os << std::fixed << std::setprecision(digits) << alpha << '\n';
    return kSuccess;
}

int cmd_empirical(int N, const std::vector<double>& alphas, int trials, double kappa, double sigma2,
                  const std::filesystem::path& out, const Globals& g) {
    if (N % 2 == 0) throw std::invalid_argument("N must be odd");
    if (alphas.empty()) throw std::invalid_argument("at least one alpha is required");
    const auto records = run_empirical_extremes(N, alphas, trials, kappa, sigma2, g.seed);
    std::string csv = "trial,seed,alpha,N,r,lambda_min,lambda_max,sigma_min_sq,sigma_max_sq\n";
    for (const TrialRecord& t : records) {
        csv += std::to_string(t.trial_id) + ',' + std::to_string(t.seed) + ',' + format_number(t.alpha) + ',' +
               std::to_string(t.N) + ',' + std::to_string(t.r) + ',' + format_number(t.lambda_min) + ',' +
               format_number(t.lambda_max) + ',' + format_number(t.sigma_min_sq) + ',' +
               format_number(t.sigma_max_sq) + '\n';
    }
    emit("empirical",
         {{"N", N}, {"alphas", alphas}, {"trials", trials}, {"kappa", kappa}, {"sigma2", sigma2}}, g, out, csv);
    return kSuccess;
}

int cmd_distance(const std::vector<double>& alphas, const std::vector<int>& n_list,
                 const std::filesystem::path& out, const Globals& g) {
    if (alphas.empty() || n_list.empty()) throw std::invalid_argument("alphas and N-list must be non-empty");
    const auto records = run_resolution_limit(alphas, n_list);
    std::string csv = "alpha,N,r,distance\n";
    for (const DistanceRecord& d : records) {
        csv += format_number(d.alpha) + ',' + std::to_string(d.N) + ',' + std::to_string(d.r) + ',' +
               format_number(d.distance) + '\n';
    }
    emit("distance", {{"alphas", alphas}, {"N_list", n_list}}, g, out, csv);
    return kSuccess;
}

int cmd_funcs(const std::vector<double>& alphas, const std::string& t_range, const std::filesystem::path& out,
              const Globals& g) {
    if (alphas.empty()) throw std::invalid_argument("at least one alpha is required");
    const auto range = parse_range(t_range);
    const auto rows = run_function_profiles(alphas, range[0], range[1], range[2]);
    std::string csv = "alpha,t,g_minus,g_plus,box\n";
    for (const ProfileRow& p : rows) {
        csv += format_number(p.alpha) + ',' + format_number(p.t) + ',' + format_number(p.g_minus) + ',' +
               format_number(p.g_plus) + ',' + format_number(p.box) + '\n';
    }
    emit("funcs", {{"alphas", alphas}, {"t_range", t_range}}, g, out, csv);
    return kSuccess;
}

int cmd_verify(const std::string& level, const Globals& g, std::ostream& os) {
    VerificationOptions opts;
    opts.level = level == "full" ? Level::full : Level::fast;
    opts.seed = g.seed;
    opts.quadrature = quadrature(g);
    const VerificationReport report = run_verification_suite(opts);
    os << std::left << std::setw(28) << "check" << std::setw(6) << "ok" << std::setw(14) << "residual"
       << std::setw(12) << "tolerance" << "detail\n";
    for (const CheckResult& c : report.checks) {
        os << std::left << std::setw(28) << c.name << std::setw(6) << (c.passed ? "PASS" : "FAIL") << std::setw(14)
           << std::setprecision(4) << std::scientific << c.residual << std::setw(12) << c.tolerance
           << std::defaultfloat << c.detail << '\n';
    }
    return report.all_passed() ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability bounds for the Fisher information of super-resolution", "fimstab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));

    Globals g;
    app.add_option("--seed", g.seed, "Seed for randomized subcommands")->capture_default_str();
    app.add_option("--quad-tol,--quad_tol", g.quad_tol, "Absolute moment quadrature tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::string out_path;

    double amin = 0.0;
    double amax = 0.0;
    int steps = 50;
    auto* bounds = app.add_subcommand("bounds", "Tabulate h_-(alpha) and h_+(alpha)");
    bounds->add_option("--alpha-min,--alpha_min", amin)->required();
    bounds->add_option("--alpha-max,--alpha_max", amax)->required();
    bounds->add_option("--steps", steps)->capture_default_str();
    bounds->add_option("--out", out_path)->required();

    double tol = 1e-3;
    auto* threshold = app.add_subcommand("threshold", "Smallest alpha with h_-(alpha) > 0");
    threshold->add_option("--tol", tol)->capture_default_str();

    int N = 1001;
    std::vector<double> alphas;
    int trials = 200;
    double kappa = 1.0;
    double sigma2 = 1.0;
    auto* empirical = app.add_subcommand("empirical", "Randomized extremal eigenvalues of W and J");
    empirical->add_option("-N,--N", N)->capture_default_str();
    empirical->add_option("--alphas", alphas)->delimiter(',')->required();
    empirical->add_option("--trials", trials)->capture_default_str();
    empirical->add_option("--kappa", kappa)->capture_default_str();
    empirical->add_option("--sigma2", sigma2)->capture_default_str();
    empirical->add_option("--out", out_path)->required();

    std::vector<int> n_list;
    auto* distance = app.add_subcommand("distance", "Distance between two interleaved noiseless signals");
    distance->add_option("--alphas", alphas)->delimiter(',')->required();
    distance->add_option("--N-list,--N_list", n_list)->delimiter(',')->required();
    distance->add_option("--out", out_path)->required();

    std::string t_range = "-20:20:0.01";
    auto* funcs = app.add_subcommand("funcs", "Sample G_-, G_+ and the box");
    funcs->add_option("--alphas", alphas)->delimiter(',')->required();
    funcs->add_option("--t-range,--t_range", t_range)->capture_default_str();
    funcs->add_option("--out", out_path)->required();

    std::string level = "fast";
    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("level,--level", level)->check(CLI::IsMember({"fast", "full"}))->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kBadArguments;
    }

    try {
        if (*bounds) return cmd_bounds(amin, amax, steps, out_path, g);
        if (*threshold) return cmd_threshold(tol, g, out);
        if (*empirical) return cmd_empirical(N, alphas, trials, kappa, sigma2, out_path, g);
        if (*distance) return cmd_distance(alphas, n_list, out_path, g);
        if (*funcs) return cmd_funcs(alphas, t_range, out_path, g);
        if (*verify) return cmd_verify(level, g, out);
    } catch (const NoSignChange& e) {
        err << "error: " << e.what() << '\n';
        return kNoSignChange;
    } catch (const InfeasibleSeparation& e) {
        err << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    return kBadArguments;
}

}  // namespace fimstab::cli
