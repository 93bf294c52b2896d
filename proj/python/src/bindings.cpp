#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fimstab/bounds.hpp"
#include "fimstab/cli.hpp"
#include "fimstab/errors.hpp"
#include "fimstab/experiments.hpp"
#include "fimstab/extremal.hpp"
#include "fimstab/spectral.hpp"
#include "fimstab/version.hpp"

namespace py = pybind11;
using namespace fimstab;

namespace {

Side side_of(const std::string& s) {
    if (s == "minorant" || s == "-") return Side::minorant;
    if (s == "majorant" || s == "+") return Side::majorant;
    throw py::value_error("side must be 'minorant' or 'majorant', got '" + s + "'");
}

Family family_of(const std::string& s) {
    if (s == "box") return Family::box;
    if (s == "selberg") return Family::selberg;
    if (s == "cubed") return Family::cubed;
    throw py::value_error("family must be 'box', 'selberg' or 'cubed', got '" + s + "'");
}

py::dict trial_dict(const TrialRecord& t) {
    py::dict d;
    d["trial"] = t.trial_id;
    d["seed"] = t.seed;
    d["alpha"] = t.alpha;
    d["N"] = t.N;
    d["r"] = t.r;
    d["lambda_min"] = t.lambda_min;
    d["lambda_max"] = t.lambda_max;
    d["sigma_min_sq"] = t.sigma_min_sq;
    d["sigma_max_sq"] = t.sigma_max_sq;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of fimstab";
    m.attr("__version__") = kVersion;

    static py::exception<Error> base(m, "FimstabError", PyExc_RuntimeError);
    py::register_exception<DecayTooSlow>(m, "DecayTooSlow", base.ptr());
    py::register_exception<DuplicateLocation>(m, "DuplicateLocation", base.ptr());
    py::register_exception<SingularFisher>(m, "SingularFisher", base.ptr());
    py::register_exception<NoSignChange>(m, "NoSignChange", base.ptr());
    py::register_exception<InfeasibleSeparation>(m, "InfeasibleSeparation", base.ptr());

    m.def("beurling", &beurling, py::arg("x"));
    m.def("box", &box, py::arg("alpha"), py::arg("t"));
    m.def(
        "selberg_box", [](const std::string& side, double alpha, double t) { return selberg_box(side_of(side), alpha, t); },
        py::arg("side"), py::arg("alpha"), py::arg("t"));
    m.def(
        "g_approximant",
        [](const std::string& side, double alpha, py::object t) -> py::object {
            const Side s = side_of(side);
            if (py::isinstance<py::float_>(t) || py::isinstance<py::int_>(t)) {
                return py::float_(g_approximant(s, alpha, t.cast<double>()));
            }
            std::vector<double> out;
            for (double x : t.cast<std::vector<double>>()) out.push_back(g_approximant(s, alpha, x));
            return py::cast(out);
        },
        py::arg("side"), py::arg("alpha"), py::arg("t"), "G_alpha^-(t) or G_alpha^+(t); t may be a scalar or a sequence.");

    m.def(
        "compute_moments",
        [](const std::string& family, const std::string& side, double alpha, double tol) {
            const Moments mo = compute_moments(family_of(family), side_of(side), alpha, QuadratureSettings{tol});
            py::dict d;
            d["moment0"] = mo.moment0;
            d["moment2"] = mo.moment2;
            d["error0"] = mo.error0;
            d["error2"] = mo.error2;
            d["half_width"] = mo.meta.half_width;
            d["evaluations"] = mo.meta.evaluations;
            return d;
        },
        py::arg("family"), py::arg("side"), py::arg("alpha"), py::arg("tol") = 1e-10);

    m.def(
        "h_bound", [](const std::string& side, double alpha, double tol) { return h_bound(side_of(side), alpha, {tol}); },
        py::arg("side"), py::arg("alpha"), py::arg("tol") = 1e-10);
    m.def(
        "h_bound_certified",
        [](const std::string& side, double alpha, double tol) {
            const CertifiedBound b = h_bound_certified(side_of(side), alpha, {tol});
            return py::make_tuple(b.value, b.error);
        },
        py::arg("side"), py::arg("alpha"), py::arg("tol") = 1e-10, "Returns (value, error).");
    m.def(
        "stability_threshold", [](double tolerance, double tol) { return stability_threshold(tolerance, {tol}); },
        py::arg("tolerance") = 1e-3, py::arg("tol") = 1e-10);
    m.def(
        "bound_curve",
        [](double amin, double amax, int steps, double tol) {
            const BoundCurve c = bound_curve(amin, amax, steps, {tol});
            return py::make_tuple(c.alphas, c.h_minus, c.h_plus);
        },
        py::arg("alpha_min"), py::arg("alpha_max"), py::arg("steps"), py::arg("tol") = 1e-10,
        "Returns (alphas, h_minus, h_plus).");
    m.def(
        "classical_v0_bounds",
        [](double alpha) {
            const ClassicalBounds b = classical_v0_bounds(alpha);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("alpha"));

    m.def(
        "gram_extremal",
        [](int N, const std::vector<double>& tau) {
            const ExtremalPair e = gram_extremal(sensitivity(ProblemSize::from_moments(N), tau));
            return py::make_tuple(e.min, e.max);
        },
        py::arg("N"), py::arg("tau"), "(sigma_min(W)^2, sigma_max(W)^2).");
    m.def(
        "fim",
        [](int N, const std::vector<double>& tau, const std::vector<cplx>& c, double sigma2, double kappa) {
            const SpikeConfig cfg{tau, c, kappa};
            const ProblemSize size = ProblemSize::from_moments(N);
            cfg.validate(size);
            return Eigen::MatrixXcd(fim(size, cfg, sigma2).entries);
        },
        py::arg("N"), py::arg("tau"), py::arg("c"), py::arg("sigma2") = 1.0, py::arg("kappa") = 1e300);
    m.def(
        "fim_extremal_eigs",
        [](int N, const std::vector<double>& tau, const std::vector<cplx>& c, double sigma2) {
            const ExtremalPair e = fim_extremal_eigs(fim(ProblemSize::from_moments(N), {tau, c, 1e300}, sigma2));
            return py::make_tuple(e.min, e.max);
        },
        py::arg("N"), py::arg("tau"), py::arg("c"), py::arg("sigma2") = 1.0);
    m.def(
        "crlb_linear_form",
        [](const Eigen::MatrixXcd& j, const Eigen::VectorXcd& q, double sigma2) {
            return crlb_linear_form(FisherMatrix{j, sigma2}, q);
        },
        py::arg("J"), py::arg("q"), py::arg("sigma2") = 1.0);
    m.def(
        "synth_signal",
        [](int N, const std::vector<double>& tau, const std::vector<cplx>& c) {
            return Eigen::VectorXcd(synth_signal(ProblemSize::from_moments(N), {tau, c, 1e300}));
        },
        py::arg("N"), py::arg("tau"), py::arg("c"));
    m.def(
        "poisson_series_table",
        [](int N, double alpha, const std::vector<double>& tau, long K) {
            const auto table = poisson_series_table(ProblemSize::from_moments(N), Approximant(Side::minorant, alpha), tau, K);
            py::list out;
            for (const PoissonCheck& c : table) out.append(py::make_tuple(c.l, c.l2, c.p, c.series_value, c.closed_form));
            return out;
        },
        py::arg("N"), py::arg("alpha"), py::arg("tau"), py::arg("K"), "Rows (l, l2, p, series, closed_form).");

    m.def(
        "gen_separated_tau",
        [](int N, int r, double alpha, bool regular, std::uint64_t seed) {
            return gen_separated_tau(N, r, alpha, regular ? Placement::regular : Placement::exact_min_gap, seed);
        },
        py::arg("N"), py::arg("r"), py::arg("alpha"), py::arg("regular") = false, py::arg("seed") = 0);
    m.def(
        "gen_amplitudes", [](int r, double kappa, std::uint64_t seed) { return gen_amplitudes(r, kappa, seed); },
        py::arg("r"), py::arg("kappa"), py::arg("seed") = 0);
    m.def(
        "run_empirical_extremes",
        [](int N, const std::vector<double>& alphas, int trials, double kappa, double sigma2, std::uint64_t seed) {
            std::vector<TrialRecord> rec;
            {
                py::gil_scoped_release release;
                rec = run_empirical_extremes(N, alphas, trials, kappa, sigma2, seed);
            }
            py::list out;
            for (const TrialRecord& t : rec) out.append(trial_dict(t));
            return out;
        },
        py::arg("N"), py::arg("alphas"), py::arg("trials"), py::arg("kappa") = 1.0, py::arg("sigma2") = 1.0,
        py::arg("seed") = 0);
    m.def(
        "min_signal_distance",
        [](int N, const std::vector<double>& tau1, const std::vector<cplx>& c1, const std::vector<double>& tau2) {
            return min_signal_distance(ProblemSize::from_moments(N), tau1, c1, tau2);
        },
        py::arg("N"), py::arg("tau1"), py::arg("c1"), py::arg("tau2"));
    m.def(
        "run_resolution_limit",
        [](const std::vector<double>& alphas, const std::vector<int>& ns) {
            py::list out;
            for (const DistanceRecord& d : run_resolution_limit(alphas, ns)) out.append(py::make_tuple(d.alpha, d.N, d.r, d.distance));
            return out;
        },
        py::arg("alphas"), py::arg("N_list"), "Rows (alpha, N, r, distance).");
    m.def(
        "run_function_profiles",
        [](const std::vector<double>& alphas, double t_min, double t_max, double step) {
            py::list out;
            for (const ProfileRow& p : run_function_profiles(alphas, t_min, t_max, step)) {
                out.append(py::make_tuple(p.alpha, p.t, p.g_minus, p.g_plus, p.box));
            }
            return out;
        },
        py::arg("alphas"), py::arg("t_min"), py::arg("t_max"), py::arg("step"), "Rows (alpha, t, g_minus, g_plus, box).");
    m.def(
        "run_verification_suite",
        [](const std::string& level, std::uint64_t seed) {
            VerificationOptions opt;
            if (level == "full") {
                opt.level = Level::full;
            } else if (level != "fast") {
                throw py::value_error("level must be 'fast' or 'full'");
            }
            opt.seed = seed;
            const VerificationReport r = run_verification_suite(opt);
            py::list out;
            for (const CheckResult& c : r.checks) out.append(py::make_tuple(c.name, c.passed, c.residual, c.tolerance));
            return out;
        },
        py::arg("level") = "fast", py::arg("seed") = 0, "Rows (name, passed, residual, tolerance).");

    m.def(
        "cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "fimstab");
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
