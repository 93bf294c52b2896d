#include "fimstab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "fimstab/errors.hpp"

namespace fimstab {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown on the caller's thread.
template <class Body>
void parallel_for(long count, int threads, Body&& body) {
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const long workers = std::min<long>(static_cast<long>(hw), count);
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(count);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void check_feasible(int N, int r, double alpha) {
    if (static_cast<double>(r) * alpha / static_cast<double>(N) > 1.0) {
        throw InfeasibleSeparation("cannot place r = " + std::to_string(r) + " points with gap alpha/N = " +
                                   std::to_string(alpha) + "/" + std::to_string(N));
    }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_id) { return splitmix64(seed ^ trial_id); }

std::vector<double> gen_separated_tau(int N, int r, double alpha, Placement mode, Rng& rng) {
    if (N < 1) throw std::invalid_argument("N must be positive");
    if (r < 2) throw std::invalid_argument("placement needs r >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    check_feasible(N, r, alpha);
    std::vector<double> tau(static_cast<std::size_t>(r));
    if (mode == Placement::regular) {
        for (int j = 0; j < r; ++j) tau[static_cast<std::size_t>(j)] = static_cast<double>(j) / r;
        return tau;
    }
    const double gap = alpha / static_cast<double>(N);
    const double free = std::max(0.0, 1.0 - r * gap);
    std::vector<double> slack(static_cast<std::size_t>(r));
    for (auto& s : slack) s = rng.uniform();
    slack[0] = 0.0;
    double total = 0.0;
    for (double s : slack) total += s;
    if (total == 0.0) {
        std::fill(slack.begin() + 1, slack.end(), 1.0);
        total = r - 1.0;
    }
    double pos = rng.uniform();
    for (int j = 0; j < r; ++j) {
        tau[static_cast<std::size_t>(j)] = pos;
        pos += gap + slack[static_cast<std::size_t>(j)] * free / total;
        if (pos >= 1.0) pos -= 1.0;
    }
    return tau;
}

std::vector<double> gen_separated_tau(int N, int r, double alpha, Placement mode, std::uint64_t seed) {
    Rng rng(seed);
    return gen_separated_tau(N, r, alpha, mode, rng);
}

std::vector<cplx> gen_amplitudes(int r, double kappa, Rng& rng) {
    if (r < 0) throw std::invalid_argument("r must be nonnegative");
    if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
    std::vector<cplx> c(static_cast<std::size_t>(r));
    for (auto& a : c) {
        const double modulus = 1.0 + (kappa - 1.0) * rng.uniform();
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        a = std::polar(modulus, phase);
    }
    return c;
}

std::vector<cplx> gen_amplitudes(int r, double kappa, std::uint64_t seed) {
    Rng rng(seed);
    return gen_amplitudes(r, kappa, rng);
}

int empirical_spike_count(int N, double alpha) {
    return static_cast<int>(std::floor(static_cast<double>(N) / (2.0 * alpha)));
}

std::vector<TrialRecord> run_empirical_sweep(int N, std::span<const double> alphas, int trials,
                                             std::span<const FimSetting> settings, std::uint64_t seed,
                                             int threads) {
    const ProblemSize size = ProblemSize::from_moments(N);
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    if (settings.empty()) throw std::invalid_argument("at least one (kappa, sigma2) setting is required");
    for (const auto& s : settings) {
        if (!(s.kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
        if (!(s.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    }
    for (double a : alphas) {
        if (!(a >= 2.0)) throw std::invalid_argument("empirical trials require alpha >= 2");
        const int r = empirical_spike_count(N, a);
        if (r < 2) throw InfeasibleSeparation("alpha too large for N: fewer than two spikes");
        check_feasible(N, r, a);
    }
    const long total = static_cast<long>(alphas.size()) * trials;
    const std::size_t per_trial = settings.size();
    std::vector<TrialRecord> out(static_cast<std::size_t>(total) * per_trial);
    parallel_for(total, threads, [&](long id) {
        const double alpha = alphas[static_cast<std::size_t>(id / trials)];
        const int r = empirical_spike_count(N, alpha);
        const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>(id));
        Rng rng(s);
        const auto tau = gen_separated_tau(N, r, alpha, Placement::exact_min_gap, rng);
        const SensitivityMatrix w = sensitivity(size, tau);
        const Eigen::MatrixXcd g = gram(w);
        const ExtremalPair sv = hermitian_extremal(g);
        for (std::size_t k = 0; k < per_trial; ++k) {
            Rng amp_rng = rng;
            const auto c = gen_amplitudes(r, settings[k].kappa, amp_rng);
            const ExtremalPair ev = fim_extremal_eigs(fim_from_gram(g, c, settings[k].sigma2));
            TrialRecord& rec = out[static_cast<std::size_t>(id) * per_trial + k];
            rec.trial_id = id;
            rec.seed = s;
            rec.alpha = alpha;
            rec.N = N;
            rec.r = r;
            rec.lambda_min = ev.min;
            rec.lambda_max = ev.max;
            rec.sigma_min_sq = sv.min;
            rec.sigma_max_sq = sv.max;
            rec.kappa = settings[k].kappa;
            rec.sigma2 = settings[k].sigma2;
        }
    });
    return out;
}

std::vector<TrialRecord> run_empirical_extremes(int N, std::span<const double> alphas, int trials, double kappa,
                                                double sigma2, std::uint64_t seed, int threads) {
    const FimSetting setting{kappa, sigma2};
    return run_empirical_sweep(N, alphas, trials, std::span<const FimSetting>(&setting, 1), seed, threads);
}

double min_signal_distance(const ProblemSize& size, std::span<const double> tau1, std::span<const cplx> c1,
                           std::span<const double> tau2) {
    if (tau1.size() != c1.size()) throw std::invalid_argument("amplitude and location counts differ");
    const SensitivityMatrix w1 = sensitivity(size, tau1);
    const SensitivityMatrix w2 = sensitivity(size, tau2);
    Eigen::VectorXcd c(static_cast<Eigen::Index>(c1.size()));
    for (std::size_t i = 0; i < c1.size(); ++i) c(static_cast<Eigen::Index>(i)) = c1[i];
    const Eigen::VectorXcd x1 = w1.v0() * c;
    const Eigen::MatrixXcd a = w2.v0();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    const Eigen::VectorXcd y = qr.householderQ().adjoint() * x1;
    const Eigen::Index r = a.cols();
    return y.tail(y.size() - r).norm() / c.norm();
}

std::vector<DistanceRecord> run_resolution_limit(std::span<const double> alphas, std::span<const int> n_list) {
    for (int N : n_list) {
        if (N < 31 || N % 2 == 0) throw std::invalid_argument("N must be odd and >= 31, got " + std::to_string(N));
    }
    std::vector<DistanceRecord> out;
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        for (int N : n_list) {
            const int r = N / 6;
            check_feasible(N, r, alpha);
            const ProblemSize size = ProblemSize::from_moments(N);
            std::vector<double> tau1(static_cast<std::size_t>(r));
            std::vector<double> tau2(static_cast<std::size_t>(r));
            for (int j = 0; j < r; ++j) {
                tau1[static_cast<std::size_t>(j)] = j * alpha / N;
                double t2 = tau1[static_cast<std::size_t>(j)] + alpha / (2.0 * N);
                tau2[static_cast<std::size_t>(j)] = t2 - std::floor(t2);
            }
            const std::vector<cplx> c1(static_cast<std::size_t>(r), cplx(1.0, 0.0));
            out.push_back({alpha, N, r, min_signal_distance(size, tau1, c1, tau2)});
        }
    }
    return out;
}

std::vector<ProfileRow> run_function_profiles(std::span<const double> alphas, double t_min, double t_max,
                                              double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (!(t_max >= t_min)) throw std::invalid_argument("t_max must be >= t_min");
    const long count = static_cast<long>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
    std::vector<ProfileRow> out;
    out.reserve(alphas.size() * static_cast<std::size_t>(count));
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        for (long i = 0; i < count; ++i) {
            const double t = t_min + static_cast<double>(i) * step;
            out.push_back({alpha, t, g_approximant(Side::minorant, alpha, t), g_approximant(Side::majorant, alpha, t),
                           box(alpha, t)});
        }
    }
    return out;
}

}  // namespace fimstab
