#ifndef FIMSTAB_EXPERIMENTS_HPP
#define FIMSTAB_EXPERIMENTS_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fimstab/extremal.hpp"
#include "fimstab/spectral.hpp"

namespace fimstab {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trial `trial_id` in a run seeded with `seed`: splitmix64(seed ^ trial_id).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_id);

/// MT19937-64 with a hand-rolled 53-bit double conversion, so every draw is
/// bit-identical across standard libraries (std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

enum class Placement { exact_min_gap, regular };

/// r torus points with N * Delta(tau) = alpha (exact_min_gap) or r equally
/// spaced points starting at 0 (regular).
///
/// exact_min_gap draws r slacks, zeroes the first, and sets gap_i =
/// alpha/N + slack_i (1 - r alpha/N) / sum(slack), starting from a uniform
/// offset. Throws InfeasibleSeparation if r alpha / N > 1.
std::vector<double> gen_separated_tau(int N, int r, double alpha, Placement mode, std::uint64_t seed);
std::vector<double> gen_separated_tau(int N, int r, double alpha, Placement mode, Rng& rng);

/// Moduli uniform in [1, kappa], phases uniform in [0, 2 pi).
std::vector<cplx> gen_amplitudes(int r, double kappa, std::uint64_t seed);
std::vector<cplx> gen_amplitudes(int r, double kappa, Rng& rng);

struct TrialRecord {
    long trial_id = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    int N = 0;
    int r = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double sigma_min_sq = 0.0;
    double sigma_max_sq = 0.0;
    double kappa = 1.0;
    double sigma2 = 1.0;
};

/// Number of spikes used by the randomized trials: floor(N / (2 alpha)).
int empirical_spike_count(int N, double alpha);

/// Randomized extremal eigenvalue trials, ordered by (alpha, trial).
///
/// trial_id = alpha_index * trials + t; each trial seeds its own Rng with
/// trial_seed(seed, trial_id), draws tau (exact_min_gap) then amplitudes.
/// `threads` = 0 uses the hardware concurrency.
std::vector<TrialRecord> run_empirical_extremes(int N, std::span<const double> alphas, int trials, double kappa,
                                                double sigma2, std::uint64_t seed, int threads = 0);

struct FimSetting {
    double kappa = 1.0;
    double sigma2 = 1.0;
};

/// Same trials as run_empirical_extremes, evaluated for several (kappa, sigma2)
/// settings at once. Locations and phases do not depend on the setting.
/// Ordered by (alpha, trial, setting).
std::vector<TrialRecord> run_empirical_sweep(int N, std::span<const double> alphas, int trials,
                                             std::span<const FimSetting> settings, std::uint64_t seed,
                                             int threads = 0);

struct DistanceRecord {
    double alpha = 0.0;
    int N = 0;
    int r = 0;
    double distance = 0.0;
};

/// min over c2 of ||V0(tau1) c1 - V0(tau2) c2||_2 / ||c1||_2.
double min_signal_distance(const ProblemSize& size, std::span<const double> tau1, std::span<const cplx> c1,
                           std::span<const double> tau2);

/// Two interleaved regular sets: tau1 = j alpha / N (j < r = floor(N/6)),
/// tau2 = tau1 + alpha / (2N), c1 = ones. Ordered by (alpha, N) as given.
std::vector<DistanceRecord> run_resolution_limit(std::span<const double> alphas, std::span<const int> n_list);

struct ProfileRow {
    double alpha = 0.0;
    double t = 0.0;
    double g_minus = 0.0;
    double g_plus = 0.0;
    double box = 0.0;
};

/// Samples t = t_min + i step for i = 0 .. floor((t_max - t_min) / step).
std::vector<ProfileRow> run_function_profiles(std::span<const double> alphas, double t_min, double t_max,
                                              double step);

enum class Level { fast, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;   // worst violation; pass iff residual <= tolerance
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

struct VerificationOptions {
    Level level = Level::fast;
    std::uint64_t seed = 0;
    QuadratureSettings quadrature;
    /// Multiplies C_N in every ProblemSize built by the suite (mutation testing).
    double c_norm_scale = 1.0;
};

VerificationReport run_verification_suite(const VerificationOptions& options = {});

}  // namespace fimstab

#endif  // FIMSTAB_EXPERIMENTS_HPP
