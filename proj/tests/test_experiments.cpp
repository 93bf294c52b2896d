#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fimstab/bounds.hpp"
#include "fimstab/errors.hpp"
#include "fimstab/experiments.hpp"

using namespace fimstab;

namespace {

std::vector<double> sorted_gaps(std::vector<double> tau) {
    std::sort(tau.begin(), tau.end());
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < tau.size(); ++i) gaps.push_back(tau[i + 1] - tau[i]);
    gaps.push_back(1.0 - tau.back() + tau.front());
    return gaps;
}

bool same_records(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].trial_id != b[i].trial_id || a[i].seed != b[i].seed || a[i].lambda_min != b[i].lambda_min ||
            a[i].lambda_max != b[i].lambda_max || a[i].sigma_min_sq != b[i].sigma_min_sq ||
            a[i].sigma_max_sq != b[i].sigma_max_sq)
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("rng") {
    TEST_CASE("splitmix64 reference output") {
        // First output of the reference generator seeded with 0 and 1234567.
        CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
        CHECK(splitmix64(1234567) == 6457827717110365317ULL);
    }

    TEST_CASE("mt19937_64 reference output") {
        Rng rng(5489);
        std::uint64_t v = 0;
        for (int i = 0; i < 10000; ++i) v = rng.next();
        CHECK(v == 9981545732273789042ULL);
    }

    TEST_CASE("uniform is in [0, 1) with 53 bits") {
        Rng rng(1);
        for (int i = 0; i < 10000; ++i) {
            const double u = rng.uniform();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            CHECK(std::ldexp(u, 53) == std::floor(std::ldexp(u, 53)));
        }
    }

    TEST_CASE("trial seeds differ per trial") {
        CHECK(trial_seed(42, 0) == splitmix64(42));
        CHECK(trial_seed(42, 1) != trial_seed(42, 0));
        CHECK(trial_seed(42, 7) == splitmix64(42 ^ 7));
    }
}

TEST_SUITE("placement") {
    TEST_CASE("regular placement") {
        const auto tau = gen_separated_tau(100, 4, 5.0, Placement::regular, 0);
        CHECK(wraparound_separation(tau) == doctest::Approx(0.25));
        CHECK(tau[0] == 0.0);
    }

    TEST_CASE("exact minimum gap") {
        const auto tau = gen_separated_tau(1001, 20, 6.0, Placement::exact_min_gap, 42);
        CHECK(std::abs(1001 * wraparound_separation(tau) - 6.0) <= 1e-9);
        for (double t : tau) {
            CHECK(t >= 0.0);
            CHECK(t < 1.0);
        }
    }

    TEST_CASE("all gaps at least alpha / N over many seeds") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const int N = 101 + 2 * static_cast<int>(seed % 50);
            const double alpha = 2.0 + (seed % 7);
            const int r = std::max(2, empirical_spike_count(N, alpha));
            const auto gaps = sorted_gaps(gen_separated_tau(N, r, alpha, Placement::exact_min_gap, seed));
            const double smallest = *std::min_element(gaps.begin(), gaps.end());
            CHECK(std::abs(smallest * N - alpha) <= 1e-9);
        }
    }

    TEST_CASE("a fully packed configuration is regular") {
        const auto tau = gen_separated_tau(40, 10, 4.0, Placement::exact_min_gap, 3);
        for (double g : sorted_gaps(tau)) CHECK(g == doctest::Approx(0.1).epsilon(1e-12));
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(gen_separated_tau(10, 3, 4.0, Placement::exact_min_gap, 1), InfeasibleSeparation);
        CHECK_THROWS_AS(gen_separated_tau(10, 1, 1.0, Placement::exact_min_gap, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_separated_tau(10, 2, 0.0, Placement::regular, 1), std::invalid_argument);
    }

    TEST_CASE("deterministic") {
        CHECK(gen_separated_tau(301, 9, 5.0, Placement::exact_min_gap, 17) ==
              gen_separated_tau(301, 9, 5.0, Placement::exact_min_gap, 17));
    }
}

TEST_SUITE("amplitudes") {
    TEST_CASE("kappa = 1 gives unit moduli") {
        for (const cplx& c : gen_amplitudes(50, 1.0, 9)) CHECK(std::abs(c) == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("moduli lie in [1, kappa] and are reproducible") {
        const auto a = gen_amplitudes(200, 3.0, 11);
        for (const cplx& c : a) {
            CHECK(std::abs(c) >= 1.0 - 1e-15);
            CHECK(std::abs(c) <= 3.0 + 1e-15);
        }
        CHECK(a == gen_amplitudes(200, 3.0, 11));
        CHECK_THROWS_AS(gen_amplitudes(2, 0.5, 1), std::invalid_argument);
    }
}

TEST_SUITE("empirical trials") {
    TEST_CASE("layout, ordering and invariants") {
        const std::vector<double> alphas{4.0, 6.0};
        const auto rec = run_empirical_extremes(101, alphas, 5, 2.0, 1.5, 42);
        REQUIRE(rec.size() == 10);
        for (std::size_t i = 0; i < rec.size(); ++i) {
            CHECK(rec[i].trial_id == static_cast<long>(i));
            CHECK(rec[i].alpha == alphas[i / 5]);
            CHECK(rec[i].seed == trial_seed(42, i));
            CHECK(rec[i].r == empirical_spike_count(101, rec[i].alpha));
            CHECK(rec[i].lambda_min <= rec[i].lambda_max);
            CHECK(rec[i].sigma_min_sq <= rec[i].sigma_max_sq);
        }
    }

    TEST_CASE("bit-identical across runs and thread counts") {
        const std::vector<double> alphas{4.0, 10.0};
        const auto a = run_empirical_extremes(201, alphas, 8, 1.0, 1.0, 7, 1);
        const auto b = run_empirical_extremes(201, alphas, 8, 1.0, 1.0, 7, 4);
        const auto c = run_empirical_extremes(201, alphas, 8, 1.0, 1.0, 7);
        CHECK(same_records(a, b));
        CHECK(same_records(a, c));
        CHECK_FALSE(same_records(a, run_empirical_extremes(201, alphas, 8, 1.0, 1.0, 8)));
    }

    TEST_CASE("sweep rows match single-setting runs") {
        const std::vector<double> alphas{6.0};
        const std::vector<FimSetting> settings{{1.0, 1.0}, {3.0, 4.0}};
        const auto sweep = run_empirical_sweep(101, alphas, 4, settings, 5);
        const auto one = run_empirical_extremes(101, alphas, 4, 3.0, 4.0, 5);
        REQUIRE(sweep.size() == 8);
        for (int t = 0; t < 4; ++t) {
            CHECK(sweep[2 * t + 1].lambda_min == one[t].lambda_min);
            CHECK(sweep[2 * t + 1].lambda_max == one[t].lambda_max);
            CHECK(sweep[2 * t].sigma_min_sq == sweep[2 * t + 1].sigma_min_sq);
        }
    }

    TEST_CASE("bounds hold above the threshold") {
        const std::vector<double> alphas{4.0, 6.0, 10.0};
        const std::vector<FimSetting> settings{{1.0, 1.0}, {3.0, 4.0}};
        const auto rec = run_empirical_sweep(1001, alphas, 20, settings, 42);
        for (const TrialRecord& t : rec) {
            const double hm = h_bound(Side::minorant, t.alpha);
            const double hp = h_bound(Side::majorant, t.alpha);
            CHECK(t.sigma_min_sq >= hm);
            CHECK(t.sigma_max_sq <= hp);
            CHECK(t.lambda_min >= hm / t.sigma2);
            CHECK(t.lambda_max <= t.kappa * t.kappa * hp / t.sigma2);
            if (t.kappa == 1.0) CHECK(t.lambda_max <= t.sigma_max_sq / t.sigma2 + 1e-9);
        }
    }

    TEST_CASE("errors") {
        const std::vector<double> low{1.5};
        CHECK_THROWS_AS(run_empirical_extremes(101, low, 2, 1.0, 1.0, 0), std::invalid_argument);
        const std::vector<double> huge{40.0};
        CHECK_THROWS_AS(run_empirical_extremes(101, huge, 2, 1.0, 1.0, 0), InfeasibleSeparation);
        const std::vector<double> ok{4.0};
        CHECK_THROWS_AS(run_empirical_extremes(100, ok, 2, 1.0, 1.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(run_empirical_extremes(101, ok, 0, 1.0, 1.0, 0), std::invalid_argument);
    }
}

TEST_SUITE("resolution limit") {
    TEST_CASE("identical supports are at distance zero") {
        const ProblemSize s = ProblemSize::from_moments(61);
        const std::vector<double> tau{0.1, 0.35, 0.8};
        const std::vector<cplx> c{cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(-1.0, 1.0)};
        CHECK(min_signal_distance(s, tau, c, tau) <= 1e-12);
    }

    TEST_CASE("trend below and above the limit") {
        const std::vector<double> alphas{1.0, 1.5, 4.0};
        const std::vector<int> ns{61, 121, 241, 601};
        const auto rec = run_resolution_limit(alphas, ns);
        REQUIRE(rec.size() == 12);
        for (int a = 0; a < 2; ++a) {
            for (int i = 1; i < 4; ++i) CHECK(rec[4 * a + i].distance < rec[4 * a + i - 1].distance);
        }
        CHECK(rec[8 + 3].distance >= 0.5 * rec[8].distance);
        CHECK(rec[3].r == 100);
    }

    TEST_CASE("regression constants") {
        const std::vector<double> alphas{1.0, 4.0};
        const std::vector<int> ns{61, 601};
        const auto rec = run_resolution_limit(alphas, ns);
        CHECK(rec[0].distance == doctest::Approx(0.16663).epsilon(1e-3));
        CHECK(rec[1].distance == doctest::Approx(0.05583).epsilon(1e-3));
        CHECK(rec[2].distance == doctest::Approx(1.0).epsilon(0.05));
        CHECK(rec[3].distance == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("errors") {
        const std::vector<double> seven{7.0};
        const std::vector<int> ns{61};
        CHECK_THROWS_AS(run_resolution_limit(seven, ns), InfeasibleSeparation);
        const std::vector<double> one{1.0};
        const std::vector<int> small{29};
        CHECK_THROWS_AS(run_resolution_limit(one, small), std::invalid_argument);
    }
}

TEST_SUITE("profiles") {
    TEST_CASE("rows and sandwich") {
        const std::vector<double> alphas{3.0, 9.0, 15.0};
        const auto rows = run_function_profiles(alphas, -20.0, 20.0, 0.01);
        REQUIRE(rows.size() == 3 * 4001);
        for (const ProfileRow& p : rows) {
            CHECK(p.g_minus <= p.box);
            CHECK(p.box <= p.g_plus);
        }
        const ProfileRow& centre9 = rows[4001 + 2000];
        CHECK(centre9.t == doctest::Approx(0.0));
        CHECK(centre9.g_minus <= 1.0);
        CHECK(centre9.g_plus >= 1.0);
        const ProfileRow& far15 = rows[2 * 4001 + 4000];
        CHECK(far15.t == doctest::Approx(20.0));
        CHECK(far15.g_minus <= 0.0);
        CHECK(far15.g_plus >= 0.0);
        // box of width 3
        CHECK(rows[2000 + 149].box == 1.0);
        CHECK(rows[2000 + 151].box == 0.0);
    }
}

TEST_SUITE("verification suite") {
    TEST_CASE("fast level passes") {
        const VerificationReport r = run_verification_suite();
        CHECK(r.all_passed());
        CHECK(r.checks.size() >= 10);
        for (const CheckResult& c : r.checks) CHECK_MESSAGE(c.passed, c.name << " residual " << c.residual);
    }

    TEST_CASE("corrupted derivative normalization is caught") {
        VerificationOptions opt;
        opt.c_norm_scale = 1.01;
        const VerificationReport r = run_verification_suite(opt);
        CHECK_FALSE(r.all_passed());
        const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                                     [](const CheckResult& c) { return c.name == "unit_columns"; });
        REQUIRE(it != r.checks.end());
        CHECK_FALSE(it->passed);
    }
}
