#include <doctest.h>

#include <cmath>
#include <random>

#include "chwave/error.hpp"
#include "chwave/newton.hpp"
#include "chwave/reduced.hpp"

using namespace chwave;

namespace {

std::vector<double> smooth_field(int n, double mean, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  std::vector<double> x(static_cast<std::size_t>(n), mean);
  for (int mode = 1; mode <= 4; ++mode) {
    const double a = u(rng), b = u(rng);
    for (int i = 0; i < n; ++i) {
      const double t = kTwoPi * mode * i / n;
      x[i] += (a * std::cos(t) + b * std::sin(t)) / mode;
    }
  }
  return x;
}

double fd_error(const ProblemParams& p, Model model, int n, unsigned seed) {
  const auto psi = smooth_field(n, p.mean_psi, seed);
  std::mt19937_64 rng(seed + 100);
  std::normal_distribution<double> g;
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = g(rng);
  u /= u.lpNorm<Eigen::Infinity>();

  const double h = 1e-6;
  std::vector<double> plus = psi, minus = psi;
  for (int i = 0; i < n; ++i) {
    plus[i] += h * u[i];
    minus[i] -= h * u[i];
  }
  const auto fp = build_residual(plus, p, model), fm = build_residual(minus, p, model);
  const Eigen::VectorXd ju = build_jacobian(psi, p, model) * u;
  double scale = 1.0, err = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs((fp[i] - fm[i]) / (2 * h) - ju[i]));
    scale = std::max(scale, std::abs(ju[i]));
  }
  return err / scale;
}

}  // namespace

TEST_CASE("residual vanishes on the unforced constant") {
  const auto p = make_params(0.3, 0.0, 1.0, 1e-3);
  const std::vector<double> c(64, 0.3);
  CHECK(max_abs(build_residual(c, p, Model::Reduced)) < 1e-15);
  CHECK(max_abs(build_residual(c, p, Model::Full)) < 1e-12);
}

TEST_CASE("jacobian at psi = 0") {
  const auto p = make_params(0.0, 0.0, 1.0);
  const int n = 16;
  const Eigen::MatrixXd j = build_jacobian(std::vector<double>(n, 0.0), p, Model::Reduced);
  const Eigen::MatrixXd expected = -PeriodicStencil(1, n, 1.0).dense() + Eigen::MatrixXd::Identity(n, n);
  CHECK((j - expected).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("jacobian maps constants to v") {
  const auto p = make_params(0.4, 0.2, 1.7, 5e-4);
  const int n = 32;
  const Eigen::MatrixXd j = build_jacobian(std::vector<double>(n, 0.4), p, Model::Full);
  const Eigen::VectorXd y = j * Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(1.7).epsilon(1e-9));
}

TEST_CASE("jacobian agrees with finite differences") {
  for (unsigned seed : {1u, 2u, 3u}) {
    CHECK(fd_error(make_params(0.3, 0.5, 1.0), Model::Reduced, 64, seed) <= 1e-6);
    CHECK(fd_error(make_params(0.65, 0.1, 1.0, 5e-4), Model::Full, 128, seed) <= 1e-6);
  }
}

TEST_CASE("constant guess converges immediately") {
  const auto p = make_params(0.5, 0.0, 1.0, 5e-4);
  const auto g = guess_a2(p, 64);
  for (double x : g) CHECK(x == 0.5);
  const auto w = newton_linesearch(g, p, Model::Full, {}, {GuessKind::A2});
  CHECK(w.iterations <= 1);
  CHECK(max_abs_diff(w.profile.values(), g) < 1e-12);
}

TEST_CASE("a2 guess has the exact mean") {
  for (double m : {-0.6, 0.0, 0.3, 0.7, kInvSqrt3}) {
    const auto g = guess_a2(make_params(m, 0.3, 1.0), 128);
    CHECK(mean_of(g) == doctest::Approx(m).epsilon(1e-13));
  }
}

TEST_CASE("reduced newton reproduces the shooting solution") {
  ShootingConfig sc;
  sc.n_points = 512;
  const auto p = make_params(0.7, 0.12, 1.0);
  const auto s = solve_reduced(p, sc);
  CHECK(max_abs(build_residual(s.profile.values(), p, Model::Reduced)) < 1e-6);
  const auto w = newton_linesearch(guess_a2(p, 512), p, Model::Reduced, {}, {GuessKind::A2});
  CHECK(max_abs_diff(w.profile.values(), s.profile.values()) < 1e-6);
}

TEST_CASE("line search never increases the merit") {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  const auto w = solve_wave(p, 256, {GuessKind::A1, 1, +1});
  REQUIRE(w.merit_history.size() >= 2);
  for (std::size_t i = 1; i < w.merit_history.size(); ++i) CHECK(w.merit_history[i] <= w.merit_history[i - 1]);
  for (double a : w.step_lengths) {
    CHECK(a > 0.0);
    CHECK(a <= 1.0);
  }
  CHECK(w.final_residual < 1e-12);
}

TEST_CASE("single-spike guess converges to a single spike") {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  const auto w = solve_wave(p, 256, {GuessKind::A1, 1, +1});
  CHECK(count_spikes(w.profile.values()) == 1);
  CHECK(w.profile.mean_consistent());
  CHECK(w.profile.max() > 0.9);
  CHECK(w.profile.min() < -0.9);
}

TEST_CASE("spike guess at zero mean") {
  const auto p = make_params(0.0, 0.1, 1.0, 1e-5);
  const auto g = guess_spike(p, 256, 1, +1);
  CHECK(std::abs(g.mean_shift) < 10 * std::sqrt(p.eps));
  CHECK(std::abs(mean_of(g.values)) < 1e-13);
  CHECK_FALSE(g.degenerate);
}

TEST_CASE("negative-mean spike guesses are mirrored") {
  const auto up = make_guess(make_params(0.3, 0.1, 1.0, 5e-4), 128, {GuessKind::A1, 1, +1});
  const auto down = make_guess(make_params(-0.3, 0.1, 1.0, 5e-4), 128, {GuessKind::A1, 1, +1});
  const Profile m = mirror_profile(Profile(make_params(0.3, 0.1, 1.0, 5e-4), up));
  CHECK(max_abs_diff(m.values(), down) < 1e-14);
}

TEST_CASE("count_spikes") {
  const int n = 64;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(3 * kTwoPi * (i + 0.5) / n);
  CHECK(count_spikes(x) == 3);
  CHECK(count_spikes(std::vector<double>(n, 0.5)) == 0);
}

TEST_CASE("guess labels round trip") {
  for (const auto& l : {GuessLabel{GuessKind::A2, 0, +1}, GuessLabel{GuessKind::A1, 1, +1},
                        GuessLabel{GuessKind::A3, 1, -1}, GuessLabel{GuessKind::NSpike, 4, +1},
                        GuessLabel{GuessKind::NSpike, 3, -1}}) {
    CHECK(parse_guess_label(to_string(l)) == l);
  }
  CHECK(to_string(GuessLabel{GuessKind::NSpike, 3, +1}) == "nspike:3");
  CHECK_THROWS_AS(parse_guess_label("nspike:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_guess_label("b7"), std::invalid_argument);
}

TEST_CASE("newton config validation") {
  NewtonConfig c;
  CHECK_NOTHROW(c.validate());
  c.rho_backtrack = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("newton reports failure with a code") {
  const auto p = make_params(0.7, 1.0, 1.0);
  NewtonConfig c;
  c.max_outer = 2;
  try {
    newton_linesearch(guess_a2(p, 128), p, Model::Reduced, c);
    FAIL("expected a SolverError");
  } catch (const SolverError& e) {
    CHECK((e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::LineSearchStalled));
  }
}
