#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <random>
#include <sstream>

#include "krylovlab/chaos.hpp"
#include "krylovlab/error.hpp"
#include "krylovlab/rng.hpp"
#include "krylovlab/time_grid.hpp"

using namespace krylovlab;

namespace {

Spectrum spec(std::vector<double> e) {
  Spectrum s;
  s.eigenvalues = std::move(e);
  return s;
}

constexpr LevelEnsemble kAll[] = {LevelEnsemble::Poisson, LevelEnsemble::GOE, LevelEnsemble::GUE, LevelEnsemble::GSE};

double integrate01(auto f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

}  // namespace

TEST_CASE("diagonalize") {
  MatrixXr z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(diagonalize(z).eigenvalues == std::vector<double>{-1.0, 1.0});
  MatrixXr h(4, 4);  // TFIM L=2, g=1, h=0
  h << -1, -1, -1, 0, -1, 1, 0, -1, -1, 0, 1, -1, 0, -1, -1, -1;
  const auto e = diagonalize(h).eigenvalues;
  CHECK(e[0] == doctest::Approx(-std::sqrt(5.0)));
  CHECK(e[1] == doctest::Approx(-1.0));
  CHECK(e[2] == doctest::Approx(1.0));
  CHECK(e[3] == doctest::Approx(std::sqrt(5.0)));
  MatrixXr bad = h;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(diagonalize(bad), Error);
  MatrixXc c(2, 2);
  c << 0, Complex(0, -1), Complex(0, 1), 0;
  const auto ec = diagonalize(c).eigenvalues;
  CHECK(ec[0] == doctest::Approx(-1.0));
}

TEST_CASE("trace invariance at D = 2048") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> d;
  const Eigen::Index n = 2048;
  MatrixXr A(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) A.data()[i] = d(gen);
  A = (A + A.transpose()).eval() / 2.0;
  const auto e = diagonalize(A).eigenvalues;
  double s = 0.0;
  for (double x : e) s += x;
  CHECK(std::abs(s - A.trace()) < 1e-6 * A.norm());
  CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("r statistics on hand examples") {
  const auto eq = r_statistics(spec({0, 1, 2, 3}));
  CHECK(eq.mean_r_tilde == 1.0);
  CHECK(eq.r_tilde_values.size() == 2);
  const auto r = r_statistics(spec({0, 1, 3}));
  REQUIRE(r.r_tilde_values.size() == 1);
  CHECK(r.r_tilde_values[0] == 0.5);
  CHECK(r.r_values[0] == 2.0);
  const auto dg = r_statistics(spec({0, 1, 1, 3, 4}));
  CHECK(dg.dropped_spacings == 1);
  REQUIRE(dg.r_tilde_values.size() == 1);  // only (s=2, s=1)
  CHECK(dg.r_tilde_values[0] == 0.5);
  CHECK_THROWS_AS(r_statistics(spec({0, 1})), Error);
  CHECK_THROWS_AS(r_statistics(spec({0, 0, 0})), Error);
  CHECK_THROWS_AS(r_statistics(spec({2, 1, 0})), Error);

  std::vector<RStats> parts{r_statistics(spec({0, 1, 3})), r_statistics(spec({0, 1, 2, 3}))};
  CHECK(pool(parts).mean_r_tilde == doctest::Approx((0.5 + 1 + 1) / 3.0));
}

TEST_CASE("reference distributions: closed-form means and normalizations by quadrature") {
  CHECK(reference_mean_r_tilde(LevelEnsemble::Poisson) == doctest::Approx(2 * std::log(2.0) - 1).epsilon(1e-15));
  CHECK(reference_mean_r_tilde(LevelEnsemble::GOE) == doctest::Approx(4 - 2 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK(reference_mean_r_tilde(LevelEnsemble::Poisson) == doctest::Approx(0.38629).epsilon(1e-5));
  CHECK(reference_mean_r_tilde(LevelEnsemble::GOE) == doctest::Approx(0.53590).epsilon(1e-5));
  CHECK(wigner_normalization(1) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));

  for (auto e : kAll) {
    CAPTURE(to_string(e));
    const double norm = integrate01([&](double x) { return reference_density_tilde(e, x); });
    CHECK(std::abs(norm - 1.0) < 1e-8);
    const double mean = integrate01([&](double x) { return x * reference_density_tilde(e, x); });
    CHECK(std::abs(mean - reference_mean_r_tilde(e)) < 1e-8);
    // the r density on (0, inf)
    // (1, inf) folded onto (0, 1) with r = 1/u
    const double full = integrate01([&](double x) { return x > 0 ? reference_density(e, x) : 0.0; }) +
                        integrate01([&](double u) { return u > 0 ? reference_density(e, 1 / u) / (u * u) : 0.0; });
    CHECK(std::abs(full - 1.0) < 1e-8);
    CHECK(reference_density_tilde(e, 1.5) == 0.0);
    CHECK(reference_density_tilde(e, 0.3) == doctest::Approx(2 * reference_density(e, 0.3)));
    CHECK_THROWS_AS(reference_density(e, 0.0), Error);
  }
  CHECK_THROWS_AS(wigner_normalization(3), Error);
}

TEST_CASE("GOE surmise mean recovered by sampling") {
  // rejection sampling from the surmise density
  CounterRng rng(CounterRng::child_key(2024, 0));
  const double cap = 2.0 * 1.1;  // bound on P(r~) for GOE (max about 1.96)
  double sum = 0.0;
  int accepted = 0;
  while (accepted < 5000) {
    const double x = rng.uniform();
    if (rng.uniform() * cap <= reference_density_tilde(LevelEnsemble::GOE, x)) {
      sum += x;
      ++accepted;
    }
  }
  CHECK(std::abs(sum / 5000 - (4 - 2 * std::sqrt(3.0))) < 0.01);

  // 3 x 3 GOE matrices, for which the surmise is exact
  std::mt19937_64 gen(99);
  std::normal_distribution<double> d;
  double s3 = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a.data()[i] = d(gen);
    const Eigen::Matrix3d h = (a + a.transpose()) / 2;
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h, Eigen::EigenvaluesOnly).eigenvalues();
    const double s1 = ev(1) - ev(0), s2 = ev(2) - ev(1);
    s3 += std::min(s1, s2) / std::max(s1, s2);
  }
  CHECK(std::abs(s3 / n - (4 - 2 * std::sqrt(3.0))) < 0.01);
}

TEST_CASE("histogram is density-normalized") {
  const auto h = histogram_r_tilde(std::vector<double>{0.1, 0.15, 0.5, 0.99, 1.0}, 4);
  REQUIRE(h.density.size() == 4);
  double area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) area += h.density[i] * (h.bin_hi[i] - h.bin_lo[i]);
  CHECK(area == doctest::Approx(1.0));
  CHECK(h.density[0] == doctest::Approx(2 / 5.0 * 4));
  CHECK(h.density[3] == doctest::Approx(2 / 5.0 * 4));
}

TEST_CASE("counter RNG") {
  CounterRng a(7), b(7);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(CounterRng(7).at(5) == a.at(5));
  CHECK(CounterRng::child_key(1, 0) != CounterRng::child_key(1, 1));
  CHECK(CounterRng::child_key(1, 0) != CounterRng::child_key(2, 0));
  CounterRng n(CounterRng::child_key(5, 3));
  double m = 0.0, v = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double x = n.normal(1.0, 2.0);
    m += x;
    v += (x - 1.0) * (x - 1.0);
  }
  CHECK(std::abs(m / N - 1.0) < 0.02);
  CHECK(std::abs(std::sqrt(v / N) - 2.0) < 0.02);
}

TEST_CASE("disorder ensembles") {
  ModelSpec m;
  m.L = 6;
  m.g = -1.05;
  m.h = 0.5;
  SectorSpec s;
  s.parity = 1;
  DisorderSpec d;
  d.n_samples = 4;
  d.sigma = 0.0;
  d.master_seed = 42;
  const auto ref = sector_spectrum(m, s);
  for (const auto& sp : disorder_ensemble(m, d, s)) CHECK(sp.eigenvalues == ref.eigenvalues);

  d.sigma = 0.1;
  const auto a = disorder_ensemble(m, d, s);
  const auto b = disorder_ensemble(m, d, s);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].eigenvalues == b[k].eigenvalues);
    CHECK(a[k].model->h == m.h + disorder_shift(d, k));
  }
  CHECK(a[0].eigenvalues != a[1].eigenvalues);

  // the perturbation on h breaks the spin flip
  SectorSpec pz = s;
  pz.z_reflection = 1;
  ModelSpec mi = m;
  mi.h = 0.0;
  try {
    disorder_ensemble(mi, d, pz);
    FAIL("expected a symmetry violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SymmetryViolation);
  }
  d.target = DisorderTarget::NonLocalCoupling;
  CHECK_THROWS_AS(disorder_ensemble(m, d, s), Error);  // local TFIM has no gamma
  ModelSpec nl = mi;
  nl.family = ModelFamily::NonLocalTFIM;
  nl.gamma = 0.5;
  CHECK_NOTHROW(disorder_ensemble(nl, d, pz));

  DisorderSpec bad;
  bad.n_samples = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.n_samples = 1;
  bad.sigma = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("SFF: two-level example and normalization") {
  const std::vector<Spectrum> one{spec({-1, 1})};
  std::vector<double> t;
  for (int j = 0; j < 30; ++j) t.push_back(0.1 * j);
  const auto c = sff(one, one[0], 0.0, t);
  CHECK(c.g_values[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(c.g_values[j] == doctest::Approx(std::pow(std::cos(t[j]), 2)).epsilon(1e-12));
  CHECK(c.plateau_prediction == 0.5);
  CHECK(c.plateau_reliable);
  CHECK(!sff(std::vector<Spectrum>{spec({0, 0, 1})}, spec({0, 0, 1}), 0.0, t).plateau_reliable);

  // beta > 0: g(0) = 1 and Z(2b)/Z(b)^2
  const auto cb = sff(std::vector<Spectrum>{spec({0, 1, 3})}, spec({0, 1, 3}), 0.7, t);
  CHECK(cb.g_values[0] == doctest::Approx(1.0));
  const double z1 = 1 + std::exp(-0.7) + std::exp(-2.1), z2 = 1 + std::exp(-1.4) + std::exp(-4.2);
  CHECK(cb.plateau_prediction == doctest::Approx(z2 / (z1 * z1)));

  CHECK_THROWS_AS(sff(std::vector<Spectrum>{}, one[0], 0.0, t), Error);
  CHECK_THROWS_AS(sff(one, one[0], -1.0, t), Error);
  CHECK_THROWS_AS(sff(std::vector<Spectrum>{spec({0, std::nan("")})}, one[0], 0.0, t), Error);
}

TEST_CASE("SFF invariances") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> d;
  std::vector<Spectrum> ens;
  for (int k = 0; k < 6; ++k) {
    std::vector<double> e(40);
    for (auto& x : e) x = d(gen);
    std::sort(e.begin(), e.end());
    ens.push_back(spec(e));
  }
  TimeGrid grid;
  grid.t_min = 0.01;
  grid.t_max = 1e3;
  grid.points = 100;
  auto t = grid.values();
  t.insert(t.begin(), 0.0);
  const auto base = sff(ens, ens[0], 0.0, t);
  // global shift at beta = 0
  auto shifted = ens;
  for (auto& s : shifted)
    for (auto& x : s.eigenvalues) x += 3.25;
  const auto sh = sff(shifted, shifted[0], 0.0, t);
  // sample order
  auto rev = ens;
  std::reverse(rev.begin(), rev.end());
  const auto rv = sff(rev, ens[0], 0.0, t);
  for (std::size_t j = 0; j < t.size(); ++j) {
    CHECK(sh.g_values[j] == doctest::Approx(base.g_values[j]).epsilon(1e-9));
    CHECK(rv.g_values[j] == doctest::Approx(base.g_values[j]).epsilon(1e-12));
    CHECK(base.g_values[j] > 0.0);
  }
  const auto q = sff(ens, ens[0], 0.0, t, SffKind::Quenched);
  CHECK(q.g_values[0] == doctest::Approx(1.0));
  // bitwise determinism
  CHECK(sff(ens, ens[0], 0.0, t).g_values == base.g_values);
}

TEST_CASE("SFF late-time average matches the plateau for a non-degenerate spectrum") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> d;
  Eigen::Index n = 300;
  MatrixXr A(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) A.data()[i] = d(gen);
  const auto sp = diagonalize(MatrixXr((A + A.transpose()) / 2.0));
  TimeGrid grid;
  grid.t_min = 1e-2;
  grid.t_max = 1e6;
  grid.points = 2000;
  const std::vector<Spectrum> one{sp};
  const auto c = sff(one, sp, 0.0, grid.values());
  CHECK(std::abs(late_time_average(c, 2.0) / c.plateau_prediction - 1.0) < 0.05);
  CHECK(c.plateau_prediction == doctest::Approx(1.0 / 300));
}

TEST_CASE("ramp fit and window") {
  SFFCurve c;
  for (int j = 0; j < 50; ++j) {
    c.times.push_back(0.5 * j);
    c.g_values.push_back(2 * c.times.back() + 3);
  }
  const auto f = ramp_fit(c, 0.0, 100.0);
  CHECK(std::abs(f.slope - 2) < 1e-10);
  CHECK(std::abs(f.intercept - 3) < 1e-10);
  CHECK(f.points == 50);
  CHECK_THROWS_AS(ramp_fit(c, 0.0, 2.0), Error);
  for (auto& g : c.g_values) g = 0.25;
  CHECK(std::abs(ramp_fit(c, 0.0, 100.0).slope) < 1e-12);

  SFFCurve r;
  r.plateau_prediction = 0.1;
  const double g[] = {1.0, 0.5, 0.01, 0.02, 0.05, 0.09, 0.1, 0.1};
  for (int j = 0; j < 8; ++j) {
    r.times.push_back(j);
    r.g_values.push_back(g[j]);
  }
  const auto w = ramp_window(r, 0.8);
  REQUIRE(w);
  CHECK(w->first == 2.0);
  CHECK(w->second == 5.0);
}

TEST_CASE("CSV headers") {
  std::ostringstream a, b, h, s;
  write_csv(a, spec({-1, 1}));
  CHECK(a.str() == "index,energy\n0,-1\n1,1\n");
  write_r_tilde_csv(b, r_statistics(spec({0, 1, 3})));
  CHECK(b.str() == "r_tilde\n0.5\n");
  write_csv(h, histogram_r_tilde(std::vector<double>{0.5}, 2));
  CHECK(h.str().rfind("bin_lo,bin_hi,density\n", 0) == 0);
  SFFCurve c;
  c.times = {0};
  c.g_values = {1};
  write_csv(s, c);
  CHECK(s.str() == "t,g\n0,1\n");
}
