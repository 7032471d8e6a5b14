#include "oracles.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

double norm1(const Mat2C& m) {
  return std::abs(m.a00) + std::abs(m.a01) + std::abs(m.a10) + std::abs(m.a11);
}

// Unit quaternion (w, x, y, z) -> w - i(x sx + y sy + z sz).
Mat2C from_quaternion(const double q[4]) {
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  return {Complex(w, -z), Complex(-y, -x), Complex(y, -x), Complex(w, z)};
}

struct GapData {
  const GatePair* p1;
  const GatePair* p2;
};

double gap_at(const Mat2C& y, const GapData& d) {
  const Mat2C yd = y.dagger();
  return tocspin::distance(y * d.p1->first.matrix() * yd, d.p2->first.matrix()) +
         tocspin::distance(y * d.p1->second.matrix() * yd, d.p2->second.matrix());
}

double gap_objective(const gsl_vector* v, void* params) {
  const double q[4] = {gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2), gsl_vector_get(v, 3)};
  return gap_at(from_quaternion(q), *static_cast<GapData*>(params));
}

Mat2C sigma_dot(const Vec3& u) {
  return Mat2C::pauli_x() * Complex(u[0]) + Mat2C::pauli_y() * Complex(u[1]) + Mat2C::pauli_z() * Complex(u[2]);
}

}  // namespace

Mat2C expm_series(const Mat2C& x, double t) {
  Mat2C a = x * Complex(t);
  int squarings = 0;
  while (norm1(a) > 0.25) {
    a = a * Complex(0.5);
    ++squarings;
  }
  Mat2C sum = Mat2C::identity();
  Mat2C term = Mat2C::identity();
  for (int n = 1; n <= 30; ++n) {
    term = term * a * Complex(1.0 / n);
    sum = sum + term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

UnitaryGate random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double q[4] = {g(rng), g(rng), g(rng), g(rng)};
  return UnitaryGate::unchecked(from_quaternion(q));
}

tocspin::AlgebraElement random_algebra(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> u(-max_norm / std::sqrt(3.0), max_norm / std::sqrt(3.0));
  return {u(rng), u(rng), u(rng)};
}

double conjugation_gap(const GatePair& p1, const GatePair& p2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  GapData data{&p1, &p2};
  struct Start {
    double f;
    double q[4];
  };
  std::vector<Start> starts(384);
  for (auto& s : starts) {
    for (double& c : s.q) c = g(rng);
    s.f = gap_at(from_quaternion(s.q), data);
  }
  std::partial_sort(starts.begin(), starts.begin() + 6, starts.end(),
                    [](const Start& a, const Start& b) { return a.f < b.f; });

  gsl_multimin_function fn{&gap_objective, 4, &data};
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* ss = gsl_vector_alloc(4);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
  double best = starts[0].f;
  for (int i = 0; i < 6; ++i) {
    double q[4];
    std::copy(starts[i].q, starts[i].q + 4, q);
    double step = 0.2;
    // Restarts shrink the simplex around the current point.
    for (int round = 0; round < 4; ++round) {
      const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
      for (int j = 0; j < 4; ++j) {
        gsl_vector_set(x, j, q[j] / n);
        gsl_vector_set(ss, j, step);
      }
      gsl_multimin_fminimizer_set(m, &fn, x, ss);
      for (int it = 0; it < 2000; ++it) {
        if (gsl_multimin_fminimizer_iterate(m)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-14) == GSL_SUCCESS) break;
      }
      for (int j = 0; j < 4; ++j) q[j] = gsl_vector_get(m->x, j);
      best = std::min(best, m->fval);
      step *= 0.05;
    }
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return best;
}

std::optional<BruteForceMin> tmin_bruteforce(double theta, double gamma, int box, int bzero_k_max) {
  const double q = theta / M_PI;
  const bool half_turn = std::abs(q - 1.0) < 1e-15;
  std::optional<BruteForceMin> best;
  for (int s : {1, -1}) {
    for (int m = 1; m <= box; ++m) {
      for (int l = (s == 1 ? 0 : 1); l <= box; ++l) {
        for (int k = 1; k <= box; ++k) {
          if (!half_turn && (l - k) % 2 != 0) continue;
          const double h = s * q / 2.0 + l;
          const double M = m * m * (1.0 - gamma) + h * h * gamma - double(k) * k;
          const double r = M / (gamma * (1.0 - gamma));
          if (!(r > 0.0)) continue;
          if (!((m - h) * (m - h) < r && r < (m + h) * (m + h))) continue;
          const double t = M_PI * std::sqrt(r);
          if (!best || t < best->t - 1e-12) best = BruteForceMin{t, s, m, l, k, false};
        }
      }
    }
  }
  for (int k = 1; k <= bzero_k_max; ++k) {
    const double t = k * M_PI / gamma;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (std::abs(std::cos(t) - sign * std::cos(theta / 2.0)) < 1e-9) {
      if (!best || t < best->t) best = BruteForceMin{t, 0, 0, 0, k, true};
      break;
    }
  }
  return best;
}

GatePair rk4_propagate(const std::function<Vec3(double)>& u, double gamma, double gamma1, double t_final,
                       int n_steps) {
  const double h = t_final / n_steps;
  const Complex mi(0.0, -1.0);
  auto gen = [&](double t, double g) { return sigma_dot(u(t)) * (mi * g); };
  Mat2C u1 = Mat2C::identity(), u2 = Mat2C::identity();
  for (int i = 0; i < n_steps; ++i) {
    const double t = i * h;
    for (int spin = 0; spin < 2; ++spin) {
      const double g = spin == 0 ? gamma1 : gamma * gamma1;
      Mat2C& y = spin == 0 ? u1 : u2;
      const Mat2C a0 = gen(t, g), a1 = gen(t + h / 2, g), a2 = gen(t + h, g);
      const Mat2C k1 = a0 * y;
      const Mat2C k2 = a1 * (y + k1 * Complex(h / 2));
      const Mat2C k3 = a1 * (y + k2 * Complex(h / 2));
      const Mat2C k4 = a2 * (y + k3 * Complex(h));
      y = y + (k1 + k2 * Complex(2.0) + k3 * Complex(2.0) + k4) * Complex(h / 6);
    }
  }
  return {UnitaryGate::unchecked(u1), UnitaryGate::unchecked(u2)};
}

}  // namespace oracle
