#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace fgp::test {

struct BruteCumulants {
  double k2 = 0, k3 = 0, k4 = 0;
};

// Sums over index tuples. Distinct triples are counted as 6 times the
// strictly ordered ones; tuples with ties are added separately.
inline BruteCumulants brute_force(const Eigen::MatrixXd& rho, const Eigen::VectorXd& w, double T) {
  const int n = static_cast<int>(w.size());
  BruteCumulants out;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.k2 += w(j) * w(k) * rho(j, k) * rho(j, k);
  out.k2 *= 2.0 / T;

  double strict = 0.0, ties = 0.0;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const double v = w(r) * w(s) * w(t) * rho(r, s) * rho(s, t) * rho(t, r);
        if (r < s && s < t) strict += v;
        else if (r == s || s == t || r == t) ties += v;
      }
  out.k3 = (48.0 * strict + 8.0 * ties) / std::pow(T, 1.5);

  double all4 = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          all4 += w(a) * w(b) * w(c) * w(d) * rho(a, b) * rho(b, c) * rho(c, d) * rho(d, a);
  out.k4 = 48.0 * all4 / (T * T);
  return out;
}

}  // namespace fgp::test
