#pragma once

#include <complex>
#include <vector>

#include "tickmoments/price_stats.hpp"

namespace tickmoments {

// k-th order approximation of the price characteristic function,
//   F_k(x) = exp( sum_{m=1..k} (i^m / m!) a_m x^m ),
// where the a_m are the first k cumulants of the volume-weighted price
// distribution. k=2 is the Gaussian fit; k=3 adds the skew term. Note F_3
// is not a true characteristic function for a3 != 0: its inverse transform
// develops small negative lobes, which invert_charfn clips and reports.
struct CharFnApprox {
    int k = 0;
    double a1 = 0.0;  // location, p(1)
    double a2 = 0.0;  // variance
    double a3 = 0.0;  // third cumulant, Sk * sigma^3
};

struct DensityApprox {
    std::vector<double> grid;
    std::vector<double> density;      // nonnegative; renormalized after clipping
    std::vector<double> raw_density;  // signed inversion output before clipping
    double clipped_mass = 0.0;        // absolute mass removed by clipping; 0 for k=2
};

CharFnApprox fit_charfn(const PriceMoments& moments, int k);

std::complex<double> eval_charfn(const CharFnApprox& approx, double x);

// Closed-form Gaussian density of a k=2 fit sampled on the grid. The grid
// must cover [a1 - 6 sigma, a1 + 6 sigma] so the sampled mass is ~1.
DensityApprox gaussian_density(const CharFnApprox& approx, std::vector<double> grid);

// Numerical Fourier inversion of F_k on the grid, k in {2,3}. Uniform grids
// go through an oversampled FFT; irregular grids fall back to direct
// oscillatory quadrature. Both paths run at two resolutions and reject
// results that fail to agree to 1e-5.
DensityApprox invert_charfn(const CharFnApprox& approx, std::vector<double> grid);

// Uniform grid of n_points spanning center +- n_sigmas * sigma, endpoints
// exact.
std::vector<double> uniform_grid(double center, double sigma, int n_points, double n_sigmas);

} // namespace tickmoments
