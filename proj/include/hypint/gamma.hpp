#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace hypint {

// Lanczos approximation, g = 7, nine terms; about 15 significant digits
// over the right half plane, reflection elsewhere.
namespace detail {
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                        771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
} // namespace detail

/// True when z sits within `tol` of 0, -1, -2, ...
inline bool is_gamma_pole(std::complex<double> z, double tol = 1e-12)
{
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

/// log Gamma(z) on the principal branch for Re z >= 1/2, continued by reflection.
inline std::complex<double> log_gamma(std::complex<double> z)
{
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  std::complex<double> x = detail::lanczos_p[0];
  for (int i = 1; i < 9; ++i) x += detail::lanczos_p[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// Gamma(z); infinite at the poles.
inline std::complex<double> gamma(std::complex<double> z)
{
  constexpr double pi = std::numbers::pi;
  if (is_gamma_pole(z, 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
  z -= 1.0;
  std::complex<double> x = detail::lanczos_p[0];
  for (int i = 1; i < 9; ++i) x += detail::lanczos_p[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + detail::lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

/// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
inline std::complex<double> rgamma(std::complex<double> z)
{
  if (is_gamma_pole(z, 0.0)) return 0.0;
  return 1.0 / gamma(z);
}

} // namespace hypint
