#pragma once

#include <numbers>

namespace lowk {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

struct SpecialValue {
    double value = 0.0;
    double abs_error = 0.0;
};

SpecialValue bessel_j0(double z);
SpecialValue bessel_j1(double z);
SpecialValue bessel_y0(double z);
SpecialValue bessel_y1(double z);

/// R(z) = Y0(z) - (2/pi) J0(z) [ln(z/2) + gamma].
SpecialValue bessel_remainder(double z);

/// Real Gamma function (Lanczos, g = 7, 9 terms).
SpecialValue gamma_real(double x);

/// (2/pi) (1/(nu-2)) (1/2)^(nu-3) G(nu-2) G(2-nu/2) / (G(nu/2)^2 G(nu/2-1)), 2 < nu < 4.
/// Equals (2/pi) Int_0^inf z^(1-nu) (1 - J0(z)^2) dz.
double bessel_moment(double nu);

/// Int_0^inf J0(z) J1(z) z^(2-nu) dz in closed form (Weber-Schafheitlin).
double j0j1_moment(double nu);

/// The same integral by quadrature between zeros of J0 J1 plus Wynn epsilon.
double j0j1_moment_quadrature(double nu);

/// All four of J0, J1, Y0, Y1 at z > 0, no argument checking.
struct Bessel01 {
    double j0, j1, y0, y1;
};
Bessel01 bessel01(double z);

/// J0 and J1 only, z >= 0.
void bessel_j01(double z, double& j0, double& j1);

}  // namespace lowk
