// Linear Fourier multipliers and grid products on the torus.
#pragma once

#include "ksdk/spectral/field.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {

/// P_t f: multiplies fhat(w) by exp(-t |2 pi w|^2). Throws DomainError for t < 0.
FourierField heat_propagate(const FourierField& f, double t);

/// Phi_f with Phi_hat(w) = fhat(w) / |2 pi w|^2 and Phi_hat(0) = 0, so that
/// -Laplace Phi_f = f - mean(f). Applied per component.
FourierField green_potential(const FourierField& f);
/// gradient(green_potential(f)) in one pass.
FourierField green_gradient(const FourierField& f);

/// Scalar -> 2-vector, symbol 2 pi i w_j.
FourierField gradient(const FourierField& f);
/// 2-vector -> scalar. Throws ShapeError for other component counts.
FourierField divergence(const FourierField& v);
/// Per component, symbol -|2 pi w|^2.
FourierField laplacian(const FourierField& f);
/// Scalar -> 2x2 matrix stored row-major as 4 components, symbol -(2 pi)^2 w_i w_j.
FourierField hessian(const FourierField& f);

/// Zeroes every mode with |w_i| > floor(2M/3).
FourierField dealias(const FourierField& f);
void dealias_in_place(FourierField& f);

/// Grid-space pointwise product followed by dealiasing. A scalar operand is
/// broadcast against a vector one; two vectors are multiplied component-wise.
FourierField multiply(const FourierField& a, const FourierField& b);

/// (sum_w (1 + |2 pi w|^2)^gamma |fhat(w)|^2)^{1/2}, summed over components.
double sobolev_norm(const FourierField& f, double gamma);

/// L^p norm by grid quadrature on the (2M+2)^2 grid (vector fields use the
/// Euclidean norm pointwise). p = infinity uses the grid maximum.
double lp_norm(const FourierField& f, double p);
double lp_norm(const RealGrid& g, double p);

/// L^2 norm of min(0, f) by grid quadrature.
double negative_part_l2(const RealGrid& g);

}  // namespace ksdk
