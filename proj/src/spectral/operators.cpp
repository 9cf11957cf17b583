#include "ksdk/spectral/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_scalar(const FourierField& f, const char* op) {
  if (f.components() != 1)
    throw ShapeError(std::string(op) + ": expected a scalar field, got " +
                     std::to_string(f.components()) + " components");
}

}  // namespace

FourierField heat_propagate(const FourierField& f, double t) {
  if (!(t >= 0.0)) throw DomainError("heat_propagate: negative time " + std::to_string(t));
  FourierField out = f;
  const int M = f.resolution();
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(M, [&](Mode w) {
      if (w == Mode{}) return;
      out.at(c, w) *= std::exp(-t * laplace_symbol(w));
    });
  return out;
}

FourierField green_potential(const FourierField& f) {
  FourierField out = f;
  const int M = f.resolution();
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(M, [&](Mode w) {
      if (w == Mode{})
        out.at(c, w) = 0.0;
      else
        out.at(c, w) /= laplace_symbol(w);
    });
  return out;
}

FourierField green_gradient(const FourierField& f) {
  require_scalar(f, "green_gradient");
  const int M = f.resolution();
  FourierField out(M, 2, f.is_real());
  for_each_mode(M, [&](Mode w) {
    if (w == Mode{}) return;
    const Complex z = f.at(0, w);
    const double s = 1.0 / (kTwoPi * w.norm_sq());
    const Complex iz{-s * z.imag(), s * z.real()};
    out.at(0, w) = static_cast<double>(w.k1) * iz;
    out.at(1, w) = static_cast<double>(w.k2) * iz;
  });
  return out;
}

FourierField gradient(const FourierField& f) {
  require_scalar(f, "gradient");
  const int M = f.resolution();
  FourierField out(M, 2, f.is_real());
  for_each_mode(M, [&](Mode w) {
    const Complex z = f.at(0, w);
    const Complex iz{-z.imag(), z.real()};
    out.at(0, w) = (kTwoPi * w.k1) * iz;
    out.at(1, w) = (kTwoPi * w.k2) * iz;
  });
  return out;
}

FourierField divergence(const FourierField& v) {
  if (v.components() != 2)
    throw ShapeError("divergence: expected a 2-vector field, got " +
                     std::to_string(v.components()) + " components");
  const int M = v.resolution();
  FourierField out(M, 1, v.is_real());
  for_each_mode(M, [&](Mode w) {
    const Complex s = (kTwoPi * w.k1) * v.at(0, w) + (kTwoPi * w.k2) * v.at(1, w);
    out.at(0, w) = Complex{-s.imag(), s.real()};
  });
  return out;
}

FourierField laplacian(const FourierField& f) {
  FourierField out = f;
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(f.resolution(), [&](Mode w) { out.at(c, w) *= -laplace_symbol(w); });
  return out;
}

FourierField hessian(const FourierField& f) {
  require_scalar(f, "hessian");
  const int M = f.resolution();
  FourierField out(M, 4, f.is_real());
  for_each_mode(M, [&](Mode w) {
    const Complex z = f.at(0, w);
    const double a = kTwoPi * w.k1;
    const double b = kTwoPi * w.k2;
    out.at(0, w) = -a * a * z;
    out.at(1, w) = -a * b * z;
    out.at(2, w) = -a * b * z;
    out.at(3, w) = -b * b * z;
  });
  return out;
}

void dealias_in_place(FourierField& f) {
  const int M = f.resolution();
  const int K = dealias_cutoff(M);
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(M, [&](Mode w) {
      if (std::abs(w.k1) > K || std::abs(w.k2) > K) f.at(c, w) = 0.0;
    });
}

FourierField dealias(const FourierField& f) {
  FourierField out = f;
  dealias_in_place(out);
  return out;
}

FourierField multiply(const FourierField& a, const FourierField& b) {
  if (a.resolution() != b.resolution())
    throw ShapeError("multiply: resolution mismatch (" + std::to_string(a.resolution()) +
                     " vs " + std::to_string(b.resolution()) + ")");
  const int ca = a.components();
  const int cb = b.components();
  if (ca != cb && ca != 1 && cb != 1)
    throw ShapeError("multiply: incompatible component counts " + std::to_string(ca) +
                     " and " + std::to_string(cb));
  const int M = a.resolution();
  const RealGrid ga = to_grid(a);
  const RealGrid gb = to_grid(b);
  const int cout = std::max(ca, cb);
  RealGrid prod(ga.n(), cout);
  for (int c = 0; c < cout; ++c) {
    const double* pa = ga.component(ca == 1 ? 0 : c);
    const double* pb = gb.component(cb == 1 ? 0 : c);
    double* po = prod.component(c);
    for (std::size_t i = 0; i < prod.points(); ++i) po[i] = pa[i] * pb[i];
  }
  FourierField out = from_grid(prod, M);
  dealias_in_place(out);
  return out;
}

double sobolev_norm(const FourierField& f, double gamma) {
  double sum = 0.0;
  const int M = f.resolution();
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(M, [&](Mode w) {
      const double weight = gamma == 0.0 ? 1.0 : std::pow(1.0 + laplace_symbol(w), gamma);
      sum += weight * std::norm(f.at(c, w));
    });
  return std::sqrt(sum);
}

double lp_norm(const RealGrid& g, double p) {
  const std::size_t n = g.points();
  const bool inf = std::isinf(p);
  if (!(inf || p == 1.0 || p == 2.0))
    throw DomainError("lp_norm: only p in {1, 2, inf} is supported, got " + std::to_string(p));
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (int c = 0; c < g.components(); ++c) sq += g.component(c)[i] * g.component(c)[i];
    const double a = std::sqrt(sq);
    if (inf)
      acc = std::max(acc, a);
    else if (p == 1.0)
      acc += a;
    else
      acc += sq;
  }
  if (inf) return acc;
  acc /= static_cast<double>(n);
  return p == 1.0 ? acc : std::sqrt(acc);
}

double lp_norm(const FourierField& f, double p) { return lp_norm(to_grid(f), p); }

double negative_part_l2(const RealGrid& g) {
  const double* v = g.component(0);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i)
    if (v[i] < 0.0) acc += v[i] * v[i];
  return std::sqrt(acc / static_cast<double>(g.points()));
}

}  // namespace ksdk
