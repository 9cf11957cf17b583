#include "ksdk/spectral/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {
namespace {

double bump_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

void check_exponent(double p, const char* what) {
  if (!(std::isinf(p) || p == 1.0 || p == 2.0))
    throw DomainError(std::string("besov_norm: ") + what + " must be 1, 2 or inf");
}

struct BlockGrids {
  int n = 0;
  int components = 0;
  std::vector<RealGrid> grids;  // index k + 1
};

BlockGrids block_grids(const LittlewoodPaley& lp, const FourierField& f) {
  BlockGrids out;
  out.n = grid_size(f.resolution());
  out.components = f.components();
  for (int k = -1; k <= lp.max_block(); ++k) {
    const FourierField b = lp.block(f, k);
    RealGrid g(out.n, f.components());
    for (int c = 0; c < f.components(); ++c) to_grid_component(b, c, g.component(c), out.n);
    out.grids.push_back(std::move(g));
  }
  return out;
}

void check_pair(const LittlewoodPaley& lp, const FourierField& f, const FourierField& g) {
  if (f.resolution() != lp.resolution() || g.resolution() != lp.resolution())
    throw ShapeError("paraproduct/resonant: resolution mismatch");
  if (f.components() != g.components() && f.components() != 1 && g.components() != 1)
    throw ShapeError("paraproduct/resonant: incompatible component counts");
}

// sum over the pairs (l, k) accepted by `take` of Delta_l f * Delta_k g on the grid.
template <class Take>
FourierField block_product(const LittlewoodPaley& lp, const FourierField& f,
                           const FourierField& g, Take take) {
  check_pair(lp, f, g);
  const BlockGrids bf = block_grids(lp, f);
  const BlockGrids bg = block_grids(lp, g);
  const int cout = std::max(f.components(), g.components());
  RealGrid acc(bf.n, cout);
  const int K = lp.max_block();
  for (int k = -1; k <= K; ++k)
    for (int l = -1; l <= K; ++l) {
      if (!take(l, k)) continue;
      const RealGrid& a = bf.grids[l + 1];
      const RealGrid& b = bg.grids[k + 1];
      for (int c = 0; c < cout; ++c) {
        const double* pa = a.component(f.components() == 1 ? 0 : c);
        const double* pb = b.component(g.components() == 1 ? 0 : c);
        double* po = acc.component(c);
        for (std::size_t i = 0; i < acc.points(); ++i) po[i] += pa[i] * pb[i];
      }
    }
  FourierField out = from_grid(acc, lp.resolution());
  dealias_in_place(out);
  return out;
}

}  // namespace

double lp_radial_cutoff(double r) {
  if (r <= kLpInner) return 1.0;
  if (r >= kLpOuter) return 0.0;
  const double up = bump_tail(kLpOuter - r);
  const double down = bump_tail(r - kLpInner);
  return up / (up + down);
}

double lp_symbol(int k, double radius) {
  if (k == -1) return lp_radial_cutoff(radius);
  const double scaled = std::ldexp(radius, -k);
  return lp_radial_cutoff(scaled / 2.0) - lp_radial_cutoff(scaled);
}

LittlewoodPaley::LittlewoodPaley(int resolution) : resolution_(resolution) {
  if (resolution < 1) throw ShapeError("LittlewoodPaley: resolution must be >= 1");
  const double r_max = std::sqrt(2.0) * resolution;
  max_block_ = 0;
  while (std::ldexp(kLpInner, max_block_ + 1) < r_max) ++max_block_;
  const std::size_t modes = static_cast<std::size_t>(2 * resolution + 1) * (2 * resolution + 1);
  table_.assign(static_cast<std::size_t>(max_block_ + 2) * modes, 0.0);
  for (int k = -1; k <= max_block_; ++k)
    for_each_mode(resolution, [&](Mode w) {
      table_[table_index(k, w)] = lp_symbol(k, std::sqrt(static_cast<double>(w.norm_sq())));
    });
}

std::size_t LittlewoodPaley::table_index(int k, Mode w) const {
  const int side = 2 * resolution_ + 1;
  return (static_cast<std::size_t>(k + 1) * side + (w.k1 + resolution_)) * side +
         (w.k2 + resolution_);
}

double LittlewoodPaley::symbol(int k, Mode w) const {
  if (k < -1 || k > max_block_) return 0.0;
  return table_[table_index(k, w)];
}

FourierField LittlewoodPaley::block(const FourierField& f, int k) const {
  if (f.resolution() != resolution_) throw ShapeError("lp_block: resolution mismatch");
  FourierField out(resolution_, f.components(), f.is_real());
  if (k < -1 || k > max_block_) return out;
  for (int c = 0; c < f.components(); ++c)
    for_each_mode(resolution_, [&](Mode w) {
      const double s = table_[table_index(k, w)];
      if (s != 0.0) out.at(c, w) = s * f.at(c, w);
    });
  return out;
}

double LittlewoodPaley::besov_norm(const FourierField& f, double alpha, double p,
                                   double q) const {
  check_exponent(p, "p");
  check_exponent(q, "q");
  double acc = 0.0;
  for (int k = -1; k <= max_block_; ++k) {
    const double term = std::pow(2.0, k * alpha) * lp_norm(block(f, k), p);
    if (std::isinf(q))
      acc = std::max(acc, term);
    else if (q == 1.0)
      acc += term;
    else
      acc += term * term;
  }
  return q == 2.0 ? std::sqrt(acc) : acc;
}

FourierField LittlewoodPaley::paraproduct(const FourierField& f, const FourierField& g) const {
  return block_product(*this, f, g, [](int l, int k) { return l <= k - 2; });
}

FourierField LittlewoodPaley::resonant(const FourierField& f, const FourierField& g) const {
  return block_product(*this, f, g, [](int l, int k) { return std::abs(k - l) <= 1; });
}

}  // namespace ksdk
