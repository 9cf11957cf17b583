#include "ksdk/spectral/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {

FourierField::FourierField(int resolution, int components, bool is_real)
    : resolution_(resolution), components_(components), is_real_(is_real) {
  if (resolution < 0 || components < 1)
    throw ShapeError("FourierField: invalid resolution " + std::to_string(resolution) +
                     " / components " + std::to_string(components));
  data_.assign(static_cast<std::size_t>(components) * modes(), Complex{});
}

FourierField FourierField::constant(int resolution, double value) {
  FourierField f(resolution);
  f.at(0, 0, 0) = value;
  return f;
}

FourierField FourierField::real_mode(int resolution, Mode w, Complex amp) {
  FourierField f(resolution);
  if (!f.contains(w)) return f;
  if (w == Mode{}) {
    f.at(0, w) = amp.real();
  } else {
    f.at(0, w) = amp;
    f.at(0, -w) = std::conj(amp);
  }
  return f;
}

FourierField FourierField::component(int c) const {
  if (c < 0 || c >= components_) throw ShapeError("FourierField::component: index out of range");
  FourierField out(resolution_, 1, is_real_);
  auto src = component_span(c);
  std::copy(src.begin(), src.end(), out.data_.begin());
  return out;
}

void FourierField::set_component(int c, const FourierField& scalar) {
  if (c < 0 || c >= components_ || scalar.components_ != 1 ||
      scalar.resolution_ != resolution_)
    throw ShapeError("FourierField::set_component: shape mismatch");
  auto dst = component_span(c);
  std::copy(scalar.data_.begin(), scalar.data_.end(), dst.begin());
}

double FourierField::hermitian_defect() const {
  // (k1, k2) -> (-k1, -k2) reverses the flat index within a component.
  double defect = 0.0;
  const std::size_t plane = static_cast<std::size_t>(side()) * side();
  for (int c = 0; c < components_; ++c) {
    const Complex* p = data_.data() + c * plane;
    for (std::size_t i = 0; i <= plane / 2; ++i)
      defect = std::max(defect, std::norm(p[plane - 1 - i] - std::conj(p[i])));
  }
  return std::sqrt(defect);
}

double FourierField::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

bool FourierField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void FourierField::symmetrize() {
  const int M = resolution_;
  for (int c = 0; c < components_; ++c) {
    at(c, 0, 0) = at(c, 0, 0).real();
    for_each_mode(M, [&](Mode w) {
      if (in_upper_half(w)) at(c, -w) = std::conj(at(c, w));
    });
  }
  is_real_ = true;
}

void FourierField::require_same_shape(const FourierField& o) const {
  if (o.resolution_ != resolution_ || o.components_ != components_)
    throw ShapeError("FourierField: operands differ in resolution or components (" +
                     std::to_string(resolution_) + "x" + std::to_string(components_) + " vs " +
                     std::to_string(o.resolution_) + "x" + std::to_string(o.components_) + ")");
}

FourierField& FourierField::operator+=(const FourierField& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  is_real_ = is_real_ && o.is_real_;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  is_real_ = is_real_ && o.is_real_;
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& z : data_) z *= s;
  return *this;
}

}  // namespace ksdk
