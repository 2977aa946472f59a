#include "nashdcf/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace nashdcf {
namespace {

// Approximate complex number with dyadic parts. Only used to produce
// starting points; every claim about roots goes through krawczyk().
struct Approx {
  Dyadic re, im;
};

Approx add(const Approx& a, const Approx& b) { return {a.re + b.re, a.im + b.im}; }
Approx sub(const Approx& a, const Approx& b) { return {a.re - b.re, a.im - b.im}; }

Approx mul(const Approx& a, const Approx& b, long bits) {
  return {(a.re * b.re - a.im * b.im).round_down(bits), (a.re * b.im + a.im * b.re).round_down(bits)};
}

Dyadic norm2(const Approx& a) { return a.re * a.re + a.im * a.im; }

Approx inv(const Approx& a, long bits) {
  Dyadic n = norm2(a);
  if (n.is_zero()) return {Dyadic(1, bits), Dyadic()};
  Dyadic r = round_rational(1 / n.to_rational(), bits, -1);
  return {(a.re * r).round_down(bits), (-(a.im * r)).round_down(bits)};
}

Dyadic absmax(const Approx& a) {
  Dyadic x = a.re.sign() < 0 ? -a.re : a.re, y = a.im.sign() < 0 ? -a.im : a.im;
  return x < y ? y : x;
}

/// A power of two strictly above |x|.
Dyadic pow2_above(const Dyadic& x) {
  if (x.is_zero()) return Dyadic(1, -4096);
  return Dyadic(1, x.magnitude());
}

Approx mid(const ComplexBox& b) { return {b.re().mid(), b.im().mid()}; }

ComplexBox point(const Approx& a) { return {Interval::point(a.re), Interval::point(a.im)}; }

Approx horner(const std::vector<Approx>& c, const Approx& z, long bits) {
  Approx acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = add(mul(acc, z, bits), c[k]);
  return acc;
}

std::vector<ComplexBox> derivative(const std::vector<ComplexBox>& c) {
  std::vector<ComplexBox> d;
  for (std::size_t k = 1; k < c.size(); ++k) {
    Interval f = Interval::point(Dyadic(static_cast<long>(k)));
    d.push_back(ComplexBox(f) * c[k]);
  }
  if (d.empty()) d.push_back(ComplexBox());
  return d;
}

bool inside(const ComplexBox& k, const ComplexBox& x) {
  if (x.is_real()) return k.is_real() && k.re().strictly_inside(x.re());
  return k.strictly_inside(x);
}

// Simultaneous Durand-Kerner iteration on the monic normalization.
std::vector<Approx> durand_kerner(const std::vector<ComplexBox>& boxes, long bits, int max_iter) {
  const std::size_t n = boxes.size() - 1;
  std::vector<Approx> a;
  for (const auto& b : boxes) a.push_back(mid(b));
  Approx lc_inv = inv(a.back(), bits);
  for (auto& x : a) x = mul(x, lc_inv, bits);
  a.back() = {Dyadic(1), Dyadic()};
  Dyadic bound(1);
  for (std::size_t k = 0; k < n; ++k) {
    Dyadic m = absmax(a[k]);
    if (bound < m) bound = m;
  }
  Dyadic radius = pow2_above(bound + Dyadic(1));
  std::vector<Approx> z(n);
  Approx seed{Dyadic(Integer(2), -2) + Dyadic(Integer(3), -5), Dyadic(Integer(29), -5)};  // 0.40625 + 0.90625i
  Approx w{radius, Dyadic()};
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = w;
    w = mul(w, seed, bits);
  }
  const Dyadic tol(1, -(bits * 3) / 4);
  for (int it = 0; it < max_iter; ++it) {
    bool settled = true;
    for (std::size_t i = 0; i < n; ++i) {
      Approx den{Dyadic(1), Dyadic()};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den = mul(den, sub(z[i], z[j]), bits);
      Approx step = mul(horner(a, z[i], bits), inv(den, bits), bits);
      z[i] = sub(z[i], step);
      Dyadic scale = absmax(z[i]);
      if (scale < Dyadic(1)) scale = Dyadic(1);
      if (scale * tol < absmax(step)) settled = false;
    }
    if (settled) break;
  }
  return z;
}

// Tries to certify a box around the approximation z.
bool certify(const std::vector<ComplexBox>& c, const Approx& z, long bits, bool real_coefficients,
             ComplexBox& out, bool& real) {
  std::vector<ComplexBox> d = derivative(c);
  Approx fz = mid(eval_boxes(c, point(z), bits));
  Approx dz = mid(eval_boxes(d, point(z), bits));
  Approx newton = mul(fz, inv(dz, bits), bits);
  const std::size_t n = c.size() - 1;
  Dyadic rho = pow2_above(absmax(newton) * Dyadic(static_cast<long>(2 * n)));
  Dyadic floor_rho = pow2_above(absmax(z) + Dyadic(1)).mul_2exp(-bits / 2);
  if (rho < floor_rho) rho = floor_rho;
  Dyadic imag = z.im.sign() < 0 ? -z.im : z.im;
  for (int attempt = 0; attempt < 3; ++attempt, rho = rho.mul_2exp(2)) {
    if (real_coefficients && imag <= rho) {
      ComplexBox X(Interval(z.re - rho, z.re + rho));
      bool ok = false;
      krawczyk(c, X, bits, ok);
      if (ok) {
        out = X;
        real = true;
        return true;
      }
    }
    ComplexBox X(Interval(z.re - rho, z.re + rho), Interval(z.im - rho, z.im + rho));
    if (real_coefficients && X.im().contains_zero()) continue;
    bool ok = false;
    krawczyk(c, X, bits, ok);
    if (ok) {
      out = X;
      real = false;
      return true;
    }
  }
  return false;
}

}  // namespace

ComplexBox eval_boxes(const std::vector<ComplexBox>& c, const ComplexBox& x, long bits) {
  if (c.empty()) return ComplexBox();
  ComplexBox acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = (acc * x + c[k]).rounded(bits);
  return acc;
}

ComplexBox krawczyk(const std::vector<ComplexBox>& c, const ComplexBox& X, long bits, bool& certified) {
  std::vector<ComplexBox> d = derivative(c);
  Approx m = mid(X);
  ComplexBox cm = point(m);
  ComplexBox fc = eval_boxes(c, cm, bits);
  ComplexBox dX = eval_boxes(d, X, bits);
  Approx y = inv(mid(eval_boxes(d, cm, bits)), bits);
  ComplexBox Y = point(y);
  ComplexBox one(Interval::point(Dyadic(1)));
  ComplexBox K = (cm - Y * fc + (one - Y * dX) * (X - cm)).rounded(bits);
  certified = !dX.contains_zero() && inside(K, X);
  return K;
}

std::vector<IsolatedRoot> isolate_roots(const CoeffFn& coeffs, int degree, bool real_coefficients) {
  if (degree < 1) throw std::invalid_argument("isolate_roots: constant polynomial");
  for (long bits = 64;; bits *= 2) {
    if (bits > (1L << 20)) throw std::runtime_error("root isolation did not converge");
    std::vector<ComplexBox> c = coeffs(bits);
    if (real_coefficients)
      for (auto& b : c) b = ComplexBox(b.re());
    if (static_cast<int>(c.size()) != degree + 1 || c.back().contains_zero()) continue;
    std::vector<Approx> z = durand_kerner(c, bits, 60 + 12 * degree + static_cast<int>(bits / 8));
    std::vector<IsolatedRoot> out;
    bool ok = true;
    for (const auto& zi : z) {
      IsolatedRoot r;
      if (!certify(c, zi, bits, real_coefficients, r.box, r.real)) {
        ok = false;
        break;
      }
      out.push_back(r);
    }
    for (std::size_t i = 0; ok && i < out.size(); ++i)
      for (std::size_t j = i + 1; ok && j < out.size(); ++j)
        if (out[i].box.intersects(out[j].box)) ok = false;
    if (ok) return out;
  }
}

ComplexBox refine_root(const CoeffFn& coeffs, ComplexBox X, long target_bits) {
  const Dyadic target(1, -target_bits);
  if (X.width() <= target) return X;
  for (long bits = std::max<long>(64, target_bits + 32);; bits *= 2) {
    std::vector<ComplexBox> c = coeffs(bits);
    if (X.is_real())
      for (auto& b : c) b = ComplexBox(b.re());
    for (int it = 0; it < 64; ++it) {
      bool cert = false;
      ComplexBox K = krawczyk(c, X, bits, cert);
      if (!K.intersects(X)) throw std::logic_error("refine_root: root escaped its box");
      ComplexBox next = X.intersect(K);
      if (next.width() <= target) return next;
      const bool stalled = X.width() <= next.width().mul_2exp(1);
      X = next;
      if (stalled) break;
    }
  }
}

}  // namespace nashdcf
