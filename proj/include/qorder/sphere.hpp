#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qorder/errors.hpp"

namespace qorder {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Hard cap on the number of EW hops in a constructed path.
inline constexpr int kMaxPironHops = 64;

/// Angle between two unit vectors, in [0, pi].
template <typename Scalar>
Scalar theta(const Vec3<Scalar>& p, const Vec3<Scalar>& q) {
  if (std::abs(p.norm() - Scalar(1)) > Scalar(1e-10) || std::abs(q.norm() - Scalar(1)) > Scalar(1e-10))
    throw PreconditionViolation("theta expects unit vectors");
  // Same value as acos(<p,q>) but accurate near 0 and pi.
  return std::atan2(p.cross(q).norm(), std::clamp(p.dot(q), Scalar(-1), Scalar(1)));
}

/**
 * Pole p on S^2 with an orthonormal basis (e1, e2) of the equator plane p^perp.
 * Longitudes are measured from e1 towards e2, colatitudes are theta(p, .).
 */
template <typename Scalar>
class SphereFrame {
 public:
  explicit SphereFrame(const Vec3<Scalar>& pole) {
    const Scalar n = pole.norm();
    if (n < Scalar(1e-12)) throw PreconditionViolation("sphere frame needs a nonzero pole");
    pole_ = pole / n;
    Eigen::Index axis = 0;
    pole_.cwiseAbs().minCoeff(&axis);
    Vec3<Scalar> seed = Vec3<Scalar>::Unit(axis);
    e1_ = (seed - seed.dot(pole_) * pole_).normalized();
    e2_ = pole_.cross(e1_);
  }

  const Vec3<Scalar>& pole() const { return pole_; }
  const Vec3<Scalar>& e1() const { return e1_; }
  const Vec3<Scalar>& e2() const { return e2_; }

  Scalar colatitude(const Vec3<Scalar>& q) const { return theta(pole_, q); }
  Scalar longitude(const Vec3<Scalar>& q) const { return std::atan2(q.dot(e2_), q.dot(e1_)); }

  Vec3<Scalar> point(Scalar colat, Scalar lon) const {
    return std::cos(colat) * pole_ + std::sin(colat) * (std::cos(lon) * e1_ + std::sin(lon) * e2_);
  }

  /// 0 < theta(p, q) < pi/2, with `tol` slack kept away from both ends.
  bool in_northern(const Vec3<Scalar>& q, Scalar tol = Scalar(1e-9)) const {
    if (std::abs(q.norm() - Scalar(1)) > Scalar(1e-9)) return false;
    const Scalar c = colatitude(q);
    return c > tol && c < std::numbers::pi_v<Scalar> / 2 - tol;
  }

 private:
  Vec3<Scalar> pole_, e1_, e2_;
};

/// The equator point x = normalize(p x q) where EW(q) meets E_p; x is orthogonal to q.
template <typename Scalar>
Vec3<Scalar> ew_equator_point(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q) {
  const Vec3<Scalar> x = frame.pole().cross(q);
  if (x.norm() <= Scalar(1e-9)) throw PreconditionViolation("EW circle undefined at the pole");
  if (std::abs(frame.pole().dot(q)) <= Scalar(1e-9)) throw PreconditionViolation("EW circle undefined on the equator");
  if (frame.pole().dot(q) < 0) throw PreconditionViolation("EW circle needs a point of the northern hemisphere");
  return x.normalized();
}

/// Unit normal of the plane of EW(q). y lies on EW(q) iff |<y, n>| is zero.
template <typename Scalar>
Vec3<Scalar> ew_normal(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q) {
  return q.cross(ew_equator_point(frame, q)).normalized();
}

/// Point of EW(q) at arc parameter t: cos t q + sin t x.
template <typename Scalar>
Vec3<Scalar> ew_point(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q, Scalar t) {
  return std::cos(t) * q + std::sin(t) * ew_equator_point(frame, q);
}

template <typename Scalar>
Scalar ew_residual(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q, const Vec3<Scalar>& y) {
  return std::abs(y.dot(ew_normal(frame, q)));
}

template <typename Scalar>
bool ew_member(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q, const Vec3<Scalar>& y,
               Scalar tol = Scalar(1e-9)) {
  return std::abs(y.norm() - Scalar(1)) <= tol && ew_residual(frame, q, y) <= tol;
}

/// A chain q_0, ..., q_n of northern-hemisphere points with q_{i+1} on EW(q_i).
template <typename Scalar>
struct PironPath {
  SphereFrame<Scalar> frame;
  std::vector<Vec3<Scalar>> points;

  int hops() const { return static_cast<int>(points.size()) - 1; }
};

namespace detail {

/// Longitude gained by moving along EW(a) from colatitude `from` down to `to`.
template <typename Scalar>
Scalar hop_longitude(Scalar from, Scalar to) {
  const Scalar c = std::clamp(std::cos(to) / std::cos(from), Scalar(-1), Scalar(1));
  const Scalar t = std::acos(c);
  return std::atan2(std::sin(t), std::cos(t) * std::sin(from));
}

/// The point of EW(a) at colatitude `to`, on the side given by `sign`.
template <typename Scalar>
Vec3<Scalar> hop_to(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& a, Scalar to, Scalar sign) {
  const Scalar from = frame.colatitude(a);
  const Scalar t = std::acos(std::clamp(std::cos(to) / std::cos(from), Scalar(-1), Scalar(1)));
  return (std::cos(t) * a + sign * std::sin(t) * ew_equator_point(frame, a)).normalized();
}

template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  a = std::remainder(a, 2 * pi);
  return a <= -pi ? a + 2 * pi : a;
}

/// Longitude covered by n hops from colatitude `from` to `to` in equal colatitude steps, all on one side.
template <typename Scalar>
Scalar equal_step_reach(Scalar from, Scalar to, int n) {
  Scalar total = 0, c = from;
  for (int i = 1; i <= n; ++i) {
    const Scalar next = from + (to - from) * Scalar(i) / Scalar(n);
    total += hop_longitude(c, next);
    c = next;
  }
  return total;
}

}  // namespace detail

/**
 * Constructs a finite EW path from q to r (both northern, r strictly farther
 * from the pole). Equal colatitude steps on one side cover the most longitude
 * for a given hop count, so the construction takes the fewest hops n whose
 * equal-step reach covers the longitude gap, then bisects the colatitude m
 * where n - 1 equal hops stop so that the last hop lands on r. Gaps smaller
 * than a single hop's reach use two hops on opposite sides instead.
 * Throws Indeterminate when even 64 equal hops fall short.
 */
template <typename Scalar>
PironPath<Scalar> piron_path(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& q, const Vec3<Scalar>& r,
                             Scalar tol = Scalar(1e-9)) {
  if (!frame.in_northern(q) || !frame.in_northern(r))
    throw PreconditionViolation("Piron path endpoints must lie in the open northern hemisphere");
  const Scalar alpha = frame.colatitude(q);
  const Scalar rho = frame.colatitude(r);
  if (!(alpha < rho - Scalar(1e-9))) throw PreconditionViolation("Piron path needs theta(p,q) < theta(p,r)");

  if (ew_member(frame, q, r, tol)) return {frame, {q, r}};

  const Scalar gap = detail::wrap_angle(frame.longitude(r) - frame.longitude(q));
  const Scalar sign = gap < 0 ? Scalar(-1) : Scalar(1);
  const Scalar target = std::abs(gap);
  const auto finish = [&](std::vector<Vec3<Scalar>> pts) -> PironPath<Scalar> {
    if (!ew_member(frame, pts.back(), r, tol)) throw Error("Piron path construction missed its endpoint");
    pts.push_back(r);
    return {frame, std::move(pts)};
  };

  if (target <= detail::hop_longitude(alpha, rho)) {
    // Two hops on opposite sides: hop(alpha, b) - hop(b, rho) = target.
    Scalar lo = alpha, hi = rho;
    for (int it = 0; it < 200; ++it) {
      const Scalar mid = (lo + hi) / 2;
      if (mid == lo || mid == hi) break;
      const Scalar net = detail::hop_longitude(alpha, mid) - detail::hop_longitude(mid, rho);
      (net < target ? lo : hi) = mid;
    }
    return finish({q, detail::hop_to(frame, q, (lo + hi) / 2, sign)});
  }

  int n = 2;
  while (n <= kMaxPironHops && detail::equal_step_reach(alpha, rho, n) < target) ++n;
  if (n > kMaxPironHops)
    throw Indeterminate("no Piron path within " + std::to_string(kMaxPironHops) + " hops: longitude gap " +
                        std::to_string(target) + " exceeds the equal-step reach " +
                        std::to_string(detail::equal_step_reach(alpha, rho, kMaxPironHops)));

  // covered(m): n - 1 equal hops down to m, then one hop to rho. covered(alpha) < target <= covered(hi).
  const auto covered = [&](Scalar m) { return detail::equal_step_reach(alpha, m, n - 1) + detail::hop_longitude(m, rho); };
  Scalar lo = alpha, hi = alpha + (rho - alpha) * Scalar(n - 1) / Scalar(n);
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    (covered(mid) < target ? lo : hi) = mid;
  }
  const Scalar m = hi;
  std::vector<Vec3<Scalar>> pts{q};
  for (int i = 1; i < n; ++i) pts.push_back(detail::hop_to(frame, pts.back(), alpha + (m - alpha) * Scalar(i) / Scalar(n - 1), sign));
  return finish(std::move(pts));
}

/// Independent check of the path contract; never throws.
template <typename Scalar>
bool verify_piron_path(const PironPath<Scalar>& path, const Vec3<Scalar>& q, const Vec3<Scalar>& r,
                       Scalar tol = Scalar(1e-9)) {
  const auto& pts = path.points;
  if (pts.size() < 2 || path.hops() > kMaxPironHops) return false;
  if ((pts.front() - q).norm() > tol || (pts.back() - r).norm() > tol) return false;
  try {
    for (const auto& x : pts)
      if (!path.frame.in_northern(x, Scalar(0))) return false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!ew_member(path.frame, pts[i], pts[i + 1], tol)) return false;
      if (path.frame.colatitude(pts[i + 1]) < path.frame.colatitude(pts[i]) - tol) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

template <typename Scalar>
struct HalfPole {
  Vec3<Scalar> pole;  ///< p' with theta(p, p') = theta(p', z) = theta(p, z) / 2
  Scalar band_lo;     ///< min over E_{p'} of theta(p, x')
  Scalar band_hi;     ///< max over E_{p'} of theta(p, x')
};

/// Halfway pole between p and z, and the colatitude band swept by its equator.
template <typename Scalar>
HalfPole<Scalar> half_pole(const SphereFrame<Scalar>& frame, const Vec3<Scalar>& z) {
  if (!frame.in_northern(z)) throw PreconditionViolation("half_pole needs z in the open northern hemisphere");
  const Vec3<Scalar>& p = frame.pole();
  const Scalar t = frame.colatitude(z);
  const Vec3<Scalar> w = (z - z.dot(p) * p).normalized();
  const Scalar half = t / 2;
  constexpr Scalar right = std::numbers::pi_v<Scalar> / 2;
  return {(std::cos(half) * p + std::sin(half) * w).normalized(), right - half, right + half};
}

}  // namespace qorder
