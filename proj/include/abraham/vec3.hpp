#pragma once
#include <cmath>
#include <complex>

namespace abraham {

using Complex = std::complex<double>;

//! Real 3-vector with the usual componentwise algebra.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

//! Unit vector along v; undefined for v = 0.
inline Vec3 normalized(const Vec3& v) { return v / v.norm(); }

//! Complex 3-vector. dot(,) is the bilinear product (no conjugation);
//! use cdot for the sesquilinear one.
struct CVec3 {
  Complex x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

  CVec3() = default;
  CVec3(Complex x_, Complex y_, Complex z_) : x(x_), y(y_), z(z_) {}
  explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator-() const { return {-x, -y, -z}; }
  CVec3 operator*(Complex s) const { return {x * s, y * s, z * s}; }
  CVec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  CVec3& operator+=(const CVec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }
  double norm() const { return std::sqrt(norm2()); }

  Vec3 real() const { return {x.real(), y.real(), z.real()}; }
  Vec3 imag() const { return {x.imag(), y.imag(), z.imag()}; }
};

inline CVec3 operator*(Complex s, const CVec3& v) { return v * s; }
inline CVec3 operator*(double s, const CVec3& v) { return v * s; }

inline CVec3 conj(const CVec3& v) {
  return {std::conj(v.x), std::conj(v.y), std::conj(v.z)};
}

inline Complex dot(const CVec3& a, const CVec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Complex dot(const Vec3& a, const CVec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Complex dot(const CVec3& a, const Vec3& b) { return dot(b, a); }

//! conj(a) . b
inline Complex cdot(const CVec3& a, const CVec3& b) {
  return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}

inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline CVec3 cross(const Vec3& a, const CVec3& b) {
  return cross(CVec3(a), b);
}

inline CVec3 cross(const CVec3& a, const Vec3& b) {
  return cross(a, CVec3(b));
}

//! Component of v transverse to the unit vector n: v - n (n.v).
inline CVec3 transverse(const Vec3& n, const CVec3& v) {
  const Complex a = dot(n, v);
  return v - CVec3(n) * a;
}

inline Vec3 transverse(const Vec3& n, const Vec3& v) {
  return v - n * dot(n, v);
}

}  // namespace abraham
