/*
 * Copyright 2026 The cpgo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cpgo/so3.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "Eigen/Geometry"
#include "Eigen/SVD"
#include "cpgo/random.h"

namespace cpgo {
namespace so3 {
namespace {

// (r - r^T)^vee, exact skew by construction.
Vector3 AntisymmetricPart(const Matrix3& r) {
  return Vector3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
}

double AngleFromParts(const Matrix3& r, const Vector3& antisym) {
  const double cos_theta = 0.5 * (r.trace() - 1.0);
  const double sin_theta = 0.5 * antisym.norm();
  return std::atan2(sin_theta, cos_theta);
}

}  // namespace

Matrix3 Hat(const Vector3& v) {
  Matrix3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Vector3 Vee(const Matrix3& s) {
  const double asymmetry = (s + s.transpose()).norm();
  if (asymmetry > 1e-9) {
    throw NonSkewInput("vee of a non-skew matrix, ||S + S^T|| = " +
                       std::to_string(asymmetry));
  }
  return Vector3(s(2, 1), s(0, 2), s(1, 0));
}

Matrix3 Exp(const Vector3& v) {
  const double theta_sq = v.squaredNorm();
  const double theta = std::sqrt(theta_sq);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta_sq / 6.0;
    b = 0.5 - theta_sq / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta_sq;
  }
  const Matrix3 k = Hat(v);
  return Matrix3::Identity() + a * k + b * (k * k);
}

Vector3 Log(const Matrix3& r) {
  const Vector3 antisym = AntisymmetricPart(r);
  const double theta = AngleFromParts(r, antisym);
  if (theta >= std::numbers::pi - kPiMargin) {
    throw AngleAtPi(theta);
  }
  double factor;  // theta / (2 sin(theta))
  if (theta < kSmallAngle) {
    factor = 0.5 + theta * theta / 12.0;
  } else {
    factor = theta / antisym.norm();
  }
  return factor * antisym;
}

double Angle(const Matrix3& r) {
  return AngleFromParts(r, AntisymmetricPart(r));
}

double GeodesicDistance(const Matrix3& a, const Matrix3& b) {
  return Log(a.transpose() * b).norm();
}

double ChordalDistance(const Matrix3& a, const Matrix3& b) {
  return (a - b).norm();
}

Matrix3 RandomRotation(std::uint64_t seed) {
  Rng rng(seed);
  return RandomRotation(rng);
}

Matrix3 RandomRotation(Rng& rng) {
  QuaternionXyzw q;
  do {
    q = QuaternionXyzw(rng.Gaussian(), rng.Gaussian(), rng.Gaussian(),
                       rng.Gaussian());
  } while (q.squaredNorm() < 1e-20);
  return QuaternionToMatrix(q);
}

double GeodesicSqDerivative(const Matrix3& r, const Matrix3& r_dot_body) {
  return Log(r).dot(Vee(r_dot_body));
}

bool IsRotation(const Matrix3& m, double tolerance) {
  if (!m.allFinite()) return false;
  const double drift = (m.transpose() * m - Matrix3::Identity()).norm();
  return drift <= tolerance && std::abs(m.determinant() - 1.0) <= tolerance;
}

Matrix3 ProjectToRotation(const Matrix3& m) {
  const Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU |
                                             Eigen::ComputeFullV);
  const Matrix3& u = svd.matrixU();
  const Matrix3& v = svd.matrixV();
  Matrix3 d = Matrix3::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return u * d * v.transpose();
}

Matrix3 Reorthonormalize(const Matrix3& r) {
  if ((r.transpose() * r - Matrix3::Identity()).norm() > kDriftTolerance) {
    return ProjectToRotation(r);
  }
  return r;
}

Matrix3 QuaternionToMatrix(const QuaternionXyzw& q) {
  const QuaternionXyzw unit = q.normalized();
  return Eigen::Quaterniond(unit[3], unit[0], unit[1], unit[2])
      .toRotationMatrix();
}

QuaternionXyzw MatrixToQuaternion(const Matrix3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  QuaternionXyzw out(q.x(), q.y(), q.z(), q.w());
  if (out[3] < 0.0) out = -out;
  return out;
}

}  // namespace so3
}  // namespace cpgo
