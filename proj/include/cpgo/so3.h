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

#ifndef CPGO_SO3_H_
#define CPGO_SO3_H_

#include <cstdint>

#include "Eigen/Core"
#include "cpgo/errors.h"

namespace cpgo {

class Rng;

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

// Scalar-last unit quaternion (qx, qy, qz, qw), the g2o wire order.
using QuaternionXyzw = Eigen::Vector4d;

namespace so3 {

// Angles below this use the second-order Taylor branches of exp and log.
inline constexpr double kSmallAngle = 1e-6;
// log() refuses rotations whose angle is within this margin of pi.
inline constexpr double kPiMargin = 1e-9;
// Tolerance of the orthonormality and determinant checks.
inline constexpr double kRotationTolerance = 1e-9;
// Re-orthonormalization is triggered above this drift of R^T R from I.
inline constexpr double kDriftTolerance = 1e-12;

// Skew-symmetric matrix with Hat(v) * w == v.cross(w).
Matrix3 Hat(const Vector3& v);

// Inverse of Hat. Throws NonSkewInput if ||s + s^T||_F > 1e-9.
Vector3 Vee(const Matrix3& s);

// Rodrigues' formula.
Matrix3 Exp(const Vector3& v);

// Rotation vector of `r` (axis scaled by angle). Throws AngleAtPi when the
// angle is >= pi - kPiMargin.
Vector3 Log(const Matrix3& r);

// Rotation angle in [0, pi]. Never throws; usable on any rotation.
double Angle(const Matrix3& r);

// ||Log(a^T b)||. Symmetric; propagates AngleAtPi.
double GeodesicDistance(const Matrix3& a, const Matrix3& b);

// ||a - b||_F.
double ChordalDistance(const Matrix3& a, const Matrix3& b);

// Haar-uniform rotation from a normalized 4D Gaussian quaternion.
Matrix3 RandomRotation(std::uint64_t seed);
Matrix3 RandomRotation(Rng& rng);

// d/dt 1/2 ||Log(R)||^2 for a trajectory with body rate R^T dR/dt =
// r_dot_body, i.e. Log(r) . Vee(r_dot_body).
double GeodesicSqDerivative(const Matrix3& r, const Matrix3& r_dot_body);

bool IsRotation(const Matrix3& m, double tolerance = kRotationTolerance);

// Nearest rotation in the Frobenius sense (SVD with determinant fix).
Matrix3 ProjectToRotation(const Matrix3& m);

// Projects `r` only if ||r^T r - I||_F exceeds kDriftTolerance.
Matrix3 Reorthonormalize(const Matrix3& r);

// Normalizes the input before conversion.
Matrix3 QuaternionToMatrix(const QuaternionXyzw& q);

// Returned quaternion has qw >= 0.
QuaternionXyzw MatrixToQuaternion(const Matrix3& r);

}  // namespace so3
}  // namespace cpgo

#endif  // CPGO_SO3_H_
