//! Foundational 3-D math: vectors, rigid transforms, the pinhole camera, and
//! triangle meshes.
//!
//! Conventions used throughout the crate:
//! - the camera sits at the origin looking along **+z**, with pixel `u`
//!   growing to the right and `v` growing down;
//! - pixel `(i, j)` has its center at continuous coordinates
//!   `(i + 0.5, j + 0.5)`;
//! - world units are millimetres.

mod mesh;
mod solver;

pub use mesh::TriangleMesh;
pub use solver::solve_rigid_update;

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A 3-D point or vector. Millimetres for points, dimensionless for
/// directions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Normalizes into a [`UnitVec3`], failing on the zero vector.
    pub fn normalized(self) -> Result<UnitVec3> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVec3(self / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub(crate) fn to_na(self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.x, self.y, self.z)
    }

    pub(crate) fn from_na(v: nalgebra::Vector3<f64>) -> Self {
        Vec3::new(v.x, v.y, v.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Serialize for Vec3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vec3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        Ok(Vec3::new(x, y, z))
    }
}

/// A direction with Euclidean norm 1 (within 1e-9), e.g. the surface normal
/// `N`, the view direction `V`, the light direction `L`, or the half-way
/// vector `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    /// The +z axis.
    pub const Z: UnitVec3 = UnitVec3(Vec3 { x: 0.0, y: 0.0, z: 1.0 });

    /// Wraps a vector that is already unit length; renormalizes to absorb
    /// rounding. Fails on the zero vector.
    pub fn new(v: Vec3) -> Result<Self> {
        v.normalized()
    }

    pub fn as_vec(self) -> Vec3 {
        self.0
    }

    pub fn dot(self, other: UnitVec3) -> f64 {
        self.0.dot(other.0)
    }

    /// Angle between two unit vectors in radians, clamped against rounding.
    pub fn angle_to(self, other: UnitVec3) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

impl std::ops::Deref for UnitVec3 {
    type Target = Vec3;
    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

impl Neg for UnitVec3 {
    type Output = UnitVec3;
    fn neg(self) -> UnitVec3 {
        UnitVec3(-self.0)
    }
}

impl Serialize for UnitVec3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVec3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec3::deserialize(d)?;
        v.normalized()
            .map_err(|_| D::Error::custom("direction must be a non-zero vector"))
    }
}

/// Pixel position as continuous image coordinates `(u, v)`.
pub type Pixel = (f64, f64);

/// Pinhole camera intrinsics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinholeCamera {
    /// Focal length in pixels.
    pub focal_px: f64,
    /// Principal point `(cx, cy)` in pixels.
    pub principal_point: (f64, f64),
    /// Image `(width, height)` in pixels.
    pub image_size: (u32, u32),
}

impl PinholeCamera {
    pub fn new(focal_px: f64, principal_point: (f64, f64), image_size: (u32, u32)) -> Result<Self> {
        if !(focal_px > 0.0) {
            return Err(Error::InvalidInput(format!(
                "focal length must be positive, got {focal_px}"
            )));
        }
        if image_size.0 < 1 || image_size.1 < 1 {
            return Err(Error::InvalidInput(format!(
                "image size components must be >= 1, got {}x{}",
                image_size.0, image_size.1
            )));
        }
        Ok(PinholeCamera { focal_px, principal_point, image_size })
    }

    /// Camera with the principal point at the image center.
    pub fn centered(focal_px: f64, image_size: (u32, u32)) -> Result<Self> {
        let pp = (image_size.0 as f64 / 2.0, image_size.1 as f64 / 2.0);
        PinholeCamera::new(focal_px, pp, image_size)
    }

    /// Projects a 3-D point in front of the camera to pixel coordinates.
    pub fn project(&self, p: Vec3) -> Result<Pixel> {
        if !(p.z > 0.0) {
            return Err(Error::NonPositiveDepth(p.z));
        }
        let (cx, cy) = self.principal_point;
        Ok((
            self.focal_px * p.x / p.z + cx,
            self.focal_px * p.y / p.z + cy,
        ))
    }

    /// Lifts a pixel back to the 3-D point at the given depth.
    pub fn backproject(&self, pixel: Pixel, depth: f64) -> Result<Vec3> {
        if !(depth > 0.0) {
            return Err(Error::NonPositiveDepth(depth));
        }
        let (cx, cy) = self.principal_point;
        Ok(Vec3::new(
            (pixel.0 - cx) / self.focal_px * depth,
            (pixel.1 - cy) / self.focal_px * depth,
            depth,
        ))
    }

    /// Unit direction of the camera ray through a pixel, pointing into the
    /// scene.
    pub fn pixel_ray(&self, pixel: Pixel) -> UnitVec3 {
        let (cx, cy) = self.principal_point;
        let d = Vec3::new(
            (pixel.0 - cx) / self.focal_px,
            (pixel.1 - cy) / self.focal_px,
            1.0,
        );
        // z component is 1, so the norm is never zero.
        d.normalized().expect("pixel ray has unit z component")
    }
}

/// Unit vector pointing from a scene point toward the camera center.
pub fn view_direction(p: Vec3) -> Result<UnitVec3> {
    (-p).normalized().map_err(|_| Error::ZeroVector)
}

/// A rigid body pose: `x_camera = rotation * x_model + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    rotation: nalgebra::Matrix3<f64>,
    translation: Vec3,
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: nalgebra::Matrix3::identity(),
            translation: Vec3::ZERO,
        }
    }

    /// Builds a pose from a rotation matrix and translation. The matrix is
    /// re-orthonormalized; a reflection (negative determinant) is rejected.
    pub fn new(rotation: [[f64; 3]; 3], translation: Vec3) -> Result<Self> {
        let m = nalgebra::Matrix3::from_fn(|r, c| rotation[r][c]);
        let ortho = orthonormalize(&m)?;
        Ok(RigidTransform { rotation: ortho, translation })
    }

    /// Rotation about the axis by the angle (radians), then translation.
    pub fn from_axis_angle(axis: UnitVec3, angle: f64, translation: Vec3) -> Self {
        let r = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_unchecked(axis.as_vec().to_na()),
            angle,
        );
        RigidTransform { rotation: *r.matrix(), translation }
    }

    pub fn translation(&self) -> Vec3 {
        self.translation
    }

    pub fn rotation_rows(&self) -> [[f64; 3]; 3] {
        let m = &self.rotation;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }

    /// Maps a model-space point into camera space.
    pub fn apply(&self, p: Vec3) -> Vec3 {
        Vec3::from_na(self.rotation * p.to_na()) + self.translation
    }

    /// Rotates a direction (no translation).
    pub fn rotate(&self, d: UnitVec3) -> UnitVec3 {
        UnitVec3::new(Vec3::from_na(self.rotation * d.as_vec().to_na()))
            .expect("rotation preserves norm")
    }

    /// Left-multiplies by the small-motion update `(I + [w]x, dt)` and
    /// re-orthonormalizes the rotation.
    pub(crate) fn update(&self, w: Vec3, dt: Vec3) -> Result<Self> {
        let skew = nalgebra::Matrix3::new(
            0.0, -w.z, w.y, //
            w.z, 0.0, -w.x, //
            -w.y, w.x, 0.0,
        );
        let g = nalgebra::Matrix3::identity() + skew;
        let rotation = orthonormalize(&(g * self.rotation))?;
        let translation = Vec3::from_na(g * self.translation.to_na()) + dt;
        Ok(RigidTransform { rotation, translation })
    }

    /// Max deviation of `R^T R` from the identity; used by tests and
    /// validation.
    pub fn orthonormality_error(&self) -> f64 {
        let e = self.rotation.transpose() * self.rotation - nalgebra::Matrix3::identity();
        e.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Relative rotation angle to another pose, in radians.
    pub fn rotation_angle_to(&self, other: &RigidTransform) -> f64 {
        let rel = self.rotation.transpose() * other.rotation;
        let cos = ((rel.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        cos.acos()
    }
}

/// Nearest rotation matrix in the Frobenius sense (polar decomposition via
/// SVD, determinant corrected to +1).
fn orthonormalize(m: &nalgebra::Matrix3<f64>) -> Result<nalgebra::Matrix3<f64>> {
    let svd = nalgebra::SVD::new(*m, true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::DegenerateConfiguration),
    };
    let mut r = u * v_t;
    if r.determinant() < 0.0 {
        // Flip the axis of least significance to stay in SO(3).
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * v_t;
    }
    if !r.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(r)
}

#[derive(Serialize, Deserialize)]
struct RigidTransformRepr {
    rotation: [[f64; 3]; 3],
    translation: Vec3,
}

impl Serialize for RigidTransform {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RigidTransformRepr {
            rotation: self.rotation_rows(),
            translation: self.translation,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RigidTransform {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RigidTransformRepr::deserialize(d)?;
        RigidTransform::new(repr.rotation, repr.translation)
            .map_err(|e| D::Error::custom(format!("invalid rigid transform: {e}")))
    }
}

/// A 3-D model point paired with its observed image position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub model_point: Vec3,
    pub image_point: Pixel,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cam(f: f64) -> PinholeCamera {
        PinholeCamera::new(f, (0.0, 0.0), (4000, 4000)).unwrap()
    }

    #[test]
    fn project_optical_axis_hits_principal_point() {
        let (u, v) = cam(1000.0).project(Vec3::new(0.0, 0.0, 500.0)).unwrap();
        assert_eq!((u, v), (0.0, 0.0));
    }

    #[test]
    fn project_similar_triangles() {
        let (u, v) = cam(1000.0).project(Vec3::new(50.0, -25.0, 500.0)).unwrap();
        assert_eq!((u, v), (100.0, -50.0));
    }

    #[test]
    fn project_rejects_nonpositive_depth() {
        assert!(matches!(
            cam(1000.0).project(Vec3::new(0.0, 0.0, -1.0)),
            Err(Error::NonPositiveDepth(_))
        ));
    }

    #[test]
    fn backproject_principal_point() {
        let p = cam(1000.0).backproject((0.0, 0.0), 500.0).unwrap();
        assert_eq!(p, Vec3::new(0.0, 0.0, 500.0));
    }

    #[test]
    fn backproject_substitution() {
        let p = cam(1000.0).backproject((100.0, -50.0), 500.0).unwrap();
        assert_eq!(p, Vec3::new(50.0, -25.0, 500.0));
    }

    #[test]
    fn backproject_rejects_nonpositive_depth() {
        assert!(matches!(
            cam(1000.0).backproject((0.0, 0.0), 0.0),
            Err(Error::NonPositiveDepth(_))
        ));
    }

    #[test]
    fn project_backproject_round_trip() {
        let camera = cam(1750.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = Vec3::new(
                rng.random_range(-400.0..400.0),
                rng.random_range(-400.0..400.0),
                rng.random_range(100.0..2000.0),
            );
            let px = camera.project(p).unwrap();
            let q = camera.backproject(px, p.z).unwrap();
            assert!((q - p).norm() < 1e-9, "round trip error {}", (q - p).norm());
        }
    }

    #[test]
    fn view_direction_on_axis() {
        let v = view_direction(Vec3::new(0.0, 0.0, 500.0)).unwrap();
        assert_relative_eq!(v.as_vec().z, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn view_direction_345_triangle() {
        let v = view_direction(Vec3::new(300.0, 0.0, 400.0)).unwrap();
        assert_relative_eq!(v.x, -0.6, epsilon = 1e-12);
        assert_relative_eq!(v.y, 0.0, epsilon = 1e-12);
        assert_relative_eq!(v.z, -0.8, epsilon = 1e-12);
    }

    #[test]
    fn view_direction_zero_vector() {
        assert!(matches!(view_direction(Vec3::ZERO), Err(Error::ZeroVector)));
    }

    #[test]
    fn view_direction_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if p.norm() < 1e-6 {
                continue;
            }
            let v = view_direction(p).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rigid_transform_serde_round_trip() {
        let t = RigidTransform::from_axis_angle(
            UnitVec3::new(Vec3::new(0.3, -1.0, 0.2)).unwrap(),
            0.7,
            Vec3::new(1.0, 2.0, 3.0),
        );
        let json = serde_json::to_string(&t).unwrap();
        let back: RigidTransform = serde_json::from_str(&json).unwrap();
        assert!(t.rotation_angle_to(&back) < 1e-12);
        assert!((t.translation() - back.translation()).norm() < 1e-12);
    }

    #[test]
    fn rejects_reflection_matrix() {
        let flip = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        // Orthonormalization projects to SO(3); the result must have det +1.
        let t = RigidTransform::new(flip, Vec3::ZERO).unwrap();
        assert!(t.orthonormality_error() < 1e-9);
        let rows = t.rotation_rows();
        let det = nalgebra::Matrix3::from_fn(|r, c| rows[r][c]).determinant();
        assert!(det > 0.0);
    }
}
