use nalgebra::{Matrix3, Vector3};

use super::{ConfigError, DELTA, ORTHO_TOL};
use crate::counters;

pub type V3 = Vector3<f64>;
pub type M3 = Matrix3<f64>;

/// Left and right boundary points of the cube.
pub fn y0() -> V3 {
    V3::new(-1.0, 0.0, 0.0)
}

pub fn y1() -> V3 {
    V3::new(1.0, 0.0, 0.0)
}

fn orthogonality_defect(a: &M3) -> f64 {
    (a.transpose() * a - M3::identity()).abs().max()
}

/// `a b`, re-orthonormalized (polar factor) when the product drifts.
pub(crate) fn compose_frames(a: &M3, b: &M3) -> M3 {
    let p = a * b;
    if orthogonality_defect(&p) <= ORTHO_TOL {
        return p;
    }
    counters::record_reorthonormalization();
    let svd = p.svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Unit directions `u_ab` between all ordered pairs of points (with
/// `u_ba = -u_ab`) and one orthogonal frame per point: a point of the
/// compactified configuration space modulo translation and scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct InfConfig {
    u: Vec<Vec<V3>>,
    frames: Vec<M3>,
}

impl InfConfig {
    /// From the directions `u_ab`, `a < b`, listed row by row, and frames.
    pub fn new(upper: &[V3], frames: Vec<M3>) -> Result<Self, ConfigError> {
        let m = frames.len();
        if upper.len() != m * m.saturating_sub(1) / 2 {
            return Err(ConfigError::Shape {
                expected: m * m.saturating_sub(1) / 2,
                got: upper.len(),
            });
        }
        let mut u = vec![vec![V3::zeros(); m]; m];
        let mut it = upper.iter();
        for a in 0..m {
            for b in a + 1..m {
                let v = *it.next().unwrap();
                if (v.norm() - 1.0).abs() > ORTHO_TOL {
                    return Err(ConfigError::NotUnit { a: a + 1, b: b + 1 });
                }
                u[a][b] = v;
                u[b][a] = -v;
            }
        }
        let c = InfConfig { u, frames };
        c.check_frames()?;
        Ok(c)
    }

    /// The configuration of distinct points `points`, forgetting position and
    /// scale.
    pub fn from_points(points: &[V3], frames: Vec<M3>) -> Result<Self, ConfigError> {
        let mut upper = Vec::new();
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                let d = points[a] - points[b];
                if d.norm() <= DELTA {
                    return Err(ConfigError::Collided { a: a + 1, b: b + 1 });
                }
                upper.push(d.normalize());
            }
        }
        Self::new(&upper, frames)
    }

    /// One point with the identity frame, the unit for insertion.
    pub fn unit() -> Self {
        InfConfig {
            u: vec![vec![V3::zeros()]],
            frames: vec![M3::identity()],
        }
    }

    /// The two-point configuration used for doubling: `u_12 = -e_1`, so the
    /// second point lies ahead of the first along the doubling direction.
    pub fn mu() -> Self {
        Self::new(&[-V3::x()], vec![M3::identity(); 2]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `u_ab`, 1-based, `a != b`.
    pub fn u(&self, a: usize, b: usize) -> V3 {
        self.u[a - 1][b - 1]
    }

    pub fn frame(&self, a: usize) -> &M3 {
        &self.frames[a - 1]
    }

    fn check_frames(&self) -> Result<(), ConfigError> {
        match self.frames.iter().position(|f| orthogonality_defect(f) > ORTHO_TOL) {
            Some(i) => Err(ConfigError::NotOrthogonal(i + 1)),
            None => Ok(()),
        }
    }

    fn check(&self, i: usize, lo: usize, hi: usize) -> Result<(), ConfigError> {
        if (lo..=hi).contains(&i) {
            Ok(())
        } else {
            Err(ConfigError::Index { index: i, n: self.len() })
        }
    }

    /// Inserts `d` at 0-based slot `s`.
    fn insert_slot(&self, s: usize, d: &InfConfig) -> InfConfig {
        let (n, m) = (self.len(), d.len());
        let total = n + m - 1;
        let hat = |j: usize| {
            if j < s {
                j
            } else if j < s + m {
                s
            } else {
                j + 1 - m
            }
        };
        let alpha = self.frames[s];
        let in_block = |j: usize| (s..s + m).contains(&j);
        let frames = (0..total)
            .map(|j| {
                if in_block(j) {
                    compose_frames(&alpha, &d.frames[j - s])
                } else {
                    self.frames[hat(j)]
                }
            })
            .collect();
        let mut u = vec![vec![V3::zeros(); total]; total];
        for j in 0..total {
            for k in j + 1..total {
                let v = if in_block(j) && in_block(k) {
                    alpha * d.u[j - s][k - s]
                } else {
                    self.u[hat(j)][hat(k)]
                };
                u[j][k] = v;
                u[k][j] = -v;
            }
        }
        InfConfig { u, frames }
    }

    fn forget_slot(&self, s: usize) -> InfConfig {
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != s).collect();
        InfConfig {
            u: keep.iter().map(|&a| keep.iter().map(|&b| self.u[a][b]).collect()).collect(),
            frames: keep.iter().map(|&a| self.frames[a]).collect(),
        }
    }

    /// `self ∘_i d`: `d` rotated by the `i`-th frame in place of point `i`.
    pub fn insert(&self, i: usize, d: &InfConfig) -> Result<InfConfig, ConfigError> {
        self.check(i, 1, self.len())?;
        self.check_frames()?;
        d.check_frames()?;
        Ok(self.insert_slot(i - 1, d))
    }

    /// Operadic coface: `x ∘_i μ` for `1 <= i <= n`, `μ ∘_2 x` for `i = 0`
    /// and `μ ∘_1 x` for `i = n + 1`.
    pub fn coface(&self, i: usize) -> Result<InfConfig, ConfigError> {
        let n = self.len();
        self.check(i, 0, n + 1)?;
        Ok(match i {
            0 => InfConfig::mu().insert_slot(1, self),
            i if i == n + 1 => InfConfig::mu().insert_slot(0, self),
            i => self.insert_slot(i - 1, &InfConfig::mu()),
        })
    }

    /// `d^0` written out: a new first point behind all others along `e_1`.
    pub fn prepend_point(&self) -> InfConfig {
        let n = self.len();
        let mut u = vec![vec![V3::zeros(); n + 1]; n + 1];
        for k in 1..=n {
            u[0][k] = -V3::x();
            u[k][0] = V3::x();
            for l in 1..=n {
                u[k][l] = self.u[k - 1][l - 1];
            }
        }
        let mut frames = vec![M3::identity()];
        frames.extend(self.frames.iter().copied());
        InfConfig { u, frames }
    }

    /// Forgets point `i`, `1 <= i <= n`.
    pub fn forget(&self, i: usize) -> Result<InfConfig, ConfigError> {
        self.check(i, 1, self.len())?;
        Ok(self.forget_slot(i - 1))
    }

    /// `s^j`, forgetting point `j + 1`.
    pub fn codegeneracy(&self, j: usize) -> Result<InfConfig, ConfigError> {
        self.forget(j + 1)
    }

    /// Largest coordinate difference, infinite for different sizes.
    pub fn distance(&self, other: &InfConfig) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let mut e: f64 = 0.0;
        for (a, b) in self.frames.iter().zip(&other.frames) {
            e = e.max((a - b).abs().max());
        }
        for (ra, rb) in self.u.iter().zip(&other.u) {
            for (a, b) in ra.iter().zip(rb) {
                e = e.max((a - b).abs().max());
            }
        }
        e
    }

    /// Largest `|AᵀA - I|` over the frames.
    pub fn frame_defect(&self) -> f64 {
        self.frames.iter().map(orthogonality_defect).fold(0.0, f64::max)
    }
}

/// Framed points in the cube `[-1, 1]³` with their pairwise directions. With
/// `boundary`, slots `0` and `n + 1` hold the fixed points `(∓1, 0, 0)` with
/// identity frames and interior points are `1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FramedConfig {
    points: Vec<V3>,
    shape: InfConfig,
    boundary: bool,
}

impl FramedConfig {
    /// Points `1..=n` with frames, between the two boundary points, with
    /// directions taken from positions. Points must be distinct.
    pub fn from_points(points: &[V3], frames: Vec<M3>) -> Result<Self, ConfigError> {
        let mut all = vec![y0()];
        all.extend_from_slice(points);
        all.push(y1());
        let mut fr = vec![M3::identity()];
        fr.extend(frames);
        fr.push(M3::identity());
        let shape = InfConfig::from_points(&all, fr)?;
        Ok(FramedConfig {
            points: all,
            shape,
            boundary: true,
        })
    }

    /// Slot positions and a shape over the same slots. Checks the direction
    /// of every pair farther apart than `DELTA`.
    pub fn from_parts(points: Vec<V3>, shape: InfConfig, boundary: bool) -> Result<Self, ConfigError> {
        if points.len() != shape.len() || (boundary && points.len() < 2) {
            return Err(ConfigError::Shape {
                expected: shape.len(),
                got: points.len(),
            });
        }
        let c = FramedConfig {
            points,
            shape,
            boundary,
        };
        c.check_consistency()?;
        Ok(c)
    }

    fn check_consistency(&self) -> Result<(), ConfigError> {
        for a in 0..self.points.len() {
            for b in a + 1..self.points.len() {
                let d = self.points[a] - self.points[b];
                if d.norm() > DELTA && (d.normalize() - self.shape.u[a][b]).abs().max() > 1e-9 {
                    return Err(ConfigError::Inconsistent { a, b });
                }
            }
        }
        Ok(())
    }

    /// Number of interior points.
    pub fn n(&self) -> usize {
        self.points.len() - if self.boundary { 2 } else { 0 }
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary
    }

    fn slot(&self, i: usize) -> usize {
        if self.boundary {
            i
        } else {
            i - 1
        }
    }

    /// Position of point `i`; `0` and `n + 1` are the boundary points.
    pub fn point(&self, i: usize) -> V3 {
        self.points[self.slot(i)]
    }

    pub fn u(&self, a: usize, b: usize) -> V3 {
        self.shape.u[self.slot(a)][self.slot(b)]
    }

    pub fn frame(&self, i: usize) -> &M3 {
        &self.shape.frames[self.slot(i)]
    }

    /// Directions and frames over all slots.
    pub fn shape(&self) -> &InfConfig {
        &self.shape
    }

    fn check(&self, i: usize, lo: usize, hi: usize) -> Result<(), ConfigError> {
        if (lo..=hi).contains(&i) {
            Ok(())
        } else {
            Err(ConfigError::Index { index: i, n: self.n() })
        }
    }

    fn insert_slot(&self, s: usize, d: &InfConfig) -> FramedConfig {
        let mut points = self.points.clone();
        let x = points[s];
        points.splice(s..=s, std::iter::repeat_n(x, d.len()));
        FramedConfig {
            points,
            shape: self.shape.insert_slot(s, d),
            boundary: self.boundary,
        }
    }

    /// `c ∘_i d`, `1 <= i <= n`: the block `d` collapsed at `x_i`.
    pub fn insert(&self, i: usize, d: &InfConfig) -> Result<FramedConfig, ConfigError> {
        self.check(i, 1, self.n())?;
        self.shape.check_frames()?;
        d.check_frames()?;
        Ok(self.insert_slot(self.slot(i), d))
    }

    /// Spatial coface `d^i`, doubling point `i` along the first column of its
    /// frame; `d^0` and `d^{n+1}` double the boundary points.
    pub fn coface(&self, i: usize) -> Result<FramedConfig, ConfigError> {
        let lo = usize::from(!self.boundary);
        let hi = if self.boundary { self.n() + 1 } else { self.n() };
        self.check(i, lo, hi)?;
        Ok(self.insert_slot(self.slot(i), &InfConfig::mu()))
    }

    /// Forgets interior point `i`.
    pub fn forget(&self, i: usize) -> Result<FramedConfig, ConfigError> {
        self.check(i, 1, self.n())?;
        let s = self.slot(i);
        let mut points = self.points.clone();
        points.remove(s);
        Ok(FramedConfig {
            points,
            shape: self.shape.forget_slot(s),
            boundary: self.boundary,
        })
    }

    /// `s^j`, forgetting point `j + 1`.
    pub fn codegeneracy(&self, j: usize) -> Result<FramedConfig, ConfigError> {
        self.forget(j + 1)
    }

    pub fn distance(&self, other: &FramedConfig) -> f64 {
        if self.boundary != other.boundary || self.points.len() != other.points.len() {
            return f64::INFINITY;
        }
        let mut e = self.shape.distance(&other.shape);
        for (a, b) in self.points.iter().zip(&other.points) {
            e = e.max((a - b).abs().max());
        }
        e
    }

    /// Largest deviation of a stored direction from the direction between
    /// positions, over pairs farther apart than `DELTA`.
    pub fn consistency_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for a in 0..self.points.len() {
            for b in a + 1..self.points.len() {
                let d = self.points[a] - self.points[b];
                if d.norm() > DELTA {
                    e = e.max((d.normalize() - self.shape.u[a][b]).abs().max());
                }
            }
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn sample() -> FramedConfig {
        let r = Rotation3::from_euler_angles(0.3, -0.2, 1.1).into_inner();
        FramedConfig::from_points(&[V3::new(-0.5, 0.2, 0.1), V3::new(0.4, -0.3, 0.0)], vec![r, M3::identity()]).unwrap()
    }

    #[test]
    fn unit_insertion() {
        let c = sample();
        assert_eq!(c.insert(1, &InfConfig::unit()).unwrap(), c);
        assert_eq!(c.insert(2, &InfConfig::unit()).unwrap(), c);
    }

    #[test]
    fn doubling_with_x_axis_block() {
        let c = FramedConfig::from_points(&[V3::new(0.1, 0.2, 0.3)], vec![M3::identity()]).unwrap();
        let mu = InfConfig::new(&[V3::x()], vec![M3::identity(); 2]).unwrap();
        let d = c.insert(1, &mu).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.point(1), c.point(1));
        assert_eq!(d.point(2), c.point(1));
        assert_eq!(d.u(1, 2), V3::x());
        assert_eq!(d.u(0, 2), c.u(0, 1));
    }

    #[test]
    fn doubling_follows_the_frame() {
        let c = sample();
        let d = c.coface(1).unwrap();
        assert_eq!(d.u(1, 2), -(c.frame(1) * V3::x()));
        assert_eq!(d.frame(2), c.frame(1));
        assert!(d.consistency_error() < 1e-12);
    }

    #[test]
    fn codegeneracy_after_coface() {
        let c = sample();
        for j in 0..c.n() {
            assert!(c.coface(j).unwrap().codegeneracy(j).unwrap().distance(&c) == 0.0);
            assert!(c.coface(j + 1).unwrap().codegeneracy(j).unwrap().distance(&c) == 0.0);
        }
    }

    #[test]
    fn operadic_first_coface() {
        let x = InfConfig::from_points(&[V3::zeros(), V3::new(0.0, 1.0, 0.0)], vec![M3::identity(); 2]).unwrap();
        assert_eq!(x.coface(0).unwrap(), x.prepend_point());
    }

    #[test]
    fn index_errors() {
        let c = sample();
        assert!(matches!(c.coface(4), Err(ConfigError::Index { index: 4, n: 2 })));
        assert!(c.forget(0).is_err());
        assert!(c.insert(3, &InfConfig::mu()).is_err());
        let bad = InfConfig::new(&[V3::x()], vec![M3::identity(), M3::identity() * 2.0]);
        assert_eq!(bad, Err(ConfigError::NotOrthogonal(2)));
    }
}
