use nalgebra::Rotation3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::framed::{y0, y1, FramedConfig, InfConfig, M3, V3};
use super::{ConfigError, DELTA};

/// A cubic `Σ c_k (t - t0)^k` per coordinate on `[t0, t1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicSegment {
    pub t0: f64,
    pub t1: f64,
    pub coeffs: [[f64; 4]; 3],
}

impl CubicSegment {
    /// Hermite interpolation of values and derivatives at both ends.
    pub fn hermite(t0: f64, t1: f64, p0: V3, m0: V3, p1: V3, m1: V3) -> Self {
        let h = t1 - t0;
        let a2 = (3.0 * (p1 - p0) / h - 2.0 * m0 - m1) / h;
        let a3 = (2.0 * (p0 - p1) / h + m0 + m1) / (h * h);
        let mut coeffs = [[0.0; 4]; 3];
        for (r, row) in coeffs.iter_mut().enumerate() {
            *row = [p0[r], m0[r], a2[r], a3[r]];
        }
        CubicSegment { t0, t1, coeffs }
    }

    pub fn value(&self, t: f64) -> V3 {
        let s = t - self.t0;
        V3::from_fn(|r, _| {
            let c = &self.coeffs[r];
            ((c[3] * s + c[2]) * s + c[1]) * s + c[0]
        })
    }

    pub fn derivative(&self, t: f64) -> V3 {
        let s = t - self.t0;
        V3::from_fn(|r, _| {
            let c = &self.coeffs[r];
            (3.0 * c[3] * s + 2.0 * c[2]) * s + c[1]
        })
    }
}

fn locate(segments: &[CubicSegment], t: f64) -> Option<&CubicSegment> {
    if segments.is_empty() || t < segments[0].t0 || t > segments[segments.len() - 1].t1 {
        return None;
    }
    let k = segments.partition_point(|s| s.t1 <= t).min(segments.len() - 1);
    Some(&segments[k])
}

fn check_cover(segments: &[CubicSegment], what: &str) -> Result<(), ConfigError> {
    let bad = |msg: String| Err(ConfigError::Knot(format!("{what}: {msg}")));
    if segments.is_empty() {
        return bad("no segments".into());
    }
    if segments[0].t0 != -1.0 || segments[segments.len() - 1].t1 != 1.0 {
        return bad("segments must cover [-1, 1]".into());
    }
    for w in segments.windows(2) {
        if w[0].t1 != w[1].t0 {
            return bad(format!("gap or overlap at t = {}", w[0].t1));
        }
    }
    if let Some(s) = segments.iter().find(|s| s.t1 <= s.t0) {
        return bad(format!("empty segment at t = {}", s.t0));
    }
    Ok(())
}

/// Rotation-vector chart for the framing: the frame at `t` is `exp(r(t))`
/// with its first column then replaced by the unit tangent and the other two
/// re-orthogonalized. Empty means the identity chart.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FramingChart {
    pub segments: Vec<CubicSegment>,
}

/// A long knot, standard outside `[-1, 1]`, with a framing whose first
/// column is the unit tangent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramedKnot {
    pub segments: Vec<CubicSegment>,
    #[serde(default)]
    pub framing: FramingChart,
}

/// Samples used for the injectivity check.
pub const SAMPLE_RESOLUTION: usize = 1000;

impl FramedKnot {
    pub fn new(segments: Vec<CubicSegment>, framing: FramingChart) -> Result<Self, ConfigError> {
        let k = FramedKnot { segments, framing };
        k.validate()?;
        Ok(k)
    }

    /// `t ↦ (t, 0, 0)` with the identity framing.
    pub fn straight() -> Self {
        let seg = CubicSegment {
            t0: -1.0,
            t1: 1.0,
            coeffs: [[-1.0, 1.0, 0.0, 0.0], [0.0; 4], [0.0; 4]],
        };
        FramedKnot {
            segments: vec![seg],
            framing: FramingChart::default(),
        }
    }

    /// Catmull–Rom style interpolation through `nodes` at equally spaced
    /// times, with end tangents along `e_1`. `twists` are rotation vectors at
    /// the same times (zero at the ends).
    pub fn through(nodes: &[V3], twists: &[V3]) -> Result<Self, ConfigError> {
        let knot = Self::interpolate(nodes, twists)?;
        knot.validate()?;
        Ok(knot)
    }

    fn interpolate(nodes: &[V3], twists: &[V3]) -> Result<Self, ConfigError> {
        let k = nodes.len();
        if k < 2 || twists.len() != k {
            return Err(ConfigError::Knot("need at least two nodes and one twist per node".into()));
        }
        let h = 2.0 / (k - 1) as f64;
        let t = |i: usize| if i == k - 1 { 1.0 } else { -1.0 + h * i as f64 };
        let slope = |v: &[V3], i: usize, ends: V3| {
            if i == 0 || i == k - 1 {
                ends
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        };
        let seg = |v: &[V3], ends: V3| -> Vec<CubicSegment> {
            (0..k - 1)
                .map(|i| CubicSegment::hermite(t(i), t(i + 1), v[i], slope(v, i, ends), v[i + 1], slope(v, i + 1, ends)))
                .collect()
        };
        let speed = (nodes[1] - nodes[0]).norm().max((nodes[k - 1] - nodes[k - 2]).norm()) / h;
        Ok(FramedKnot {
            segments: seg(nodes, V3::x() * speed),
            framing: FramingChart {
                segments: seg(twists, V3::zeros()),
            },
        })
    }

    /// A long trefoil with a slowly twisting framing.
    pub fn trefoil() -> Self {
        let tre = |th: f64| {
            V3::new(
                0.18 * (th.sin() + 2.0 * (2.0 * th).sin()),
                0.18 * (th.cos() - 2.0 * (2.0 * th).cos()),
                0.45 - 0.3 * (3.0 * th).sin(),
            )
        };
        // Open the closed curve near a lowest point and lead both ends out
        // underneath it.
        let cut = std::f64::consts::FRAC_PI_6;
        let gap = 0.35;
        let steps = 24;
        let mut nodes = vec![y0(), V3::new(-0.7, 0.0, 0.02)];
        let first = tre(cut + gap);
        let last = tre(cut + std::f64::consts::TAU - gap);
        nodes.push(V3::new(first.x - 0.15, first.y, 0.05));
        for i in 0..=steps {
            let th = cut + gap + (std::f64::consts::TAU - 2.0 * gap) * i as f64 / steps as f64;
            nodes.push(tre(th));
        }
        nodes.push(V3::new(last.x + 0.15, last.y, 0.05));
        nodes.push(V3::new(0.7, 0.0, 0.02));
        nodes.push(y1());
        let k = nodes.len();
        let twists: Vec<V3> = (0..k)
            .map(|i| {
                let s = i as f64 / (k - 1) as f64;
                V3::new(0.8 * (std::f64::consts::PI * s).sin(), 0.0, 0.0)
            })
            .collect();
        Self::through(&nodes, &twists).expect("trefoil sample")
    }

    /// A random long knot through 2 to 5 interior nodes. Not validated: the
    /// sampled injectivity check is quadratic in the resolution.
    pub fn random(rng: &mut impl Rng) -> Self {
        let inner = rng.gen_range(2..=5);
        let k = inner + 2;
        let mut nodes = vec![y0()];
        let mut twists = vec![V3::zeros()];
        for i in 1..=inner {
            let x = -1.0 + 2.0 * i as f64 / (k - 1) as f64;
            nodes.push(V3::new(
                x + rng.gen_range(-0.2..0.2),
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-0.5..0.5),
            ));
            twists.push(V3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        nodes.push(y1());
        twists.push(V3::zeros());
        Self::interpolate(&nodes, &twists).expect("random knot")
    }

    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let k: FramedKnot = serde_json::from_str(s).map_err(|e| ConfigError::Knot(e.to_string()))?;
        k.validate()?;
        Ok(k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("knot json")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_cover(&self.segments, "curve")?;
        if !self.framing.segments.is_empty() {
            check_cover(&self.framing.segments, "framing")?;
        }
        let bad = |msg: &str| Err(ConfigError::Knot(msg.into()));
        if (self.position(-1.0) - y0()).norm() > 1e-12 || (self.position(1.0) - y1()).norm() > 1e-12 {
            return bad("curve must start at (-1,0,0) and end at (1,0,0)");
        }
        for t in [-1.0, 1.0] {
            let d = self.raw_derivative(t);
            if d.x <= 0.0 || d.y.abs() + d.z.abs() > 1e-12 * d.x.max(1.0) {
                return bad("end derivatives must point along +x");
            }
            if (self.frame(t) - M3::identity()).abs().max() > 1e-6 {
                return bad("framing must be the identity at the ends");
            }
        }
        let n = SAMPLE_RESOLUTION;
        let pts: Vec<V3> = (0..=n).map(|i| self.position(-1.0 + 2.0 * i as f64 / n as f64)).collect();
        if pts.iter().any(|p| p.abs().max() > 1.0 + 1e-12) {
            return bad("curve leaves the cube [-1,1]^3");
        }
        if self.min_separation() <= 1e-9 {
            return bad("curve is not injective at sampling resolution");
        }
        if (0..=n).any(|i| self.raw_derivative(-1.0 + 2.0 * i as f64 / n as f64).norm() < 1e-12) {
            return bad("curve is singular");
        }
        Ok(())
    }

    /// Smallest distance between non-adjacent samples at resolution
    /// [`SAMPLE_RESOLUTION`].
    pub fn min_separation(&self) -> f64 {
        let n = SAMPLE_RESOLUTION;
        let pts: Vec<V3> = (0..=n).map(|i| self.position(-1.0 + 2.0 * i as f64 / n as f64)).collect();
        let mut best = f64::INFINITY;
        for a in 0..pts.len() {
            for b in a + 2..pts.len() {
                best = best.min((pts[a] - pts[b]).norm());
            }
        }
        best
    }

    pub fn position(&self, t: f64) -> V3 {
        match locate(&self.segments, t) {
            Some(s) => s.value(t),
            None => V3::new(t, 0.0, 0.0),
        }
    }

    fn raw_derivative(&self, t: f64) -> V3 {
        match locate(&self.segments, t) {
            Some(s) => s.derivative(t),
            None => V3::x(),
        }
    }

    pub fn tangent(&self, t: f64) -> V3 {
        self.raw_derivative(t).normalize()
    }

    fn chart(&self, t: f64) -> V3 {
        locate(&self.framing.segments, t).map_or(V3::zeros(), |s| s.value(t))
    }

    /// The frame at `t`; its first column is the unit tangent.
    pub fn frame(&self, t: f64) -> M3 {
        let tan = self.tangent(t);
        let r = Rotation3::new(self.chart(t)).into_inner();
        let mut b = r.column(1).into_owned();
        b -= tan * tan.dot(&b);
        if b.norm() < 1e-6 {
            b = r.column(2).into_owned();
            b -= tan * tan.dot(&b);
        }
        let b = b.normalize();
        M3::from_columns(&[tan, b, tan.cross(&b)])
    }

    /// Direction `u_ab` between points at times `ta <= tb`: the chord when the
    /// points are farther apart than `DELTA`, else the limit of the chord as
    /// `tb` decreases to `ta`.
    fn direction(&self, ta: f64, xa: V3, xb: V3) -> V3 {
        let d = xa - xb;
        if d.norm() > DELTA {
            return d.normalize();
        }
        let v = -self.tangent(ta);
        let probe = xa - self.position(ta + 1e-6);
        if probe.dot(&v) < 0.0 {
            -v
        } else {
            v
        }
    }

    /// `ev_n`: samples the knot and its framing at weakly increasing times.
    pub fn evaluate(&self, t: &[f64]) -> Result<FramedConfig, ConfigError> {
        if t.windows(2).any(|w| w[1] < w[0]) || t.iter().any(|x| !(-1.0..=1.0).contains(x)) {
            return Err(ConfigError::NonMonotone);
        }
        let mut times = vec![-1.0];
        times.extend_from_slice(t);
        times.push(1.0);
        let points: Vec<V3> = times.iter().map(|&s| self.position(s)).collect();
        let frames: Vec<M3> = times.iter().map(|&s| self.frame(s)).collect();
        let mut upper = Vec::new();
        for a in 0..times.len() {
            for b in a + 1..times.len() {
                upper.push(self.direction(times[a], points[a], points[b]));
            }
        }
        let shape = InfConfig::new(&upper, frames)?;
        FramedConfig::from_parts(points, shape, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn straight_line_baseline() {
        let k = FramedKnot::straight();
        let c = k.evaluate(&[-0.5, 0.0, 0.0, 0.7]).unwrap();
        for a in 0..=5 {
            assert_eq!(*c.frame(a), M3::identity());
            for b in a + 1..=5 {
                assert_eq!(c.u(a, b), -V3::x());
            }
        }
        assert_eq!(c.point(2), V3::zeros());
    }

    #[test]
    fn samples_validate() {
        FramedKnot::trefoil().validate().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            FramedKnot::random(&mut rng).validate().unwrap();
        }
    }

    #[test]
    fn json_roundtrip() {
        let k = FramedKnot::trefoil();
        assert_eq!(FramedKnot::from_json(&k.to_json()).unwrap(), k);
        assert!(FramedKnot::from_json("{\"segments\": []}").is_err());
    }

    #[test]
    fn frames_follow_the_tangent() {
        let k = FramedKnot::trefoil();
        for i in 0..=200 {
            let t = -1.0 + i as f64 / 100.0;
            let f = k.frame(t);
            assert!((f.column(0) - k.tangent(t)).norm() < 1e-12);
            assert!((f.transpose() * f - M3::identity()).abs().max() < 1e-12);
        }
    }

    #[test]
    fn non_monotone_times() {
        assert_eq!(FramedKnot::straight().evaluate(&[0.2, 0.1]), Err(ConfigError::NonMonotone));
    }
}
