use super::framed::{y0, y1, FramedConfig, InfConfig, M3, V3};
use super::knot::{CubicSegment, FramedKnot, FramingChart};
use super::{ConfigError, DELTA};

/// A closed subinterval `[a, b]` of `[-1, 1]`, also read as the increasing
/// affine map `[-1, 1] → [a, b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn center(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    pub fn scale(&self) -> f64 {
        (self.b - self.a) / 2.0
    }

    pub fn apply(&self, s: f64) -> f64 {
        self.center() + self.scale() * s
    }

    /// The inverse on `[a, b]`, sending points left of it to `-1` and right
    /// of it to `1`.
    pub fn pull_back(&self, t: f64) -> f64 {
        if t <= self.a {
            -1.0
        } else if t >= self.b {
            1.0
        } else {
            ((t - self.center()) / self.scale()).clamp(-1.0, 1.0)
        }
    }

    pub fn interior_contains(&self, t: f64) -> bool {
        self.a < t && t < self.b
    }

    /// `L̂`: `L` on the first coordinate, the others scaled by the same factor.
    pub fn hat(&self, x: V3) -> V3 {
        V3::new(self.apply(x.x), self.scale() * x.y, self.scale() * x.z)
    }
}

/// Disjoint subintervals of `[-1, 1]` in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalFamily {
    intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn new(endpoints: &[(f64, f64)]) -> Result<Self, ConfigError> {
        let intervals: Vec<Interval> = endpoints.iter().map(|&(a, b)| Interval { a, b }).collect();
        let ok = intervals.iter().all(|l| -1.0 <= l.a && l.a < l.b && l.b <= 1.0)
            && intervals.windows(2).all(|w| w[0].b <= w[1].a);
        if !ok {
            return Err(ConfigError::Intervals);
        }
        Ok(IntervalFamily { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Operad composition: interval `i` (1-based) replaced by the image of
    /// `inner` under it.
    pub fn compose(&self, i: usize, inner: &IntervalFamily) -> Result<IntervalFamily, ConfigError> {
        if !(1..=self.len()).contains(&i) {
            return Err(ConfigError::Index { index: i, n: self.len() });
        }
        let l = self.intervals[i - 1];
        let mut out = self.intervals[..i - 1].to_vec();
        out.extend(inner.intervals.iter().map(|m| Interval {
            a: l.apply(m.a),
            b: l.apply(m.b),
        }));
        out.extend_from_slice(&self.intervals[i..]);
        Ok(IntervalFamily { intervals: out })
    }
}

fn line_segment(t0: f64, t1: f64) -> CubicSegment {
    CubicSegment {
        t0,
        t1,
        coeffs: [[t0, 1.0, 0.0, 0.0], [0.0; 4], [0.0; 4]],
    }
}

fn zero_segment(t0: f64, t1: f64) -> CubicSegment {
    CubicSegment {
        t0,
        t1,
        coeffs: [[0.0; 4]; 3],
    }
}

/// Reparametrizes a segment by `L`, applying `L̂` to values when `hat`.
fn push_forward(s: &CubicSegment, l: &Interval, hat: bool) -> CubicSegment {
    let lam = l.scale();
    let mut coeffs = s.coeffs;
    for row in coeffs.iter_mut() {
        for (k, c) in row.iter_mut().enumerate() {
            *c *= lam.powi(if hat { 1 - k as i32 } else { -(k as i32) });
        }
    }
    if hat {
        coeffs[0][0] += l.center();
    }
    let end = |x: f64| {
        if x == -1.0 {
            l.a
        } else if x == 1.0 {
            l.b
        } else {
            l.apply(x)
        }
    };
    CubicSegment {
        t0: end(s.t0),
        t1: end(s.t1),
        coeffs,
    }
}

/// The knots shrunk into the intervals and placed in succession along the
/// `x`-axis; framings are carried along unchanged.
pub fn act_on_knots(ls: &IntervalFamily, ks: &[FramedKnot]) -> Result<FramedKnot, ConfigError> {
    if ls.len() != ks.len() {
        return Err(ConfigError::Mismatch {
            expected: ls.len(),
            got: ks.len(),
        });
    }
    let mut curve = Vec::new();
    let mut framing = Vec::new();
    let mut t = -1.0;
    for (l, k) in ls.intervals.iter().zip(ks) {
        if t < l.a {
            curve.push(line_segment(t, l.a));
            framing.push(zero_segment(t, l.a));
        }
        curve.extend(k.segments.iter().map(|s| push_forward(s, l, true)));
        if k.framing.segments.is_empty() {
            framing.push(zero_segment(l.a, l.b));
        } else {
            framing.extend(k.framing.segments.iter().map(|s| push_forward(s, l, false)));
        }
        t = l.b;
    }
    if t < 1.0 {
        curve.push(line_segment(t, 1.0));
        framing.push(zero_segment(t, 1.0));
    }
    // Exact endpoints, so that segments tile [-1, 1] without rounding gaps.
    for segs in [&mut curve, &mut framing] {
        for i in 1..segs.len() {
            segs[i].t0 = segs[i - 1].t1;
        }
        segs[0].t0 = -1.0;
        segs.last_mut().unwrap().t1 = 1.0;
    }
    Ok(FramedKnot {
        segments: curve,
        framing: FramingChart { segments: framing },
    })
}

/// A sampled aligned map: weakly increasing times to configurations.
pub type AlignedMap<'a> = dyn Fn(&[f64]) -> Result<FramedConfig, ConfigError> + 'a;

/// The little-intervals action on aligned maps at the times `t`. Points with
/// `t_j` inside some `L_i` come from `L̂_i ∘ φ_i|_{L_i}`; the rest sit at
/// `(t_j, 0, 0)` with identity frames. Coincident points from different
/// sources lie on the axis; their direction `u_ab`, `a < b`, is `-e_1`
/// (collision along the positive `x`-axis).
pub fn act_on_samples(ls: &IntervalFamily, phis: &[&AlignedMap<'_>], t: &[f64]) -> Result<FramedConfig, ConfigError> {
    if ls.len() != phis.len() {
        return Err(ConfigError::Mismatch {
            expected: ls.len(),
            got: phis.len(),
        });
    }
    let n = t.len();
    let owner: Vec<Option<usize>> = t
        .iter()
        .map(|&x| ls.intervals.iter().position(|l| l.interior_contains(x)))
        .collect();
    let mut points = vec![y0()];
    points.extend(t.iter().map(|&x| V3::new(x, 0.0, 0.0)));
    points.push(y1());
    let mut frames = vec![M3::identity(); n + 2];
    let mut source: Vec<Option<FramedConfig>> = vec![None; ls.len()];
    for (i, l) in ls.intervals.iter().enumerate() {
        if !owner.contains(&Some(i)) {
            continue;
        }
        let s: Vec<f64> = t.iter().map(|&x| l.pull_back(x)).collect();
        let c = phis[i](&s)?;
        if c.n() != n {
            return Err(ConfigError::Mismatch { expected: n, got: c.n() });
        }
        for j in (1..=n).filter(|&j| owner[j - 1] == Some(i)) {
            points[j] = l.hat(c.point(j));
            frames[j] = *c.frame(j);
        }
        source[i] = Some(c);
    }
    let mut upper = Vec::new();
    for a in 0..n + 2 {
        for b in a + 1..n + 2 {
            let own = |s: usize| if s == 0 || s == n + 1 { None } else { owner[s - 1] };
            let v = match (own(a), own(b)) {
                (Some(i), Some(k)) if i == k => source[i].as_ref().unwrap().u(a, b),
                _ => {
                    let d = points[a] - points[b];
                    if d.norm() > DELTA {
                        d.normalize()
                    } else {
                        -V3::x()
                    }
                }
            };
            upper.push(v);
        }
    }
    FramedConfig::from_parts(points, InfConfig::new(&upper, frames)?, true)
}

/// `p_n`: restricts to the face `t_n = 1` and forgets the last point.
pub fn restriction_projection(phi: &AlignedMap<'_>, t: &[f64]) -> Result<FramedConfig, ConfigError> {
    let mut full = t.to_vec();
    full.push(1.0);
    let c = phi(&full)?;
    c.forget(c.n())
}
