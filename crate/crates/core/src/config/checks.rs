//! Seeded numeric identity checks over random configurations and knots.

use nalgebra::Rotation3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::action::{act_on_knots, act_on_samples, restriction_projection, AlignedMap, IntervalFamily};
use super::framed::{FramedConfig, InfConfig, M3, V3};
use super::knot::FramedKnot;
use super::ConfigError;
use crate::counters;

/// Truncation error allowed when comparing collided directions with a
/// Richardson-extrapolated chord at step `1e-4`.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// Largest number of interior points in any configuration.
    pub max_points: usize,
    /// Extra knot to include in the evaluation and action checks.
    pub knot: Option<FramedKnot>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 42,
            samples: 1000,
            tolerance: 1e-9,
            max_points: 6,
            knot: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub seed: u64,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
    /// Frames re-orthonormalized during the run.
    pub reorthonormalizations: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,seed,samples,max_error,tolerance,status\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{}\n",
                r.check,
                r.seed,
                r.samples,
                r.max_error,
                r.tolerance,
                if r.passed { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

type Sample<'a> = dyn Fn(&mut ChaCha8Rng, &CheckOptions) -> Result<f64, ConfigError> + Sync + 'a;

fn sample_rng(seed: u64, check: usize, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((check as u64) << 32) | k as u64);
    rng
}

fn run(name: &str, index: usize, opts: &CheckOptions, tolerance: f64, f: &Sample<'_>) -> CheckRow {
    let start = std::time::Instant::now();
    let worst = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(opts.seed, index, k);
            match f(&mut rng, opts) {
                Ok(e) if !e.is_nan() => e,
                Ok(_) => f64::INFINITY,
                Err(err) => {
                    log::warn!("{name} sample {k}: {err}");
                    f64::INFINITY
                }
            }
        })
        .reduce(|| 0.0, f64::max);
    log::debug!("{name}: {:.2?}", start.elapsed());
    CheckRow {
        check: name.to_string(),
        seed: opts.seed,
        samples: opts.samples,
        max_error: worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

/// Weakly increasing times in `[-1, 1]`, often with repeats.
pub fn random_times(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    t.sort_by(f64::total_cmp);
    for i in 1..n {
        if rng.gen_bool(0.25) {
            t[i] = t[i - 1];
        }
    }
    if n > 0 && rng.gen_bool(0.1) {
        t[n - 1] = 1.0;
    }
    if n > 0 && rng.gen_bool(0.1) {
        t[0] = -1.0;
    }
    t
}

fn random_rotation(rng: &mut impl Rng) -> M3 {
    let v = V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    Rotation3::new(v).into_inner()
}

/// A spatial configuration: a random knot evaluated at random times.
pub fn random_config(rng: &mut impl Rng, n: usize) -> FramedConfig {
    let k = FramedKnot::random(rng);
    let t = random_times(rng, n);
    k.evaluate(&t).expect("random evaluation")
}

/// An infinitesimal configuration, sometimes with collided points.
pub fn random_inf(rng: &mut impl Rng, m: usize) -> InfConfig {
    if m >= 2 && rng.gen_bool(0.3) {
        let x = random_inf(rng, m - 1);
        let i = rng.gen_range(0..=m);
        return x.coface(i).unwrap();
    }
    let pts: Vec<V3> = (0..m)
        .map(|_| V3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let frames = (0..m).map(|_| random_rotation(rng)).collect();
    InfConfig::from_points(&pts, frames).unwrap_or_else(|_| InfConfig::unit())
}

/// Cosimplicial operations shared by the spatial and operadic models.
trait Cosimplicial: Sized {
    fn points(&self) -> usize;
    fn d(&self, i: usize) -> Result<Self, ConfigError>;
    fn s(&self, j: usize) -> Result<Self, ConfigError>;
    fn dist(&self, other: &Self) -> f64;
}

impl Cosimplicial for FramedConfig {
    fn points(&self) -> usize {
        self.n()
    }
    fn d(&self, i: usize) -> Result<Self, ConfigError> {
        self.coface(i)
    }
    fn s(&self, j: usize) -> Result<Self, ConfigError> {
        self.codegeneracy(j)
    }
    fn dist(&self, other: &Self) -> f64 {
        self.distance(other)
    }
}

impl Cosimplicial for InfConfig {
    fn points(&self) -> usize {
        self.len()
    }
    fn d(&self, i: usize) -> Result<Self, ConfigError> {
        self.coface(i)
    }
    fn s(&self, j: usize) -> Result<Self, ConfigError> {
        self.codegeneracy(j)
    }
    fn dist(&self, other: &Self) -> f64 {
        self.distance(other)
    }
}

/// The five families of cosimplicial identities, each as a maximal error
/// over all valid indices.
fn identity_family<C: Cosimplicial>(family: usize, c: &C) -> Result<f64, ConfigError> {
    let n = c.points();
    let mut e: f64 = 0.0;
    match family {
        // d^j d^i = d^i d^{j-1}, i < j
        0 => {
            for j in 1..=n + 2 {
                for i in 0..j {
                    e = e.max(c.d(i)?.d(j)?.dist(&c.d(j - 1)?.d(i)?));
                }
            }
        }
        // s^j d^i = d^i s^{j-1}, i < j
        1 => {
            for j in 1..=n {
                for i in 0..j {
                    e = e.max(c.d(i)?.s(j)?.dist(&c.s(j - 1)?.d(i)?));
                }
            }
        }
        // s^j d^j = s^j d^{j+1} = id
        2 => {
            for j in 0..=n {
                e = e.max(c.d(j)?.s(j)?.dist(c));
                e = e.max(c.d(j + 1)?.s(j)?.dist(c));
            }
        }
        // s^j d^i = d^{i-1} s^j, i > j + 1
        3 => {
            for j in 0..n {
                for i in j + 2..=n + 1 {
                    e = e.max(c.d(i)?.s(j)?.dist(&c.s(j)?.d(i - 1)?));
                }
            }
        }
        // s^j s^i = s^i s^{j+1}, i <= j
        _ => {
            for j in 0..n.saturating_sub(1) {
                for i in 0..=j {
                    e = e.max(c.s(i)?.s(j)?.dist(&c.s(j + 1)?.s(i)?));
                }
            }
        }
    }
    Ok(e)
}

const FAMILIES: [&str; 5] = ["dd", "sd_below", "sd_identity", "sd_above", "ss"];

/// Random intervals with gaps, `1..=3` of them.
pub fn random_family(rng: &mut impl Rng, k: usize) -> IntervalFamily {
    let mut cuts: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    cuts.sort_by(f64::total_cmp);
    let pairs: Vec<(f64, f64)> = cuts.chunks(2).map(|c| (c[0], c[1])).collect();
    IntervalFamily::new(&pairs).unwrap_or_else(|_| IntervalFamily::new(&[(-1.0, 1.0)]).unwrap())
}

fn knots_for(rng: &mut ChaCha8Rng, opts: &CheckOptions, k: usize) -> Vec<FramedKnot> {
    let mut ks: Vec<FramedKnot> = (0..k).map(|_| FramedKnot::random(rng)).collect();
    if let Some(extra) = &opts.knot {
        let i = rng.gen_range(0..k);
        ks[i] = extra.clone();
    }
    ks
}

fn equivariance(rng: &mut ChaCha8Rng, opts: &CheckOptions) -> Result<f64, ConfigError> {
    let count = rng.gen_range(1..=3);
    let ls = random_family(rng, count);
    let ks = knots_for(rng, opts, ls.len());
    let n = rng.gen_range(1..=opts.max_points);
    let t = random_times(rng, n);
    let evs: Vec<Box<AlignedMap<'_>>> = ks
        .iter()
        .map(|k| Box::new(move |s: &[f64]| k.evaluate(s)) as Box<AlignedMap<'_>>)
        .collect();
    let refs: Vec<&AlignedMap<'_>> = evs.iter().map(|b| b.as_ref()).collect();
    let lhs = act_on_samples(&ls, &refs, &t)?;
    let rhs = act_on_knots(&ls, &ks)?.evaluate(&t)?;
    Ok(lhs.distance(&rhs))
}

fn projection_of_evaluation(rng: &mut ChaCha8Rng, opts: &CheckOptions) -> Result<f64, ConfigError> {
    let k = match &opts.knot {
        Some(k) if rng.gen_bool(0.5) => k.clone(),
        _ => FramedKnot::random(rng),
    };
    let n = rng.gen_range(1..=opts.max_points);
    let t = random_times(rng, n - 1);
    let ev = |s: &[f64]| k.evaluate(s);
    Ok(restriction_projection(&ev, &t)?.distance(&k.evaluate(&t)?))
}

/// Runs every check and returns one row per check.
pub fn run_checks(opts: &CheckOptions) -> CheckReport {
    let before = counters::reorthonormalizations();
    let tol = opts.tolerance;
    let mut rows = Vec::new();
    let mut index = 0;
    let mut add = |rows: &mut Vec<CheckRow>, name: &str, tolerance: f64, f: &Sample<'_>| {
        rows.push(run(name, index, opts, tolerance, f));
        index += 1;
    };
    for (family, name) in FAMILIES.iter().enumerate() {
        add(&mut rows, &format!("spatial.{name}"), tol, &move |rng, o| {
            let n = rng.gen_range(1..=o.max_points.max(1));
            identity_family(family, &random_config(rng, n))
        });
        add(&mut rows, &format!("operadic.{name}"), tol, &move |rng, o| {
            let n = rng.gen_range(1..=o.max_points.max(1));
            identity_family(family, &random_inf(rng, n))
        });
    }
    add(&mut rows, "operadic.first_coface", tol, &|rng, o| {
        let count = rng.gen_range(1..=o.max_points - 1);
        let x = random_inf(rng, count);
        Ok(x.coface(0)?.distance(&x.prepend_point()))
    });
    add(&mut rows, "insertion.unit", tol, &|rng, o| {
        let n = rng.gen_range(1..=o.max_points);
        let c = random_config(rng, n);
        let d = random_inf(rng, n);
        let mut e = InfConfig::unit().insert(1, &d)?.distance(&d);
        for i in 1..=n {
            e = e.max(c.insert(i, &InfConfig::unit())?.distance(&c));
        }
        Ok(e)
    });
    add(&mut rows, "insertion.associativity", tol, &|rng, o| {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let p = rng.gen_range(1..=(o.max_points + 2).saturating_sub(n + m).clamp(1, 2));
        let a = random_config(rng, n);
        let b = random_inf(rng, m);
        let c = random_inf(rng, p);
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=m);
        let lhs = a.insert(i, &b)?.insert(i + j - 1, &c)?;
        let rhs = a.insert(i, &b.insert(j, &c)?)?;
        let a2 = random_inf(rng, n);
        let lhs2 = a2.insert(i, &b)?.insert(i + j - 1, &c)?;
        let rhs2 = a2.insert(i, &b.insert(j, &c)?)?;
        Ok(lhs.distance(&rhs).max(lhs2.distance(&rhs2)))
    });
    add(&mut rows, "frames.orthogonality", tol, &|rng, o| {
        let n = rng.gen_range(1..=o.max_points.max(1));
        let mut c = random_config(rng, n);
        let d = random_inf(rng, 2);
        c = c.insert(rng.gen_range(1..=n), &d)?;
        c = c.coface(rng.gen_range(0..=c.n() + 1))?;
        Ok(c.shape().frame_defect())
    });
    add(&mut rows, "evaluation.consistency", tol, &|rng, o| {
        let k = match &o.knot {
            Some(k) if rng.gen_bool(0.5) => k.clone(),
            _ => FramedKnot::random(rng),
        };
        let count = rng.gen_range(1..=o.max_points);
        let t = random_times(rng, count);
        let c = k.evaluate(&t)?;
        let mut e = c.consistency_error();
        for (i, &s) in t.iter().enumerate() {
            e = e.max((c.point(i + 1) - k.position(s)).abs().max());
            e = e.max((c.frame(i + 1) - k.frame(s)).abs().max());
        }
        Ok(e)
    });
    add(&mut rows, "evaluation.collision_limit", tol.max(LIMIT_TOLERANCE), &|rng, _| {
        let k = FramedKnot::random(rng);
        let h = 1e-4;
        // Keep [t, t + h] inside one spline segment, where the knot is smooth.
        let seg = &k.segments[rng.gen_range(0..k.segments.len())];
        let t = rng.gen_range(seg.t0..seg.t1 - h);
        let c = k.evaluate(&[t, t])?;
        let chord = |h: f64| (k.position(t) - k.position(t + h)).normalize();
        // Two Richardson steps on the chord direction, whose error is a power series in h.
        let r1 = |h: f64| 2.0 * chord(h / 2.0) - chord(h);
        let limit = ((4.0 * r1(h / 2.0) - r1(h)) / 3.0).normalize();
        Ok((c.u(1, 2) - limit).abs().max())
    });
    add(&mut rows, "evaluation.straight_line", tol, &|rng, o| {
        let count = rng.gen_range(1..=o.max_points);
        let t = random_times(rng, count);
        let c = FramedKnot::straight().evaluate(&t)?;
        let mut e: f64 = 0.0;
        for a in 0..=t.len() + 1 {
            e = e.max((c.frame(a) - M3::identity()).abs().max());
            for b in a + 1..=t.len() + 1 {
                e = e.max((c.u(a, b) + V3::x()).abs().max());
            }
        }
        for (i, &s) in t.iter().enumerate() {
            e = e.max((c.point(i + 1) - V3::new(s, 0.0, 0.0)).abs().max());
        }
        Ok(e)
    });
    add(&mut rows, "projection.evaluation", tol, &projection_of_evaluation);
    add(&mut rows, "action.equivariance", tol, &equivariance);
    add(&mut rows, "action.associativity", tol, &|rng, o| {
        let count = rng.gen_range(1..=3);
        let l = random_family(rng, count);
        let i = rng.gen_range(1..=l.len());
        let count = rng.gen_range(1..=2);
        let inner = random_family(rng, count);
        let outer_knots = knots_for(rng, o, l.len());
        let inner_knots: Vec<FramedKnot> = (0..inner.len()).map(|_| FramedKnot::random(rng)).collect();
        let composed = l.compose(i, &inner)?;
        let mut flat: Vec<FramedKnot> = outer_knots[..i - 1].to_vec();
        flat.extend(inner_knots.iter().cloned());
        flat.extend(outer_knots[i..].iter().cloned());
        let lhs = act_on_knots(&composed, &flat)?;
        let mut nested = outer_knots.clone();
        nested[i - 1] = act_on_knots(&inner, &inner_knots)?;
        let rhs = act_on_knots(&l, &nested)?;
        let count = rng.gen_range(1..=o.max_points);
        let t = random_times(rng, count);
        Ok(lhs.evaluate(&t)?.distance(&rhs.evaluate(&t)?))
    });
    add(&mut rows, "action.projection", tol, &|rng, o| {
        let count = rng.gen_range(1..=3);
        let ls = random_family(rng, count);
        let ks = knots_for(rng, o, ls.len());
        let n = rng.gen_range(2..=o.max_points.max(2));
        let t = random_times(rng, n - 1);
        let evs: Vec<Box<AlignedMap<'_>>> = ks
            .iter()
            .map(|k| Box::new(move |s: &[f64]| k.evaluate(s)) as Box<AlignedMap<'_>>)
            .collect();
        let refs: Vec<&AlignedMap<'_>> = evs.iter().map(|b| b.as_ref()).collect();
        let acted = |s: &[f64]| act_on_samples(&ls, &refs, s);
        let lhs = restriction_projection(&acted, &t)?;
        let projected: Vec<Box<AlignedMap<'_>>> = evs
            .iter()
            .map(|phi| Box::new(move |s: &[f64]| restriction_projection(phi.as_ref(), s)) as Box<AlignedMap<'_>>)
            .collect();
        let prefs: Vec<&AlignedMap<'_>> = projected.iter().map(|b| b.as_ref()).collect();
        let rhs = act_on_samples(&ls, &prefs, &t)?;
        Ok(lhs.distance(&rhs))
    });
    if let Some(k) = &opts.knot {
        let sep = k.min_separation();
        rows.push(CheckRow {
            check: "knot.validation".into(),
            seed: opts.seed,
            samples: 1,
            max_error: if k.validate().is_ok() { 0.0 } else { f64::INFINITY },
            tolerance: tol,
            passed: k.validate().is_ok() && sep > 0.0,
        });
    }
    CheckReport {
        rows,
        reorthonormalizations: counters::reorthonormalizations() - before,
    }
}
