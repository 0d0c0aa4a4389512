//! Numerical trivialization: integrate the glued field from `t = 0` and
//! measure how far `F` drifts off its starting level.

pub mod euler;
pub mod field;

use std::cell::Cell;

use ode_solvers::{Dopri5, OutputType, System, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::FamilyPoly;
use crate::arcs::BarAnalysis;
use crate::checker::{deform_on_branch, DeformOutcome};
use crate::error::{Error, Result};
use crate::rat::{rat, to_f64, Rat};
use crate::roots::expand::ExpandConfig;

pub use euler::{euler_lemma_check, EulerReport, WeightedForm};
pub use field::{field_v, partition_of_unity, FlowArc, GluedField, LevelFunction};

/// Drift is measured relative to `max(|F(x0, y0; 0)|, LEVEL_FLOOR)`.
pub const LEVEL_FLOOR: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub t_span: (Rat, Rat),
    /// Trajectories stop when `max(|x|, |y|)` drops below this.
    pub r_min: Rat,
    /// Trajectories stop when `max(|x|, |y|)` exceeds this.
    pub r_max: Rat,
    pub rtol: f64,
    pub atol: f64,
    pub starts: usize,
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            t_span: (Rat::from_integer(0.into()), rat(1, 4)),
            r_min: rat(1, 8),
            r_max: Rat::from_integer(1.into()),
            rtol: 1e-10,
            atol: 1e-12,
            starts: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowStatus {
    Ok,
    Singular,
    WallExit,
}

impl FlowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            FlowStatus::Ok => "ok",
            FlowStatus::Singular => "singular",
            FlowStatus::WallExit => "wall_exit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub start: (f64, f64),
    pub end: (f64, f64, f64),
    /// `max |F(η_t) - F(x0, y0; 0)| / max(|F(x0, y0; 0)|, 1e-3)` over the
    /// accepted steps.
    pub max_drift: f64,
    pub status: FlowStatus,
    pub steps: usize,
}

impl Trajectory {
    pub fn to_json(&self) -> Value {
        json!({
            "start": [self.start.0, self.start.1],
            "end": [self.end.0, self.end.1, self.end.2],
            "max_drift": self.max_drift,
            "status": self.status.name(),
            "steps": self.steps,
        })
    }
}

/// The deformed critical arcs of `F`, one per critical point of `f_0`. Every
/// critical arc must be rational and deform exactly.
pub fn critical_flow_arcs(family: &FamilyPoly, seed: u64, cfg: &ExpandConfig) -> Result<Vec<FlowArc>> {
    let a = BarAnalysis::compute(&family.at_zero(), seed, cfg)?;
    let mut out = Vec::new();
    for cp in &a.critical {
        let bar = &a.bars[cp.bar];
        let arc = match &bar.height {
            Some(h) => crate::arcs::arc_at(&bar.prefix, h, &cp.coordinate),
            None => bar.prefix.clone(),
        };
        let lam = arc
            .try_map(|c| c.as_rat().cloned().ok_or(Error::NonInvertible))
            .map_err(|_| Error::Precondition("a critical arc has irrational coefficients".into()))?;
        match deform_on_branch(family, bar.branch, &lam)? {
            DeformOutcome::Success { arc, .. } => out.push(FlowArc::new(bar.branch, &arc)),
            _ => return Err(Error::Precondition("a critical arc does not deform with a constant polygon".into())),
        }
    }
    Ok(out)
}

struct FlowSystem<'a> {
    field: &'a GluedField,
    singular: &'a Cell<bool>,
    stop: &'a Cell<Option<FlowStatus>>,
    r_min: f64,
    r_max: f64,
}

impl System<f64, Vector2<f64>> for FlowSystem<'_> {
    fn system(&self, t: f64, p: &Vector2<f64>, dp: &mut Vector2<f64>) {
        // the field runs backwards in t; t itself is the independent variable here
        match self.field.field(p[0], p[1], t) {
            Ok(v) if v[0].is_finite() && v[1].is_finite() => {
                dp[0] = -v[0];
                dp[1] = -v[1];
            }
            _ => {
                self.singular.set(true);
                dp[0] = 0.0;
                dp[1] = 0.0;
            }
        }
    }

    fn solout(&mut self, t: f64, p: &Vector2<f64>, _dp: &Vector2<f64>) -> bool {
        if self.singular.get() {
            self.stop.set(Some(FlowStatus::Singular));
            return true;
        }
        let s = self.field.level.scale(t).map(|s| s.0).unwrap_or(f64::NAN);
        let r = (s * p[0]).abs().max(p[1].abs());
        if !(r >= self.r_min && r <= self.r_max) {
            self.stop.set(Some(FlowStatus::WallExit));
            return true;
        }
        false
    }
}

/// Integrates the glued field from `(x0, y0)` at the start of the t-span.
pub fn integrate_flow(field: &GluedField, start: (f64, f64), cfg: &FlowConfig) -> Result<Trajectory> {
    let (t0, t1) = (to_f64(&cfg.t_span.0), to_f64(&cfg.t_span.1));
    if !(cfg.rtol > 0.0 && cfg.atol > 0.0) {
        return Err(Error::Precondition("tolerances must be positive".into()));
    }
    let (r_min, r_max) = (to_f64(&cfg.r_min), to_f64(&cfg.r_max));
    if r_min <= 0.0 {
        return Err(Error::Precondition("r_min must be positive".into()));
    }
    let s0 = field.level.scale(t0)?.0;
    let u0 = start.0 / s0;
    let level0 = field.level.normalized(u0, start.1, t0)?[0];
    let singular = Cell::new(false);
    let stop = Cell::new(None);
    let mut status = FlowStatus::Ok;
    if field.field(u0, start.1, t0).is_err() {
        status = FlowStatus::Singular;
    }
    let mut points: Vec<(f64, f64, f64)> = vec![(t0, u0, start.1)];
    if status == FlowStatus::Ok && t1 > t0 {
        let sys = FlowSystem { field, singular: &singular, stop: &stop, r_min, r_max };
        let mut solver = Dopri5::new(sys, t0, t1, t1 - t0, Vector2::new(u0, start.1), cfg.rtol, cfg.atol);
        solver.set_output(OutputType::Sparse);
        let res = solver.integrate();
        points = solver.x_out().iter().zip(solver.y_out()).map(|(t, p)| (*t, p[0], p[1])).collect();
        status = match (res, stop.get()) {
            (Err(_), _) => FlowStatus::Singular,
            (Ok(_), Some(s)) => s,
            (Ok(_), None) => FlowStatus::Ok,
        };
    }
    let scale_ref = level0.abs().max(LEVEL_FLOOR);
    let mut max_drift: f64 = 0.0;
    for &(t, u, y) in &points {
        if let Ok(g) = field.level.normalized(u, y, t) {
            max_drift = max_drift.max((g[0] - level0).abs() / scale_ref);
        }
    }
    let &(t, u, y) = points.last().expect("the start is recorded");
    let s = field.level.scale(t)?.0;
    Ok(Trajectory { start, end: (s * u, y, t), max_drift, status, steps: points.len().saturating_sub(1) })
}

/// Seeded start points with coordinates in `[-1/2, 1/2]` on a 1/1024 grid,
/// at max-norm distance at least `2 r_min` from the origin.
pub fn seeded_starts(n: usize, seed: u64, r_min: &Rat) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 2.0 * to_f64(r_min);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(-512i32..=512) as f64 / 1024.0;
        let y = rng.gen_range(-512i32..=512) as f64 / 1024.0;
        if x.abs().max(y.abs()) >= lo && y != 0.0 {
            out.push((x, y));
        }
    }
    out
}

/// Builds the glued field of `F` and integrates from seeded starts.
pub fn flow_check(family: &FamilyPoly, cfg: &FlowConfig, expand: &ExpandConfig) -> Result<Vec<Trajectory>> {
    let level = LevelFunction::new(family)?;
    let arcs = critical_flow_arcs(family, cfg.seed, expand)?;
    let field = GluedField::new(level, arcs);
    seeded_starts(cfg.starts, cfg.seed, &cfg.r_min).par_iter().map(|s| integrate_flow(&field, *s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expression, Parsed};

    fn family(s: &str) -> FamilyPoly {
        match parse_expression(s, 4).unwrap() {
            Parsed::Family(f) => f,
            Parsed::Poly(p) => FamilyPoly::constant(&p, 4).unwrap(),
        }
    }

    #[test]
    fn quadratic_family_keeps_its_levels() {
        let tr = flow_check(&family("x^2+2*x*y-t*y^2"), &FlowConfig::default(), &ExpandConfig::default()).unwrap();
        assert_eq!(tr.len(), 10);
        for t in &tr {
            assert_ne!(t.status, FlowStatus::Singular, "{t:?}");
            assert!(t.max_drift <= 1e-6, "{t:?}");
        }
    }

    #[test]
    fn cube_family_keeps_its_levels() {
        let tr = flow_check(&family("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4"), &FlowConfig::default(), &ExpandConfig::default()).unwrap();
        for t in &tr {
            assert_ne!(t.status, FlowStatus::Singular, "{t:?}");
            assert!(t.max_drift <= 1e-6, "{t:?}");
        }
    }

    #[test]
    fn constant_family_does_not_move() {
        let f = family("x^2-y^3");
        let field = GluedField::new(LevelFunction::new(&f).unwrap(), vec![]);
        let tr = integrate_flow(&field, (0.3, 0.4), &FlowConfig::default()).unwrap();
        assert_eq!(tr.status, FlowStatus::Ok);
        assert_eq!((tr.end.0, tr.end.1), (0.3, 0.4));
        assert_eq!(tr.max_drift, 0.0);
    }

    #[test]
    fn axis_start_stays_on_the_axis() {
        let f = family("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4");
        let field = GluedField::new(LevelFunction::new(&f).unwrap(), critical_flow_arcs(&f, 0, &ExpandConfig::default()).unwrap());
        let tr = integrate_flow(&field, (0.5, 0.0), &FlowConfig::default()).unwrap();
        assert_eq!((tr.end.0, tr.end.1), (0.5, 0.0));
        assert_eq!(tr.max_drift, 0.0);
    }

    #[test]
    fn starts_are_seeded() {
        let r = rat(1, 8);
        assert_eq!(seeded_starts(5, 1, &r), seeded_starts(5, 1, &r));
        assert!(seeded_starts(50, 2, &r).iter().all(|(x, y)| x.abs().max(y.abs()) >= 0.25));
    }
}
