//! The sampled engine: bars and critical points of `f_{t0}` at rational
//! parameter values, and the matching of critical points between samples.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{BivarPoly, FamilyPoly, PuiseuxSeries, Scalar, TSeries};
use crate::arcs::{arc_at, fmt_order, series_json, BarAnalysis, Branch, CriticalPoint};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, rat, to_f64, Rat};
use crate::roots::expand::ExpandConfig;
use crate::roots::normalize::shear_normalize;

/// Height standing in for an infinite height in arc distances.
const INFINITE_HEIGHT: f64 = 64.0;

/// `{0, ±1/8, ±1/4, ±1/2}` in increasing order.
pub fn default_grid() -> Vec<Rat> {
    vec![rat(-1, 2), rat(-1, 4), rat(-1, 8), Rat::zero(), rat(1, 8), rat(1, 4), rat(1, 2)]
}

/// The analysis of one specialization `f_{t0}`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: Rat,
    /// `c` in the shear `x ↦ x + c y` applied before the analysis.
    pub shear: Rat,
    pub poly: BivarPoly<Rat>,
    pub analysis: BarAnalysis,
}

impl Sample {
    /// The critical arc of a critical point, in the coordinates of `F`.
    pub fn critical_arc(&self, cp: &CriticalPoint) -> PuiseuxSeries<Scalar> {
        let bar = &self.analysis.bars[cp.bar];
        let mut arc = match &bar.height {
            Some(h) => arc_at(&bar.prefix, h, &cp.coordinate),
            None => bar.prefix.clone(),
        };
        if !self.shear.is_zero() {
            arc.add_term(Rat::one(), Scalar::Exact(self.shear.clone()));
        }
        arc
    }

    /// The matching key of a critical point.
    pub fn key(&self, cp: &CriticalPoint) -> ArcKey {
        let bar = &self.analysis.bars[cp.bar];
        let arc = if cp.generic {
            let mut p = bar.prefix.clone();
            if !self.shear.is_zero() {
                p.add_term(Rat::one(), Scalar::Exact(self.shear.clone()));
            }
            p
        } else {
            self.critical_arc(cp)
        };
        ArcKey { branch: bar.branch, generic: cp.generic, arc, height: bar.height.clone() }
    }
}

/// Specializes `F` at `t0`, restores mini-regularity by a shear if needed,
/// and runs the bar pipeline.
pub fn analyze_at_t(family: &FamilyPoly, t0: &Rat, seed: u64, cfg: &ExpandConfig) -> Result<Sample> {
    let f = family.specialize(t0);
    let (poly, shear) = shear_normalize(&f, seed)?;
    let analysis = BarAnalysis::compute(&poly, seed, cfg)?;
    Ok(Sample { t: t0.clone(), shear, poly, analysis })
}

/// All grid samples, analyzed in parallel and returned in grid order.
pub fn analyze_grid(family: &FamilyPoly, grid: &[Rat], seed: u64, cfg: &ExpandConfig) -> Vec<Result<Sample>> {
    grid.par_iter().map(|t| analyze_at_t(family, t, seed, cfg)).collect()
}

/// Walks from `t = 0` outwards: the nonnegative samples in increasing order
/// and the nonpositive ones in decreasing order. Indices into `grid`.
pub fn grid_paths(grid: &[Rat]) -> Result<(usize, Vec<Vec<usize>>)> {
    let zero = grid
        .iter()
        .position(|t| t.is_zero())
        .ok_or_else(|| Error::Precondition("the t-grid must contain 0".into()))?;
    let mut pos: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] > Rat::zero()).collect();
    pos.sort_by(|&a, &b| grid[a].cmp(&grid[b]));
    let mut neg: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] < Rat::zero()).collect();
    neg.sort_by(|&a, &b| grid[b].cmp(&grid[a]));
    let paths = [pos, neg].into_iter().filter(|p| !p.is_empty()).map(|p| std::iter::once(zero).chain(p).collect()).collect();
    Ok((zero, paths))
}

/// What a critical point is matched by: its half-branch, its critical arc
/// (the bar prefix alone for generic points) and the bar height.
#[derive(Clone, Debug)]
pub struct ArcKey {
    pub branch: Branch,
    pub generic: bool,
    pub arc: PuiseuxSeries<Scalar>,
    pub height: Option<Rat>,
}

impl ArcKey {
    pub fn to_json(&self) -> Value {
        json!({
            "branch": self.branch.name(),
            "arc": series_json(&self.arc),
            "height": fmt_order(&self.height),
            "generic": self.generic,
        })
    }
}

fn height_f64(h: &Option<Rat>) -> f64 {
    h.as_ref().map(to_f64).unwrap_or(INFINITE_HEIGHT)
}

/// `Σ_e |a_e - b_e| 2^{-e} + |h_a - h_b|`; infinite for points on different
/// half-branches or of different kinds.
pub fn arc_distance(a: &ArcKey, b: &ArcKey) -> f64 {
    if a.branch != b.branch || a.generic != b.generic {
        return f64::INFINITY;
    }
    let mut exps: Vec<&Rat> = a.arc.terms().map(|(e, _)| e).chain(b.arc.terms().map(|(e, _)| e)).collect();
    exps.sort();
    exps.dedup();
    let mut d = 0.0;
    for e in exps {
        let ca = a.arc.coeff(e).map(|c| c.to_c64()).unwrap_or((0.0, 0.0));
        let cb = b.arc.coeff(e).map(|c| c.to_c64()).unwrap_or((0.0, 0.0));
        let diff = ((ca.0 - cb.0).powi(2) + (ca.1 - cb.1).powi(2)).sqrt();
        d += diff * (-to_f64(e)).exp2();
    }
    d + (height_f64(&a.height) - height_f64(&b.height)).abs()
}

/// A partial bijection between two lists of critical points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_prev: Vec<usize>,
    pub unmatched_next: Vec<usize>,
}

/// Greedy matching on sorted distances; ties go to the lower indices.
pub fn match_critical_points(prev: &[ArcKey], next: &[ArcKey]) -> Matching {
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in prev.iter().enumerate() {
        for (j, b) in next.iter().enumerate() {
            let d = arc_distance(a, b);
            if d.is_finite() {
                cand.push((d, i, j));
            }
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_prev = vec![false; prev.len()];
    let mut used_next = vec![false; next.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in cand {
        if !used_prev[i] && !used_next[j] {
            used_prev[i] = true;
            used_next[j] = true;
            pairs.push((i, j));
        }
    }
    pairs.sort();
    Matching {
        pairs,
        unmatched_prev: (0..prev.len()).filter(|&i| !used_prev[i]).collect(),
        unmatched_next: (0..next.len()).filter(|&j| !used_next[j]).collect(),
    }
}

/// Evaluates an arc over Q[t] at `t0`, keeping the known coefficients of
/// truncated ones.
pub fn arc_at_t(arc: &PuiseuxSeries<TSeries>, t0: &Rat) -> PuiseuxSeries<Scalar> {
    PuiseuxSeries::from_terms(
        arc.terms().map(|(e, c)| {
            let v = c.coeffs().iter().rev().fold(Rat::zero(), |acc, a| acc * t0 + a);
            (e.clone(), Scalar::Exact(v))
        }),
        None,
    )
}

pub fn t_json(t: &Rat) -> Value {
    Value::String(fmt_rat(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expression, Parsed};
    use crate::rat::int;

    fn family(s: &str) -> FamilyPoly {
        match parse_expression(s, 4).unwrap() {
            Parsed::Family(f) => f,
            Parsed::Poly(p) => FamilyPoly::constant(&p, 4).unwrap(),
        }
    }

    fn on_pos(s: &Sample) -> Vec<&CriticalPoint> {
        s.analysis.critical_on(Branch::Pos).collect()
    }

    #[test]
    fn quartic_family_splits_its_critical_point() {
        let f = family("x^4 - t^2*x^2*y^2 - y^4");
        let cfg = ExpandConfig::default();
        let s0 = analyze_at_t(&f, &Rat::zero(), 0, &cfg).unwrap();
        let c0 = on_pos(&s0);
        assert_eq!(c0.len(), 1);
        assert_eq!(c0[0].mult, 3);
        assert_eq!(c0[0].coordinate, Scalar::Exact(int(0)));
        assert_eq!(s0.analysis.bars[c0[0].bar].height, Some(int(1)));
        assert_eq!(c0[0].loj, Some(int(4)));
        let s1 = analyze_at_t(&f, &rat(1, 2), 0, &cfg).unwrap();
        let c1 = on_pos(&s1);
        assert_eq!(c1.len(), 3);
        assert!(c1.iter().all(|c| c.mult == 1));
        let keys0: Vec<ArcKey> = c0.iter().map(|c| s0.key(c)).collect();
        let keys1: Vec<ArcKey> = c1.iter().map(|c| s1.key(c)).collect();
        let m = match_critical_points(&keys0, &keys1);
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.unmatched_next.len(), 2);
    }

    #[test]
    fn cube_family_sample() {
        let f = family("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4");
        let s = analyze_at_t(&f, &rat(1, 2), 0, &ExpandConfig::default()).unwrap();
        let c = on_pos(&s);
        assert_eq!(c.len(), 1);
        let bar = &s.analysis.bars[c[0].bar];
        assert_eq!(bar.height, Some(rat(4, 3)));
        assert_eq!(bar.prefix.coeff(&int(1)), Some(&Scalar::Exact(rat(-1, 2))));
        assert_eq!((c[0].coordinate.clone(), c[0].mult), (Scalar::Exact(int(0)), 2));
        assert_eq!((c[0].value.clone(), c[0].loj.clone()), (Scalar::Exact(int(-1)), Some(int(4))));
    }

    #[test]
    fn identical_lists_match_identically() {
        let f = family("x^3 - 2*x*y^2 + y^5");
        let s = analyze_at_t(&f, &Rat::zero(), 0, &ExpandConfig::default()).unwrap();
        let keys: Vec<ArcKey> = s.analysis.critical.iter().map(|c| s.key(c)).collect();
        let m = match_critical_points(&keys, &keys);
        assert_eq!(m.pairs, (0..keys.len()).map(|i| (i, i)).collect::<Vec<_>>());
        assert!(m.unmatched_prev.is_empty() && m.unmatched_next.is_empty());
    }

    #[test]
    fn paths_start_at_zero() {
        let (z, p) = grid_paths(&default_grid()).unwrap();
        assert_eq!(z, 3);
        assert_eq!(p, vec![vec![3, 4, 5, 6], vec![3, 2, 1, 0]]);
        assert!(grid_paths(&[int(1)]).is_err());
    }
}
