//! Verdicts for conditions (a), (A) and (A′).
//!
//! A verdict is definite failure when the exact engine produced a witness,
//! undecided when some exact step or sample could not be decided, failure
//! when the sampled engine found a change, and holds otherwise. `holds` is
//! false whenever `undecided` is set.

use num_traits::Zero;
use serde_json::{json, Value};

use super::morse::{univariate_morse_zero_stable, Stability, UCrit};
use super::sample::{analyze_grid, arc_at_t, default_grid, grid_paths, match_critical_points, t_json, ArcKey, Sample};
use super::tschirn::{deform_on_branch, render_arc, DeformOutcome};
use crate::algebra::{FamilyPoly, PuiseuxSeries, Scalar, TSeries};
use crate::arcs::{critical_values_equal, Branch, fmt_order, fmt_scalar, initial_criticals, series_json, Bar, CriticalPoint};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::roots::expand::ExpandConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Condition (a).
    Small,
    /// Condition (A).
    Big,
    /// Condition (A′).
    Prime,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::Small, Condition::Big, Condition::Prime];

    pub fn name(&self) -> &'static str {
        match self {
            Condition::Small => "a",
            Condition::Big => "A",
            Condition::Prime => "Aprime",
        }
    }

    pub fn parse(s: &str) -> Result<Condition> {
        match s.trim() {
            "a" => Ok(Condition::Small),
            "A" => Ok(Condition::Big),
            "Aprime" | "A'" | "A′" => Ok(Condition::Prime),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown condition `{other}`") }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub grid: Vec<Rat>,
    pub seed: u64,
    pub expand: ExpandConfig,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { grid: default_grid(), seed: 0, expand: ExpandConfig::default() }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyVerdict {
    pub condition: Condition,
    pub holds: bool,
    pub undecided: bool,
    pub chains: Vec<Value>,
    pub witnesses: Vec<Value>,
}

impl FamilyVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition.name(),
            "holds": self.holds,
            "undecided": self.undecided,
            "chains": self.chains,
            "witnesses": self.witnesses,
        })
    }

    pub fn status(&self) -> &'static str {
        if self.undecided {
            "undecided"
        } else if self.holds {
            "holds"
        } else {
            "fails"
        }
    }
}

/// The verdicts for one family, in the order the conditions were requested.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub family: String,
    pub verdicts: Vec<FamilyVerdict>,
}

impl FamilyReport {
    pub fn get(&self, c: Condition) -> Option<&FamilyVerdict> {
        self.verdicts.iter().find(|v| v.condition == c)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "verdicts": self.verdicts.iter().map(FamilyVerdict::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Findings sorted by the precedence that decides a verdict.
#[derive(Default)]
struct Findings {
    exact_failures: Vec<Value>,
    undecided: Vec<Value>,
    sampled_failures: Vec<Value>,
}

impl Findings {
    fn extend(&mut self, o: &Findings) {
        self.exact_failures.extend(o.exact_failures.iter().cloned());
        self.undecided.extend(o.undecided.iter().cloned());
        self.sampled_failures.extend(o.sampled_failures.iter().cloned());
    }

    fn verdict(self, condition: Condition, chains: Vec<Value>) -> FamilyVerdict {
        let Findings { exact_failures, undecided, sampled_failures } = self;
        if !exact_failures.is_empty() {
            let mut witnesses = exact_failures;
            witnesses.extend(sampled_failures);
            return FamilyVerdict { condition, holds: false, undecided: false, chains, witnesses };
        }
        if !undecided.is_empty() {
            let mut witnesses = undecided;
            witnesses.extend(sampled_failures);
            return FamilyVerdict { condition, holds: false, undecided: true, chains, witnesses };
        }
        let holds = sampled_failures.is_empty();
        FamilyVerdict { condition, holds, undecided: false, chains, witnesses: sampled_failures }
    }
}

/// The exact engine's result for one critical point of `f_0`.
enum Exact {
    /// The critical arc has irrational coefficients.
    NotApplicable,
    Outcome(DeformOutcome),
    Error(Error),
}

impl Exact {
    fn name(&self) -> &'static str {
        match self {
            Exact::NotApplicable => "not_applicable",
            Exact::Outcome(DeformOutcome::Success { .. }) => "success",
            Exact::Outcome(DeformOutcome::Failure { .. }) => "failure",
            Exact::Outcome(DeformOutcome::Undecided { .. }) => "undecided",
            Exact::Error(_) => "error",
        }
    }

    fn deformed(&self) -> Option<&PuiseuxSeries<TSeries>> {
        match self {
            Exact::Outcome(DeformOutcome::Success { arc, .. }) => Some(arc),
            _ => None,
        }
    }
}

/// Shared data: the samples, the exact outcomes, and the chains of critical
/// points starting at `t = 0`.
struct Analysis<'a> {
    family: &'a FamilyPoly,
    grid: &'a [Rat],
    samples: Vec<Option<Sample>>,
    zero: usize,
    paths: Vec<Vec<usize>>,
    exact: Vec<Exact>,
    /// `links[k][g]`: the critical point at sample `g` matched to the `k`-th
    /// critical point of `f_0`.
    links: Vec<Vec<Option<usize>>>,
    a: Findings,
}

impl<'a> Analysis<'a> {
    fn base(&self) -> &Sample {
        self.samples[self.zero].as_ref().expect("the t = 0 sample is present")
    }

    fn point(&self, k: usize, g: usize) -> Option<(&Sample, &CriticalPoint)> {
        let s = self.samples[g].as_ref()?;
        Some((s, &s.analysis.critical[self.links[k][g]?]))
    }
}

fn rational_arc(arc: &PuiseuxSeries<Scalar>) -> Option<PuiseuxSeries<Rat>> {
    arc.try_map(|c| c.as_rat().cloned().ok_or(Error::NonInvertible)).ok()
}

fn triple(s: &Sample, cp: &CriticalPoint) -> (usize, Option<Rat>, Option<Rat>) {
    (cp.mult, s.analysis.bars[cp.bar].height.clone(), cp.loj.clone())
}

fn triple_json(t: &(usize, Option<Rat>, Option<Rat>)) -> Value {
    json!({ "m": t.0, "h": fmt_order(&t.1), "L": fmt_order(&t.2) })
}

fn analyze<'a>(family: &'a FamilyPoly, cfg: &'a CheckConfig) -> Result<Analysis<'a>> {
    let grid = &cfg.grid[..];
    let (zero, paths) = grid_paths(grid)?;
    let results = analyze_grid(family, grid, cfg.seed, &cfg.expand);
    let mut a = Findings::default();
    let mut samples = Vec::with_capacity(grid.len());
    for (g, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => samples.push(Some(s)),
            Err(e) if g == zero => return Err(e),
            Err(e) => {
                a.undecided.push(json!({ "kind": "sample_failed", "t": t_json(&grid[g]), "error": e.to_string() }));
                samples.push(None);
            }
        }
    }
    let base = samples[zero].as_ref().expect("present");
    let exact: Vec<Exact> = base
        .analysis
        .critical
        .iter()
        .map(|cp| match rational_arc(&base.critical_arc(cp)) {
            None => Exact::NotApplicable,
            Some(lam) => match deform_on_branch(family, base.analysis.bars[cp.bar].branch, &lam) {
                Ok(o) => Exact::Outcome(o),
                Err(e) => Exact::Error(e),
            },
        })
        .collect();
    for (k, ex) in exact.iter().enumerate() {
        match ex {
            Exact::Outcome(DeformOutcome::Failure { witness, .. }) => {
                let mut w = witness.to_json();
                w["chain"] = json!(k);
                a.exact_failures.push(w);
            }
            Exact::Outcome(DeformOutcome::Undecided { dot, order }) => a.undecided.push(json!({
                "kind": "truncated_t_order",
                "chain": k,
                "dot": [dot.0, crate::rat::fmt_rat(&dot.1)],
                "order": order,
            })),
            Exact::Error(e) => a.undecided.push(json!({ "kind": "exact_engine_error", "chain": k, "error": e.to_string() })),
            _ => {}
        }
    }
    let n = base.analysis.critical.len();
    let mut links = vec![vec![None; grid.len()]; n];
    for (k, l) in links.iter_mut().enumerate() {
        l[zero] = Some(k);
    }
    let mut an = Analysis { family, grid, samples, zero, paths, exact, links, a };
    follow_chains(&mut an);
    Ok(an)
}

/// Matches critical points along each path and records the sampled failures
/// of condition (a).
fn follow_chains(an: &mut Analysis) {
    let base_keys: Vec<ArcKey> = {
        let base = an.base();
        base.analysis.critical.iter().map(|cp| base.key(cp)).collect()
    };
    let base_triples: Vec<_> = {
        let base = an.base();
        base.analysis.critical.iter().map(|cp| triple(base, cp)).collect()
    };
    for path in an.paths.clone() {
        let mut live: Vec<(usize, ArcKey)> = base_keys.iter().cloned().enumerate().collect();
        for &g in &path[1..] {
            let Some(s) = an.samples[g].as_ref() else { break };
            let t = &an.grid[g];
            let refs: Vec<ArcKey> = live
                .iter()
                .map(|(k, key)| match an.exact[*k].deformed() {
                    Some(arc) => {
                        let mut pred = arc_at_t(arc, t);
                        if key.generic {
                            if let Some(h) = &key.height {
                                pred = pred.prefix_below(h);
                            }
                        }
                        ArcKey { arc: pred, ..key.clone() }
                    }
                    None => key.clone(),
                })
                .collect();
            let next: Vec<ArcKey> = s.analysis.critical.iter().map(|cp| s.key(cp)).collect();
            let m = match_critical_points(&refs, &next);
            for &j in &m.unmatched_next {
                an.a.sampled_failures.push(json!({ "kind": "critical_point_appears", "t": t_json(t), "point": next[j].to_json() }));
            }
            for &i in &m.unmatched_prev {
                an.a.sampled_failures.push(json!({ "kind": "critical_point_lost", "t": t_json(t), "chain": live[i].0 }));
            }
            let mut still = Vec::new();
            for &(i, j) in &m.pairs {
                let k = live[i].0;
                an.links[k][g] = Some(j);
                let tr = triple(s, &s.analysis.critical[j]);
                if tr != base_triples[k] {
                    an.a.sampled_failures.push(json!({
                        "kind": "invariant_changed",
                        "t": t_json(t),
                        "chain": k,
                        "from": triple_json(&base_triples[k]),
                        "to": triple_json(&tr),
                    }));
                }
                still.push((k, next[j].clone()));
            }
            live = still;
        }
    }
}

fn chains_json(an: &Analysis) -> Vec<Value> {
    let base = an.base();
    base.analysis
        .critical
        .iter()
        .enumerate()
        .map(|(k, cp)| {
            let samples: Vec<Value> = (0..an.grid.len())
                .map(|g| match an.point(k, g) {
                    Some((s, p)) => {
                        let tr = triple(s, p);
                        json!({
                            "t": t_json(&an.grid[g]),
                            "c": fmt_scalar(&p.coordinate),
                            "m": tr.0,
                            "h": fmt_order(&tr.1),
                            "L": fmt_order(&tr.2),
                            "value": fmt_scalar(&p.value),
                        })
                    }
                    None => json!({ "t": t_json(&an.grid[g]), "matched": false }),
                })
                .collect();
            let ex = &an.exact[k];
            json!({
                "branch": base.analysis.bars[cp.bar].branch.name(),
                "arc": series_json(&base.critical_arc(cp)),
                "generic": cp.generic,
                "exact": ex.name(),
                "deformed_arc": ex.deformed().map(render_arc),
                "polygon": match ex {
                    Exact::Outcome(DeformOutcome::Success { polygon, .. }) | Exact::Outcome(DeformOutcome::Failure { polygon, .. }) => polygon.to_json(),
                    _ => Value::Null,
                },
                "samples": samples,
            })
        })
        .collect()
}

fn condition_a(an: &Analysis) -> FamilyVerdict {
    let mut f = Findings::default();
    f.extend(&an.a);
    f.verdict(Condition::Small, chains_json(an))
}

/// The critical point a chain reaches at sample `g`, with a generic point
/// moved back to the coordinate used at `t = 0`.
fn chain_point(an: &Analysis, k: usize, g: usize) -> Option<(Bar, CriticalPoint)> {
    let (s, p) = an.point(k, g)?;
    let bar = s.analysis.bars[p.bar].clone();
    let mut p = p.clone();
    if p.generic {
        let r0 = an.base().analysis.critical[k].coordinate.clone();
        p.value = bar.eval_initial(&r0);
        p.coordinate = r0;
        p.minpoly = None;
    }
    Some((bar, p))
}

fn condition_big(an: &Analysis) -> FamilyVerdict {
    let mut f = Findings::default();
    f.extend(&an.a);
    let n = an.links.len();
    let mut coincidences = Vec::new();
    for k1 in 0..n {
        for k2 in k1 + 1..n {
            let (Some(p1), Some(p2)) = (chain_point(an, k1, an.zero), chain_point(an, k2, an.zero)) else { continue };
            match critical_values_equal((&p1.0, &p1.1), (&p2.0, &p2.1)) {
                Some(true) => coincidences.push((k1, k2)),
                Some(false) => {}
                None => f.undecided.push(json!({ "kind": "value_comparison_undecided", "t": t_json(&an.grid[an.zero]), "chains": [k1, k2] })),
            }
        }
    }
    for &(k1, k2) in &coincidences {
        for g in 0..an.grid.len() {
            if g == an.zero {
                continue;
            }
            let (Some(p1), Some(p2)) = (chain_point(an, k1, g), chain_point(an, k2, g)) else { continue };
            match critical_values_equal((&p1.0, &p1.1), (&p2.0, &p2.1)) {
                Some(true) => {}
                Some(false) => f.sampled_failures.push(json!({
                    "kind": "value_coincidence_broken",
                    "t": t_json(&an.grid[g]),
                    "chains": [k1, k2],
                    "values": [[fmt_scalar(&p1.1.value), fmt_order(&p1.1.loj)], [fmt_scalar(&p2.1.value), fmt_order(&p2.1.loj)]],
                })),
                None => f.undecided.push(json!({ "kind": "value_comparison_undecided", "t": t_json(&an.grid[g]), "chains": [k1, k2] })),
            }
        }
    }
    let mut chains = chains_json(an);
    for (k, c) in chains.iter_mut().enumerate() {
        let partners: Vec<usize> = coincidences.iter().filter_map(|&(a, b)| if a == k { Some(b) } else if b == k { Some(a) } else { None }).collect();
        c["equal_value_chains"] = json!(partners);
    }
    f.verdict(Condition::Big, chains)
}

fn bar_key(s: &Sample, bar: &Bar) -> ArcKey {
    let mut arc = bar.prefix.clone();
    if !s.shear.is_zero() {
        arc.add_term(num_traits::One::one(), Scalar::Exact(s.shear.clone()));
    }
    ArcKey { branch: bar.branch, generic: false, arc, height: bar.height.clone() }
}

fn bar_triple(b: &Bar) -> (Option<Rat>, usize, Option<Rat>) {
    (b.height.clone(), b.m, b.loj.clone())
}

fn bar_triple_json(t: &(Option<Rat>, usize, Option<Rat>)) -> Value {
    json!({ "h": fmt_order(&t.0), "m": t.1, "L": fmt_order(&t.2) })
}

/// `I^{B_t}_{F}` over Q[t] for the bar through the deformed prefix at height
/// `h`: the dots of `F(λ_t + u y^h, y; t)` on the line of weight `L`.
fn i_family(family: &FamilyPoly, prefix: &PuiseuxSeries<TSeries>, h: &Rat, l: &Rat) -> Result<Vec<TSeries>> {
    let k = family.param_order();
    let g = family.deform().substitute_arc(prefix, None, &k)?;
    let mut out: Vec<TSeries> = Vec::new();
    for ((i, q), c) in g.terms() {
        if q + Rat::from_integer((*i).into()) * h == *l {
            let i = *i as usize;
            if out.len() <= i {
                out.resize(i + 1, TSeries::new(vec![], k));
            }
            out[i] = crate::algebra::Coeff::add(&out[i], c);
        }
    }
    Ok(out)
}

fn render_upoly(c: &[TSeries]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, a)| !a.coeffs().is_empty())
        .map(|(i, a)| match i {
            0 => format!("({})", a.render()),
            1 => format!("({})*u", a.render()),
            _ => format!("({})*u^{i}", a.render()),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn condition_prime(an: &Analysis) -> FamilyVerdict {
    let mut f = Findings::default();
    f.exact_failures.extend(an.a.exact_failures.iter().cloned());
    f.undecided.extend(an.a.undecided.iter().cloned());
    let base = an.base();
    let polar: Vec<usize> = (0..base.analysis.bars.len()).filter(|&b| base.analysis.bars[b].polar).collect();
    // the deformed critical arc of a critical point on each polar bar, if any
    let deformed: Vec<Option<&PuiseuxSeries<TSeries>>> = polar
        .iter()
        .map(|&b| base.analysis.critical.iter().enumerate().filter(|(_, cp)| cp.bar == b).find_map(|(k, _)| an.exact[k].deformed()))
        .collect();
    let mut links: Vec<Vec<Option<usize>>> = vec![vec![None; an.grid.len()]; polar.len()];
    for (i, l) in links.iter_mut().enumerate() {
        l[an.zero] = Some(polar[i]);
    }
    for path in &an.paths {
        let mut live: Vec<(usize, ArcKey)> = polar.iter().enumerate().map(|(i, &b)| (i, bar_key(base, &base.analysis.bars[b]))).collect();
        for &g in &path[1..] {
            let Some(s) = an.samples[g].as_ref() else { break };
            let t = &an.grid[g];
            let refs: Vec<ArcKey> = live
                .iter()
                .map(|(i, key)| match (deformed[*i], &key.height) {
                    (Some(arc), Some(h)) => ArcKey { arc: arc_at_t(arc, t).prefix_below(h), ..key.clone() },
                    (Some(arc), None) => ArcKey { arc: arc_at_t(arc, t), ..key.clone() },
                    (None, _) => key.clone(),
                })
                .collect();
            let cand: Vec<usize> = (0..s.analysis.bars.len()).filter(|&b| s.analysis.bars[b].polar).collect();
            let next: Vec<ArcKey> = cand.iter().map(|&b| bar_key(s, &s.analysis.bars[b])).collect();
            let m = match_critical_points(&refs, &next);
            for &j in &m.unmatched_next {
                f.sampled_failures.push(json!({ "kind": "polar_bar_appears", "t": t_json(t), "bar": s.analysis.bars[cand[j]].to_json() }));
            }
            for &i in &m.unmatched_prev {
                f.sampled_failures.push(json!({ "kind": "polar_bar_lost", "t": t_json(t), "chain": live[i].0 }));
            }
            let mut still = Vec::new();
            for &(i, j) in &m.pairs {
                let c = live[i].0;
                links[c][g] = Some(cand[j]);
                let (t0, t1) = (bar_triple(&base.analysis.bars[polar[c]]), bar_triple(&s.analysis.bars[cand[j]]));
                if t0 != t1 {
                    let changed: Vec<&str> =
                        [("h", t0.0 != t1.0), ("m", t0.1 != t1.1), ("L", t0.2 != t1.2)].iter().filter(|x| x.1).map(|x| x.0).collect();
                    f.sampled_failures.push(json!({
                        "kind": "bar_invariant_changed",
                        "t": t_json(t),
                        "chain": c,
                        "changed": changed,
                        "from": bar_triple_json(&t0),
                        "to": bar_triple_json(&t1),
                    }));
                }
                still.push((c, next[j].clone()));
            }
            live = still;
        }
    }
    let mut chains = Vec::new();
    for (c, &b0) in polar.iter().enumerate() {
        let bar0 = &base.analysis.bars[b0];
        let mut morse = Value::Null;
        if !bar0.singleton() {
            for path in &an.paths {
                let mut lists: Vec<Vec<UCrit>> = Vec::new();
                let mut ts: Vec<&Rat> = Vec::new();
                for &g in path {
                    let (Some(s), Some(b)) = (an.samples[g].as_ref(), links[c][g]) else { break };
                    let bar = &s.analysis.bars[b];
                    let prec = s.analysis.branches.pos.prec.max(s.analysis.branches.neg.prec);
                    match initial_criticals(&bar.initial, &bar.roots, bar.m, prec) {
                        Ok((ic, _)) => lists.push(ic.iter().map(|x| UCrit::from_initial(&bar.initial, x)).collect()),
                        Err(e) => {
                            f.undecided.push(json!({ "kind": "critical_points_undecided", "t": t_json(&an.grid[g]), "chain": c, "error": e.to_string() }));
                            break;
                        }
                    }
                    ts.push(&an.grid[g]);
                }
                match univariate_morse_zero_stable(&lists) {
                    Stability::Stable => {
                        if morse.is_null() {
                            morse = json!("stable");
                        }
                    }
                    Stability::Unstable { at, reason } => {
                        morse = json!("unstable");
                        f.sampled_failures.push(json!({
                            "kind": "morse_unstable",
                            "chain": c,
                            "between": [t_json(ts[at]), t_json(ts[at + 1])],
                            "reason": reason,
                            "critical_points": [
                                lists[at].iter().map(UCrit::to_json).collect::<Vec<_>>(),
                                lists[at + 1].iter().map(UCrit::to_json).collect::<Vec<_>>(),
                            ],
                        }));
                    }
                    Stability::Undecided { at } => {
                        if morse != json!("unstable") {
                            morse = json!("undecided");
                        }
                        f.undecided.push(json!({ "kind": "value_comparison_undecided", "chain": c, "between": [t_json(ts[at]), t_json(ts[at + 1])] }));
                    }
                }
            }
        }
        let family_form = match (deformed[c], &bar0.height, &bar0.loj) {
            (Some(arc), Some(h), Some(l)) => {
                let fam = match bar0.branch {
                    Branch::Pos => Ok(an.family.clone()),
                    Branch::Neg => an.family.negate_y(),
                };
                fam.and_then(|fam| i_family(&fam, &arc.prefix_below(h), h, l)).ok().map(|v| render_upoly(&v))
            }
            _ => None,
        };
        let samples: Vec<Value> = (0..an.grid.len())
            .map(|g| match (an.samples[g].as_ref(), links[c][g]) {
                (Some(s), Some(b)) => {
                    let bar = &s.analysis.bars[b];
                    let mut v = bar_triple_json(&bar_triple(bar));
                    v["t"] = t_json(&an.grid[g]);
                    v["I"] = json!(bar.initial.iter().map(fmt_scalar).collect::<Vec<_>>());
                    v
                }
                _ => json!({ "t": t_json(&an.grid[g]), "matched": false }),
            })
            .collect();
        chains.push(json!({
            "branch": bar0.branch.name(),
            "prefix": series_json(&bar0.prefix),
            "height": fmt_order(&bar0.height),
            "deformed_prefix": match (deformed[c], &bar0.height) {
                (Some(arc), Some(h)) => Some(render_arc(&arc.prefix_below(h))),
                (Some(arc), None) => Some(render_arc(arc)),
                _ => None,
            },
            "I_family": family_form,
            "morse": morse,
            "samples": samples,
        }));
    }
    f.verdict(Condition::Prime, chains)
}

/// Decides the requested conditions on one family. The t-grid samples and the
/// exact deformations are shared between conditions.
pub fn check_family(family: &FamilyPoly, conditions: &[Condition], cfg: &CheckConfig) -> Result<FamilyReport> {
    let an = analyze(family, cfg)?;
    let verdicts = conditions
        .iter()
        .map(|c| match c {
            Condition::Small => condition_a(&an),
            Condition::Big => condition_big(&an),
            Condition::Prime => condition_prime(&an),
        })
        .collect();
    Ok(FamilyReport { family: family.render(), verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expression, Parsed};

    fn family(s: &str, k: usize) -> FamilyPoly {
        match parse_expression(s, k).unwrap() {
            Parsed::Family(f) => f,
            Parsed::Poly(p) => FamilyPoly::constant(&p, k).unwrap(),
        }
    }

    fn statuses(s: &str, k: usize) -> Vec<&'static str> {
        let r = check_family(&family(s, k), &Condition::ALL, &CheckConfig::default()).unwrap();
        r.verdicts.iter().map(|v| v.status()).collect()
    }

    #[test]
    fn cube_family_is_equisingular() {
        assert_eq!(statuses("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4", 4), vec!["holds"; 3]);
    }

    #[test]
    fn cube_family_without_the_middle_term_fails() {
        let r = check_family(&family("x^3+3*t*x^2*y+t^3*y^3-y^4", 4), &[Condition::Small], &CheckConfig::default()).unwrap();
        let v = &r.verdicts[0];
        assert_eq!(v.status(), "fails");
        assert_eq!(v.witnesses[0]["kind"], "dot_below_polygon");
        assert_eq!(v.witnesses[0]["dot"], json!([1, "2"]));
    }

    #[test]
    fn first_t_order_leaves_it_undecided() {
        assert_eq!(statuses("x^3+3*t*x^2*y+t^3*y^3-y^4", 1)[0], "undecided");
    }

    #[test]
    fn quartic_family_fails() {
        assert_eq!(statuses("x^4 - t^2*x^2*y^2 - y^4", 4), vec!["fails"; 3]);
    }

    #[test]
    fn quadratic_family_holds() {
        let r = check_family(&family("x^2+2*x*y-t*y^2", 4), &Condition::ALL, &CheckConfig::default()).unwrap();
        assert_eq!(r.verdicts.iter().map(|v| v.status()).collect::<Vec<_>>(), vec!["holds"; 3]);
        let prime = r.get(Condition::Prime).unwrap();
        assert!(prime.chains[0]["I_family"].as_str().unwrap().contains("u^2"));
    }
}
