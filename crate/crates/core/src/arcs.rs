//! Arc calculus on the real half-branches: f-heights, f-arcs, bars with their
//! initial forms, B-roots, critical points of the value map and the complete
//! initial form.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{contact_order, BivarPoly, CBall, Coeff, Order, PuiseuxSeries, QPoly, Scalar};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, rat, to_f64, Rat};
use crate::roots::expand::{puiseux_roots, puiseux_roots_neg, ExpandConfig, Expansion, Node, NodeEdge, Root};
use crate::roots::isolate::{roots_exact, roots_simple};

/// Generic coordinates must stay this far from every avoided value.
pub const GENERIC_GAP: (i64, i64) = (1, 64);
/// Length of the seeded candidate list for generic coordinates.
pub const GENERIC_CANDIDATES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Pos,
    Neg,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Pos => "pos",
            Branch::Neg => "neg",
        }
    }
}

/// Renders a coefficient: `p/q` when exact, otherwise the midpoint in
/// scientific notation (with an imaginary part when nonzero).
pub fn fmt_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Exact(r) => fmt_rat(r),
        Scalar::Ball(b) => {
            let (re, im) = b.to_c64();
            if b.im.is_zero() {
                format!("{re:.15e}")
            } else {
                format!("{re:.15e}{im:+.15e}i")
            }
        }
    }
}

pub fn fmt_order(o: &Option<Rat>) -> String {
    match o {
        Some(r) => fmt_rat(r),
        None => "inf".into(),
    }
}

/// Series as a list `[exponent, re, im, radius]`, all strings.
pub fn series_json(s: &PuiseuxSeries<Scalar>) -> Value {
    Value::Array(
        s.terms()
            .map(|(e, c)| {
                let (re, im, rad) = c.parts();
                if c.is_exact() {
                    json!([fmt_rat(e), fmt_rat(&re), "0", "0"])
                } else {
                    json!([fmt_rat(e), format!("{:.15e}", to_f64(&re)), format!("{:.15e}", to_f64(&im)), format!("{:.3e}", to_f64(&rad))])
                }
            })
            .collect(),
    )
}

/// An f-truncated arc: prefix below the f-height together with the
/// coordinate at the height.
#[derive(Clone, Debug)]
pub struct FArc {
    pub branch: Branch,
    pub prefix: PuiseuxSeries<Scalar>,
    /// `None` is infinite height: the arc lies on the curve.
    pub height: Option<Rat>,
    pub coordinate: Option<Scalar>,
}

/// `h_f(λ)`: the largest contact order of `λ` with a root of `f`.
pub fn f_height(lambda: &PuiseuxSeries<Scalar>, roots: &Expansion) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    for r in &roots.roots {
        match contact_order(lambda, &r.series)? {
            Order::Infinite => return Ok(None),
            Order::Finite(c) => {
                if let Some(t) = r.series.trunc() {
                    if &c >= t {
                        return Err(Error::InsufficientDepth { known: t.clone(), needed: c });
                    }
                }
                if best.as_ref().is_none_or(|b| &c > b) {
                    best = Some(c);
                }
            }
        }
    }
    best.map(Some).ok_or(Error::ZeroPolynomial)
}

/// The f-arc of `λ`.
pub fn f_arc(lambda: &PuiseuxSeries<Scalar>, roots: &Expansion, branch: Branch) -> Result<FArc> {
    let height = f_height(lambda, roots)?;
    Ok(match &height {
        None => FArc { branch, prefix: lambda.clone(), height: None, coordinate: None },
        Some(h) => FArc {
            branch,
            prefix: lambda.prefix_below(h),
            height: height.clone(),
            coordinate: Some(lambda.coeff(h).cloned().unwrap_or(Scalar::Exact(Rat::zero()))),
        },
    })
}

/// `I^B_f` and `L_f(B)` for the bar through `λ_B` at height `h`: the lowest
/// weighted part of `f(λ_B + u y^h, y)`.
pub fn initial_form(f: &BivarPoly<Scalar>, prefix: &PuiseuxSeries<Scalar>, h: &Rat, prec: u32) -> Result<(Vec<Scalar>, Rat)> {
    let g = f.substitute_arc(prefix, None, &prec)?;
    let weight = |i: u32, q: &Rat| q + Rat::from_integer(i.into()) * h;
    let mut low: Option<Rat> = None;
    for ((i, q), c) in g.terms() {
        if let Ok(false) = c.zero_test() {
            let w = weight(*i, q);
            if low.as_ref().is_none_or(|l| &w < l) {
                low = Some(w);
            }
        }
    }
    let low = low.ok_or(Error::ZeroPolynomial)?;
    let mut coeffs: Vec<Scalar> = Vec::new();
    for ((i, q), c) in g.terms() {
        let w = weight(*i, q);
        if w < low {
            return Err(Error::UndecidableZero { prec });
        }
        if w == low {
            let i = *i as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Scalar::Exact(Rat::zero()));
            }
            coeffs[i] = coeffs[i].add(c);
        }
    }
    Ok((coeffs, low))
}

/// Coordinates `z` of roots `λ_B + z y^h + …` of a polynomial, given its
/// roots on the same branch; coincident coordinates are merged.
pub fn b_roots(prefix: &PuiseuxSeries<Scalar>, h: &Rat, roots: &Expansion) -> Result<Vec<(Scalar, usize)>> {
    let mut out: Vec<(Scalar, usize)> = Vec::new();
    for r in &roots.roots {
        if let Some(t) = r.series.trunc() {
            if t <= h {
                return Err(Error::InsufficientDepth { known: t.clone(), needed: h.clone() });
            }
        }
        let head = r.series.prefix_below(h);
        if !same_prefix(&head, prefix) {
            continue;
        }
        let z = r.series.coeff(h).cloned().unwrap_or(Scalar::Exact(Rat::zero()));
        match out.iter_mut().find(|(w, _)| w.may_equal(&z)) {
            Some(slot) => slot.1 += r.mult,
            None => out.push((z, r.mult)),
        }
    }
    Ok(out)
}

fn same_prefix(a: &PuiseuxSeries<Scalar>, b: &PuiseuxSeries<Scalar>) -> bool {
    let ea: Vec<&Rat> = a.terms().filter(|(_, c)| !c.is_structural_zero()).map(|(e, _)| e).collect();
    let eb: Vec<&Rat> = b.terms().filter(|(_, c)| !c.is_structural_zero()).map(|(e, _)| e).collect();
    ea == eb && ea.iter().all(|e| a.coeff(e).expect("present").may_equal(b.coeff(e).expect("present")))
}

/// A bar of `f` with its initial form. Singleton bars (infinite height) are
/// real roots of `f`.
#[derive(Clone, Debug)]
pub struct Bar {
    pub branch: Branch,
    pub prefix: PuiseuxSeries<Scalar>,
    pub height: Option<Rat>,
    /// `I^B_f`, constant first; empty (the zero polynomial) for singletons.
    pub initial: Vec<Scalar>,
    pub loj: Option<Rat>,
    pub m: usize,
    pub polar: bool,
    /// B-roots of `f`, including `0` for roots continuing past the height.
    pub roots: Vec<(Scalar, usize)>,
}

impl Bar {
    pub fn singleton(&self) -> bool {
        self.height.is_none()
    }

    /// `I^B_f(u)`.
    pub fn eval_initial(&self, u: &Scalar) -> Scalar {
        horner(&self.initial, u)
    }

    pub fn initial_exact(&self) -> Option<QPoly> {
        self.initial.iter().map(|c| c.as_rat().cloned()).collect::<Option<Vec<_>>>().map(QPoly::new)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "branch": self.branch.name(),
            "prefix": series_json(&self.prefix),
            "height": fmt_order(&self.height),
            "I": self.initial.iter().map(fmt_scalar).collect::<Vec<_>>(),
            "L": fmt_order(&self.loj),
            "m": self.m,
            "polar": self.polar,
        })
    }
}

pub(crate) fn horner(c: &[Scalar], u: &Scalar) -> Scalar {
    c.iter().rev().fold(Scalar::Exact(Rat::zero()), |acc, a| acc.mul(u).add(a))
}

fn bar_from_edge(branch: Branch, node: &Node, e: &NodeEdge) -> Bar {
    let mut roots: Vec<(Scalar, usize)> = e.roots.iter().map(|r| (r.zeta.clone(), r.mult)).collect();
    if e.bottom > 0 {
        roots.push((Scalar::Exact(Rat::zero()), e.bottom as usize));
    }
    let distinct = roots.len();
    Bar {
        branch,
        prefix: node.prefix.clone(),
        height: Some(e.tan.clone()),
        initial: e.initial.clone(),
        loj: Some(e.intercept.clone()),
        m: e.top as usize,
        polar: distinct >= 2,
        roots,
    }
}

fn bar_from_root(branch: Branch, r: &Root) -> Bar {
    Bar {
        branch,
        prefix: r.series.clone(),
        height: None,
        initial: Vec::new(),
        loj: None,
        m: r.mult,
        polar: r.mult >= 2,
        roots: Vec::new(),
    }
}

/// Lexicographic key of a prefix by exponent then midpoint.
fn prefix_key(s: &PuiseuxSeries<Scalar>) -> Vec<(Rat, Rat, Rat)> {
    s.terms()
        .map(|(e, c)| {
            let (re, im, _) = c.parts();
            (e.clone(), re, im)
        })
        .collect()
}

/// Bars of one half-branch: every edge at a node with real prefix, and every
/// real root.
pub fn bars_of(branch: Branch, e: &Expansion) -> Vec<Bar> {
    let mut out = Vec::new();
    for n in e.nodes.iter().filter(|n| n.real) {
        for edge in &n.edges {
            out.push(bar_from_edge(branch, n, edge));
        }
    }
    for r in e.roots.iter().filter(|r| r.real) {
        out.push(bar_from_root(branch, r));
    }
    out.sort_by(|a, b| {
        prefix_key(&a.prefix)
            .cmp(&prefix_key(&b.prefix))
            .then_with(|| match (&a.height, &b.height) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            })
    });
    out
}

/// Both half-branch expansions of `f`.
#[derive(Clone, Debug)]
pub struct Branches {
    pub pos: Expansion,
    pub neg: Expansion,
}

impl Branches {
    pub fn compute(f: &BivarPoly<Rat>, cfg: &ExpandConfig) -> Result<Branches> {
        Ok(Branches { pos: puiseux_roots(f, cfg)?, neg: puiseux_roots_neg(f, cfg)? })
    }

    pub fn get(&self, b: Branch) -> &Expansion {
        match b {
            Branch::Pos => &self.pos,
            Branch::Neg => &self.neg,
        }
    }
}

/// Bars containing a B-root of `f` or of `f_x`, positive branch first.
pub fn enumerate_bars(f: &BivarPoly<Rat>, cfg: &ExpandConfig) -> Result<Vec<Bar>> {
    let br = Branches::compute(f, cfg)?;
    Ok(bars_from_branches(&br))
}

pub fn bars_from_branches(br: &Branches) -> Vec<Bar> {
    let mut bars = bars_of(Branch::Pos, &br.pos);
    bars.extend(bars_of(Branch::Neg, &br.neg));
    bars
}

/// The seeded low-height candidate list: `p/q` with `1 <= q <= 6`,
/// `|p| <= 3q`.
pub fn generic_candidates(seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..GENERIC_CANDIDATES)
        .map(|_| {
            let q = rng.gen_range(1i64..=6);
            let p = rng.gen_range(-3 * q..=3 * q);
            rat(p, q)
        })
        .collect()
}

/// First candidate farther than 1/64 from everything in `avoid`.
pub fn generic_coordinate(avoid: &[Scalar], seed: u64) -> Result<Rat> {
    pick_generic(&generic_candidates(seed), avoid)
}

pub fn pick_generic(candidates: &[Rat], avoid: &[Scalar]) -> Result<Rat> {
    let gap = rat(GENERIC_GAP.0, GENERIC_GAP.1);
    candidates
        .iter()
        .find(|c| {
            avoid.iter().all(|a| {
                let (re, im, rad) = a.parts();
                let d = (*c - re).abs().max(im.abs());
                d - rad > gap
            })
        })
        .cloned()
        .ok_or(Error::CandidatesExhausted)
}

/// A critical point of the value map on a bar.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    /// Index into the bar list it was computed from.
    pub bar: usize,
    pub coordinate: Scalar,
    pub mult: usize,
    pub generic: bool,
    /// `I^B_f(c)`; zero at a singleton.
    pub value: Scalar,
    /// `L_f(B)`; `None` at a singleton.
    pub loj: Option<Rat>,
    /// Squarefree rational polynomial vanishing at the coordinate, when the
    /// initial form is exact.
    pub minpoly: Option<QPoly>,
}

impl CriticalPoint {
    pub fn to_json(&self, bars: &[Bar]) -> Value {
        let b = &bars[self.bar];
        json!({
            "branch": b.branch.name(),
            "prefix": series_json(&b.prefix),
            "height": fmt_order(&b.height),
            "c": fmt_scalar(&self.coordinate),
            "m": self.mult,
            "generic": self.generic,
            "value": [fmt_scalar(&self.value), fmt_order(&self.loj)],
        })
    }
}

/// A real critical point of an initial form `I`.
#[derive(Clone, Debug)]
pub struct ICrit {
    pub c: Scalar,
    /// Multiplicity as a root of `I'`.
    pub mult: usize,
    /// `I(c) = 0`, i.e. `c` is a multiple root of `I`.
    pub zero: bool,
    /// A squarefree rational polynomial vanishing at `c`, when `I` is exact.
    pub minpoly: Option<QPoly>,
}

/// Real critical points of `I = a ∏ (u - z_i)^{n_i}` (coefficients `initial`,
/// roots `roots`, degree `m`). The flag is set when `I'` has roots but none
/// of them is real.
pub fn initial_criticals(initial: &[Scalar], roots: &[(Scalar, usize)], m: usize, prec: u32) -> Result<(Vec<ICrit>, bool)> {
    let exact: Option<Vec<Rat>> = initial.iter().map(|c| c.as_rat().cloned()).collect();
    if let Some(c) = exact {
        let p = QPoly::new(c);
        let d = p.derivative();
        if d.degree().unwrap_or(0) == 0 {
            return Ok((vec![], false));
        }
        let g = p.gcd(&d);
        let h = d.divrem(&g).0;
        let mut out = Vec::new();
        if g.degree().unwrap_or(0) > 0 {
            let sg = sqfree_part(&g);
            for r in roots_exact(&g, prec)?.into_iter().filter(|r| r.real) {
                out.push(ICrit { c: r.z, mult: r.mult, zero: true, minpoly: Some(sg.clone()) });
            }
        }
        if h.degree().unwrap_or(0) > 0 {
            let sh = sqfree_part(&h);
            for r in roots_exact(&h, prec)?.into_iter().filter(|r| r.real) {
                out.push(ICrit { c: r.z, mult: r.mult, zero: false, minpoly: Some(sh.clone()) });
            }
        }
        sort_crit(&mut out);
        let generic = out.is_empty();
        return Ok((out, generic));
    }
    if m < 2 {
        return Ok((vec![], false));
    }
    let mut out: Vec<ICrit> = roots
        .iter()
        .filter(|(z, n)| *n >= 2 && z.is_real())
        .map(|(z, n)| ICrit { c: z.clone(), mult: n - 1, zero: true, minpoly: None })
        .collect();
    // off the roots, I'/I = Σ n_i / (u - z_i) vanishes where Σ n_i ∏_{j != i} (u - z_j) does
    let mut p: Vec<Scalar> = vec![Scalar::Exact(Rat::zero())];
    for (i, (_, ni)) in roots.iter().enumerate() {
        let mut term = vec![Scalar::Exact(Rat::from_integer((*ni).into()))];
        for (j, (zj, _)) in roots.iter().enumerate() {
            if j != i {
                term = poly_mul_linear(&term, zj);
            }
        }
        p = poly_add(&p, &term);
    }
    if p.len() >= 2 {
        for r in roots_simple(&p, prec, true)?.into_iter().filter(|r| r.real) {
            out.push(ICrit { c: r.z, mult: 1, zero: false, minpoly: None });
        }
    }
    sort_crit(&mut out);
    let generic = out.is_empty();
    Ok((out, generic))
}

fn sqfree_part(p: &QPoly) -> QPoly {
    p.divrem(&p.gcd(&p.derivative())).0.monic()
}

fn sort_crit(v: &mut [ICrit]) {
    v.sort_by(|a, b| a.c.parts().0.cmp(&b.c.parts().0));
}

fn poly_mul_linear(p: &[Scalar], z: &Scalar) -> Vec<Scalar> {
    let mut out = vec![Scalar::Exact(Rat::zero()); p.len() + 1];
    for (k, a) in p.iter().enumerate() {
        out[k + 1] = out[k + 1].add(a);
        out[k] = out[k].sub(&a.mul(z));
    }
    out
}

fn poly_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or(Scalar::Exact(Rat::zero()));
            let y = b.get(k).cloned().unwrap_or(Scalar::Exact(Rat::zero()));
            x.add(&y)
        })
        .collect()
}

/// Critical points on a list of bars. Generic coordinates are drawn from one
/// seeded list in bar order, each avoiding the ones issued before it.
pub fn critical_points_of(bars: &[Bar], seed: u64, prec: u32) -> Result<Vec<CriticalPoint>> {
    let candidates = generic_candidates(seed);
    let mut issued: Vec<Scalar> = Vec::new();
    let mut out = Vec::new();
    for (k, bar) in bars.iter().enumerate() {
        if bar.singleton() {
            if bar.m >= 2 {
                out.push(CriticalPoint {
                    bar: k,
                    coordinate: Scalar::Exact(Rat::zero()),
                    mult: bar.m - 1,
                    generic: false,
                    value: Scalar::Exact(Rat::zero()),
                    loj: None,
                    minpoly: None,
                });
            }
            continue;
        }
        let (crit, generic) = initial_criticals(&bar.initial, &bar.roots, bar.m, prec)?;
        for ic in crit.into_iter().filter(|ic| !ic.zero) {
            out.push(CriticalPoint {
                bar: k,
                value: bar.eval_initial(&ic.c),
                coordinate: ic.c,
                mult: ic.mult,
                generic: false,
                loj: bar.loj.clone(),
                minpoly: ic.minpoly,
            });
        }
        if generic {
            let mut avoid: Vec<Scalar> = bar.roots.iter().filter(|(z, _)| z.is_real()).map(|(z, _)| z.clone()).collect();
            avoid.extend(issued.iter().cloned());
            let r = pick_generic(&candidates, &avoid)?;
            issued.push(Scalar::Exact(r.clone()));
            let r = Scalar::Exact(r);
            out.push(CriticalPoint {
                bar: k,
                value: bar.eval_initial(&r),
                minpoly: None,
                coordinate: r,
                mult: 1,
                generic: true,
                loj: bar.loj.clone(),
            });
        }
    }
    Ok(out)
}

/// Bars, critical points and the complete initial form of one polynomial.
#[derive(Clone, Debug)]
pub struct BarAnalysis {
    pub branches: Branches,
    pub bars: Vec<Bar>,
    pub critical: Vec<CriticalPoint>,
}

impl BarAnalysis {
    pub fn compute(f: &BivarPoly<Rat>, seed: u64, cfg: &ExpandConfig) -> Result<BarAnalysis> {
        let branches = Branches::compute(f, cfg)?;
        let bars = bars_from_branches(&branches);
        let prec = branches.pos.prec.max(branches.neg.prec);
        let critical = critical_points_of(&bars, seed, prec)?;
        Ok(BarAnalysis { branches, bars, critical })
    }

    /// Polar bars with their initial forms; each carries a critical point.
    pub fn complete_initial_form(&self) -> Result<Vec<&Bar>> {
        let polar: Vec<(usize, &Bar)> = self.bars.iter().enumerate().filter(|(_, b)| b.polar).collect();
        for (k, _) in &polar {
            if !self.critical.iter().any(|c| c.bar == *k) {
                return Err(Error::Precondition("a polar bar without a critical point".into()));
            }
        }
        Ok(polar.into_iter().map(|(_, b)| b).collect())
    }

    pub fn critical_on(&self, branch: Branch) -> impl Iterator<Item = &CriticalPoint> {
        self.critical.iter().filter(move |c| self.bars[c.bar].branch == branch)
    }
}

pub fn critical_points(f: &BivarPoly<Rat>, seed: u64) -> Result<Vec<CriticalPoint>> {
    Ok(BarAnalysis::compute(f, seed, &ExpandConfig::default())?.critical)
}

/// Two values of the value map are equal: exact comparison when both are
/// rational, `None` when balls overlap without being identical.
pub fn values_equal(a: &(Scalar, Option<Rat>), b: &(Scalar, Option<Rat>)) -> Option<bool> {
    if a.1 != b.1 {
        return Some(false);
    }
    match (&a.0, &b.0) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Some(x == y),
        (x, y) => {
            let p = x.ctx().max(y.ctx());
            let (bx, by): (CBall, CBall) = (x.to_ball(p), y.to_ball(p));
            if !bx.overlaps(&by) {
                Some(false)
            } else if bx.tag.is_some() && bx.tag == by.tag {
                Some(true)
            } else {
                None
            }
        }
    }
}

/// Equality of the values `(I^B_f(c), L_f(B))` at two critical points, each
/// given with the bar it lies on.
pub fn critical_values_equal(a: (&Bar, &CriticalPoint), b: (&Bar, &CriticalPoint)) -> Option<bool> {
    if a.1.loj != b.1.loj {
        return Some(false);
    }
    let (pa, pb) = (value_poly(a), value_poly(b));
    algebraic_equal((&a.1.value, pa.as_ref()), (&b.1.value, pb.as_ref()))
}

/// Equality of two numbers given as balls, each optionally with a rational
/// polynomial vanishing at it. Irrational values are separated through the
/// isolated roots of the product polynomial; `None` when the balls cannot
/// decide.
pub fn algebraic_equal(a: (&Scalar, Option<&QPoly>), b: (&Scalar, Option<&QPoly>)) -> Option<bool> {
    if let Some(r) = values_equal(&(a.0.clone(), None), &(b.0.clone(), None)) {
        return Some(r);
    }
    let w = a.1?.mul(b.1?);
    let prec = a.0.ctx().max(b.0.ctx());
    let disks = roots_exact(&w, prec).ok()?;
    let locate = |v: &Scalar| -> Option<usize> {
        let ball = v.to_ball(prec);
        let hits: Vec<usize> = disks.iter().enumerate().filter(|(_, d)| d.ball(prec).overlaps(&ball)).map(|(k, _)| k).collect();
        match hits[..] {
            [k] => Some(k),
            _ => None,
        }
    };
    Some(locate(a.0)? == locate(b.0)?)
}

/// A rational polynomial vanishing at the value of a critical point.
pub fn value_poly((bar, cp): (&Bar, &CriticalPoint)) -> Option<QPoly> {
    if let Scalar::Exact(v) = &cp.value {
        return Some(QPoly::new(vec![-v.clone(), Rat::one()]));
    }
    Some(bar.initial_exact()?.charpoly_mod(cp.minpoly.as_ref()?))
}

/// Coefficient-wise check of `I = a ∏ (u - z_i)^{m_i}`; returns the largest
/// deviation bound (zero when exact).
pub fn factorization_defect(bar: &Bar) -> Option<Rat> {
    let top = bar.initial.last()?.clone();
    let mut prod = vec![top];
    for (z, n) in &bar.roots {
        for _ in 0..*n {
            prod = poly_mul_linear(&prod, z);
        }
    }
    if prod.len() != bar.initial.len() {
        return Some(Rat::from_integer(1000.into()));
    }
    let mut worst = Rat::zero();
    for (a, b) in prod.iter().zip(&bar.initial) {
        let d = a.sub(b);
        let (re, im, rad) = d.parts();
        let bound = re.abs().max(im.abs()) + rad;
        if bound > worst {
            worst = bound;
        }
    }
    Some(worst)
}

/// `λ + u y^h` as an arc.
pub fn arc_at(prefix: &PuiseuxSeries<Scalar>, h: &Rat, u: &Scalar) -> PuiseuxSeries<Scalar> {
    let mut s = prefix.prefix_below(h);
    if !u.is_structural_zero() {
        s.add_term(h.clone(), u.clone());
    }
    s
}

/// The polynomial `u`, for convenience in callers building bars by hand.
pub fn unit_series() -> PuiseuxSeries<Scalar> {
    PuiseuxSeries::monomial(Rat::one(), Scalar::Exact(Rat::one()))
}
