//! Morse-and-zero stability of a one-parameter family of univariate
//! polynomials, checked on consecutive samples of the parameter.

use serde_json::{json, Value};

use num_traits::{One, Zero};

use crate::algebra::{QPoly, Scalar};
use crate::arcs::{algebraic_equal, fmt_scalar, horner, ICrit};
use crate::rat::Rat;

/// A real critical point of a univariate polynomial with its value.
#[derive(Clone, Debug)]
pub struct UCrit {
    pub c: Scalar,
    pub mult: usize,
    pub zero: bool,
    pub value: Scalar,
    /// A rational polynomial vanishing at `value`, when one is known.
    pub value_poly: Option<QPoly>,
}

impl UCrit {
    pub fn from_initial(initial: &[Scalar], ic: &ICrit) -> UCrit {
        let value = if ic.zero { Scalar::Exact(Rat::zero()) } else { horner(initial, &ic.c) };
        let exact: Option<Vec<_>> = initial.iter().map(|c| c.as_rat().cloned()).collect();
        let value_poly = if ic.zero {
            Some(QPoly::x())
        } else if let Some(v) = value.as_rat() {
            Some(QPoly::new(vec![-v.clone(), Rat::one()]))
        } else {
            match (exact, &ic.minpoly) {
                (Some(c), Some(m)) => Some(QPoly::new(c).charpoly_mod(m)),
                _ => None,
            }
        };
        UCrit { c: ic.c.clone(), mult: ic.mult, zero: ic.zero, value, value_poly }
    }

    pub fn to_json(&self) -> Value {
        json!({ "c": fmt_scalar(&self.c), "m": self.mult, "zero": self.zero, "value": fmt_scalar(&self.value) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// The change happens between samples `at` and `at + 1`.
    Unstable { at: usize, reason: &'static str },
    Undecided { at: usize },
}

fn mid(s: &Scalar) -> f64 {
    s.to_c64().0
}

/// Greedy pairing by coordinate distance among points of equal multiplicity.
fn pair_up(a: &[UCrit], b: &[UCrit]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            if p.mult == q.mult {
                cand.push(((mid(&p.c) - mid(&q.c)).abs(), i, j));
            }
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut to: Vec<Option<usize>> = vec![None; a.len()];
    let mut taken = vec![false; b.len()];
    for (_, i, j) in cand {
        if to[i].is_none() && !taken[j] {
            to[i] = Some(j);
            taken[j] = true;
        }
    }
    to.into_iter().collect()
}

fn equal(p: &UCrit, q: &UCrit) -> Option<bool> {
    algebraic_equal((&p.value, p.value_poly.as_ref()), (&q.value, q.value_poly.as_ref()))
}

/// Along consecutive samples: the critical points persist with their
/// multiplicities, coincidences between critical values persist, and
/// zero-valued points stay zero-valued.
pub fn univariate_morse_zero_stable(samples: &[Vec<UCrit>]) -> Stability {
    let mut undecided: Option<usize> = None;
    for (at, w) in samples.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let Some(to) = pair_up(a, b) else {
            return Stability::Unstable { at, reason: "critical points appear or merge" };
        };
        if a.iter().enumerate().any(|(i, p)| p.zero != b[to[i]].zero) {
            return Stability::Unstable { at, reason: "a zero critical value moves" };
        }
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                match (equal(&a[i], &a[j]), equal(&b[to[i]], &b[to[j]])) {
                    (Some(x), Some(y)) if x != y => {
                        return Stability::Unstable { at, reason: "a coincidence of critical values changes" };
                    }
                    (Some(_), Some(_)) => {}
                    _ => {
                        undecided.get_or_insert(at);
                    }
                }
            }
        }
    }
    match undecided {
        Some(at) => Stability::Undecided { at },
        None => Stability::Stable,
    }
}
