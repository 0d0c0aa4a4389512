//! Newton polygons of F(X, Y) = f(X + λ(Y), Y): vertices, edges, edge lines
//! and the dots lying below them.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{BivarPoly, Coeff, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

/// A monomial position `(x-degree, y-exponent)`.
pub type Dot = (u32, Rat);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tan: Rat,
    /// Every dot on the segment, by decreasing x-degree (both endpoints included).
    pub dots: Vec<Dot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<Dot>,
    pub edges: Vec<Edge>,
    pub vertical: bool,
}

/// The full line through an edge, `i * tan + q = intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLine {
    pub anchor: Dot,
    pub tan: Rat,
    pub intercept: Rat,
}

impl EdgeLine {
    pub fn through(anchor: Dot, tan: Rat) -> Self {
        let intercept = &anchor.1 + Rat::from_integer(anchor.0.into()) * &tan;
        EdgeLine { anchor, tan, intercept }
    }

    pub fn value(&self, d: &Dot) -> Rat {
        &d.1 + Rat::from_integer(d.0.into()) * &self.tan
    }

    pub fn is_below(&self, d: &Dot) -> bool {
        self.value(d) < self.intercept
    }

    pub fn contains(&self, d: &Dot) -> bool {
        self.value(d) == self.intercept
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingClass {
    Nonvanishing,
    VanishesOnArc,
    SingularOnArc,
}

impl VanishingClass {
    pub fn name(&self) -> &'static str {
        match self {
            VanishingClass::Nonvanishing => "nonvanishing",
            VanishingClass::VanishesOnArc => "vanishes_on_arc",
            VanishingClass::SingularOnArc => "singular_on_arc",
        }
    }
}

impl Polygon {
    /// Lower-left hull of a dot set. Fails only on an empty set.
    pub fn from_dots(dots: &[Dot]) -> Result<Polygon> {
        let Some(start) = dots.iter().min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))).cloned() else {
            return Err(Error::ZeroPolynomial);
        };
        let min_i = dots.iter().map(|d| d.0).min().expect("nonempty");
        let mut vertices = vec![start.clone()];
        let mut edges = Vec::new();
        let mut cur = start;
        while cur.0 > min_i {
            let mut best: Option<(Rat, Dot)> = None;
            for d in dots.iter().filter(|d| d.0 < cur.0) {
                let slope = (&d.1 - &cur.1) / Rat::from_integer((cur.0 - d.0).into());
                let better = match &best {
                    None => true,
                    Some((s, b)) => slope < *s || (slope == *s && d.0 < b.0),
                };
                if better {
                    best = Some((slope, d.clone()));
                }
            }
            let (tan, next) = best.expect("a dot left of the current vertex");
            let line = EdgeLine::through(cur.clone(), tan.clone());
            let mut on: Vec<Dot> =
                dots.iter().filter(|d| d.0 <= cur.0 && d.0 >= next.0 && line.contains(d)).cloned().collect();
            on.sort_by(|a, b| b.0.cmp(&a.0));
            on.dedup();
            edges.push(Edge { tan, dots: on });
            vertices.push(next.clone());
            cur = next;
        }
        let vertical = cur.0 >= 1;
        Ok(Polygon { vertices, edges, vertical })
    }

    pub fn last_vertex(&self) -> &Dot {
        self.vertices.last().expect("a polygon has a vertex")
    }

    /// 1-based edge line, as in `E_1 .. E_k`.
    pub fn edge_line(&self, index: usize) -> Result<EdgeLine> {
        if index == 0 || index > self.edges.len() {
            return Err(Error::EdgeIndex { index, edges: self.edges.len() });
        }
        Ok(EdgeLine::through(self.vertices[index - 1].clone(), self.edges[index - 1].tan.clone()))
    }

    pub fn vanishing_class(&self) -> VanishingClass {
        match self.last_vertex().0 {
            0 => VanishingClass::Nonvanishing,
            1 => VanishingClass::VanishesOnArc,
            _ => VanishingClass::SingularOnArc,
        }
    }

    /// The dot lies strictly outside the region bounded by the polygon
    /// (below an edge line, below the first vertex, or left of the vertical edge).
    pub fn is_below(&self, d: &Dot) -> bool {
        let last = self.last_vertex();
        if d.0 < last.0 {
            return true;
        }
        let first = &self.vertices[0];
        if d.0 >= first.0 {
            return d.1 < first.1;
        }
        for (k, e) in self.edges.iter().enumerate() {
            let (a, b) = (&self.vertices[k], &self.vertices[k + 1]);
            if d.0 <= a.0 && d.0 >= b.0 {
                return EdgeLine::through(a.clone(), e.tan.clone()).is_below(d);
            }
        }
        false
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|(m, q)| json!([m, fmt_rat(q)])).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "tan": fmt_rat(&e.tan),
                "dots": e.dots.iter().map(|(i, q)| json!([i, fmt_rat(q)])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "vertical": self.vertical,
        })
    }
}

/// All dots strictly below a line.
pub fn dots_below(dots: &[Dot], line: &EdgeLine) -> Vec<Dot> {
    dots.iter().filter(|d| line.is_below(d)).cloned().collect()
}

/// Polygon of a polynomial whose coefficients may be undecidable balls.
/// Only certainly nonzero dots build the hull; an undecidable dot outside the
/// hull makes the polygon itself undecidable.
pub fn polygon_of<C: Coeff>(f: &BivarPoly<C>) -> Result<Polygon> {
    let mut certain = Vec::new();
    let mut unsure = Vec::new();
    let mut pending: Option<Error> = None;
    for (d, c) in f.terms() {
        match c.zero_test() {
            Ok(false) => certain.push(d.clone()),
            Ok(true) => {}
            Err(e) => {
                unsure.push(d.clone());
                pending.get_or_insert(e);
            }
        }
    }
    if certain.is_empty() {
        return Err(pending.unwrap_or(Error::ZeroPolynomial));
    }
    let p = Polygon::from_dots(&certain)?;
    if let Some(e) = pending {
        if unsure.iter().any(|d| p.is_below(d)) {
            return Err(e);
        }
    }
    Ok(p)
}

/// Newton polygon of `f` relative to the arc `λ`.
pub fn relative_polygon<C: Coeff>(f: &BivarPoly<C>, lambda: &PuiseuxSeries<C>, ctx: &C::Ctx) -> Result<Polygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = f.substitute_arc(lambda, None, ctx)?;
    let p = polygon_of(&g)?;
    if let Some(t) = g.y_trunc() {
        // vertices must be known exactly
        if p.vertices.iter().any(|v| &v.1 >= t) || (p.last_vertex().0 > 0 && !t.is_zero()) {
            return Err(Error::InsufficientDepth { known: t.clone(), needed: p.last_vertex().1.clone() });
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;
    use crate::rat::{int, rat};

    #[test]
    fn cusp() {
        let f = parse_bivar("x^2 - y^3").unwrap();
        let p = relative_polygon(&f, &PuiseuxSeries::zero(), &()).unwrap();
        assert_eq!(p.vertices, vec![(2, int(0)), (0, int(3))]);
        assert_eq!(p.edges[0].tan, rat(3, 2));
        assert_eq!(p.vanishing_class(), VanishingClass::Nonvanishing);
        assert_eq!(p.edge_line(1).unwrap().intercept, int(3));
        assert!(p.edge_line(2).is_err());
    }

    #[test]
    fn along_a_root() {
        let f = parse_bivar("x^2 - y^3").unwrap();
        let lam = PuiseuxSeries::monomial(rat(3, 2), int(1));
        let p = relative_polygon(&f, &lam, &()).unwrap();
        assert_eq!(p.vertices, vec![(2, int(0)), (1, rat(3, 2))]);
        assert_eq!(p.vanishing_class(), VanishingClass::VanishesOnArc);
        assert_eq!(p.edge_line(1).unwrap().intercept, int(3));
    }

    #[test]
    fn collinear_dots_kept() {
        let f = parse_bivar("x^2 + 2*x*y - y^2").unwrap();
        let p = relative_polygon(&f, &PuiseuxSeries::zero(), &()).unwrap();
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].dots, vec![(2, int(0)), (1, int(1)), (0, int(2))]);
    }

    #[test]
    fn below_line() {
        let line = EdgeLine::through((3, int(0)), rat(4, 3));
        let dots = vec![(1, int(2)), (0, int(3)), (0, int(4)), (3, int(0))];
        assert_eq!(dots_below(&dots, &line), vec![(1, int(2)), (0, int(3))]);
        assert!(dots_below(&[], &line).is_empty());
    }
}
