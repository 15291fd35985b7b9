//! Degree-zero divisors on an elliptic curve and rational functions as
//! products of lines, verticals and constants. Functions are evaluated on
//! degree-zero divisors; at the origin the evaluation is normalized by the
//! parameter t = -x/y (leading coefficient), which is what makes c-values
//! canonical and reproducible.

use crate::elliptic::{Curve, Point};
use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// A formal Z-linear combination of points, kept normalized (no zero
/// multiplicities, no repeated points).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EDivisor {
    entries: Vec<(Point, i64)>,
}

impl EDivisor {
    pub fn empty() -> Self {
        EDivisor { entries: Vec::new() }
    }

    pub fn new(entries: Vec<(Point, i64)>) -> Self {
        let mut d = EDivisor::empty();
        for (pt, m) in entries {
            d.push(pt, m);
        }
        d
    }

    /// The representative (P) - (O) of the class of P.
    pub fn point_class(p: &Point) -> Self {
        match p {
            Point::Infinity => EDivisor::empty(),
            _ => EDivisor::new(vec![(p.clone(), 1), (Point::Infinity, -1)]),
        }
    }

    pub fn push(&mut self, pt: Point, m: i64) {
        if m == 0 {
            return;
        }
        for (q, n) in self.entries.iter_mut() {
            if *q == pt {
                *n += m;
                self.entries.retain(|(_, n)| *n != 0);
                return;
            }
        }
        self.entries.push((pt, m));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (pt, m) in &other.entries {
            d.push(pt.clone(), *m);
        }
        d
    }

    pub fn neg(&self) -> Self {
        EDivisor { entries: self.entries.iter().map(|(p, m)| (p.clone(), -m)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn entries(&self) -> &[(Point, i64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, pt: &Point) -> bool {
        self.entries.iter().any(|(q, _)| q == pt)
    }

    pub fn supports_disjoint(&self, other: &Self) -> bool {
        !self.entries.iter().any(|(p, _)| other.contains(p))
    }

    /// Sum of the divisor under the group law: the Albanese image.
    pub fn class_sum(&self, curve: &Curve) -> Result<Point> {
        let mut acc = Point::Infinity;
        for (pt, m) in &self.entries {
            acc = curve.add(&acc, &curve.mul_n(pt, *m)?)?;
        }
        Ok(acc)
    }
}

/// Atoms of the function field we ever need: affine lines, verticals and
/// constants.
#[derive(Debug, Clone)]
pub enum FnAtom {
    /// y - (s x + c)
    Line { s: PadicNumber, c: PadicNumber },
    /// x - x0
    Vertical { x0: PadicNumber },
    Const(PadicNumber),
}

impl FnAtom {
    fn eval(&self, pt: &Point) -> Result<PadicNumber> {
        let (x, y) = pt.xy().ok_or(Error::SupportClash)?;
        match self {
            FnAtom::Line { s, c } => y.sub(&s.mul(x)?)?.sub(c),
            FnAtom::Vertical { x0 } => x.sub(x0),
            FnAtom::Const(c) => Ok(c.clone()),
        }
    }

    /// Leading coefficient of the expansion in t at the origin
    /// (y ~ -t^{-3}, x ~ t^{-2}).
    fn lead_at_origin(&self, p: u64, prec: i64) -> PadicNumber {
        match self {
            FnAtom::Line { .. } => PadicNumber::from_i64(-1, p, prec),
            FnAtom::Vertical { .. } => PadicNumber::one(p, prec),
            FnAtom::Const(c) => c.clone(),
        }
    }
}

/// A rational function represented as a product of atoms, carrying its own
/// divisor exactly.
#[derive(Debug, Clone)]
pub struct FnProduct {
    curve: Curve,
    atoms: Vec<(FnAtom, i64)>,
    divisor: EDivisor,
}

impl FnProduct {
    pub fn one(curve: &Curve) -> Self {
        FnProduct { curve: curve.clone(), atoms: Vec::new(), divisor: EDivisor::empty() }
    }

    pub fn divisor(&self) -> &EDivisor {
        &self.divisor
    }

    fn mul_atom(&mut self, atom: FnAtom, e: i64, div: &EDivisor) {
        if e == 0 {
            return;
        }
        self.atoms.push((atom, e));
        let mut scaled = EDivisor::empty();
        for (pt, m) in div.entries() {
            scaled.push(pt.clone(), m * e);
        }
        self.divisor = self.divisor.add(&scaled);
    }

    pub fn mul(&self, other: &Self, e: i64) -> Self {
        let mut out = self.clone();
        for (atom, k) in &other.atoms {
            out.atoms.push((atom.clone(), k * e));
        }
        let mut scaled = EDivisor::empty();
        for (pt, m) in other.divisor.entries() {
            scaled.push(pt.clone(), m * e);
        }
        out.divisor = out.divisor.add(&scaled);
        out
    }

    /// Multiply by a nonzero constant (divisor unchanged).
    pub fn scale(&self, c: PadicNumber) -> Self {
        let mut out = self.clone();
        out.atoms.push((FnAtom::Const(c), 1));
        out
    }

    /// Order of vanishing at the origin (lines have a triple pole, verticals
    /// a double one).
    pub fn ord_at_origin(&self) -> i64 {
        self.atoms
            .iter()
            .map(|(atom, e)| match atom {
                FnAtom::Line { .. } => -3 * e,
                FnAtom::Vertical { .. } => -2 * e,
                FnAtom::Const(_) => 0,
            })
            .sum()
    }

    /// Normalized value at the origin: product of leading t-coefficients.
    pub fn lead_at_origin(&self) -> Result<PadicNumber> {
        let p = self.curve.prime();
        let prec = self.curve.precision();
        let mut acc = PadicNumber::one(p, prec);
        for (atom, e) in &self.atoms {
            acc = acc.mul(&atom.lead_at_origin(p, prec).pow(*e)?)?;
        }
        Ok(acc)
    }

    /// Evaluate on a degree-zero divisor with support disjoint from the
    /// function's divisor; the origin is allowed via t-normalization with the
    /// tame-symbol sign (-1)^(ord_O(f) * m), which keeps the transport
    /// algebra exactly path-independent.
    pub fn eval_on_divisor(&self, d: &EDivisor) -> Result<PadicNumber> {
        if d.degree() != 0 {
            return Err(Error::NonzeroDegree);
        }
        let p = self.curve.prime();
        let prec = self.curve.precision();
        let mut acc = PadicNumber::one(p, prec);
        for (pt, m) in d.entries() {
            let v = if pt.is_infinity() {
                let lead = self.lead_at_origin()?;
                if self.ord_at_origin() % 2 != 0 && m % 2 != 0 {
                    lead.neg()
                } else {
                    lead
                }
            } else {
                if self.divisor.contains(pt) {
                    return Err(Error::SupportClash);
                }
                let mut val = PadicNumber::one(p, prec);
                for (atom, e) in &self.atoms {
                    val = val.mul(&atom.eval(pt)?.pow(*e)?)?;
                }
                val
            };
            acc = acc.mul(&v.pow(*m)?)?;
        }
        Ok(acc)
    }
}

/// The function with divisor (A) + (B) + (-(A+B)) - 3(O): the line through
/// A and B (tangent when A = B, vertical when B = -A).
fn line_product(curve: &Curve, a: &Point, b: &Point) -> Result<(FnAtom, EDivisor)> {
    let (xa, ya) = a.xy().ok_or(Error::SupportClash)?;
    let sum = curve.add(a, b)?;
    if sum.is_infinity() {
        // vertical through A (and B = -A)
        let mut div = EDivisor::empty();
        div.push(a.clone(), 1);
        div.push(b.clone(), 1);
        div.push(Point::Infinity, -2);
        return Ok((FnAtom::Vertical { x0: xa.clone() }, div));
    }
    let p = curve.prime();
    let prec = curve.precision();
    let s = if a == b {
        let num = xa.pow(2)?.mul(&PadicNumber::from_i64(3, p, prec))?.add(curve.a())?;
        let den = ya.mul(&PadicNumber::from_i64(2, p, prec))?;
        num.div(&den)?
    } else {
        let (xb, yb) = b.xy().ok_or(Error::SupportClash)?;
        yb.sub(ya)?.div(&xb.sub(xa)?)?
    };
    let c = ya.sub(&s.mul(xa)?)?;
    let mut div = EDivisor::empty();
    div.push(a.clone(), 1);
    div.push(b.clone(), 1);
    div.push(curve.neg(&sum), 1);
    div.push(Point::Infinity, -3);
    Ok((FnAtom::Line { s, c }, div))
}

/// Unnormalized Miller step: function with divisor (A)+(B)-(A+B)-(O).
fn miller_pair(curve: &Curve, a: &Point, b: &Point) -> Result<FnProduct> {
    let mut f = FnProduct::one(curve);
    if a.is_infinity() || b.is_infinity() {
        return Ok(f); // divisor is zero
    }
    let sum = curve.add(a, b)?;
    if sum.is_infinity() {
        let (atom, div) = line_product(curve, a, b)?;
        f.mul_atom(atom, 1, &div);
        return Ok(f);
    }
    let (latom, ldiv) = line_product(curve, a, b)?;
    f.mul_atom(latom, 1, &ldiv);
    // divide by the vertical through A+B
    let (xs, _) = sum.xy().unwrap();
    let mut vdiv = EDivisor::empty();
    vdiv.push(sum.clone(), 1);
    vdiv.push(curve.neg(&sum), 1);
    vdiv.push(Point::Infinity, -2);
    f.mul_atom(FnAtom::Vertical { x0: xs.clone() }, -1, &vdiv);
    Ok(f)
}

/// The Miller function with divisor (Q1)+(Q2)-(Q1+Q2)-(O), normalized to
/// leading coefficient 1 in t at the origin.
pub fn miller_g(curve: &Curve, q1: &Point, q2: &Point) -> Result<FnProduct> {
    let f = miller_pair(curve, q1, q2)?;
    let lead = f.lead_at_origin()?;
    Ok(f.scale(lead.inverse()?))
}

/// Build a function with the given principal divisor (degree zero and class
/// sum O) by Miller-style reduction. The result is normalized at the origin.
pub fn func_with_divisor(curve: &Curve, d: &EDivisor) -> Result<FnProduct> {
    if d.degree() != 0 {
        return Err(Error::NotPrincipal);
    }
    // principality of the class is certified by the terminal state of the
    // reduction below, so no up-front class computation is needed
    let dbg = std::env::var("FWD_DEBUG").is_ok();
    let mut work = d.clone();
    let mut f = FnProduct::one(curve);
    loop {
        if dbg {
            let show: Vec<String> = work.entries().iter().map(|(p, m)| match p {
                Point::Infinity => format!("{m}*O"),
                Point::Affine { x, y } => format!("{m}*({},{})@[{},{}]", x.encode(), y.encode(), x.precision(), y.precision()),
            }).collect();
            eprintln!("WORK {}", show.join(" "));
        }
        let pos: Vec<(Point, i64)> = work
            .entries()
            .iter()
            .filter(|(p, m)| !p.is_infinity() && *m > 0)
            .cloned()
            .collect();
        let neg: Vec<(Point, i64)> = work
            .entries()
            .iter()
            .filter(|(p, m)| !p.is_infinity() && *m < 0)
            .cloned()
            .collect();
        let pos_total: i64 = pos.iter().map(|(_, m)| m).sum();
        let neg_total: i64 = -neg.iter().map(|(_, m)| m).sum::<i64>();
        if pos_total >= 2 {
            let a = pos[0].0.clone();
            let b = if pos[0].1 >= 2 { a.clone() } else { pos[1].0.clone() };
            let g = miller_pair(curve, &a, &b)?;
            work = work.sub(g.divisor());
            f = f.mul(&g, 1);
        } else if neg_total >= 2 {
            let a = neg[0].0.clone();
            let b = if neg[0].1 <= -2 { a.clone() } else { neg[1].0.clone() };
            let g = miller_pair(curve, &a, &b)?;
            work = work.add(g.divisor());
            f = f.mul(&g, -1);
        } else if pos_total == 0 && neg_total == 0 {
            // remaining part is a multiple of (O); principality forces zero
            if !work.is_empty() {
                return Err(Error::NotPrincipal);
            }
            break;
        } else {
            // a single positive against a single negative point can only
            // happen for a non-principal divisor
            return Err(Error::NotPrincipal);
        }
    }
    let lead = f.lead_at_origin()?;
    Ok(f.scale(lead.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> Curve {
        Curve::from_i64(5, 14, -1, 1).unwrap()
    }

    fn pt(c: &Curve, x: i64, y: i64) -> Point {
        let p = Point::Affine {
            x: PadicNumber::from_i64(x, c.prime(), c.precision()),
            y: PadicNumber::from_i64(y, c.prime(), c.precision()),
        };
        assert!(c.contains(&p));
        p
    }

    #[test]
    fn miller_with_infinity_is_constant_one() {
        let e = curve();
        let q = pt(&e, 1, 1);
        let g = miller_g(&e, &q, &Point::Infinity).unwrap();
        assert!(g.divisor().is_empty());
        let d = EDivisor::new(vec![(pt(&e, 0, 1), 1), (pt(&e, 0, -1), -1)]);
        let v = g.eval_on_divisor(&d).unwrap();
        assert!(v.eq_at_shared_precision(&PadicNumber::one(5, 14)));
    }

    #[test]
    fn miller_divisor_shape() {
        let e = curve();
        let q1 = pt(&e, 0, 1);
        let q2 = pt(&e, 1, 1);
        let g = miller_g(&e, &q1, &q2).unwrap();
        let mut expect = EDivisor::empty();
        expect.push(q1.clone(), 1);
        expect.push(q2.clone(), 1);
        expect.push(e.add(&q1, &q2).unwrap(), -1);
        expect.push(Point::Infinity, -1);
        assert_eq!(g.divisor().sub(&expect), EDivisor::empty());
        assert!(g.lead_at_origin().unwrap().eq_at_shared_precision(&PadicNumber::one(5, 14)));
    }

    #[test]
    fn constants_cancel_on_degree_zero() {
        let e = curve();
        let q1 = pt(&e, 0, 1);
        let q2 = pt(&e, 1, 1);
        let g = miller_g(&e, &q1, &q2).unwrap();
        let scaled = g.scale(PadicNumber::from_i64(7, 5, 14));
        let d = EDivisor::new(vec![(pt(&e, 3, 5), 1), (pt(&e, 3, -5), -1)]);
        let v1 = g.eval_on_divisor(&d).unwrap();
        let v2 = scaled.eval_on_divisor(&d).unwrap();
        assert!(v1.eq_at_shared_precision(&v2));
    }

    #[test]
    fn func_with_divisor_recovers_principal() {
        let e = curve();
        let a = pt(&e, 0, 1);
        let b = pt(&e, 1, 1);
        let c = e.add(&a, &b).unwrap();
        // (A) + (B) - (A+B) - (O) is principal
        let mut d = EDivisor::empty();
        d.push(a.clone(), 1);
        d.push(b.clone(), 1);
        d.push(c.clone(), -1);
        d.push(Point::Infinity, -1);
        let f = func_with_divisor(&e, &d).unwrap();
        assert_eq!(f.divisor().sub(&d), EDivisor::empty());
    }

    #[test]
    fn non_principal_rejected() {
        let e = curve();
        let a = pt(&e, 0, 1);
        let d = EDivisor::new(vec![(a, 1), (Point::Infinity, -1)]);
        assert!(matches!(func_with_divisor(&e, &d), Err(Error::NotPrincipal)));
    }

    #[test]
    fn weil_reciprocity_with_disjoint_supports() {
        // f(div g) = g(div f) for two principal functions whose divisors are
        // genuinely disjoint (no shared origin, so no normalization enters).
        let e = curve();
        let pool = [pt(&e, 0, 1), pt(&e, 1, 1), pt(&e, 3, 5), pt(&e, 5, 11), pt(&e, -1, 1)];
        let principal_at = |q: &Point, r: &Point| {
            // (Q+R) + (Q-R) - 2(Q): degree 0 and sums to O
            let mut d = EDivisor::empty();
            d.push(e.add(q, r).unwrap(), 1);
            d.push(e.sub(q, r).unwrap(), 1);
            d.push(q.clone(), -2);
            d
        };
        let mut found = None;
        'outer: for q1 in &pool {
            for r1 in &pool {
                for q2 in &pool {
                    for r2 in &pool {
                        let d1 = principal_at(q1, r1);
                        let d2 = principal_at(q2, r2);
                        if d1.entries().len() == 3
                            && d2.entries().len() == 3
                            && d1.supports_disjoint(&d2)
                        {
                            found = Some((d1, d2));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let (d1, d2) = found.expect("a disjoint configuration exists in the pool");
        let f = func_with_divisor(&e, &d1).unwrap();
        let g = func_with_divisor(&e, &d2).unwrap();
        let fg = f.eval_on_divisor(g.divisor()).unwrap();
        let gf = g.eval_on_divisor(f.divisor()).unwrap();
        assert!(fg.eq_at_shared_precision(&gf), "{fg} vs {gf}");
    }
}
