//! Elliptic curves over Q_p with good reduction: exact group law, formal
//! group and logarithm, sigma-series, a divisor-based model of the Poincaré
//! biextension, and the splitting attached to a Hodge-splitting parameter.

pub mod biext;
pub mod divisor;
pub mod formal;
pub mod sigma;

pub use biext::EBiextPoint;
pub use divisor::{EDivisor, FnProduct};
pub use formal::FormalGroup;
pub use sigma::SigmaFamily;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// A short Weierstrass curve y^2 = x^3 + ax + b over Q_p with integral
/// coefficients and good reduction (val(disc) = 0), p >= 5.
#[derive(Debug, Clone)]
pub struct Curve {
    p: u64,
    prec: i64,
    a: PadicNumber,
    b: PadicNumber,
}

impl Curve {
    pub fn new(p: u64, prec: i64, a: PadicNumber, b: PadicNumber) -> Result<Self> {
        crate::padic::check_prime_config(p)?;
        if p < 5 {
            return Err(Error::SchemaError("curve arithmetic requires p >= 5".into()));
        }
        if a.valuation().unwrap_or(0) < 0 || b.valuation().unwrap_or(0) < 0 {
            return Err(Error::SchemaError("curve coefficients must be integral".into()));
        }
        let curve = Curve { p, prec, a, b };
        let disc = curve.discriminant()?;
        match disc.valuation() {
            Some(0) => Ok(curve),
            _ => Err(Error::SchemaError(
                "curve must have good reduction: val(disc) = 0 required".into(),
            )),
        }
    }

    pub fn from_i64(p: u64, prec: i64, a: i64, b: i64) -> Result<Self> {
        Self::new(
            p,
            prec,
            PadicNumber::from_i64(a, p, prec),
            PadicNumber::from_i64(b, p, prec),
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn a(&self) -> &PadicNumber {
        &self.a
    }

    pub fn b(&self) -> &PadicNumber {
        &self.b
    }

    /// disc = -16 (4a^3 + 27b^2).
    pub fn discriminant(&self) -> Result<PadicNumber> {
        let four_a3 = self.a.pow(3)?.mul(&PadicNumber::from_i64(4, self.p, self.prec))?;
        let tb2 = self.b.pow(2)?.mul(&PadicNumber::from_i64(27, self.p, self.prec))?;
        four_a3.add(&tb2)?.mul(&PadicNumber::from_i64(-16, self.p, self.prec))
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = match y.pow(2) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                let rhs = x
                    .pow(3)
                    .and_then(|x3| x3.add(&self.a.mul(x).unwrap()))
                    .and_then(|s| s.add(&self.b));
                match rhs {
                    Ok(r) => lhs.eq_at_shared_precision(&r),
                    Err(_) => false,
                }
            }
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, pt1: &Point, pt2: &Point) -> Result<Point> {
        match (pt1, pt2) {
            (Point::Infinity, _) => Ok(pt2.clone()),
            (_, Point::Infinity) => Ok(pt1.clone()),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => {
                if x1.eq_at_shared_precision(x2) {
                    // refusing to branch on digit-free comparisons keeps
                    // precision collapse loud instead of corrupting results
                    if x1.precision().min(x2.precision()) < 1 {
                        return Err(Error::PrecisionExhausted(
                            "cannot decide chord vs tangent at this precision".into(),
                        ));
                    }
                    if y1.eq_at_shared_precision(&y2.neg()) {
                        return Ok(Point::Infinity);
                    }
                    // tangent
                    let num = x1
                        .pow(2)?
                        .mul(&PadicNumber::from_i64(3, self.p, self.prec))?
                        .add(&self.a)?;
                    let den = y1.mul(&PadicNumber::from_i64(2, self.p, self.prec))?;
                    let s = num.div(&den)?;
                    self.chord_result(&s, x1, x2, y1)
                } else {
                    let s = y2.sub(y1)?.div(&x2.sub(x1)?)?;
                    self.chord_result(&s, x1, x2, y1)
                }
            }
        }
    }

    fn chord_result(
        &self,
        s: &PadicNumber,
        x1: &PadicNumber,
        x2: &PadicNumber,
        y1: &PadicNumber,
    ) -> Result<Point> {
        let x3 = s.pow(2)?.sub(x1)?.sub(x2)?;
        let y3 = s.mul(&x1.sub(&x3)?)?.sub(y1)?;
        Ok(Point::Affine { x: x3, y: y3 })
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: y.neg() },
        }
    }

    pub fn sub(&self, pt1: &Point, pt2: &Point) -> Result<Point> {
        self.add(pt1, &self.neg(pt2))
    }

    /// n-fold multiple by double-and-add.
    pub fn mul_n(&self, pt: &Point, n: i64) -> Result<Point> {
        if n == 0 {
            return Ok(Point::Infinity);
        }
        let base = if n < 0 { self.neg(pt) } else { pt.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = self.add(&acc, &sq)?;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = self.add(&sq, &sq)?;
        }
        Ok(acc)
    }

    /// Number of points of the reduced curve over F_p, by exhaustive count.
    pub fn reduced_order(&self) -> u64 {
        let p = self.p;
        let a = self.a.residue(1).to_u64().unwrap_or(0) % p;
        let b = self.b.residue(1).to_u64().unwrap_or(0) % p;
        let legendre = |t: u64| -> i64 {
            if t == 0 {
                return 0;
            }
            let e = (p - 1) / 2;
            let r = BigUint::from(t).modpow(&BigUint::from(e), &BigUint::from(p));
            if r == BigUint::from(1u32) {
                1
            } else {
                -1
            }
        };
        let mut count: i64 = 1; // infinity
        for x in 0..p {
            let t = (((x * x) % p * x) % p + (a * x) % p + b) % p;
            count += 1 + legendre(t);
        }
        count as u64
    }

    /// True when the point reduces to the identity of the special fiber,
    /// i.e. lies in the formal group.
    pub fn is_formal(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, .. } => matches!(x.valuation(), Some(v) if v < 0),
        }
    }

    /// n = reduced_order * p^m with the smallest m such that n kills the
    /// reduction of every listed point.
    pub fn kill_reduction(&self, pts: &[Point]) -> Result<i64> {
        let mut n = self.reduced_order() as i64;
        for _ in 0..4 {
            let mut ok = true;
            for pt in pts {
                if !self.is_formal(&self.mul_n(pt, n)?) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(n);
            }
            n *= self.p as i64;
        }
        Err(Error::PrecisionExhausted(
            "could not move points into the formal group".into(),
        ))
    }

    /// Formal parameter t = -x/y of a point in the formal group.
    pub fn t_param(&self, pt: &Point) -> Result<PadicNumber> {
        match pt {
            Point::Infinity => Ok(PadicNumber::zero(self.p, self.prec)),
            Point::Affine { x, y } => {
                if !self.is_formal(pt) {
                    return Err(Error::WrongSupport);
                }
                x.neg().div(y)
            }
        }
    }

    /// Hensel-lift a point with the given x-coordinate, if y^2 = f(x) has a
    /// simple root mod p. Used to build deterministic auxiliary points.
    pub fn lift_x(&self, x: &PadicNumber) -> Option<Point> {
        let fx = x
            .pow(3)
            .ok()?
            .add(&self.a.mul(x).ok()?)
            .ok()?
            .add(&self.b)
            .ok()?;
        let y = sqrt_padic(&fx)?;
        Some(Point::Affine { x: x.clone(), y })
    }
}

/// The logarithm extension to the whole group of points: formal_log(n P)/n
/// with n killing the reduction. Independent of the admissible n.
pub fn lambda_point(fg: &FormalGroup, pt: &Point) -> Result<PadicNumber> {
    let curve = fg.curve();
    let n = curve.kill_reduction(&[pt.clone()])?;
    let formal = curve.mul_n(pt, n)?;
    let l = fg.log_point(&formal)?;
    l.div(&PadicNumber::from_i64(n, curve.prime(), l.precision() + 4))
}

/// Square root by Hensel lifting from a square root mod p (p odd). Requires
/// even valuation; returns the root whose unit digit mod p is smallest.
pub fn sqrt_padic(x: &PadicNumber) -> Option<PadicNumber> {
    if x.is_zero() {
        return Some(x.clone());
    }
    let p = x.prime();
    let v = x.valuation().unwrap();
    if v % 2 != 0 {
        return None;
    }
    let u = x.shift(-v);
    let prec = u.precision();
    let u0 = u.residue(1).to_u64().unwrap();
    // find sqrt mod p by brute force (desk-scale p)
    let mut r0 = None;
    for r in 1..p {
        if (r * r) % p == u0 {
            r0 = Some(r);
            break;
        }
    }
    let r0 = r0?;
    let mut r = PadicNumber::from_i64(r0 as i64, p, prec);
    let two = PadicNumber::from_i64(2, p, prec);
    for _ in 0..(prec as usize + 2) {
        // Newton: r <- (r + u/r) / 2
        let next = r.add(&u.div(&r).ok()?).ok()?.div(&two).ok()?;
        if next.eq_at_shared_precision(&r) {
            r = next;
            break;
        }
        r = next;
    }
    Some(r.shift(v / 2))
}

/// A point of E(Q_p).
#[derive(Debug, Clone)]
pub enum Point {
    Infinity,
    Affine { x: PadicNumber, y: PadicNumber },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn xy(&self) -> Option<(&PadicNumber, &PadicNumber)> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => true,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => {
                x1.eq_at_shared_precision(x2) && y1.eq_at_shared_precision(y2)
            }
            _ => false,
        }
    }
}
