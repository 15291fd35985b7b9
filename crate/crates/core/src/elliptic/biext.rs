//! The Poincaré biextension of an elliptic curve with itself, modeled on
//! pairs of degree-zero divisors with a scalar, together with the splitting
//! attached to a Hodge-splitting parameter gamma.
//!
//! A point is a class [c; D_P, D_Q]; changing D_P by div(f) multiplies c by
//! f(D_Q) (and symmetrically). The two partial laws fix one divisor class
//! and add the other; scalar corrections are Miller-function evaluations.

use crate::elliptic::divisor::{func_with_divisor, EDivisor};
use crate::elliptic::formal::FormalGroup;
use crate::elliptic::sigma::SigmaFamily;
use crate::elliptic::{Curve, Point};
use crate::error::{Error, Result};
use crate::padic::{LogBranch, PadicNumber};

#[derive(Debug, Clone)]
pub struct EBiextPoint {
    c: PadicNumber,
    dp: EDivisor,
    dq: EDivisor,
    /// cached divisor classes; maintained through the laws so that class
    /// computations never re-walk long divisor chains
    p_class: Point,
    q_class: Point,
}

impl EBiextPoint {
    pub fn new(curve: &Curve, c: PadicNumber, dp: EDivisor, dq: EDivisor) -> Result<Self> {
        let p_class = dp.class_sum(curve)?;
        let q_class = dq.class_sum(curve)?;
        Self::with_classes(c, dp, dq, p_class, q_class)
    }

    fn with_classes(
        c: PadicNumber,
        dp: EDivisor,
        dq: EDivisor,
        p_class: Point,
        q_class: Point,
    ) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroComponent);
        }
        if dp.degree() != 0 || dq.degree() != 0 {
            return Err(Error::NonzeroDegree);
        }
        if !dp.supports_disjoint(&dq) {
            return Err(Error::SupportClash);
        }
        Ok(EBiextPoint { c, dp, dq, p_class, q_class })
    }

    /// The canonical point above (P, Q) with scalar c, relative to the
    /// representatives (P)-(O) and (O)-(-Q). At the antidiagonal Q = -P those
    /// representatives share their full support and no transport exists; the
    /// convention there is c taken relative to ((P+W)-(W), (O)-(P)) for the
    /// first usable auxiliary point W.
    pub fn canonical(curve: &Curve, p: &Point, q: &Point, c: PadicNumber) -> Result<Self> {
        if q.is_infinity() {
            return Self::with_classes(
                c,
                EDivisor::point_class(p),
                EDivisor::empty(),
                p.clone(),
                Point::Infinity,
            );
        }
        let neg_q = curve.neg(q);
        let dq = EDivisor::new(vec![(Point::Infinity, 1), (neg_q.clone(), -1)]);
        if p.is_infinity() {
            return Self::with_classes(c, EDivisor::empty(), dq, Point::Infinity, q.clone());
        }
        let antidiagonal = neg_q == *p;
        for k in 1..400 {
            let w = match aux_point(curve, k) {
                Some(w) => w,
                None => continue,
            };
            let pw = curve.add(p, &w)?;
            if pw.is_infinity() || pw == w {
                continue;
            }
            let dp = EDivisor::new(vec![(pw.clone(), 1), (w.clone(), -1)]);
            if !dp.supports_disjoint(&dq) {
                continue;
            }
            if antidiagonal {
                return Self::with_classes(c, dp, dq, p.clone(), q.clone());
            }
            // transport from (P)-(O): f = (P)-(O) - dp, evaluated on dq
            if pw == *p || w == *p {
                continue;
            }
            let f = func_with_divisor(curve, &EDivisor::point_class(p).sub(&dp))?;
            if f.divisor().contains(&neg_q) {
                continue;
            }
            let c2 = c.mul(&f.eval_on_divisor(&dq)?)?;
            return Self::with_classes(c2, dp, dq, p.clone(), q.clone());
        }
        Err(Error::SupportClash)
    }

    pub fn scalar(&self) -> &PadicNumber {
        &self.c
    }

    pub fn dp(&self) -> &EDivisor {
        &self.dp
    }

    pub fn dq(&self) -> &EDivisor {
        &self.dq
    }

    pub fn first_class(&self) -> &Point {
        &self.p_class
    }

    pub fn second_class(&self) -> &Point {
        &self.q_class
    }

    /// The H-action: h + x multiplies the scalar.
    pub fn scale_c(&self, h: &PadicNumber) -> Result<Self> {
        Ok(EBiextPoint {
            c: self.c.mul(h)?,
            dp: self.dp.clone(),
            dq: self.dq.clone(),
            p_class: self.p_class.clone(),
            q_class: self.q_class.clone(),
        })
    }

    /// Swap the two base coordinates (the biextension is symmetric in our
    /// divisor model).
    pub fn swapped(&self) -> Self {
        EBiextPoint {
            c: self.c.clone(),
            dp: self.dq.clone(),
            dq: self.dp.clone(),
            p_class: self.q_class.clone(),
            q_class: self.p_class.clone(),
        }
    }

    /// Move to the given first-coordinate representative; c picks up the
    /// transport value f(D_Q) for div f = D_P - new.
    pub fn with_dp_representative(&self, curve: &Curve, new_dp: &EDivisor) -> Result<Self> {
        if self.dp == *new_dp {
            return Ok(self.clone());
        }
        let f = func_with_divisor(curve, &self.dp.sub(new_dp))?;
        let c = self.c.mul(&f.eval_on_divisor(&self.dq)?)?;
        Self::with_classes(c, new_dp.clone(), self.dq.clone(), self.p_class.clone(), self.q_class.clone())
    }

    pub fn with_dq_representative(&self, curve: &Curve, new_dq: &EDivisor) -> Result<Self> {
        if self.dq == *new_dq {
            return Ok(self.clone());
        }
        let g = func_with_divisor(curve, &self.dq.sub(new_dq))?;
        let c = self.c.mul(&g.eval_on_divisor(&self.dp)?)?;
        Self::with_classes(c, self.dp.clone(), new_dq.clone(), self.p_class.clone(), self.q_class.clone())
    }

    /// Reduce the second coordinate to a two-term representative
    /// (Q+V)-(V) (or empty, when Q = O), avoiding the listed supports.
    fn reduce_dq(&self, curve: &Curve, avoid: &[&EDivisor]) -> Result<Self> {
        let q = self.q_class.clone();
        if q.is_infinity() {
            return self.with_dq_representative(curve, &EDivisor::empty());
        }
        for k in 1..400 {
            let v = match aux_point(curve, k) {
                Some(v) => v,
                None => continue,
            };
            let qv = curve.add(&q, &v)?;
            if qv.is_infinity() || qv == v {
                continue;
            }
            let bad = |pt: &Point| {
                self.dp.contains(pt)
                    || self.dq.contains(pt)
                    || avoid.iter().any(|d| d.contains(pt))
            };
            if bad(&qv) || bad(&v) {
                continue;
            }
            let target = EDivisor::new(vec![(qv, 1), (v, -1)]);
            return self.with_dq_representative(curve, &target);
        }
        Err(Error::SupportClash)
    }

    fn reduce_dp(&self, curve: &Curve, avoid: &[&EDivisor]) -> Result<Self> {
        Ok(self.swapped().reduce_dq(curve, avoid)?.swapped())
    }

    /// Partial law fixing the first coordinate: classes add in the second.
    pub fn add1(&self, curve: &Curve, other: &Self) -> Result<Self> {
        if self.p_class != other.p_class {
            return Err(Error::BaseMismatch);
        }
        let y2 = other.reduce_dq(curve, &[&self.dp, &self.dq])?;
        let y2 = y2.with_dp_representative(curve, &self.dp)?;
        Self::with_classes(
            self.c.mul(&y2.c)?,
            self.dp.clone(),
            self.dq.add(&y2.dq),
            self.p_class.clone(),
            curve.add(&self.q_class, &other.q_class)?,
        )
    }

    /// Partial law fixing the second coordinate.
    pub fn add2(&self, curve: &Curve, other: &Self) -> Result<Self> {
        if self.q_class != other.q_class {
            return Err(Error::BaseMismatch);
        }
        let y2 = other.reduce_dp(curve, &[&self.dp, &self.dq])?;
        let y2 = y2.with_dq_representative(curve, &self.dq)?;
        Self::with_classes(
            self.c.mul(&y2.c)?,
            self.dp.add(&y2.dp),
            self.dq.clone(),
            curve.add(&self.p_class, &other.p_class)?,
            self.q_class.clone(),
        )
    }

    /// Inverse for the first law: negate the second divisor, invert c.
    pub fn neg1(&self, curve: &Curve) -> Result<Self> {
        Ok(EBiextPoint {
            c: self.c.inverse()?,
            dp: self.dp.clone(),
            dq: self.dq.neg(),
            p_class: self.p_class.clone(),
            q_class: curve.neg(&self.q_class),
        })
    }

    pub fn neg2(&self, curve: &Curve) -> Result<Self> {
        Ok(EBiextPoint {
            c: self.c.inverse()?,
            dp: self.dp.neg(),
            dq: self.dq.clone(),
            p_class: curve.neg(&self.p_class),
            q_class: self.q_class.clone(),
        })
    }

    /// n-fold sum under the first law.
    pub fn mul1(&self, curve: &Curve, n: i64) -> Result<Self> {
        if n == 0 {
            return Self::with_classes(
                PadicNumber::one(self.c.prime(), self.c.precision()),
                self.dp.clone(),
                EDivisor::empty(),
                self.p_class.clone(),
                Point::Infinity,
            );
        }
        let base = if n < 0 { self.neg1(curve)? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            acc = acc.add1(curve, &base)?;
        }
        Ok(acc)
    }

    pub fn mul2(&self, curve: &Curve, n: i64) -> Result<Self> {
        if n == 0 {
            return Self::with_classes(
                PadicNumber::one(self.c.prime(), self.c.precision()),
                EDivisor::empty(),
                self.dq.clone(),
                Point::Infinity,
                self.q_class.clone(),
            );
        }
        let base = if n < 0 { self.neg2(curve)? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            acc = acc.add2(curve, &base)?;
        }
        Ok(acc)
    }
}

/// Deterministic auxiliary points: Hensel lifts above consecutive small
/// x-coordinates, signs alternating through the sequence index.
fn aux_point(curve: &Curve, k: usize) -> Option<Point> {
    let p = curve.prime();
    let prec = curve.precision();
    let x = PadicNumber::from_i64(2 + k as i64, p, prec);
    let pt = curve.lift_x(&x)?;
    if k % 2 == 0 {
        Some(curve.neg(&pt))
    } else {
        Some(pt)
    }
}

/// Deterministic formal auxiliary points with parameter k*p.
fn formal_aux(fg: &FormalGroup, k: usize) -> Result<Point> {
    let p = fg.curve().prime();
    let prec = fg.curve().precision();
    let t = PadicNumber::from_i64(k as i64 * p as i64, p, prec);
    fg.point_from_t(&t)
}

/// The splitting attached to (gamma, branch): psi(c + y) = lambda(c) + psi(y),
/// homomorphic along both partial laws. For classes in the formal group the
/// value on the canonical point above (P, Q) is
/// lambda(c) - lambda(sigma(t_{P+Q}) / (sigma(t_P) sigma(t_Q))).
pub fn psi_elliptic(
    fg: &FormalGroup,
    sf: &SigmaFamily,
    branch: &LogBranch,
    y: &EBiextPoint,
) -> Result<PadicNumber> {
    let curve = fg.curve();
    let n = curve.kill_reduction(&[y.first_class().clone(), y.second_class().clone()])?;
    let reduced = y.mul2(curve, n)?.mul1(curve, n)?;
    let value = psi_formal(fg, sf, branch, &reduced)?;
    value.div(&PadicNumber::from_i64(n * n, curve.prime(), value.precision() + 4))
}

/// The dual-side splitting: same construction with the coordinate roles
/// swapped and the dual parameter.
pub fn psi_elliptic_dual(
    fg: &FormalGroup,
    sf_dual: &SigmaFamily,
    branch: &LogBranch,
    y: &EBiextPoint,
) -> Result<PadicNumber> {
    psi_elliptic(fg, sf_dual, branch, &y.swapped())
}

/// Self-duality check for the Hodge-splitting parameter: the two-sided
/// constructions agree exactly when the parameters agree.
pub fn hodge_dual_check(gamma: &PadicNumber, gamma_dual: &PadicNumber) -> bool {
    gamma.eq_at_shared_precision(gamma_dual)
}

fn psi_formal(
    fg: &FormalGroup,
    sf: &SigmaFamily,
    branch: &LogBranch,
    y: &EBiextPoint,
) -> Result<PadicNumber> {
    let curve = fg.curve();
    let np = y.first_class().clone();
    let nq = y.second_class().clone();
    if !curve.is_formal(&np) || !curve.is_formal(&nq) {
        return Err(Error::PrecisionExhausted("classes not in the formal group".into()));
    }
    let neg_nq = curve.neg(&nq);
    let dq_target = if nq.is_infinity() {
        EDivisor::empty()
    } else {
        EDivisor::new(vec![(Point::Infinity, 1), (neg_nq.clone(), -1)])
    };
    let dp_target = if np.is_infinity() {
        EDivisor::empty()
    } else {
        let mut found = None;
        'search: for k in 1..400 {
            let w = formal_aux(fg, k)?;
            let npw = curve.add(&np, &w)?;
            if npw.is_infinity() || npw == w {
                continue;
            }
            // the symbol needs all cross-differences nonzero
            for excl in [&nq, &neg_nq] {
                if &npw == excl || &w == excl {
                    continue 'search;
                }
            }
            if curve.add(&npw, &nq)?.is_infinity() || curve.add(&w, &nq)?.is_infinity() {
                continue;
            }
            // transports evaluate at npw, w: keep them off current supports
            if y.dp.contains(&npw) || y.dp.contains(&w) || y.dq.contains(&npw) || y.dq.contains(&w)
            {
                continue;
            }
            if npw.is_infinity() || w.is_infinity() {
                continue;
            }
            found = Some(EDivisor::new(vec![(npw, 1), (w, -1)]));
            break;
        }
        found.ok_or(Error::SupportClash)?
    };
    let moved = y
        .with_dp_representative(curve, &dp_target)?
        .with_dq_representative(curve, &dq_target)?;
    // sigma-symbol over the canonical formal representatives
    let mut symbol = PadicNumber::one(curve.prime(), curve.precision());
    for (x_pt, n_mult) in moved.dp.entries() {
        for (y_pt, m_mult) in moved.dq.entries() {
            let diff = curve.sub(x_pt, y_pt)?;
            let t = curve.t_param(&diff)?;
            let s = sf.eval(&t)?;
            symbol = symbol.mul(&s.pow(n_mult * m_mult)?)?;
        }
    }
    moved.c.plog(branch)?.add(&symbol.plog(branch)?)
}
