//! Formal group of a Weierstrass curve at the origin: coordinate expansions
//! in t = -x/y, the invariant differential, the formal logarithm and its
//! inverse, and the two-variable group law.

use crate::elliptic::{Curve, Point};
use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::series::PadicSeries;

/// A Laurent expansion t^lead * s(t) with s a power series.
#[derive(Debug, Clone)]
pub struct Laurent {
    pub lead: i64,
    pub series: PadicSeries,
}

impl Laurent {
    pub fn from_series(series: PadicSeries) -> Self {
        Laurent { lead: 0, series }
    }

    pub fn coeff(&self, k: i64) -> PadicNumber {
        if k < self.lead {
            PadicNumber::zero(self.series.prime(), 0)
        } else {
            self.series.coeff((k - self.lead) as usize)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Laurent { lead: self.lead + other.lead, series: self.series.mul(&other.series)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let lead = self.lead.min(other.lead);
        let t = self.series.trunc().min(other.series.trunc());
        let p = self.series.prime();
        let mut out = PadicSeries::new(p, self.series.coeff(0).precision(), t);
        for k in 0..t {
            let idx = lead + k as i64;
            let c = self.coeff(idx).add(&other.coeff(idx))?;
            out.set_coeff(k, c);
        }
        Ok(Laurent { lead, series: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        // divisor must have a unit leading coefficient
        Ok(Laurent { lead: self.lead - other.lead, series: self.series.div(&other.series)? })
    }

    /// d/dt.
    pub fn d_dt(&self) -> Result<Self> {
        let t = self.series.trunc();
        let p = self.series.prime();
        let prec = self.series.coeff(0).precision();
        let mut out = PadicSeries::new(p, prec, t);
        for k in 0..t {
            let e = self.lead + k as i64; // exponent of this monomial
            let c = self.series.coeff(k).mul(&PadicNumber::from_i64(e, p, prec + 8))?;
            out.set_coeff(k, c);
        }
        Ok(Laurent { lead: self.lead - 1, series: out })
    }
}

/// Formal expansions attached to a curve, all to order `trunc`.
#[derive(Debug, Clone)]
pub struct FormalGroup {
    curve: Curve,
    trunc: usize,
    /// x(t) * t^2 (a unit power series 1 + ...)
    x_num: PadicSeries,
    /// invariant differential omega(t) = omega'(t) dt, omega' = 1 + ...
    omega: PadicSeries,
    /// formal logarithm l(t) = t + ...
    log: PadicSeries,
    /// compositional inverse of the logarithm
    exp: PadicSeries,
}

impl FormalGroup {
    pub fn new(curve: &Curve, trunc: usize) -> Result<Self> {
        if trunc < 5 {
            return Err(Error::SchemaError("series order must be at least 5".into()));
        }
        let p = curve.prime();
        let prec = curve.precision();
        // Solve w = t^3 + a t w^2 + b w^3 by iteration; w = t^3(1 + ...).
        let t_series = PadicSeries::identity(p, prec, trunc + 4);
        let t3 = t_series.shift_t(2); // t * t^2 = t^3
        let a = PadicSeries::constant(curve.a().clone(), trunc + 4);
        let b = PadicSeries::constant(curve.b().clone(), trunc + 4);
        let mut w = t3.clone();
        for _ in 0..trunc + 4 {
            let w2 = w.mul(&w)?;
            let w3 = w2.mul(&w)?;
            let next = t3.add(&a.mul(&t_series)?.mul(&w2)?)?.add(&b.mul(&w3)?)?;
            w = next;
        }
        // x = t/w = t^{-2} * (t^3 / w); u_x := t^3/w is a unit series.
        let w_div_t3 = shift_down(&w, 3);
        let u_x = w_div_t3.reciprocal()?;
        // y = -1/w, so y t^3 = -u_x.
        // omega = x'(t)/(2 y(t)):
        //   x'(t) = t^{-3} (-2 u_x + t u_x'), 2y = -2 t^{-3} u_x
        //   omega = (u_x - t u_x'/2) / u_x = 1 - t u_x' / (2 u_x)
        let ux_prime = u_x.derivative()?;
        let t_uxp = ux_prime.shift_t(1);
        let half = PadicNumber::from_i64(2, p, prec + 8).inverse()?;
        let omega = PadicSeries::constant(PadicNumber::one(p, prec), trunc + 2)
            .sub(&t_uxp.scale(&half)?.div(&u_x)?)?
            .truncate_order(trunc);
        let log = omega.integrate()?;
        let exp = log.reversion()?;
        Ok(FormalGroup {
            curve: curve.clone(),
            trunc,
            x_num: u_x.truncate_order(trunc),
            omega,
            log,
            exp,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// x(t) as a Laurent series t^{-2}(1 + ...).
    pub fn x_laurent(&self) -> Laurent {
        Laurent { lead: -2, series: self.x_num.clone() }
    }

    /// y(t) as a Laurent series -t^{-3}(1 + ...).
    pub fn y_laurent(&self) -> Laurent {
        Laurent { lead: -3, series: self.x_num.neg() }
    }

    pub fn omega(&self) -> &PadicSeries {
        &self.omega
    }

    pub fn log_series(&self) -> &PadicSeries {
        &self.log
    }

    pub fn exp_series(&self) -> &PadicSeries {
        &self.exp
    }

    /// Formal logarithm of a point in the formal group.
    pub fn log_point(&self, pt: &Point) -> Result<PadicNumber> {
        let t = self.curve.t_param(pt)?;
        if t.is_zero() {
            return Ok(t);
        }
        self.log.eval(&t)
    }

    /// The point with formal parameter t (converging series evaluation).
    pub fn point_from_t(&self, t: &PadicNumber) -> Result<Point> {
        if t.is_zero() {
            return Ok(Point::Infinity);
        }
        match t.valuation() {
            Some(v) if v >= 1 => {}
            _ => return Err(Error::WrongSupport),
        }
        let ux = self.x_num.eval(t)?;
        let x = ux.mul(&t.pow(-2)?)?;
        let y = ux.neg().mul(&t.pow(-3)?)?;
        Ok(Point::Affine { x, y })
    }

    /// The derivation dual to omega applied to a Laurent series: f'(t)/omega'(t).
    pub fn d_dual(&self, f: &Laurent) -> Result<Laurent> {
        let om = Laurent::from_series(self.omega.clone());
        f.d_dt()?.div(&om)
    }

    /// Group law F(t1, t2) as a bivariate truncation, from exp(l(t1)+l(t2)).
    pub fn group_law(&self) -> Result<Bivariate> {
        let p = self.curve.prime();
        let prec = self.curve.precision();
        let t = self.trunc;
        let l1 = Bivariate::from_univariate_t1(&self.log, t);
        let l2 = Bivariate::from_univariate_t2(&self.log, t);
        let s = l1.add(&l2)?;
        // Horner evaluation of exp at the bivariate s
        let mut acc = Bivariate::constant(self.exp.coeff(t - 1), p, prec, t);
        for k in (0..t - 1).rev() {
            acc = acc.mul(&s)?;
            acc.add_const(&self.exp.coeff(k))?;
        }
        Ok(acc)
    }
}

fn shift_down(s: &PadicSeries, k: usize) -> PadicSeries {
    let t = s.trunc();
    let p = s.prime();
    let prec = s.coeff(0).precision();
    let mut out = PadicSeries::new(p, prec, t);
    for i in k..t {
        out.set_coeff(i - k, s.coeff(i));
    }
    out
}

/// Bivariate truncated series in (t1, t2), coefficients c[i][j] of t1^i t2^j.
#[derive(Debug, Clone)]
pub struct Bivariate {
    p: u64,
    prec: i64,
    trunc: usize,
    c: Vec<Vec<PadicNumber>>,
}

impl Bivariate {
    pub fn constant(v: PadicNumber, p: u64, prec: i64, trunc: usize) -> Self {
        let mut c = vec![vec![PadicNumber::zero(p, prec); trunc]; trunc];
        c[0][0] = v;
        Bivariate { p, prec, trunc, c }
    }

    pub fn from_univariate_t1(s: &PadicSeries, trunc: usize) -> Self {
        let p = s.prime();
        let prec = s.coeff(0).precision();
        let mut c = vec![vec![PadicNumber::zero(p, prec); trunc]; trunc];
        for (i, row) in c.iter_mut().enumerate().take(trunc.min(s.trunc())) {
            row[0] = s.coeff(i);
        }
        Bivariate { p, prec, trunc, c }
    }

    pub fn from_univariate_t2(s: &PadicSeries, trunc: usize) -> Self {
        let p = s.prime();
        let prec = s.coeff(0).precision();
        let mut c = vec![vec![PadicNumber::zero(p, prec); trunc]; trunc];
        for j in 0..trunc.min(s.trunc()) {
            c[0][j] = s.coeff(j);
        }
        Bivariate { p, prec, trunc, c }
    }

    pub fn coeff(&self, i: usize, j: usize) -> PadicNumber {
        if i < self.trunc && j < self.trunc {
            self.c[i][j].clone()
        } else {
            PadicNumber::zero(self.p, self.prec)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let t = self.trunc.min(other.trunc);
        let mut out = Bivariate::constant(PadicNumber::zero(self.p, self.prec), self.p, self.prec, t);
        for i in 0..t {
            for j in 0..t {
                out.c[i][j] = self.coeff(i, j).add(&other.coeff(i, j))?;
            }
        }
        Ok(out)
    }

    pub fn add_const(&mut self, v: &PadicNumber) -> Result<()> {
        self.c[0][0] = self.c[0][0].add(v)?;
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let t = self.trunc.min(other.trunc);
        let zero = PadicNumber::zero(self.p, self.prec);
        let mut out = Bivariate::constant(zero, self.p, self.prec, t);
        for i1 in 0..t {
            for j1 in 0..t {
                let a = self.coeff(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..t - i1 {
                    for j2 in 0..t - j1 {
                        let b = other.coeff(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        let prod = a.mul(&b)?;
                        out.c[i1 + i2][j1 + j2] = out.c[i1 + i2][j1 + j2].add(&prod)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Evaluate at concrete values of positive valuation. The claimed
    /// precision is capped by the dropped tail: terms of total degree >= trunc
    /// contribute at valuation >= trunc * min(val) - v_p(trunc!), the
    /// factorial slack covering denominators of exponential-type series.
    pub fn eval(&self, t1: &PadicNumber, t2: &PadicNumber) -> Result<PadicNumber> {
        let v1 = t1.valuation().unwrap_or(t1.precision());
        let v2 = t2.valuation().unwrap_or(t2.precision());
        let vmin = v1.min(v2).max(0);
        let mut vfac = 0i64;
        let mut q = self.trunc as i64 / self.p as i64;
        while q > 0 {
            vfac += q;
            q /= self.p as i64;
        }
        let tail = self.trunc as i64 * vmin - vfac;
        let mut acc = PadicNumber::zero(self.p, self.prec);
        for i in (0..self.trunc).rev() {
            let mut row = PadicNumber::zero(self.p, self.prec);
            for j in (0..self.trunc).rev() {
                row = row.mul(t2)?.add(&self.c[i][j])?;
            }
            acc = acc.mul(t1)?.add(&row)?;
        }
        Ok(acc.truncate(tail))
    }

    /// Substitute t2 = 0.
    pub fn at_t2_zero(&self) -> PadicSeries {
        let mut s = PadicSeries::new(self.p, self.prec, self.trunc);
        for i in 0..self.trunc {
            s.set_coeff(i, self.c[i][0].clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Curve;

    fn fg() -> FormalGroup {
        let e = Curve::from_i64(5, 14, -1, 1).unwrap();
        FormalGroup::new(&e, 12).unwrap()
    }

    #[test]
    fn log_starts_with_t() {
        let f = fg();
        assert!(f.log_series().coeff(0).is_zero());
        assert!(f
            .log_series()
            .coeff(1)
            .eq_at_shared_precision(&PadicNumber::one(5, 14)));
    }

    #[test]
    fn x_y_satisfy_curve_equation_as_series() {
        // (y t^3)^2 = (x t^2)^3 t^{-6} t^6 ... check y^2 - x^3 - a x - b = 0
        // numerically at a formal parameter value.
        let f = fg();
        let t = PadicNumber::from_i64(5, 5, 14);
        let pt = f.point_from_t(&t).unwrap();
        assert!(f.curve().contains(&pt));
        // t parameter round-trips
        let tt = f.curve().t_param(&pt).unwrap();
        assert!(tt.eq_at_shared_precision(&t));
    }

    #[test]
    fn group_law_f_t_0_is_t() {
        let f = fg();
        let law = f.group_law().unwrap();
        let at0 = law.at_t2_zero();
        assert!(at0.coeff(0).is_zero());
        assert!(at0.coeff(1).eq_at_shared_precision(&PadicNumber::one(5, 14)));
        for k in 2..8 {
            assert!(at0.coeff(k).is_zero(), "F(t,0) coefficient {k} should vanish");
        }
    }

    #[test]
    fn log_of_group_law_is_additive_to_order_8() {
        // series oracle: compare l(F(t1,t2)) with l(t1)+l(t2) coefficient-wise
        let f = fg();
        let law = f.group_law().unwrap();
        let l = f.log_series();
        // build l(F) by bivariate Horner
        let t = 8usize;
        let mut acc = Bivariate::constant(l.coeff(t - 1), 5, 14, t);
        let law8 = {
            // truncate law to order 8 for speed
            let mut b = Bivariate::constant(PadicNumber::zero(5, 14), 5, 14, t);
            for i in 0..t {
                for j in 0..t {
                    b.c[i][j] = law.coeff(i, j);
                }
            }
            b
        };
        for k in (0..t - 1).rev() {
            acc = acc.mul(&law8).unwrap();
            acc.add_const(&l.coeff(k)).unwrap();
        }
        for i in 0..t {
            for j in 0..t - i {
                // coefficients of total degree >= t are beyond the truncation
                let expect = if j == 0 {
                    l.coeff(i)
                } else if i == 0 {
                    l.coeff(j)
                } else {
                    PadicNumber::zero(5, 14)
                };
                assert!(
                    acc.coeff(i, j).eq_at_shared_precision(&expect),
                    "l(F) coefficient ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn group_law_matches_curve_addition_numerically() {
        let f = fg();
        let law = f.group_law().unwrap();
        let t1 = PadicNumber::from_i64(5, 5, 14);
        let t2 = PadicNumber::from_i64(10, 5, 14);
        let p1 = f.point_from_t(&t1).unwrap();
        let p2 = f.point_from_t(&t2).unwrap();
        let sum = f.curve().add(&p1, &p2).unwrap();
        let t_sum = f.curve().t_param(&sum).unwrap();
        let t_law = law.eval(&t1, &t2).unwrap();
        assert!(t_sum.eq_at_shared_precision(&t_law), "{t_sum} vs {t_law}");
    }

    #[test]
    fn log_point_is_homomorphic() {
        let f = fg();
        let t1 = PadicNumber::from_i64(5, 5, 14);
        let t2 = PadicNumber::from_i64(15, 5, 14);
        let p1 = f.point_from_t(&t1).unwrap();
        let p2 = f.point_from_t(&t2).unwrap();
        let sum = f.curve().add(&p1, &p2).unwrap();
        let lhs = f.log_point(&sum).unwrap();
        let rhs = f.log_point(&p1).unwrap().add(&f.log_point(&p2).unwrap()).unwrap();
        assert!(lhs.eq_at_shared_precision(&rhs));
    }
}
