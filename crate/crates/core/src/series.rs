//! Truncated power series over Q_p: the carrier for formal logarithms and
//! sigma-series.

use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// A power series known modulo t^trunc, coefficients indexed 0..trunc-1.
#[derive(Debug, Clone)]
pub struct PadicSeries {
    p: u64,
    prec: i64,
    coeffs: Vec<PadicNumber>,
}

impl PadicSeries {
    pub fn new(p: u64, prec: i64, trunc: usize) -> Self {
        assert!(trunc >= 1);
        PadicSeries { p, prec, coeffs: vec![PadicNumber::zero(p, prec); trunc] }
    }

    pub fn from_coeffs(p: u64, prec: i64, coeffs: Vec<PadicNumber>) -> Self {
        assert!(!coeffs.is_empty());
        PadicSeries { p, prec, coeffs }
    }

    pub fn identity(p: u64, prec: i64, trunc: usize) -> Self {
        let mut s = Self::new(p, prec, trunc);
        if trunc > 1 {
            s.coeffs[1] = PadicNumber::one(p, prec);
        }
        s
    }

    pub fn constant(c: PadicNumber, trunc: usize) -> Self {
        let p = c.prime();
        let prec = c.precision();
        let mut s = Self::new(p, prec, trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeff(&self, k: usize) -> PadicNumber {
        if k < self.coeffs.len() {
            self.coeffs[k].clone()
        } else {
            PadicNumber::zero(self.p, self.prec)
        }
    }

    pub fn set_coeff(&mut self, k: usize, c: PadicNumber) {
        assert!(k < self.coeffs.len());
        self.coeffs[k] = c;
    }

    pub fn truncate_order(&self, trunc: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(trunc);
        while c.len() < trunc {
            c.push(PadicNumber::zero(self.p, self.prec));
        }
        PadicSeries { p: self.p, prec: self.prec, coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let t = self.trunc().min(other.trunc());
        let mut out = Vec::with_capacity(t);
        for k in 0..t {
            out.push(self.coeff(k).add(&other.coeff(k))?);
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PadicSeries {
            p: self.p,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &PadicNumber) -> Result<Self> {
        let mut out = Vec::with_capacity(self.trunc());
        for a in &self.coeffs {
            out.push(a.mul(c)?);
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let t = self.trunc().min(other.trunc());
        let mut out = vec![PadicNumber::zero(self.p, self.prec); t];
        for i in 0..t {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..t - i {
                if other.coeff(j).is_zero() {
                    continue;
                }
                let prod = self.coeff(i).mul(&other.coeff(j))?;
                out[i + j] = out[i + j].add(&prod)?;
            }
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    /// Multiply by t^k (shifting coefficients up, truncating at the order).
    pub fn shift_t(&self, k: usize) -> Self {
        let t = self.trunc();
        let mut out = vec![PadicNumber::zero(self.p, self.prec); t];
        for i in 0..t.saturating_sub(k) {
            out[i + k] = self.coeff(i);
        }
        PadicSeries { p: self.p, prec: self.prec, coeffs: out }
    }

    /// Compose self(inner); the inner series must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonComposable);
        }
        let t = self.trunc().min(inner.trunc());
        // Horner from the top coefficient down
        let mut acc = PadicSeries::constant(self.coeff(t - 1), t);
        for k in (0..t - 1).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeff(k))?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a unit (nonzero).
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = self.trunc();
        let inv0 = c0.inverse()?;
        let mut out = vec![PadicNumber::zero(self.p, self.prec); t];
        out[0] = inv0.clone();
        for k in 1..t {
            // c0 * out[k] = -sum_{j=1..k} self[j] * out[k-j]
            let mut s = PadicNumber::zero(self.p, self.prec);
            for j in 1..=k {
                s = s.add(&self.coeff(j).mul(&out[k - j])?)?;
            }
            out[k] = s.neg().mul(&inv0)?;
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.reciprocal()?)
    }

    /// Compositional inverse of a series t + O(t^2).
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(Error::NonComposable);
        }
        let t = self.trunc();
        let mut g = PadicSeries::identity(self.p, self.prec, t);
        g.coeffs[1] = self.coeff(1).inverse()?;
        // Newton-style refinement degree by degree
        for _ in 0..t {
            let fg = self.compose(&g)?;
            let err = fg.sub(&PadicSeries::identity(self.p, self.prec, t))?;
            if (0..t).all(|k| err.coeff(k).is_zero()) {
                break;
            }
            // g <- g - err / f'(g)
            let fp = self.derivative()?.compose(&g)?;
            let corr = err.div(&fp)?;
            g = g.sub(&corr)?;
        }
        Ok(g)
    }

    pub fn derivative(&self) -> Result<Self> {
        let t = self.trunc();
        let mut out = vec![PadicNumber::zero(self.p, self.prec); t];
        for k in 1..t {
            out[k - 1] = self.coeff(k).mul(&PadicNumber::from_i64(k as i64, self.p, self.prec + 8))?;
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    /// Termwise antiderivative with zero constant term. Dividing the k-th
    /// coefficient by k+1 loses digits when p | k+1; the loss shows up in the
    /// per-coefficient precision.
    pub fn integrate(&self) -> Result<Self> {
        let t = self.trunc();
        let mut out = vec![PadicNumber::zero(self.p, self.prec); t];
        for k in 0..t - 1 {
            let d = PadicNumber::from_i64((k + 1) as i64, self.p, self.prec + 8);
            let c = self.coeff(k).div(&d)?;
            if !c.is_zero() && c.precision() <= c.valuation().unwrap_or(0) {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {} lost all digits during integration",
                    k + 1
                )));
            }
            out[k + 1] = c;
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: out })
    }

    /// exp of a series with zero constant term, via E' = E * s'.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonComposable);
        }
        let t = self.trunc();
        let sp = self.derivative()?;
        let mut e = vec![PadicNumber::zero(self.p, self.prec); t];
        e[0] = PadicNumber::one(self.p, self.prec);
        for k in 1..t {
            // k * e_k = sum_{j=0..k-1} e_j * sp_{k-1-j}
            let mut s = PadicNumber::zero(self.p, self.prec);
            for j in 0..k {
                s = s.add(&e[j].mul(&sp.coeff(k - 1 - j))?)?;
            }
            e[k] = s.div(&PadicNumber::from_i64(k as i64, self.p, self.prec + 8))?;
        }
        Ok(PadicSeries { p: self.p, prec: self.prec, coeffs: e })
    }

    /// log of a series with constant term 1, via integrate(s'/s).
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).eq_at_shared_precision(&PadicNumber::one(self.p, self.prec)) {
            return Err(Error::NonComposable);
        }
        self.derivative()?.div(self)?.integrate()
    }

    /// Evaluate at a point of positive valuation, summing until the tail is
    /// below the working precision.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if let Some(v) = x.valuation() {
            if v < 1 {
                return Err(Error::PrecisionExhausted(
                    "series evaluation requires valuation >= 1".into(),
                ));
            }
        }
        let mut acc = self.coeff(self.trunc() - 1);
        for k in (0..self.trunc() - 1).rev() {
            acc = acc.mul(x)?.add(&self.coeff(k))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_plus_t(p: u64, prec: i64, t: usize) -> PadicSeries {
        let mut s = PadicSeries::identity(p, prec, t);
        s.set_coeff(0, PadicNumber::one(p, prec));
        s
    }

    #[test]
    fn exp_log_inverse_pair() {
        let s = one_plus_t(5, 12, 10);
        let l = s.log().unwrap();
        let e = l.exp().unwrap();
        for k in 0..10 {
            assert!(
                e.coeff(k).eq_at_shared_precision(&s.coeff(k)),
                "coefficient {k} differs"
            );
        }
    }

    #[test]
    fn integrate_constant_is_t() {
        let c = PadicSeries::constant(PadicNumber::one(5, 12), 6);
        let i = c.integrate().unwrap();
        assert!(i.coeff(0).is_zero());
        assert!(i.coeff(1).eq_at_shared_precision(&PadicNumber::one(5, 12)));
        assert!(i.coeff(2).is_zero());
    }

    #[test]
    fn log_coefficient_t5_has_val_minus_one() {
        // p=5, T=7: coefficient of t^5 in log(1+t) is 1/5
        let l = one_plus_t(5, 12, 7).log().unwrap();
        let c5 = l.coeff(5);
        assert_eq!(c5.valuation(), Some(-1));
        let fifth = PadicNumber::one(5, 14).div(&PadicNumber::from_i64(5, 5, 14)).unwrap();
        assert!(c5.eq_at_shared_precision(&fifth));
    }

    #[test]
    fn compose_requires_zero_constant_term() {
        let s = PadicSeries::identity(5, 12, 6);
        let bad = one_plus_t(5, 12, 6);
        assert!(s.compose(&bad).is_err());
    }

    #[test]
    fn reversion_round_trip() {
        // f = t + t^2 + 3t^3; f(g(t)) = t
        let mut f = PadicSeries::identity(5, 12, 9);
        f.set_coeff(2, PadicNumber::one(5, 12));
        f.set_coeff(3, PadicNumber::from_i64(3, 5, 12));
        let g = f.reversion().unwrap();
        let fg = f.compose(&g).unwrap();
        let id = PadicSeries::identity(5, 12, 9);
        for k in 0..9 {
            assert!(fg.coeff(k).eq_at_shared_precision(&id.coeff(k)), "coeff {k}");
        }
    }

    #[test]
    fn reciprocal_cancels() {
        let mut s = one_plus_t(5, 12, 8);
        s.set_coeff(3, PadicNumber::from_i64(7, 5, 12));
        let r = s.reciprocal().unwrap();
        let prod = s.mul(&r).unwrap();
        assert!(prod.coeff(0).eq_at_shared_precision(&PadicNumber::one(5, 12)));
        for k in 1..8 {
            assert!(prod.coeff(k).is_zero(), "coeff {k} should vanish");
        }
    }
}
