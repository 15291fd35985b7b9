//! Exact fixed-precision arithmetic in Q_p and branches of the p-adic logarithm.
//!
//! A [`PadicNumber`] is an element of Q_p known modulo p^N for an explicit
//! absolute precision N. Arithmetic never reports more precision than the
//! inputs justify: addition keeps the minimum absolute precision, while
//! multiplication and division keep the minimum *relative* precision, so
//! dividing by p^k costs exactly k digits of absolute precision.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of Q_p at a fixed absolute precision.
///
/// The canonical zero has `val = +infinity` and carries no digits; it stands
/// for "indistinguishable from 0 modulo p^prec".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    prec: i64,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Zero,
    /// `val < prec` and `unit` is invertible modulo p^(prec - val).
    Finite { val: i64, unit: BigUint },
}

fn pow_p(p: u64, k: i64) -> BigUint {
    assert!(k >= 0, "negative power of p requested for a modulus");
    BigUint::from(p).pow(k as u32)
}

/// Modular inverse by extended Euclid; the modulus need not be prime.
fn mod_inverse(a: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let mut x = e.x % &m;
    if x.is_negative() {
        x += &m;
    }
    Some(x.to_biguint().unwrap())
}

impl PadicNumber {
    /// Build from raw parts `p^val * mag`, truncated to absolute precision `prec`.
    fn normalize(p: u64, prec: i64, mut val: i64, mut mag: BigUint) -> Self {
        let pb = BigUint::from(p);
        if mag.is_zero() || val >= prec {
            return PadicNumber { p, prec, repr: Repr::Zero };
        }
        while (&mag % &pb).is_zero() {
            mag /= &pb;
            val += 1;
            if val >= prec {
                return PadicNumber { p, prec, repr: Repr::Zero };
            }
        }
        let modulus = pow_p(p, prec - val);
        mag %= &modulus;
        if mag.is_zero() {
            return PadicNumber { p, prec, repr: Repr::Zero };
        }
        PadicNumber { p, prec, repr: Repr::Finite { val, unit: mag } }
    }

    /// The canonical zero at absolute precision `prec`.
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNumber { p, prec, repr: Repr::Zero }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_i64(1, p, prec)
    }

    pub fn from_i64(n: i64, p: u64, prec: i64) -> Self {
        Self::from_bigint(&BigInt::from(n), p, prec)
    }

    pub fn from_bigint(n: &BigInt, p: u64, prec: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p, prec);
        }
        let neg = n.is_negative();
        let mag = n.abs().to_biguint().unwrap();
        let x = Self::normalize(p, prec, 0, mag);
        if neg { x.neg() } else { x }
    }

    /// Embed an exact rational. The result is known mod p^prec.
    pub fn from_rational(q: &BigRational, p: u64, prec: i64) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let num = Self::from_bigint(q.numer(), p, prec + 64);
        let den = Self::from_bigint(q.denom(), p, prec + 64);
        let r = num.div(&den)?;
        Ok(r.truncate(prec))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo p^prec.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation; `None` for (indistinguishable-from-)zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Finite { val, .. } => Some(*val),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// The unit part as digits mod p^(prec - val); `None` for zero.
    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Finite { unit, .. } => Some(unit),
        }
    }

    /// Lift to the integer residue `p^val * unit mod p^k` for `k <= prec`.
    pub fn residue(&self, k: i64) -> BigUint {
        assert!(k <= self.prec, "requested more digits than are known");
        if k <= 0 {
            return BigUint::zero();
        }
        match &self.repr {
            Repr::Zero => BigUint::zero(),
            Repr::Finite { val, unit } => {
                if *val >= k {
                    BigUint::zero()
                } else if *val >= 0 {
                    (pow_p(self.p, *val) * unit) % pow_p(self.p, k)
                } else {
                    panic!("residue of a non-integral value requested");
                }
            }
        }
    }

    /// Lower the absolute precision to `prec` (never raises it).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        match &self.repr {
            Repr::Zero => Self::zero(self.p, prec),
            Repr::Finite { val, unit } => Self::normalize(self.p, prec, *val, unit.clone()),
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let prec = self.prec.min(other.prec);
        let (a, b) = (self, other);
        match (&a.repr, &b.repr) {
            (Repr::Zero, _) => Ok(b.truncate(prec)),
            (_, Repr::Zero) => Ok(a.truncate(prec)),
            (Repr::Finite { val: v1, unit: u1 }, Repr::Finite { val: v2, unit: u2 }) => {
                let v0 = (*v1).min(*v2);
                // shift both to valuation v0 and add magnitudes
                let m1 = pow_p(self.p, v1 - v0) * u1;
                let m2 = pow_p(self.p, v2 - v0) * u2;
                Ok(Self::normalize(self.p, prec, v0, m1 + m2))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Finite { val, unit } => {
                let modulus = pow_p(self.p, self.prec - val);
                let u = (&modulus - unit) % &modulus;
                Self::normalize(self.p, self.prec, *val, u)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => {
                // val lower bounds add; relative precision collapses to 0
                let vlb1 = self.valuation().unwrap_or(self.prec);
                let vlb2 = other.valuation().unwrap_or(other.prec);
                Ok(Self::zero(self.p, vlb1 + vlb2))
            }
            (Repr::Finite { val: v1, unit: u1 }, Repr::Finite { val: v2, unit: u2 }) => {
                let rel = (self.prec - v1).min(other.prec - v2);
                Ok(Self::normalize(self.p, v1 + v2 + rel, v1 + v2, u1 * u2))
            }
        }
    }

    /// Multiplicative inverse. Errors on (indistinguishable-from-)zero.
    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Finite { val, unit } => {
                let rel = self.prec - val;
                let modulus = pow_p(self.p, rel);
                let inv = mod_inverse(unit, &modulus).ok_or(Error::DivisionByZero)?;
                Ok(Self::normalize(self.p, -val + rel, -val, inv))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        self.mul(&other.inverse()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one(self.p, self.prec));
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc.unwrap())
    }

    /// Exact scaling by p^k (adjusts valuation and absolute precision by k).
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::zero(self.p, self.prec + k),
            Repr::Finite { val, unit } => PadicNumber {
                p: self.p,
                prec: self.prec + k,
                repr: Repr::Finite { val: val + k, unit: unit.clone() },
            },
        }
    }

    /// Equality modulo p^min(prec, prec'): the only meaningful comparison.
    pub fn eq_at_shared_precision(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Teichmüller representative: the (p-1)-th root of unity congruent to
    /// this unit mod p, by Frobenius iteration x <- x^p.
    pub fn teichmuller(&self) -> Result<Self> {
        match &self.repr {
            Repr::Finite { val: 0, .. } => {}
            _ => return Err(Error::NotAUnit),
        }
        let mut x = self.clone();
        for _ in 0..=(self.prec.max(1) as usize + 1) {
            let next = x.pow(self.p as i64)?;
            if next.eq_at_shared_precision(&x) {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }

    /// log of a 1-unit: x must be congruent to 1 mod p. Sums the series
    /// sum_{k>=1} (-1)^{k+1} z^k / k until the tail is below precision.
    fn log_one_unit(&self) -> Result<Self> {
        let z = self.sub(&Self::one(self.p, self.prec))?;
        if z.is_zero() {
            return Ok(Self::zero(self.p, self.prec));
        }
        let vz = z.valuation().unwrap();
        if vz < 1 {
            return Err(Error::NotAUnit);
        }
        let target = self.prec;
        let mut sum = Self::zero(self.p, self.prec);
        let mut zk = z.clone();
        let mut k: i64 = 1;
        loop {
            // val(z^k / k) >= k*vz - v_p(k); stop once that clears the target
            let vpk = {
                let mut v = 0;
                let mut kk = k;
                while kk % self.p as i64 == 0 {
                    v += 1;
                    kk /= self.p as i64;
                }
                v
            };
            if k * vz - vpk >= target {
                break;
            }
            let term = zk.div(&Self::from_i64(k, self.p, self.prec))?;
            sum = if k % 2 == 1 { sum.add(&term)? } else { sum.sub(&term)? };
            k += 1;
            zk = zk.mul(&z)?;
        }
        Ok(sum)
    }

    /// Branch logarithm: lambda(x) = e*L + log<x> for x = p^e * u,
    /// <x> = u / teichmuller(u).
    pub fn plog(&self, branch: &LogBranch) -> Result<Self> {
        let val = match &self.repr {
            Repr::Zero => return Err(Error::ZeroArgument),
            Repr::Finite { val, .. } => *val,
        };
        // unit part at its native relative precision
        let unit = self.shift(-val);
        let omega = unit.teichmuller()?;
        let principal = unit.div(&omega)?;
        let series = principal.log_one_unit()?;
        let e_term = branch.log_of_p().mul(&Self::from_i64(val, self.p, series.precision() + val.abs() + 1))?;
        series.add(&e_term)
    }

    /// Serialize as "v:<val>;d:<digits little-endian, dot separated>;N:<prec>".
    pub fn encode(&self) -> String {
        match &self.repr {
            Repr::Zero => format!("v:inf;d:;N:{}", self.prec),
            Repr::Finite { val, unit } => {
                let mut digits = Vec::new();
                let mut u = unit.clone();
                let pb = BigUint::from(self.p);
                for _ in 0..(self.prec - val) {
                    digits.push((&u % &pb).to_u64().unwrap().to_string());
                    u /= &pb;
                }
                format!("v:{};d:{};N:{}", val, digits.join("."), self.prec)
            }
        }
    }

    /// Exact inverse of [`PadicNumber::encode`].
    pub fn decode(s: &str, p: u64) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::SchemaError(format!("bad p-adic encoding: {s}")));
        }
        let val_s = parts[0]
            .strip_prefix("v:")
            .ok_or_else(|| Error::SchemaError(format!("bad p-adic encoding: {s}")))?;
        let d_s = parts[1]
            .strip_prefix("d:")
            .ok_or_else(|| Error::SchemaError(format!("bad p-adic encoding: {s}")))?;
        let n_s = parts[2]
            .strip_prefix("N:")
            .ok_or_else(|| Error::SchemaError(format!("bad p-adic encoding: {s}")))?;
        let prec: i64 = n_s
            .parse()
            .map_err(|_| Error::SchemaError(format!("bad precision in: {s}")))?;
        if val_s == "inf" {
            return Ok(Self::zero(p, prec));
        }
        let val: i64 = val_s
            .parse()
            .map_err(|_| Error::SchemaError(format!("bad valuation in: {s}")))?;
        let mut unit = BigUint::zero();
        let pb = BigUint::from(p);
        for d in d_s.split('.').rev() {
            if d.is_empty() {
                continue;
            }
            let dv: u64 = d
                .parse()
                .map_err(|_| Error::SchemaError(format!("bad digit in: {s}")))?;
            if dv >= p {
                return Err(Error::SchemaError(format!("digit {dv} out of range for p={p}")));
            }
            unit = unit * &pb + BigUint::from(dv);
        }
        Ok(Self::normalize(p, prec, val, unit))
    }
}

impl std::fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// A branch of the p-adic logarithm, fixed by the value L = lambda(p).
/// L = 0 is the Iwasawa branch.
#[derive(Debug, Clone)]
pub struct LogBranch {
    log_of_p: PadicNumber,
}

impl LogBranch {
    pub fn new(log_of_p: PadicNumber) -> Self {
        LogBranch { log_of_p }
    }

    pub fn iwasawa(p: u64, prec: i64) -> Self {
        LogBranch { log_of_p: PadicNumber::zero(p, prec) }
    }

    pub fn log_of_p(&self) -> &PadicNumber {
        &self.log_of_p
    }

    pub fn is_iwasawa(&self) -> bool {
        self.log_of_p.is_zero()
    }
}

/// Validate the global prime convention: p must be an odd prime.
pub fn check_prime_config(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::SchemaError(format!("p = {p} rejected: p must be an odd prime")));
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return Err(Error::SchemaError(format!("p = {p} rejected: not prime")));
        }
        d += 2;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: i64, p: u64, prec: i64) -> PadicNumber {
        PadicNumber::from_i64(x, p, prec)
    }

    #[test]
    fn add_basic() {
        // (p=5, N=6): 2 + 3 -> 5 = unit 1 at val 1
        let s = n(2, 5, 6).add(&n(3, 5, 6)).unwrap();
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.unit_part().unwrap(), &BigUint::from(1u32));
    }

    #[test]
    fn inverse_cancellation() {
        // (1/5)*5 -> 1 (at one digit less)
        let fifth = n(1, 5, 6).div(&n(5, 5, 6)).unwrap();
        assert_eq!(fifth.valuation(), Some(-1));
        assert_eq!(fifth.precision(), 4);
        let one = fifth.mul(&n(5, 5, 6)).unwrap();
        assert!(one.eq_at_shared_precision(&n(1, 5, 6)));
        assert_eq!(one.precision(), 5);
    }

    #[test]
    fn seven_inverse_matches_euclid_oracle() {
        // oracle: extended Euclid on integers, r with 7r = 1 mod 5^8
        let m: u64 = 5u64.pow(8);
        let mut r: u64 = 0;
        for cand in 0..m {
            if (7 * cand) % m == 1 {
                r = cand;
                break;
            }
        }
        let inv = n(7, 5, 8).inverse().unwrap();
        assert_eq!(inv.residue(8), BigUint::from(r));
    }

    #[test]
    fn division_lowers_precision() {
        let x = n(7, 5, 8);
        let y = n(25, 5, 8); // val 2
        let q = x.div(&y).unwrap();
        assert_eq!(q.precision(), 4); // -2 + min(8, 6)
        assert_eq!(q.valuation(), Some(-2));
    }

    #[test]
    fn teichmuller_trivial_and_minus_one() {
        assert!(n(1, 5, 8).teichmuller().unwrap().eq_at_shared_precision(&n(1, 5, 8)));
        // p=7: u=6 -> -1
        let t = n(6, 7, 8).teichmuller().unwrap();
        assert!(t.eq_at_shared_precision(&n(-1, 7, 8)));
    }

    #[test]
    fn teichmuller_p5_u2_frozen_digits() {
        // iterate x <- x^5 from 2 until stable mod 5^4: 2 + 1*5 + 2*25 + 1*125 = 182
        let t = n(2, 5, 4).teichmuller().unwrap();
        assert_eq!(t.residue(4), BigUint::from(182u32));
    }

    #[test]
    fn teichmuller_power_identity() {
        for u in [2i64, 3, 4, 6, 7, 8] {
            let t = n(u, 5, 12).teichmuller().unwrap();
            assert!(t.pow(4).unwrap().eq_at_shared_precision(&n(1, 5, 12)));
        }
    }

    #[test]
    fn plog_basics() {
        let br = LogBranch::iwasawa(5, 10);
        assert!(n(1, 5, 10).plog(&br).unwrap().is_zero());
        // lambda(p) = L by definition of the branch
        let l = PadicNumber::from_i64(3, 5, 10);
        let br2 = LogBranch::new(l.clone());
        assert!(n(5, 5, 10).plog(&br2).unwrap().eq_at_shared_precision(&l));
    }

    #[test]
    fn plog_6_matches_direct_series() {
        // <6> = 6, so lambda(6) = 5 - 5^2/2 + 5^3/3 - ... truncated
        let prec = 10;
        let br = LogBranch::iwasawa(5, prec);
        let got = n(6, 5, prec).plog(&br).unwrap();
        let mut expect = PadicNumber::zero(5, prec);
        let five = n(5, 5, prec + 4);
        let mut term = five.clone();
        for k in 1..30i64 {
            let t = term.div(&n(k, 5, prec + 4)).unwrap();
            expect = if k % 2 == 1 { expect.add(&t).unwrap() } else { expect.sub(&t).unwrap() };
            term = term.mul(&five).unwrap();
        }
        assert!(got.eq_at_shared_precision(&expect));
    }

    #[test]
    fn plog_unit_lands_in_pzp() {
        let br = LogBranch::iwasawa(5, 12);
        for u in [2i64, 3, 4, 6, 7, 11, 13] {
            let l = n(u, 5, 12).plog(&br).unwrap();
            assert!(l.is_zero() || l.valuation().unwrap() >= 1);
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        let x = n(7, 5, 8).div(&n(25, 5, 8)).unwrap();
        let s = x.encode();
        let y = PadicNumber::decode(&s, 5).unwrap();
        assert_eq!(x, y);
        let z = PadicNumber::zero(5, 9);
        assert_eq!(PadicNumber::decode(&z.encode(), 5).unwrap(), z);
    }

    #[test]
    fn precision_monotone() {
        // recomputing at higher N agrees on shared digits
        let br12 = LogBranch::iwasawa(5, 12);
        let br20 = LogBranch::iwasawa(5, 20);
        let a = n(6, 5, 12).plog(&br12).unwrap();
        let b = n(6, 5, 20).plog(&br20).unwrap();
        assert!(a.eq_at_shared_precision(&b));
    }

    #[test]
    fn p2_rejected() {
        assert!(check_prime_config(2).is_err());
        assert!(check_prime_config(9).is_err());
        assert!(check_prime_config(5).is_ok());
        assert!(check_prime_config(997).is_ok());
    }
}
