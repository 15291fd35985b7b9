//! Seeded sampling of p-adic values for randomized checks. Every sampled
//! check in the crate takes an explicit seed so reports are reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::padic::PadicNumber;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero scalar with valuation in [-2, 2].
pub fn nonzero(r: &mut ChaCha8Rng, p: u64, prec: i64) -> PadicNumber {
    let val: i64 = r.gen_range(-2..=2);
    unit(r, p, prec).shift(val)
}

/// A random unit (valuation 0).
pub fn unit(r: &mut ChaCha8Rng, p: u64, prec: i64) -> PadicNumber {
    loop {
        let mut x = PadicNumber::zero(p, prec);
        let mut pk = PadicNumber::one(p, prec + 2);
        for _ in 0..prec.max(1) {
            let digit = r.gen_range(0..p);
            x = x
                .add(&pk.mul(&PadicNumber::from_i64(digit as i64, p, prec + 2)).unwrap())
                .unwrap();
            pk = pk.mul(&PadicNumber::from_i64(p as i64, p, prec + 2)).unwrap();
        }
        if let Some(0) = x.valuation() {
            return x;
        }
    }
}

/// A random 1-unit (congruent to 1 mod p).
pub fn one_unit(r: &mut ChaCha8Rng, p: u64, prec: i64) -> PadicNumber {
    let u = unit(r, p, prec);
    PadicNumber::one(p, prec).add(&u.shift(1)).unwrap()
}

/// A random small integer in [-bound, bound] \ {0}.
pub fn small_nonzero_int(r: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let x = r.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}
