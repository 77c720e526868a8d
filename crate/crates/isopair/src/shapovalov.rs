//! Shapovalov weights on the Verma module.
//!
//! The inner product making raising and lowering operators mutually
//! adjoint is fixed by the recurrence w(n+1) = (n+1)(n+2h) w(n), w(0)=1,
//! i.e. w(n) = n! (2h)_n. Raw weights are not rational in n, but every
//! ratio w(n+s)/w(n) is, and only ratios enter exact computations.

use crate::exact::{rat, Rat, RatFunc};
use num_traits::One;

/// w(n+s)/w(n) as an exact rational function of (n, h).
///
/// For s >= 0 this is prod_{j=1..s} (n+j)(n+2h+j-1); for s < 0 the
/// reciprocal of the shifted product.
pub fn weight_ratio(s: i64) -> RatFunc {
    if s == 0 {
        return RatFunc::one();
    }
    if s > 0 {
        let mut acc = RatFunc::one();
        for j in 1..=s {
            acc = acc.mul(&linear(0, j)).mul(&linear(2, j - 1));
        }
        acc
    } else {
        // w(n+s)/w(n) = 1 / (w((n+s) + |s|) / w(n+s))
        let pos = weight_ratio(-s).shift_n(s);
        RatFunc::one().div(&pos).expect("weight ratio is nonzero")
    }
}

/// n + c (h_mult = 0) or n + h_mult*h + c.
fn linear(h_mult: i64, c: i64) -> RatFunc {
    let mut f = RatFunc::var_n();
    if h_mult != 0 {
        f = f.add(&RatFunc::var_h().scale(&rat(h_mult)));
    }
    if c != 0 {
        f = f.add(&RatFunc::constant(rat(c)));
    }
    f
}

/// Exact weight value w(m) = m! (2h)_m at numeric h; used by oracles.
pub fn weight_value(m: u32, h: &Rat) -> Rat {
    let mut acc = Rat::one();
    let two_h = h + h;
    for j in 0..m {
        acc *= rat(j as i64 + 1);
        acc *= &two_h + rat(j as i64);
    }
    acc
}
