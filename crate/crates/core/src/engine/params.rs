use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{binomial, valuation_i64};
use crate::error::{Error, Result};
use crate::padic::{HalfInt, PadicContext, PadicElement, Valuation};

/// The data that decides which case of the chotomy applies.
#[derive(Debug, Clone)]
pub struct ZigzagParams {
    pub p: i64,
    pub k: i64,
    pub r: i64,
    pub v: HalfInt,
    /// `b = 2v`.
    pub b: i64,
    /// `b = 2n - 1` or `b = 2n`.
    pub n: i64,
    pub v_minus: i64,
    pub v_plus: i64,
    pub c: PadicElement,
    pub tau: Valuation,
    pub t: Valuation,
    pub exceptional: bool,
}

impl ZigzagParams {
    /// Lower bound for `tau` implied by the precision of `c`; equals `tau`
    /// when `c` is nonzero to precision.
    pub fn tau_lower_bound(&self) -> HalfInt {
        match self.tau {
            Valuation::Finite(h) => h,
            Valuation::Infinite => self.c.absolute_precision(),
        }
    }
}

fn check_slope(p: i64, v: HalfInt) -> Result<()> {
    if v <= HalfInt::ZERO || v.twice() > p - 1 {
        return Err(Error::SlopeOutOfRange(format!(
            "{v} not in (0, (p-1)/2] for p = {p}"
        )));
    }
    Ok(())
}

/// Whether `r = k - 2` lies in the exceptional class `b = 2v` modulo `p - 1`.
pub fn exceptional_class(p: i64, k: i64, v: HalfInt) -> Result<(bool, i64)> {
    check_slope(p, v)?;
    let b = v.twice();
    Ok(((k - 2 - b).rem_euclid(p - 1) == 0, b))
}

/// `v_-` and `v_+`: the largest and smallest integers different from `v`
/// on either side of it.
pub fn v_bounds(v: HalfInt) -> (i64, i64) {
    if v.is_integral() {
        (v.floor() - 1, v.floor() + 1)
    } else {
        (v.floor(), v.ceil())
    }
}

/// Binomial coefficient allowing a negative top (returning zero there).
fn binom(n: i64, j: i64) -> BigInt {
    if n < 0 || j < 0 {
        return BigInt::from(0);
    }
    binomial(n as u64, j as u64)
}

/// `c = (a_p^2 - C(r - v_-, v_+) C(r - v_+, v_-) p^b) / (p a_p)`.
pub fn compute_c(p: i64, r: i64, a_p: &PadicElement, v: HalfInt) -> Result<PadicElement> {
    check_slope(p, v)?;
    if a_p.is_zero_to_precision() {
        return Err(Error::ZeroAp);
    }
    let ctx = a_p.context();
    let b = v.twice();
    let (vm, vp) = v_bounds(v);
    let coeff = binom(r - vm, vp) * binom(r - vp, vm) * BigInt::from(p).pow(b as u32);
    let num = a_p.mul(a_p)?.sub(&PadicElement::from_bigint(ctx, &coeff))?;
    num.div(&a_p.mul_int(p)?)
}

pub fn zigzag_params(k: i64, a_p: &PadicElement) -> Result<ZigzagParams> {
    let ctx: &Arc<PadicContext> = a_p.context();
    let p = ctx.p() as i64;
    if k < 2 {
        return Err(Error::InvalidWeight(k));
    }
    if a_p.is_zero_to_precision() {
        return Err(Error::ZeroAp);
    }
    let v = a_p.finite_valuation()?;
    let (exceptional, b) = exceptional_class(p, k, v)?;
    let r = k - 2;
    if r < b {
        return Err(Error::InvalidInput(format!("weight r = {r} is below b = {b}")));
    }
    let (v_minus, v_plus) = v_bounds(v);
    let c = compute_c(p, r, a_p, v)?;
    let t = match valuation_i64(r - b, p as u64) {
        Some(t) => Valuation::Finite(HalfInt::from_int(t as i64)),
        None => Valuation::Infinite,
    };
    Ok(ZigzagParams {
        p,
        k,
        r,
        v,
        b,
        n: (b + 1) / 2,
        v_minus,
        v_plus,
        tau: c.valuation(),
        c,
        t,
        exceptional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> Arc<PadicContext> {
        PadicContext::with_defaults(p).unwrap()
    }

    #[test]
    fn exceptional_examples() {
        assert_eq!(exceptional_class(5, 24, HalfInt::from_int(1)).unwrap(), (true, 2));
        assert_eq!(exceptional_class(7, 11, HalfInt::from_twice(3)).unwrap(), (true, 3));
        assert_eq!(exceptional_class(7, 10, HalfInt::from_twice(3)).unwrap(), (false, 3));
        assert!(matches!(
            exceptional_class(5, 10, HalfInt::from_twice(5)),
            Err(Error::SlopeOutOfRange(_))
        ));
    }

    #[test]
    fn bounds_straddle_v() {
        assert_eq!(v_bounds(HalfInt::from_twice(1)), (0, 1));
        assert_eq!(v_bounds(HalfInt::from_int(1)), (0, 2));
        assert_eq!(v_bounds(HalfInt::from_twice(3)), (1, 2));
        assert_eq!(v_bounds(HalfInt::from_int(2)), (1, 3));
    }

    #[test]
    fn c_for_slope_one() {
        let c5 = ctx(5);
        let a = PadicElement::from_int(&c5, 5);
        let c = compute_c(5, 22, &a, HalfInt::from_int(1)).unwrap();
        assert_eq!(c.to_integer_mod(), Some(BigInt::from(-230)));
    }

    #[test]
    fn params_examples() {
        let c5 = ctx(5);
        let z = zigzag_params(24, &PadicElement::from_int(&c5, 5)).unwrap();
        assert_eq!((z.b, z.tau, z.t), (2, Valuation::Finite(HalfInt::from_int(1)), Valuation::Finite(HalfInt::from_int(1))));

        let c7 = ctx(7);
        let z = zigzag_params(11, &PadicElement::pi_power(&c7, 3)).unwrap();
        assert_eq!(z.b, 3);
        assert_eq!(z.tau, Valuation::Finite(HalfInt::from_twice(1)));
        assert_eq!(z.t, Valuation::Finite(HalfInt::ZERO));

        let w = PadicElement::from_coordinates(&c5, 3, &[1], &[1]);
        let z = zigzag_params(21, &w).unwrap();
        assert_eq!(z.tau, Valuation::Finite(HalfInt::from_int(1)));
        assert_eq!(z.t, Valuation::Finite(HalfInt::ZERO));
        assert!(z.exceptional);
    }

    #[test]
    fn degenerate_t() {
        let c5 = ctx(5);
        let z = zigzag_params(5, &PadicElement::pi_power(&c5, 3).mul_int(2).unwrap()).unwrap();
        assert_eq!(z.t, Valuation::Infinite);
        assert!(z.tau.finite().is_some());
    }
}
