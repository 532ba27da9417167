use crate::arith::alpha;
use crate::error::{Error, Result};
use crate::galois::{GaloisRep, Lambda};
use crate::padic::{HalfInt, PadicElement};

use super::branch::lambda_value;
use super::params::compute_c;

/// Whether `(k, v)` is one of the tabulated small-weight cases.
pub fn in_breuil_table(p: i64, k: i64, v: HalfInt) -> bool {
    let t = v.twice();
    (k == p + 2 && t == 1)
        || (k == p + 3 && t == 2)
        || (k == p + 4 && t == 3)
        || (k == p + 5 && t == 4)
        || (k == 2 * p + 1 && t == 1)
}

/// Known reductions at the weights `p+2, ..., p+5` and `2p+1`, each for a
/// single slope.
pub fn breuil_weight_reduction(k: i64, a_p: &PadicElement) -> Result<GaloisRep> {
    let ctx = a_p.context();
    let field = ctx.field();
    let p = ctx.p() as i64;
    if a_p.is_zero_to_precision() {
        return Err(Error::ZeroAp);
    }
    let v = a_p.finite_valuation()?;
    if !in_breuil_table(p, k, v) {
        return Err(Error::NotInTable(k, v.to_string()));
    }
    if k == p + 3 {
        let lambda = a_p
            .mul_int(2)?
            .div(&PadicElement::from_int(ctx, p))?
            .residue()?;
        return Ok(GaloisRep::reducible_pair(field, Lambda::Known(lambda), 2, 1));
    }
    if k == 2 * p + 1 {
        // Reducible exactly when v(a_p^2 + p) >= 3/2.
        let s = a_p.mul(a_p)?.add(&PadicElement::from_int(ctx, p))?;
        let bound = HalfInt::from_twice(3);
        let reducible = match s.valuation_at_least(bound) {
            Some(x) => x,
            None => {
                return Err(Error::PrecisionExhausted(format!(
                    "cannot decide v(a_p^2 + p) >= 3/2 from {s}"
                )))
            }
        };
        if !reducible {
            return Ok(GaloisRep::induced(field, 2));
        }
        let r = k - 2;
        let c = compute_c(p, r, a_p, v)?;
        let lambda = lambda_value(1, 1, r, &c)?;
        return Ok(GaloisRep::reducible_pair(field, lambda, 1, 1));
    }
    let c = match k - p {
        2 => 2,
        4 => p + 3,
        _ => p + 4,
    };
    Ok(GaloisRep::induced(field, c))
}

/// The hypothesis `k > 3v + alpha(k-1) + 1` of local constancy, evaluated
/// exactly.
pub fn berger_bound_holds(p: i64, k: i64, v: HalfInt) -> bool {
    let a = alpha((k - 1).max(0) as u64, p as u64) as i64;
    2 * k > 3 * v.twice() + 2 * a + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    #[test]
    fn bound_examples() {
        assert!(!berger_bound_holds(5, 4, HalfInt::from_int(1)));
        assert!(berger_bound_holds(5, 11, HalfInt::from_twice(1)));
        assert!(berger_bound_holds(7, 11, HalfInt::from_twice(3)));
    }

    #[test]
    fn table_examples() {
        let ctx = PadicContext::with_defaults(7).unwrap();
        let f = ctx.field();
        let u = PadicElement::teichmuller(&ctx, f.unit_symbol());
        let a = u.mul_int(7).unwrap();
        let rep = breuil_weight_reduction(10, &a).unwrap();
        let two_u = f.mul(f.from_int(2), f.unit_symbol());
        assert_eq!(rep, GaloisRep::reducible_pair(f, Lambda::Known(two_u), 2, 1));

        let a = u.mul_int(49).unwrap();
        assert_eq!(breuil_weight_reduction(12, &a).unwrap(), GaloisRep::induced(f, 11));
        assert!(matches!(breuil_weight_reduction(13, &a), Err(Error::NotInTable(13, _))));
    }

    #[test]
    fn weight_two_p_plus_one() {
        let ctx = PadicContext::with_defaults(5).unwrap();
        let a = PadicElement::pi(&ctx).mul_int(2).unwrap();
        let rep = breuil_weight_reduction(11, &a).unwrap();
        assert!(matches!(rep, GaloisRep::Reducible { .. }));
        assert_eq!(rep.inertia_exponents(), [6, 6]);
        let a = PadicElement::pi(&ctx);
        assert_eq!(breuil_weight_reduction(11, &a).unwrap(), GaloisRep::induced(ctx.field(), 2));
    }
}
