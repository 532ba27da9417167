use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ResidueField;
use crate::galois::{GaloisRep, Lambda};
use crate::padic::{HalfInt, PadicElement, Valuation};

use super::params::ZigzagParams;

/// A case of the chotomy. `Irreducible(j)` is `ind(w2^{b+1+j(p-1)})`;
/// `Reducible(j)` is `mu_l w^{b-j+1} (+) mu_{1/l} w^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Irreducible(i64),
    Reducible(i64),
}

impl Branch {
    pub fn is_reducible(self) -> bool {
        matches!(self, Branch::Reducible(_))
    }

    pub fn index(self) -> i64 {
        match self {
            Branch::Irreducible(j) | Branch::Reducible(j) => j,
        }
    }

    /// All `b + 1` cases in increasing order of `tau`.
    pub fn all(b: i64) -> Vec<Branch> {
        let n = (b + 1) / 2;
        let mut out = vec![Branch::Irreducible(0)];
        for j in 1..=n {
            out.push(Branch::Reducible(j));
            if j < n || b % 2 == 0 {
                out.push(Branch::Irreducible(j));
            }
        }
        out
    }

    /// A value of `tau - t` inside the region of this case.
    pub fn sample_offset(self, b: i64) -> HalfInt {
        match self {
            Branch::Irreducible(0) => HalfInt::from_twice(-1),
            Branch::Reducible(j) => HalfInt::from_int(j - 1),
            Branch::Irreducible(j) => {
                if b % 2 == 0 && j == b / 2 {
                    HalfInt::from_int(j)
                } else {
                    HalfInt::from_twice(2 * j - 1)
                }
            }
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Irreducible(j) => write!(f, "IRRED({j})"),
            Branch::Reducible(j) => write!(f, "RED({j})"),
        }
    }
}

/// Locates `tau` relative to the boundaries `t, t+1, ..., t+(n-1)`.
pub fn zigzag_branch(b: i64, tau: Valuation, t: Valuation) -> Result<Branch> {
    let Valuation::Finite(t) = t else {
        return Err(Error::DegenerateT);
    };
    let n = (b + 1) / 2;
    let odd = b % 2 == 1;
    let Valuation::Finite(tau) = tau else {
        return Ok(if odd { Branch::Reducible(n) } else { Branch::Irreducible(n) });
    };
    let d = tau - t;
    let last = HalfInt::from_int(n - 1);
    if d < HalfInt::ZERO {
        return Ok(Branch::Irreducible(0));
    }
    if odd && d >= last {
        return Ok(Branch::Reducible(n));
    }
    if !odd && d > last {
        return Ok(Branch::Irreducible(n));
    }
    if d.is_integral() {
        Ok(Branch::Reducible(d.floor() + 1))
    } else {
        Ok(Branch::Irreducible(d.floor() + 1))
    }
}

/// The branch for computed parameters. When `c` vanishes to the working
/// precision the branch is decided only if the lower bound on `tau`
/// already lies in the last region.
pub fn branch_of(z: &ZigzagParams) -> Result<Branch> {
    if z.tau.is_infinite() {
        let Valuation::Finite(t) = z.t else {
            return Err(Error::DegenerateT);
        };
        let lower = z.tau_lower_bound() - t;
        let last = HalfInt::from_int(z.n - 1);
        let decided = if z.b % 2 == 1 { lower >= last } else { lower > last };
        if !decided {
            return Err(Error::PrecisionExhausted(format!(
                "c = {} does not separate the cases; raise the precision",
                z.c
            )));
        }
    }
    zigzag_branch(z.b, z.tau, z.t)
}

/// The representation attached to a case, with the unramified value of the
/// first summand for reducible cases.
pub fn branch_rep(field: &ResidueField, b: i64, branch: Branch, lambda: Lambda) -> GaloisRep {
    let p = field.p() as i64;
    match branch {
        Branch::Irreducible(j) => GaloisRep::induced(field, b + 1 + j * (p - 1)),
        Branch::Reducible(j) => GaloisRep::reducible_pair(field, lambda, b - j + 1, j),
    }
}

fn scaled_residue(c: &PadicElement, factor: BigRational, pi_shift: i64) -> Result<crate::field::Fq> {
    let ctx = c.context();
    let x = c
        .mul(&PadicElement::from_rational(ctx, &factor)?)?
        .mul(&PadicElement::pi_power(ctx, -pi_shift))?;
    x.residue()
}

fn from_trace(field: &ResidueField, d: crate::field::Fq) -> Lambda {
    match field.reciprocal_roots(d) {
        Some((l, _)) => Lambda::Known(l),
        None => Lambda::Root { trace: d, inverse: false },
    }
}

/// The unramified value `lambda_i` in case `Reducible(i)`: known exactly
/// for `i = 1` and for `i = 2` when `b = 3`, symbolic otherwise. When `b`
/// is odd and `i = n`, the formula gives `lambda + 1/lambda` and one root
/// is returned.
pub fn lambda_value(i: i64, b: i64, r: i64, c: &PadicElement) -> Result<Lambda> {
    let field = c.context().field();
    if r == b {
        return Err(Error::DegenerateT);
    }
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match (i, b) {
        (1, 1) => Ok(from_trace(field, scaled_residue(c, q(1, 1 - r), 0)?)),
        (1, _) => {
            let x = scaled_residue(c, q(b, b - r), 0)?;
            if x == field.zero() {
                return Err(Error::InvalidInput("lambda_1 reduces to zero".into()));
            }
            Ok(Lambda::Known(x))
        }
        (2, 3) => {
            let d = scaled_residue(c, q(b - 1, (b - 1 - r) * (b - r)), 2)?;
            Ok(from_trace(field, d))
        }
        _ => Ok(Lambda::unknown(i as u32)),
    }
}

/// Branch and representation predicted by the chotomy.
pub fn chotomy(z: &ZigzagParams) -> Result<(Branch, GaloisRep)> {
    let branch = branch_of(z)?;
    let field = z.c.context().field();
    let lambda = match branch {
        Branch::Reducible(i) => lambda_value(i, z.b, z.r, &z.c)?,
        Branch::Irreducible(_) => Lambda::Known(field.one()),
    };
    Ok((branch, branch_rep(field, z.b, branch, lambda)))
}
