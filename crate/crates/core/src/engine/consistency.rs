//! Cross-checks between the chotomy and other known results: local
//! constancy in the weight, the large-slope theorem, the theta twist and the
//! irreducibility prediction.

use std::fmt;

use serde::Serialize;

use crate::arith::binomial_valuation;
use crate::error::{Error, Result};
use crate::field::ResidueField;
use crate::galois::{GaloisRep, Lambda};
use crate::padic::{HalfInt, PadicContext, PadicElement, Valuation};

use super::branch::{branch_rep, zigzag_branch, Branch};
use super::breuil::berger_bound_holds;
use super::params::{v_bounds, zigzag_params};
use super::regime::{predict, EngineConfig, Prediction, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Compatible,
    Conflict,
    Undecided,
    Consistent,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Compatible => "COMPATIBLE",
            Verdict::Conflict => "CONFLICT",
            Verdict::Undecided => "UNDECIDED",
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct LocalConstancyReport {
    pub k: i64,
    pub k_prime: i64,
    pub base: Prediction,
    pub nearby: Prediction,
    pub bound_holds: bool,
    pub verdict: Verdict,
}

/// Compares the answer at `k` with the answer at `k' = k + p^t' (p-1)`.
pub fn local_constancy_conflict(
    k: i64,
    a_p: &PadicElement,
    t_prime: u32,
    config: &EngineConfig,
) -> Result<LocalConstancyReport> {
    let p = a_p.context().p() as i64;
    let base = predict(k, a_p, config)?;
    if base.rep.is_none() {
        return Err(Error::InvalidInput(format!(
            "no explicit answer at k = {k} ({})",
            base.provenance
        )));
    }
    let k_prime = k + p.pow(t_prime) * (p - 1);
    let nearby = predict(k_prime, a_p, config)?;
    let verdict = match (&base.rep, &nearby.rep) {
        (Some(x), Some(y)) => {
            if config.strict && nearby.provenance == Provenance::ConjectureZigzag {
                Verdict::Undecided
            } else if x.equals_on_inertia(y) {
                Verdict::Compatible
            } else {
                Verdict::Conflict
            }
        }
        _ => Verdict::Undecided,
    };
    let bound_holds = berger_bound_holds(p, k, a_p.finite_valuation()?);
    Ok(LocalConstancyReport { k, k_prime, base, nearby, bound_holds, verdict })
}

/// Whether `r` lies near a small weight `b + m(p-1)` with `0 < m <= v - 1`,
/// i.e. `r = b + m(p-1)` modulo `p^s0 (p-1)`; returns the offending `m`.
pub fn caveat_zone(p: i64, r: i64, v: HalfInt, s0: u32) -> (bool, Option<i64>) {
    let b = v.twice();
    if (r - b).rem_euclid(p - 1) != 0 {
        return (false, None);
    }
    let m = ((r - b) / (p - 1)).rem_euclid(p.pow(s0));
    if m > 0 && HalfInt::from_int(m) <= v - HalfInt::from_int(1) {
        (true, Some(m))
    } else {
        (false, None)
    }
}

#[derive(Debug, Clone)]
pub struct BlzReport {
    pub p: i64,
    pub b: i64,
    pub m: i64,
    pub r: i64,
    pub v: HalfInt,
    pub tau: Valuation,
    pub t: Valuation,
    /// `p | C(r - v_+, v_-)`.
    pub kummer_divides: bool,
    pub zigzag: GaloisRep,
    pub blz: GaloisRep,
    pub verdict: Verdict,
}

/// Compares the chotomy at `r = b + m(p-1)`, `a_p = p^v`, `v = b/2`, with
/// the large-slope answer `ind(w2^{r+1})`.
pub fn blz_consistency(p: i64, b: i64, m: i64) -> Result<BlzReport> {
    if b == p - 1 {
        return Err(Error::BoundaryCase);
    }
    if b < 1 || b > p - 1 {
        return Err(Error::SlopeOutOfRange(format!("b = {b}")));
    }
    if m <= 0 || m % p == 0 {
        return Err(Error::InvalidInput(format!("m = {m} must be positive and prime to p")));
    }
    let v = HalfInt::from_twice(b);
    let r = b + m * (p - 1);
    let ctx = PadicContext::new(p as u64, 2, 12)?;
    let a_p = PadicElement::pi_power(&ctx, b);
    let z = zigzag_params(r + 2, &a_p)?;
    let branch = super::branch::branch_of(&z)?;
    let zigzag = branch_rep(ctx.field(), b, branch, Lambda::unknown(branch.index() as u32));
    let blz = GaloisRep::induced(ctx.field(), r + 1);
    let (vm, vp) = v_bounds(v);
    let kummer_divides = binomial_valuation((r - vp) as u64, vm as u64, p as u64) > 0;
    let verdict = if zigzag.equals_on_inertia(&blz) {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(BlzReport {
        p,
        b,
        m,
        r,
        v,
        tau: z.tau,
        t: z.t,
        kummer_divides,
        zigzag,
        blz,
        verdict,
    })
}

/// The twist relation between slopes `v` and `v + 1` for the generic
/// parameters `t = 0`, `tau = v - 1` and `tau' = v`: the second answer is
/// the first twisted by `w`. The larger slope is evaluated formally, so it
/// may exceed `(p-1)/2`.
pub fn theta_compatibility(p: i64, v: HalfInt) -> Result<bool> {
    let b = v.twice();
    if b < 1 || b > p - 1 {
        return Err(Error::SlopeOutOfRange(format!("{v} for p = {p}")));
    }
    let field = ResidueField::new(p as u64, 1)?;
    let t = Valuation::Finite(HalfInt::ZERO);
    let one = HalfInt::from_int(1);
    let first = zigzag_branch(b, Valuation::Finite(v - one), t)?;
    let second = zigzag_branch(b + 2, Valuation::Finite(v), t)?;
    let rep1 = branch_rep(&field, b, first, Lambda::unknown(first.index() as u32));
    let rep2 = branch_rep(&field, b + 2, second, Lambda::unknown(second.index() as u32));
    Ok(rep1.twist_by_omega(1).equals_on_inertia(&rep2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub k: i64,
    pub v: HalfInt,
    pub branch: Option<Branch>,
    pub rep: String,
}

/// Looks for reducible answers with `k` even and `v` not an integer, over
/// every branch of the chotomy and the regime answer at `a_p = p^v`.
pub fn irreducibility_conjecture_scan(
    p: i64,
    weights: std::ops::RangeInclusive<i64>,
    slopes: &[HalfInt],
) -> Result<Vec<Violation>> {
    let ctx = PadicContext::new(p as u64, 2, 12)?;
    let field = ctx.field();
    let config = EngineConfig::default();
    let mut out = Vec::new();
    for k in weights {
        if k % 2 != 0 {
            continue;
        }
        for &v in slopes {
            if v.is_integral() || v <= HalfInt::ZERO {
                continue;
            }
            let b = v.twice();
            if b <= p - 1 && (k - 2 - b).rem_euclid(p - 1) == 0 {
                for branch in Branch::all(b) {
                    let rep = branch_rep(field, b, branch, Lambda::unknown(branch.index() as u32));
                    if !rep.is_irreducible_label()? {
                        out.push(Violation { k, v, branch: Some(branch), rep: rep.to_string() });
                    }
                }
            }
            let a_p = PadicElement::pi_power(&ctx, b);
            if let Ok(pred) = predict(k, &a_p, &config) {
                if let Some(rep) = pred.rep {
                    if !rep.is_irreducible_label()? {
                        out.push(Violation { k, v, branch: pred.branch, rep: rep.to_string() });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caveat_examples() {
        assert_eq!(caveat_zone(5, 8, HalfInt::from_int(2), 1), (true, Some(1)));
        assert_eq!(caveat_zone(5, 19, HalfInt::from_twice(3), 1), (false, None));
        assert_eq!(caveat_zone(5, 28, HalfInt::from_int(2), 1), (true, Some(1)));
        for r in 0..200 {
            for twice in 1..4 {
                assert!(!caveat_zone(7, r, HalfInt::from_twice(twice), 2).0);
            }
        }
    }

    #[test]
    fn blz_examples() {
        let rep = blz_consistency(7, 3, 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
        assert_eq!(rep.tau, Valuation::Finite(HalfInt::from_twice(1)));
        assert!(rep.kummer_divides);
        let rep = blz_consistency(7, 4, 1).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconsistent);
        assert_eq!(rep.tau, Valuation::Finite(HalfInt::from_int(1)));
        assert_eq!(blz_consistency(11, 5, 2).unwrap().verdict, Verdict::Consistent);
        assert!(matches!(blz_consistency(7, 6, 2), Err(Error::BoundaryCase)));
    }

    #[test]
    fn local_constancy_examples() {
        let cfg = EngineConfig::default();
        let ctx = PadicContext::with_defaults(5).unwrap();
        let r = local_constancy_conflict(4, &PadicElement::from_int(&ctx, 5), 2, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Conflict);
        assert!(!r.bound_holds);
        // At p = 5 the extra factor 5 in N^2 + 4N + 5 pushes tau' to t' + 3/2.
        let r = local_constancy_conflict(5, &PadicElement::pi_power(&ctx, 3), 2, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Conflict);
        assert_eq!(r.nearby.tau, Some(Valuation::Finite(HalfInt::from_twice(7))));
        assert_eq!(r.nearby.rep.unwrap().inertia_exponents(), [12, 12]);
        let c7 = PadicContext::with_defaults(7).unwrap();
        let r = local_constancy_conflict(5, &PadicElement::pi_power(&c7, 3), 2, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Conflict);
        assert_eq!(r.nearby.rep.unwrap(), GaloisRep::induced(c7.field(), 10));
        let r = local_constancy_conflict(3, &PadicElement::pi(&ctx), 2, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Compatible);
    }

    #[test]
    fn theta_examples() {
        for (p, twice) in [(7, 3), (7, 4), (5, 1), (7, 5), (11, 5)] {
            assert!(theta_compatibility(p, HalfInt::from_twice(twice)).unwrap());
        }
    }

    #[test]
    fn irreducibility_scan_is_empty() {
        let slopes: Vec<HalfInt> = (1..=6).map(HalfInt::from_twice).collect();
        assert!(irreducibility_conjecture_scan(7, 2..=80, &slopes).unwrap().is_empty());
    }
}
