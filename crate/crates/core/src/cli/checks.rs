//! The `check` suites. Each prints one line per case and fails if any case
//! disagrees with its expected outcome.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::engine::{
    berger_bound_holds, blz_consistency, branch_rep, breuil_weight_reduction, chotomy,
    irreducibility_conjecture_scan, local_constancy_conflict, theta_compatibility, zigzag_params,
    Branch, Verdict,
};
use crate::error::{Error, Result};
use crate::galois::{GaloisRep, Lambda};
use crate::gamma::jh_sequence;
use crate::llc::{gr19_constraints, llc_cross_check, pattern_cross_check, FPattern};
use crate::padic::{HalfInt, PadicContext, PadicElement};

use super::config::Config;
use super::Suite;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub passed: bool,
    pub text: String,
}

#[derive(Default)]
struct Log {
    text: String,
    failures: usize,
}

impl Log {
    fn line(&mut self, ok: bool, msg: String) {
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(self.text, "{} {msg}", if ok { "ok  " } else { "FAIL" });
    }

    fn finish(mut self, name: &str) -> Report {
        let _ = writeln!(self.text, "{name}: {} failure(s)", self.failures);
        Report { passed: self.failures == 0, text: self.text }
    }
}

pub fn run_suite(suite: Suite, p: Option<u64>, cfg: &Config) -> Result<Report> {
    let primes = |default: &[u64]| -> Result<Vec<u64>> {
        match p {
            Some(p) if !crate::arith::is_prime(p) || p < 5 => {
                Err(Error::InvalidInput(format!("p = {p} must be a prime >= 5")))
            }
            Some(p) => Ok(vec![p]),
            None => Ok(default.to_vec()),
        }
    };
    let report = match suite {
        Suite::LocalConstancy => local_constancy(&primes(&[5])?, cfg)?,
        Suite::Blz => blz(&primes(&[7, 11])?)?,
        Suite::Breuil => breuil(&primes(&[5, 7, 11])?, cfg)?,
        Suite::Theta => theta(&primes(&[7, 11])?)?,
        Suite::Irreducibility => irreducibility(&primes(&[5, 7])?)?,
        Suite::Determinant => determinant(&primes(&[5, 7, 11])?)?,
        Suite::Gr19 => gr19(&primes(&[5, 7])?, cfg)?,
    };
    Ok(report)
}

/// Nearby weights for `(4, p)` and `(5, p^{3/2})` disagree; for `(3, p^{1/2})`
/// they agree.
fn local_constancy(primes: &[u64], cfg: &Config) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        let ctx = PadicContext::new(p, cfg.residue_degree, cfg.precision)?;
        for (k, twice, expected) in [(4, 2, Verdict::Conflict), (5, 3, Verdict::Conflict), (3, 1, Verdict::Compatible)] {
            let a_p = PadicElement::pi_power(&ctx, twice);
            for t_prime in 1..=3 {
                let rep = local_constancy_conflict(k, &a_p, t_prime, &cfg.engine)?;
                log.line(
                    rep.verdict == expected,
                    format!(
                        "p={p} k={k} v={} k'={} {} vs {} bound={} {}",
                        HalfInt::from_twice(twice),
                        rep.k_prime,
                        rep.base.rep_text(),
                        rep.nearby.rep_text(),
                        rep.bound_holds,
                        rep.verdict
                    ),
                );
            }
        }
    }
    Ok(log.finish("local-constancy"))
}

fn blz(primes: &[u64]) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        let p = p as i64;
        for m in 1..=2 {
            for (b, expected) in [(2 * m + 1, Verdict::Consistent), (2 * m + 2, Verdict::Inconsistent)] {
                match blz_consistency(p, b, m) {
                    Ok(rep) => log.line(
                        rep.verdict == expected && rep.kummer_divides,
                        format!(
                            "p={p} b={b} m={m} r={} tau={} t={} zigzag={} blz={} kummer={} {}",
                            rep.r, rep.tau, rep.t, rep.zigzag, rep.blz, rep.kummer_divides, rep.verdict
                        ),
                    ),
                    Err(Error::BoundaryCase) if b == p - 1 => {
                        log.line(true, format!("p={p} b={b} m={m} boundary"))
                    }
                    Err(e) => log.line(false, format!("p={p} b={b} m={m} error: {e}")),
                }
            }
        }
    }
    Ok(log.finish("blz"))
}

/// Slope `1/2` values `sqrt(p) * x` for residues `x` on both sides of
/// `x^2 = -1`, with a few higher digits.
pub fn slope_half_samples(ctx: &std::sync::Arc<PadicContext>) -> Vec<PadicElement> {
    let field = ctx.field();
    let p = ctx.p() as i64;
    let minus_one = field.neg(field.one());
    let mut out = Vec::new();
    for x in field.elements().filter(|&x| x != field.zero()) {
        let on_circle = field.mul(x, x) == minus_one;
        let lift = PadicElement::teichmuller(ctx, x);
        let tails: &[i64] = if on_circle { &[0, 1, 2, p - 1] } else { &[0, 3] };
        for &tail in tails {
            let y = lift.add(&PadicElement::from_int(ctx, tail * p)).expect("same context");
            out.push(y.mul(&PadicElement::pi(ctx)).expect("same context"));
        }
    }
    out
}

/// The answer at `k = 2p+1` against the chotomy at the same weight, or at
/// `k + p^t' (p-1)` when `t_prime` is given.
pub fn weight_2p1_agreement(
    a_p: &PadicElement,
    t_prime: Option<u32>,
) -> Result<(GaloisRep, GaloisRep, bool)> {
    let p = a_p.context().p() as i64;
    let k = 2 * p + 1 + t_prime.map_or(0, |t| p.pow(t) * (p - 1));
    let known = breuil_weight_reduction(2 * p + 1, a_p)?;
    let (_, zig) = chotomy(&zigzag_params(k, a_p)?)?;
    let same = known.canonical_form() == zig.canonical_form();
    Ok((known, zig, same))
}

fn breuil(primes: &[u64], cfg: &Config) -> Result<Report> {
    let mut log = Log::default();
    log.line(!berger_bound_holds(5, 4, HalfInt::from_int(1)), "p=5 k=4 v=1 bound fails".into());
    for &p in primes {
        let p = p as i64;
        for twice in 1..p {
            let k = twice + p + 1;
            log.line(
                berger_bound_holds(p, k, HalfInt::from_twice(twice)),
                format!("p={p} k={k} v={} bound holds", HalfInt::from_twice(twice)),
            );
        }
        log.line(
            berger_bound_holds(p, 2 * p + 1, HalfInt::from_twice(1)),
            format!("p={p} k={} v=1/2 bound holds", 2 * p + 1),
        );
    }
    for &p in primes {
        let ctx = PadicContext::new(p, cfg.residue_degree, cfg.precision)?;
        for a_p in slope_half_samples(&ctx) {
            for t_prime in [None, Some(1), Some(2), Some(3)] {
                let (known, zig, same) = weight_2p1_agreement(&a_p, t_prime)?;
                let shift = t_prime.map_or("-".to_string(), |t| t.to_string());
                log.line(same, format!("p={p} a_p={a_p} t'={shift} {known} vs {zig}"));
            }
        }
    }
    Ok(log.finish("breuil"))
}

fn theta(primes: &[u64]) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        for twice in 1..=5 {
            if twice > p as i64 - 1 {
                continue;
            }
            let v = HalfInt::from_twice(twice);
            let ok = theta_compatibility(p as i64, v)?;
            log.line(ok, format!("p={p} v={v}"));
        }
    }
    Ok(log.finish("theta"))
}

fn irreducibility(primes: &[u64]) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        let slopes: Vec<HalfInt> = (1..p as i64).step_by(2).map(HalfInt::from_twice).collect();
        let found = irreducibility_conjecture_scan(p as i64, 2..=6 * p as i64, &slopes)?;
        for v in &found {
            log.line(false, format!("p={p} k={} v={} {:?} {}", v.k, v.v, v.branch, v.rep));
        }
        log.line(found.is_empty(), format!("p={p} {} slopes scanned", slopes.len()));
    }
    Ok(log.finish("irreducibility"))
}

fn determinant(primes: &[u64]) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        let ctx = PadicContext::with_defaults(p)?;
        let pm1 = p as i64 - 1;
        for b in 1..=pm1 {
            let bad: Vec<String> = Branch::all(b)
                .into_iter()
                .filter(|&br| {
                    let rep = branch_rep(ctx.field(), b, br, Lambda::unknown(br.index() as u32));
                    rep.inertial_determinant() != (b + 1).rem_euclid(pm1)
                })
                .map(|br| br.to_string())
                .collect();
            log.line(bad.is_empty(), format!("p={p} b={b} det = w^{} {}", (b + 1) % pm1, bad.join(" ")));
        }
    }
    Ok(log.finish("determinant"))
}

/// Slope `3/2` chotomy answers against the slot constraints, and the
/// F-pattern of every case against the Jordan-Hölder sequence.
fn gr19(primes: &[u64], cfg: &Config) -> Result<Report> {
    let mut log = Log::default();
    for &p in primes {
        let ctx = PadicContext::new(p, cfg.residue_degree.max(2), cfg.precision)?;
        let jh = jh_sequence(p, 3)?;
        let mut offsets = BTreeSet::new();
        let mut cases = 0;
        let mut bad = 0;
        for m in 1..40 {
            let r = 3 + m * (p as i64 - 1);
            for (a, b) in [(1, 0), (2, 0), (1, 1), (3, 2), (1, -1), (2, 1)] {
                let a_p = PadicElement::from_coordinates(&ctx, 3, &[a], &[b]);
                let Ok(z) = zigzag_params(r + 2, &a_p) else { continue };
                let Ok((_, rep)) = chotomy(&z) else { continue };
                let g = gr19_constraints(r, &a_p)?;
                offsets.insert(g.offset.to_string());
                cases += 1;
                if !llc_cross_check(&rep, &g.slot_table(3), &jh)? {
                    bad += 1;
                    log.line(false, format!("p={p} r={r} a_p={a_p} {rep}"));
                }
            }
        }
        log.line(
            bad == 0 && offsets.len() >= 4,
            format!("p={p} slope 3/2: {cases} cases, offsets {{{}}}", offsets.into_iter().collect::<Vec<_>>().join(", ")),
        );
        for b in 1..p as i64 {
            let jh = jh_sequence(p, b as u64)?;
            for branch in Branch::all(b) {
                let rep = branch_rep(ctx.field(), b, branch, Lambda::unknown(branch.index() as u32));
                let pattern = FPattern::for_branch(b, branch);
                let ok = pattern_cross_check(&rep, &pattern, &jh)?;
                log.line(ok, format!("p={p} b={b} {branch} {pattern} {rep}"));
            }
        }
    }
    Ok(log.finish("gr19"))
}
