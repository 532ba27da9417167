use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::galois::GaloisRep;
use crate::padic::{HalfInt, PadicElement, Valuation};

use super::branch::{chotomy, Branch};
use super::breuil::{breuil_weight_reduction, in_breuil_table};
use super::consistency::caveat_zone;
use super::params::zigzag_params;

/// Where an answer comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    TheoremFe,
    TheoremBreuil,
    TheoremBlz,
    TheoremBg09,
    TheoremBg13,
    TheoremBgr18,
    TheoremGr19,
    ConjectureZigzag,
    KnownElsewhere,
    CaveatZone,
    Unknown,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::TheoremFe => "THEOREM_FE",
            Provenance::TheoremBreuil => "THEOREM_BREUIL",
            Provenance::TheoremBlz => "THEOREM_BLZ",
            Provenance::TheoremBg09 => "THEOREM_BG09",
            Provenance::TheoremBg13 => "THEOREM_BG13",
            Provenance::TheoremBgr18 => "THEOREM_BGR18",
            Provenance::TheoremGr19 => "THEOREM_GR19",
            Provenance::ConjectureZigzag => "CONJECTURE_ZIGZAG",
            Provenance::KnownElsewhere => "KNOWN_ELSEWHERE",
            Provenance::CaveatZone => "CAVEAT_ZONE",
            Provenance::Unknown => "UNKNOWN",
        }
    }

    pub fn is_theorem(self) -> bool {
        self.as_str().starts_with("THEOREM")
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value `coeff * p^(twice/2)` of `a_p` for which the conjectural answer
/// is flagged as possibly lagging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExcludedAp {
    pub coeff: i64,
    pub twice_exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// `s0`: weights within `p^s0 (p-1)` of a small weight count as nearby.
    pub caveat_disk_exponent: u32,
    pub excluded: Vec<ExcludedAp>,
    /// Treat conjectural answers as undecided in consistency checks.
    pub strict: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            caveat_disk_exponent: 1,
            excluded: vec![ExcludedAp { coeff: 1, twice_exponent: 4 }],
            strict: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Prediction {
    pub p: i64,
    pub k: i64,
    pub v: HalfInt,
    /// Representative of `k - 2` modulo `p - 1` in `1..=p-1`.
    pub b: i64,
    pub exceptional: bool,
    pub tau: Option<Valuation>,
    pub t: Option<Valuation>,
    pub branch: Option<Branch>,
    pub rep: Option<GaloisRep>,
    pub provenance: Provenance,
    pub caveat_m: Option<i64>,
    pub notes: Vec<String>,
}

impl Prediction {
    pub fn to_json(&self) -> Value {
        let mut doc = match &self.rep {
            Some(rep) => rep.to_json(),
            None => json!({"kind": "none"}),
        };
        let obj = doc.as_object_mut().expect("labels encode as objects");
        obj.insert("provenance".into(), json!(self.provenance.as_str()));
        obj.insert("p".into(), json!(self.p));
        obj.insert("k".into(), json!(self.k));
        obj.insert("v".into(), json!(self.v.to_string()));
        obj.insert("b".into(), json!(self.b));
        obj.insert("exceptional".into(), json!(self.exceptional));
        if let Some(tau) = self.tau {
            obj.insert("tau".into(), json!(tau.to_string()));
        }
        if let Some(t) = self.t {
            obj.insert("t".into(), json!(t.to_string()));
        }
        if let Some(branch) = self.branch {
            obj.insert("branch".into(), json!(branch.to_string()));
        }
        if let Some(m) = self.caveat_m {
            obj.insert("caveat_m".into(), json!(m));
        }
        obj.insert("notes".into(), json!(self.notes));
        doc
    }

    pub fn rep_text(&self) -> String {
        match &self.rep {
            Some(rep) => rep.to_string(),
            None => "-".to_string(),
        }
    }
}

fn matches_exclusion(a_p: &PadicElement, e: &ExcludedAp) -> Result<bool> {
    let ctx = a_p.context();
    let x = PadicElement::pi_power(ctx, e.twice_exponent).mul_int(e.coeff)?;
    Ok(a_p.sub(&x)?.is_zero_to_precision())
}

/// Picks the regime for `(k, a_p)` and evaluates it.
pub fn predict(k: i64, a_p: &PadicElement, config: &EngineConfig) -> Result<Prediction> {
    let ctx = a_p.context();
    let field = ctx.field();
    let p = ctx.p() as i64;
    if k < 2 {
        return Err(Error::InvalidWeight(k));
    }
    if a_p.is_zero_to_precision() {
        return Err(Error::ZeroAp);
    }
    let v = a_p.finite_valuation()?;
    if v <= HalfInt::ZERO {
        return Err(Error::NonPositiveSlope(v.to_string()));
    }
    let r = k - 2;
    let b_class = (r - 1).rem_euclid(p - 1) + 1;
    let exceptional = (r - v.twice()).rem_euclid(p - 1) == 0;
    let in_range = v.twice() <= p - 1;
    let mut out = Prediction {
        p,
        k,
        v,
        b: b_class,
        exceptional,
        tau: None,
        t: None,
        branch: None,
        rep: None,
        provenance: Provenance::Unknown,
        caveat_m: None,
        notes: Vec::new(),
    };
    let zz = if exceptional && in_range && r >= v.twice() {
        zigzag_params(k, a_p).ok()
    } else {
        None
    };
    if let Some(z) = &zz {
        out.tau = Some(z.tau);
        out.t = Some(z.t);
    }
    let (cav, cav_m) = if exceptional && in_range {
        caveat_zone(p, r, v, config.caveat_disk_exponent)
    } else {
        (false, None)
    };

    if v.twice() > 2 * (r / (p - 1)) {
        out.provenance = Provenance::TheoremBlz;
        out.rep = Some(GaloisRep::induced(field, k - 1));
        return Ok(out);
    }
    if k <= p + 1 {
        out.provenance = Provenance::TheoremFe;
        out.rep = Some(GaloisRep::induced(field, k - 1));
        return Ok(out);
    }
    if in_breuil_table(p, k, v) {
        out.provenance = Provenance::TheoremBreuil;
        out.rep = Some(breuil_weight_reduction(k, a_p)?);
        if cav {
            out.notes.push(format!(
                "weight lies in the caveat zone (m = {}); the tabulated answer is a theorem",
                cav_m.unwrap_or_default()
            ));
            out.caveat_m = cav_m;
        }
        return Ok(out);
    }
    if k <= 2 * p {
        out.provenance = Provenance::KnownElsewhere;
        out.notes.push("small weight outside the tabulated slopes".into());
        return Ok(out);
    }
    if cav && v >= HalfInt::from_int(2) {
        out.provenance = Provenance::CaveatZone;
        out.caveat_m = cav_m;
        out.notes.push(format!(
            "r = b + m(p-1) up to p^{} with m = {}: the zig-zag pattern may fail here",
            config.caveat_disk_exponent,
            cav_m.unwrap_or_default()
        ));
        return Ok(out);
    }

    let chotomy_theorem = match v.twice() {
        1 => Some(Provenance::TheoremBg13),
        2 if p >= 5 => Some(Provenance::TheoremBgr18),
        3 if p >= 5 => Some(Provenance::TheoremGr19),
        _ => None,
    };
    if exceptional && in_range && r > v.twice() {
        let z = zz.ok_or_else(|| Error::InvalidInput("zig-zag parameters unavailable".into()))?;
        let (branch, rep) = chotomy(&z)?;
        out.branch = Some(branch);
        out.rep = Some(rep);
        match chotomy_theorem {
            Some(prov) => out.provenance = prov,
            None => {
                out.provenance = Provenance::ConjectureZigzag;
                out.notes.push("conjectural: predicted by the zig-zag pattern".into());
                for e in &config.excluded {
                    if matches_exclusion(a_p, e)? {
                        out.notes.push(format!(
                            "a_p = {}*p^({}) is on the exclusion list; the reduction may lag behind this prediction",
                            e.coeff,
                            HalfInt::from_twice(e.twice_exponent)
                        ));
                    }
                }
            }
        }
        return Ok(out);
    }
    if v.twice() == 1 {
        out.provenance = Provenance::TheoremBg09;
        out.rep = Some(GaloisRep::induced(field, b_class + 1));
        return Ok(out);
    }
    if (v.twice() == 2 || v.twice() == 3) && p >= 5 {
        out.provenance = Provenance::KnownElsewhere;
        out.notes.push("slope below 2 outside the exceptional class".into());
        return Ok(out);
    }
    Ok(out)
}

/// The regime `predict` would use.
pub fn classify_regime(k: i64, a_p: &PadicElement, config: &EngineConfig) -> Result<Provenance> {
    Ok(predict(k, a_p, config)?.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Lambda;
    use crate::padic::PadicContext;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn classify_examples() {
        let c7 = PadicContext::with_defaults(7).unwrap();
        let u7 = PadicElement::teichmuller(&c7, c7.field().unit_symbol());
        assert_eq!(
            classify_regime(5, &u7.mul_int(49).unwrap(), &cfg()).unwrap(),
            Provenance::TheoremBlz
        );
        let c5 = PadicContext::with_defaults(5).unwrap();
        assert_eq!(
            classify_regime(24, &PadicElement::from_int(&c5, 5), &cfg()).unwrap(),
            Provenance::TheoremBgr18
        );
        let u5 = PadicElement::teichmuller(&c5, c5.field().unit_symbol());
        let pred = predict(10, &u5.mul_int(25).unwrap(), &cfg()).unwrap();
        assert_eq!(pred.provenance, Provenance::TheoremBreuil);
        assert_eq!(pred.caveat_m, Some(1));
        assert_eq!(pred.rep.unwrap(), GaloisRep::induced(c5.field(), 9));
    }

    #[test]
    fn predict_examples() {
        let c5 = PadicContext::with_defaults(5).unwrap();
        let f5 = c5.field();
        let pred = predict(24, &PadicElement::from_int(&c5, 5), &cfg()).unwrap();
        assert_eq!(
            pred.rep.unwrap(),
            GaloisRep::reducible_pair(f5, Lambda::Known(f5.from_int(3)), 2, 1)
        );

        let c7 = PadicContext::with_defaults(7).unwrap();
        let pred = predict(11, &PadicElement::pi_power(&c7, 3), &cfg()).unwrap();
        assert_eq!(pred.rep.unwrap(), GaloisRep::induced(c7.field(), 10));

        let w = PadicElement::from_coordinates(&c5, 3, &[1], &[1]);
        let pred = predict(21, &w, &cfg()).unwrap();
        assert_eq!(pred.provenance, Provenance::TheoremGr19);
        assert_eq!(
            pred.rep.unwrap(),
            GaloisRep::reducible_pair(f5, Lambda::Known(f5.one()), 2, 2)
        );
    }

    #[test]
    fn errors() {
        let c5 = PadicContext::with_defaults(5).unwrap();
        assert!(matches!(predict(10, &PadicElement::zero(&c5), &cfg()), Err(Error::ZeroAp)));
        assert!(matches!(
            predict(10, &PadicElement::from_int(&c5, 2), &cfg()),
            Err(Error::NonPositiveSlope(_))
        ));
    }

    #[test]
    fn conjectural_lag_warning() {
        let c = PadicContext::with_defaults(11).unwrap();
        // v = 2, b = 4, r = 4 + 3*10 = 34: m = 3 > v - 1, outside the caveat zone.
        let pred = predict(36, &PadicElement::from_int(&c, 121), &cfg()).unwrap();
        assert_eq!(pred.provenance, Provenance::ConjectureZigzag);
        assert!(pred.notes.iter().any(|n| n.contains("exclusion list")));
        assert!(pred.rep.is_some());
    }

    #[test]
    fn determinant_matches_weight() {
        let c = PadicContext::with_defaults(7).unwrap();
        for k in 2..60 {
            for twice in 1..=6 {
                let a = PadicElement::pi_power(&c, twice).mul_int(3).unwrap();
                let pred = predict(k, &a, &cfg()).unwrap();
                if let Some(rep) = pred.rep {
                    assert_eq!(rep.inertial_determinant(), (k - 1).rem_euclid(6), "k={k} v={twice}/2");
                }
            }
        }
    }
}
