//! Labels for semisimple two-dimensional mod `p` representations of the
//! absolute Galois group of `Q_p`.
//!
//! Irreducible labels are `ind(w2^c) (x) mu_z`; reducible labels are
//! `mu_l w^a (+) mu_l' w^a'`. Here `w`, `w2` are the fundamental characters
//! of levels 1 and 2 (so `w = w2^(p+1)`) and `mu_l` is the unramified
//! character sending geometric Frobenius to `l`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fq, ResidueField};

/// An unramified value attached to a character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lambda {
    Known(Fq),
    /// A value determined only up to the unknown multiplier `*_i`; the
    /// flag marks the reciprocal `1 / lambda_i`.
    Unknown { index: u32, inverse: bool },
    /// A root of `T^2 - d T + 1` that does not lie in the residue field;
    /// the flag selects the other root.
    Root { trace: Fq, inverse: bool },
}

impl Lambda {
    pub fn unknown(index: u32) -> Self {
        Lambda::Unknown { index, inverse: false }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, Lambda::Known(_))
    }

    pub fn inverse(&self, field: &ResidueField) -> Self {
        match *self {
            Lambda::Known(x) => Lambda::Known(field.inv(x).expect("unramified values are nonzero")),
            Lambda::Unknown { index, inverse } => Lambda::Unknown { index, inverse: !inverse },
            Lambda::Root { trace, inverse } => Lambda::Root { trace, inverse: !inverse },
        }
    }

    pub fn format(&self, field: &ResidueField) -> String {
        match self {
            Lambda::Known(x) => field.format(*x),
            Lambda::Unknown { index, inverse } => {
                format!("unknown(*_{index}){}", if *inverse { "^-1" } else { "" })
            }
            Lambda::Root { trace, inverse } => {
                format!("root(d={}){}", field.format(*trace), if *inverse { "^-1" } else { "" })
            }
        }
    }

    pub fn parse(text: &str, field: &ResidueField) -> Result<Self> {
        let t = text.trim();
        let (body, inverse) = match t.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (t, false),
        };
        if body == "unknown" {
            return Ok(Lambda::Unknown { index: 0, inverse });
        }
        if let Some(rest) = body.strip_prefix("unknown(*_").and_then(|r| r.strip_suffix(')')) {
            let index = rest
                .parse()
                .map_err(|_| Error::MalformedLabel(format!("bad unknown index in `{t}`")))?;
            return Ok(Lambda::Unknown { index, inverse });
        }
        if let Some(rest) = body.strip_prefix("root(d=").and_then(|r| r.strip_suffix(')')) {
            let trace = field.parse(rest)?;
            return Ok(Lambda::Root { trace, inverse });
        }
        if inverse {
            return Err(Error::MalformedLabel(format!("`{t}`: ^-1 applies only to symbolic values")));
        }
        let x = field.parse(body)?;
        if x == field.zero() {
            return Err(Error::MalformedLabel("unramified value must be nonzero".into()));
        }
        Ok(Lambda::Known(x))
    }
}

/// One summand `mu_lambda w^a` of a reducible label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summand {
    pub a: i64,
    pub lambda: Lambda,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisRep {
    Irreducible { field: ResidueField, c: i64, z: Lambda },
    Reducible { field: ResidueField, summands: [Summand; 2] },
}

impl GaloisRep {
    /// `ind(w2^c) (x) mu_z`; fails when `(p+1) | c`.
    pub fn irreducible(field: &ResidueField, c: i64, z: Lambda) -> Result<Self> {
        let p = field.p() as i64;
        if c.rem_euclid(p + 1) == 0 {
            return Err(Error::MalformedLabel(format!(
                "ind(w2^{c}) is reducible since p+1 = {} divides {c}",
                p + 1
            )));
        }
        Ok(GaloisRep::Irreducible { field: field.clone(), c, z }.canonical_form())
    }

    /// `ind(w2^c)` with trivial twist, decomposed when `(p+1) | c`:
    /// `ind(w2^{m(p+1)}) = w^m (+) mu_{-1} w^m`.
    pub fn induced(field: &ResidueField, c: i64) -> Self {
        let p = field.p() as i64;
        if c.rem_euclid(p + 1) == 0 {
            let m = c / (p + 1);
            let minus_one = Lambda::Known(field.from_int(-1));
            return Self::reducible(
                field,
                Summand { a: m, lambda: Lambda::Known(field.one()) },
                Summand { a: m, lambda: minus_one },
            );
        }
        Self::irreducible(field, c, Lambda::Known(field.one())).expect("checked above")
    }

    pub fn reducible(field: &ResidueField, s1: Summand, s2: Summand) -> Self {
        GaloisRep::Reducible { field: field.clone(), summands: [s1, s2] }.canonical_form()
    }

    /// `mu_l w^a (+) mu_{1/l} w^a'`.
    pub fn reducible_pair(field: &ResidueField, lambda: Lambda, a: i64, a2: i64) -> Self {
        let inv = lambda.inverse(field);
        Self::reducible(field, Summand { a, lambda }, Summand { a: a2, lambda: inv })
    }

    pub fn field(&self) -> &ResidueField {
        match self {
            GaloisRep::Irreducible { field, .. } | GaloisRep::Reducible { field, .. } => field,
        }
    }

    pub fn p(&self) -> i64 {
        self.field().p() as i64
    }

    /// Reduces exponents, replaces `c` by the smaller of `c, pc` modulo
    /// `p^2 - 1`, identifies the twist `z` with `-z` (the unramified
    /// quadratic character is trivial on induced representations), and
    /// sorts summands.
    pub fn canonical_form(&self) -> Self {
        let p = self.p();
        match self {
            GaloisRep::Irreducible { field, c, z } => {
                let n = p * p - 1;
                let c0 = c.rem_euclid(n);
                let c1 = (p * c0).rem_euclid(n);
                let z = match z {
                    Lambda::Known(x) => Lambda::Known(field.sign_normalize(*x)),
                    other => *other,
                };
                GaloisRep::Irreducible { field: field.clone(), c: c0.min(c1), z }
            }
            GaloisRep::Reducible { field, summands } => {
                let mut s = summands.map(|s| Summand { a: s.a.rem_euclid(p - 1), ..s });
                s.sort();
                GaloisRep::Reducible { field: field.clone(), summands: s }
            }
        }
    }

    pub fn is_irreducible_label(&self) -> Result<bool> {
        match self {
            GaloisRep::Irreducible { c, .. } => {
                if c.rem_euclid(self.p() + 1) == 0 {
                    Err(Error::MalformedLabel(format!("ind(w2^{c}) with p+1 | c")))
                } else {
                    Ok(true)
                }
            }
            GaloisRep::Reducible { .. } => Ok(false),
        }
    }

    /// Exponent of `w` in the determinant restricted to inertia.
    pub fn inertial_determinant(&self) -> i64 {
        let p = self.p();
        match self {
            GaloisRep::Irreducible { c, .. } => c.rem_euclid(p - 1),
            GaloisRep::Reducible { summands, .. } => {
                (summands[0].a + summands[1].a).rem_euclid(p - 1)
            }
        }
    }

    pub fn twist_by_omega(&self, j: i64) -> Self {
        let p = self.p();
        match self {
            GaloisRep::Irreducible { field, c, z } => {
                GaloisRep::Irreducible { field: field.clone(), c: c + j * (p + 1), z: *z }
                    .canonical_form()
            }
            GaloisRep::Reducible { field, summands } => GaloisRep::Reducible {
                field: field.clone(),
                summands: summands.map(|s| Summand { a: s.a + j, ..s }),
            }
            .canonical_form(),
        }
    }

    /// The two characters `w2^e` of the restriction to inertia, as sorted
    /// exponents modulo `p^2 - 1`.
    pub fn inertia_exponents(&self) -> [i64; 2] {
        let p = self.p();
        let n = p * p - 1;
        let mut e = match self {
            GaloisRep::Irreducible { c, .. } => [c.rem_euclid(n), (p * c).rem_euclid(n)],
            GaloisRep::Reducible { summands, .. } => {
                summands.map(|s| ((p + 1) * s.a).rem_euclid(n))
            }
        };
        e.sort();
        e
    }

    pub fn equals_on_inertia(&self, other: &Self) -> bool {
        self.p() == other.p() && self.inertia_exponents() == other.inertia_exponents()
    }

    pub fn to_json(&self) -> Value {
        match self.canonical_form() {
            GaloisRep::Irreducible { field, c, z } => {
                json!({"kind": "irred", "c": c, "z": z.format(&field)})
            }
            GaloisRep::Reducible { field, summands } => {
                let s: Vec<Value> = summands
                    .iter()
                    .rev()
                    .map(|s| json!({"a": s.a, "lambda": s.lambda.format(&field)}))
                    .collect();
                json!({"kind": "red", "summands": s})
            }
        }
    }

    pub fn from_json(value: &Value, field: &ResidueField) -> Result<Self> {
        let bad = |m: &str| Error::MalformedLabel(format!("{m} in {value}"));
        let int = |v: &Value, key: &str| v.get(key).and_then(Value::as_i64).ok_or_else(|| bad(key));
        let text = |v: &Value, key: &str| {
            v.get(key).and_then(Value::as_str).map(str::to_string).ok_or_else(|| bad(key))
        };
        match value.get("kind").and_then(Value::as_str) {
            Some("irred") => {
                let z = Lambda::parse(&text(value, "z")?, field)?;
                Self::irreducible(field, int(value, "c")?, z)
            }
            Some("red") => {
                let arr = value
                    .get("summands")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("expected two summands"))?;
                let mut s = Vec::with_capacity(2);
                for item in arr {
                    s.push(Summand {
                        a: int(item, "a")?,
                        lambda: Lambda::parse(&text(item, "lambda")?, field)?,
                    });
                }
                Ok(Self::reducible(field, s[0], s[1]))
            }
            _ => Err(bad("missing kind")),
        }
    }
}

fn omega_power(a: i64) -> String {
    match a {
        0 => "1".to_string(),
        1 => "ω".to_string(),
        _ => format!("ω^{a}"),
    }
}

impl fmt::Display for GaloisRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisRep::Irreducible { field, c, z } => {
                write!(f, "ind(ω₂^{c})")?;
                if *z != Lambda::Known(field.one()) {
                    write!(f, "⊗μ_{}", z.format(field))?;
                }
                Ok(())
            }
            GaloisRep::Reducible { field, summands } => {
                let parts: Vec<String> = summands
                    .iter()
                    .map(|s| {
                        if s.lambda == Lambda::Known(field.one()) {
                            omega_power(s.a)
                        } else {
                            format!("μ_{{{}}}{}", s.lambda.format(field), omega_power(s.a))
                        }
                    })
                    .collect();
                write!(f, "{} ⊕ {}", parts[1], parts[0])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> ResidueField {
        ResidueField::new(p, 2).unwrap()
    }

    #[test]
    fn canonical_exponent() {
        let f = k(7);
        let r = GaloisRep::induced(&f, 28);
        assert!(matches!(r, GaloisRep::Irreducible { c: 4, .. }));
        assert!(matches!(GaloisRep::induced(&f, 5), GaloisRep::Irreducible { c: 5, .. }));
        assert!(GaloisRep::induced(&f, 28).is_irreducible_label().unwrap());
    }

    #[test]
    fn summands_sorted() {
        let f = k(5);
        let r = GaloisRep::reducible(
            &f,
            Summand { a: 3, lambda: Lambda::Known(f.from_int(2)) },
            Summand { a: 1, lambda: Lambda::Known(f.from_int(3)) },
        );
        let GaloisRep::Reducible { summands, .. } = &r else { panic!() };
        assert_eq!(summands[0].a, 1);
    }

    #[test]
    fn determinant_and_twist() {
        let f = k(7);
        let p = 7;
        assert_eq!(GaloisRep::induced(&f, p + 3).inertial_determinant(), 4);
        for j in 0..4 {
            assert_eq!(GaloisRep::induced(&f, 4 + j * (p - 1)).inertial_determinant(), 4);
        }
        let b = 3;
        let n = 2;
        let lhs = GaloisRep::induced(&f, b + 1 + (n - 1) * (p - 1)).twist_by_omega(1);
        let rhs = GaloisRep::induced(&f, b + 3 + n * (p - 1));
        assert_eq!(lhs, rhs);
        let red = GaloisRep::reducible_pair(&f, Lambda::unknown(1), 3, 1);
        assert_eq!(red.twist_by_omega(p - 1), red);
        assert_eq!(red.twist_by_omega(1).inertial_determinant(), 0);
    }

    #[test]
    fn malformed_irreducible() {
        let f = k(5);
        assert!(matches!(
            GaloisRep::irreducible(&f, 6, Lambda::Known(f.one())),
            Err(Error::MalformedLabel(_))
        ));
        let split = GaloisRep::induced(&f, 6);
        assert!(matches!(split, GaloisRep::Reducible { .. }));
        assert_eq!(split.inertial_determinant(), 2);
    }

    #[test]
    fn json_round_trip() {
        let f = k(5);
        let reps = [
            GaloisRep::induced(&f, 10),
            GaloisRep::reducible_pair(&f, Lambda::Known(f.from_int(3)), 2, 1),
            GaloisRep::reducible_pair(&f, Lambda::unknown(2), 3, 2),
            GaloisRep::reducible_pair(&f, Lambda::Root { trace: f.unit_symbol(), inverse: false }, 1, 1),
        ];
        for r in reps {
            assert_eq!(GaloisRep::from_json(&r.to_json(), &f).unwrap(), r);
        }
        let r = GaloisRep::reducible_pair(&f, Lambda::Known(f.from_int(3)), 2, 1);
        assert_eq!(
            r.to_json().to_string(),
            r#"{"kind":"red","summands":[{"a":2,"lambda":"3"},{"a":1,"lambda":"2"}]}"#
        );
    }

    #[test]
    fn inertia_ignores_unramified_part() {
        let f = k(5);
        let a = GaloisRep::reducible_pair(&f, Lambda::Known(f.from_int(3)), 2, 1);
        let b = GaloisRep::reducible_pair(&f, Lambda::unknown(1), 1, 2);
        assert!(a.equals_on_inertia(&b));
        assert_ne!(a, b);
        assert!(GaloisRep::induced(&f, 4).equals_on_inertia(&GaloisRep::induced(&f, 20)));
    }
}
