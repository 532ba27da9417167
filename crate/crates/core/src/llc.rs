//! The semisimple mod `p` local Langlands dictionary on labels, the
//! Jordan-Hölder selection timeline of the zig-zag picture and the
//! constraint set describing the slope `3/2` reductions.
//!
//! A smooth label `pi(r, l, eta)` stands for `ind Sym^r / (T - l) (x) eta(det)`
//! with `eta = w^s mu_z`. Irreducible Galois labels go to a single
//! supersingular label (`l = 0`); reducible ones to a pair of principal
//! series labels.

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::{lambda_value, zigzag_branch, zigzag_params, Branch};
use crate::error::{Error, Result};
use crate::field::{Fq, ResidueField};
use crate::galois::{GaloisRep, Lambda, Summand};
use crate::gamma::GammaModuleLabel;
use crate::padic::{HalfInt, PadicElement, Valuation};

/// The least non-square of the residue field.
pub fn non_square(field: &ResidueField) -> Fq {
    field
        .elements()
        .find(|&a| a != field.zero() && !field.is_square(a))
        .expect("finite fields of odd order have non-squares")
}

/// `coeff` or `coeff * sqrt(N)` with `N` the least non-square. Square roots
/// of residue field elements all have this shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    pub coeff: Fq,
    pub radical: bool,
}

impl Scalar {
    pub fn base(x: Fq) -> Self {
        Scalar { coeff: x, radical: false }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.0 == 0
    }

    pub fn mul(self, o: Self, field: &ResidueField) -> Self {
        let mut coeff = field.mul(self.coeff, o.coeff);
        if self.radical && o.radical {
            coeff = field.mul(coeff, non_square(field));
        }
        Scalar { coeff, radical: self.radical != o.radical }
    }

    pub fn inv(self, field: &ResidueField) -> Option<Self> {
        let denom = if self.radical {
            field.mul(self.coeff, non_square(field))
        } else {
            self.coeff
        };
        Some(Scalar { coeff: field.inv(denom)?, radical: self.radical })
    }

    pub fn neg(self, field: &ResidueField) -> Self {
        Scalar { coeff: field.neg(self.coeff), ..self }
    }

    /// The square, which always lies in the residue field.
    pub fn square(self, field: &ResidueField) -> Fq {
        self.mul(self, field).coeff
    }

    pub fn sqrt_of(field: &ResidueField, a: Fq) -> Self {
        match field.sqrt(a) {
            Some(s) => Scalar::base(s),
            None => {
                let n_inv = field.inv(non_square(field)).expect("nonzero");
                let s = field.sqrt(field.mul(a, n_inv)).expect("quotient of non-squares");
                Scalar { coeff: s, radical: true }
            }
        }
    }

    pub fn format(&self, field: &ResidueField) -> String {
        if self.radical {
            format!("{}*sqrt({})", field.format(self.coeff), field.format(non_square(field)))
        } else {
            field.format(self.coeff)
        }
    }

    pub fn parse(text: &str, field: &ResidueField) -> Result<Self> {
        let t = text.trim();
        let Some(idx) = t.find("*sqrt(") else {
            return Ok(Scalar::base(field.parse(t)?));
        };
        let inner = t[idx + 6..]
            .strip_suffix(')')
            .ok_or_else(|| Error::MalformedLabel(format!("unclosed sqrt in `{t}`")))?;
        if field.parse(inner)? != non_square(field) {
            return Err(Error::MalformedLabel(format!(
                "radicals are written with sqrt({})",
                field.format(non_square(field))
            )));
        }
        Ok(Scalar { coeff: field.parse(&t[..idx])?, radical: true })
    }
}

/// The eigenvalue `l` of `T` in a smooth label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eigenvalue {
    Zero,
    Known(Scalar),
    /// A symbolic unramified value carried over from a Galois label.
    Symbolic(Lambda),
}

impl Eigenvalue {
    fn format(&self, field: &ResidueField) -> String {
        match self {
            Eigenvalue::Zero => "0".into(),
            Eigenvalue::Known(x) => x.format(field),
            Eigenvalue::Symbolic(l) => l.format(field),
        }
    }

    fn parse(text: &str, field: &ResidueField) -> Result<Self> {
        let t = text.trim();
        if t.starts_with("unknown") || t.starts_with("root(") {
            return Ok(Eigenvalue::Symbolic(Lambda::parse(t, field)?));
        }
        let x = Scalar::parse(t, field)?;
        Ok(if x.is_zero() { Eigenvalue::Zero } else { Eigenvalue::Known(x) })
    }
}

/// The twist `eta = w^s mu_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Twist {
    pub s: i64,
    pub z: Scalar,
}

impl Twist {
    pub fn omega(field: &ResidueField, s: i64) -> Self {
        Twist { s, z: Scalar::base(field.one()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmoothRepLabel {
    pub r: i64,
    pub lambda: Eigenvalue,
    pub eta: Twist,
    pub semisimplified: bool,
}

impl SmoothRepLabel {
    pub fn new(field: &ResidueField, r: i64, lambda: Eigenvalue, eta: Twist) -> Result<Self> {
        let p = field.p() as i64;
        if !(0..p).contains(&r) {
            return Err(Error::IndexOutOfRange(r));
        }
        if let Eigenvalue::Known(x) = lambda {
            if x.is_zero() {
                return Err(Error::MalformedLabel("use Eigenvalue::Zero".into()));
            }
        }
        if eta.z.is_zero() {
            return Err(Error::MalformedLabel("twist value must be nonzero".into()));
        }
        Ok(SmoothRepLabel { r, lambda, eta, semisimplified: true }.normalized(field))
    }

    /// Picks a representative among labels with the same semisimplification:
    /// supersingular labels are written through the smaller of the two
    /// conjugate exponents, `(l, z)` and `(-l, -z)` are identified, and
    /// `r = p - 1` is replaced by `r = 0` when `l != 0`.
    pub fn normalized(&self, field: &ResidueField) -> Self {
        let p = field.p() as i64;
        let mut out = *self;
        out.eta.s = out.eta.s.rem_euclid(p - 1);
        let flip = field.sign_normalize(out.eta.z.coeff) != out.eta.z.coeff;
        match out.lambda {
            Eigenvalue::Zero => {
                let (r, s) = supersingular_coordinates(p, out.r + 1 + out.eta.s * (p + 1));
                out.r = r;
                out.eta.s = s;
                if flip {
                    out.eta.z = out.eta.z.neg(field);
                }
            }
            Eigenvalue::Known(x) => {
                if out.r == p - 1 {
                    out.r = 0;
                }
                if flip {
                    out.eta.z = out.eta.z.neg(field);
                    out.lambda = Eigenvalue::Known(x.neg(field));
                }
            }
            Eigenvalue::Symbolic(_) => {
                if out.r == p - 1 {
                    out.r = 0;
                }
            }
        }
        out
    }

    /// False exactly for `(r, l) = (0, ±1)` and `(p-1, ±1)` with trivial
    /// radical part.
    pub fn is_irreducible(&self, field: &ResidueField) -> bool {
        let p = field.p() as i64;
        let pm_one = match self.lambda {
            Eigenvalue::Known(x) => {
                let minus = field.neg(field.one());
                !x.radical && (x.coeff == field.one() || x.coeff == minus)
            }
            _ => false,
        };
        !(pm_one && (self.r == 0 || self.r == p - 1))
    }

    /// Constituents of the semisimplification for the reducible labels.
    pub fn constituents(&self, field: &ResidueField) -> Vec<String> {
        if self.is_irreducible(field) {
            return vec![self.format(field)];
        }
        let Eigenvalue::Known(x) = self.lambda else { unreachable!() };
        let eta = format_twist(field, &self.eta);
        if x.coeff == field.one() {
            vec![format!("St⊗{eta}"), format!("{eta}∘det")]
        } else {
            vec![format!("St⊗μ_{{-1}}{eta}"), format!("μ_{{-1}}{eta}∘det")]
        }
    }

    pub fn format(&self, field: &ResidueField) -> String {
        format!(
            "π({}, {}, {})",
            self.r,
            self.lambda.format(field),
            format_twist(field, &self.eta)
        )
    }

    /// `pi(r,l,s)` or `pi(r,l,s,z)`.
    pub fn to_text(&self, field: &ResidueField) -> String {
        let mut s = format!("pi({},{},{}", self.r, self.lambda.format(field), self.eta.s);
        if self.eta.z != Scalar::base(field.one()) {
            s.push(',');
            s.push_str(&self.eta.z.format(field));
        }
        s.push(')');
        s
    }

    pub fn parse(text: &str, field: &ResidueField) -> Result<Self> {
        let t = text.trim();
        let body = t
            .strip_prefix("pi(")
            .or_else(|| t.strip_prefix("π("))
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::MalformedLabel(format!("expected pi(r,l,s[,z]), got `{t}`")))?;
        let parts = split_top_level(body, &[',']);
        if parts.len() != 3 && parts.len() != 4 {
            return Err(Error::MalformedLabel(format!("`{t}` needs 3 or 4 fields")));
        }
        let int = |s: &str| {
            s.trim().parse::<i64>().map_err(|_| Error::MalformedLabel(format!("bad integer `{s}`")))
        };
        let z = match parts.get(3) {
            Some(z) => Scalar::parse(z, field)?,
            None => Scalar::base(field.one()),
        };
        let eta = Twist { s: int(&parts[2])?, z };
        Self::new(field, int(&parts[0])?, Eigenvalue::parse(&parts[1], field)?, eta)
    }
}

/// Parses `pi(..) + pi(..)`; `⊕` is accepted as a separator.
pub fn parse_labels(text: &str, field: &ResidueField) -> Result<Vec<SmoothRepLabel>> {
    split_top_level(text, &['+', '⊕'])
        .iter()
        .map(|s| SmoothRepLabel::parse(s, field))
        .collect()
}

fn split_top_level(text: &str, seps: &[char]) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&ch) {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

fn format_twist(field: &ResidueField, eta: &Twist) -> String {
    let w = match eta.s {
        0 => String::new(),
        1 => "ω".into(),
        s => format!("ω^{s}"),
    };
    let z = if eta.z == Scalar::base(field.one()) {
        String::new()
    } else {
        format!("μ_{{{}}}", eta.z.format(field))
    };
    match (w.is_empty(), z.is_empty()) {
        (true, true) => "1".into(),
        (false, false) => format!("{w}·{z}"),
        _ => format!("{w}{z}"),
    }
}

/// The residue of `x` in `{0, ..., p-2}`.
pub fn bracket_normalize(p: i64, x: i64) -> i64 {
    x.rem_euclid(p - 1)
}

/// `(r, s)` with `c = r + 1 + s(p+1)`, using the smaller of `c, pc`.
fn supersingular_coordinates(p: i64, c: i64) -> (i64, i64) {
    let n = p * p - 1;
    let c = c.rem_euclid(n).min((p * c).rem_euclid(n));
    let r = (c - 1).rem_euclid(p + 1);
    let s = ((c - 1 - r) / (p + 1)).rem_euclid(p - 1);
    (r, s)
}

fn sorted(mut labels: Vec<SmoothRepLabel>) -> Vec<SmoothRepLabel> {
    labels.sort();
    labels
}

/// The dictionary image of a Galois label, as a sorted multiset of
/// normalized labels.
pub fn ll_map(rep: &GaloisRep) -> Result<Vec<SmoothRepLabel>> {
    let field = rep.field();
    let p = rep.p();
    match rep.canonical_form() {
        GaloisRep::Irreducible { c, z, .. } => {
            let Lambda::Known(z) = z else {
                return Err(Error::UnknownLambda(z.format(field)));
            };
            let (r, s) = supersingular_coordinates(p, c);
            let eta = Twist { s, z: Scalar::base(z) };
            Ok(vec![SmoothRepLabel::new(field, r, Eigenvalue::Zero, eta)?])
        }
        GaloisRep::Reducible { summands: [first, second], .. } => {
            let r = bracket_normalize(p, first.a - second.a - 1);
            let (z, l1, l2) = match (first.lambda, second.lambda) {
                (Lambda::Known(a), Lambda::Known(b)) => {
                    let z = Scalar::sqrt_of(field, field.mul(a, b));
                    let z_inv = z.inv(field).expect("nonzero");
                    let l1 = Scalar::base(a).mul(z_inv, field);
                    let l2 = Scalar::base(b).mul(z_inv, field);
                    (z, Eigenvalue::Known(l1), Eigenvalue::Known(l2))
                }
                (a, b) if b == a.inverse(field) => {
                    (Scalar::base(field.one()), Eigenvalue::Symbolic(a), Eigenvalue::Symbolic(b))
                }
                (a, b) => {
                    return Err(Error::UnknownLambda(format!(
                        "{} and {} are not reciprocal",
                        a.format(field),
                        b.format(field)
                    )))
                }
            };
            let first_label = SmoothRepLabel::new(field, r, l1, Twist { s: second.a, z })?;
            let second_label = SmoothRepLabel::new(
                field,
                bracket_normalize(p, p - 3 - r),
                l2,
                Twist { s: first.a, z },
            )?;
            Ok(sorted(vec![first_label, second_label]))
        }
    }
}

/// The unique Galois label whose dictionary image is `labels`.
pub fn ll_inverse(field: &ResidueField, labels: &[SmoothRepLabel]) -> Result<GaloisRep> {
    let p = field.p() as i64;
    let labels = sorted(labels.iter().map(|l| l.normalized(field)).collect());
    let not_in_image = || {
        let text: Vec<String> = labels.iter().map(|l| l.format(field)).collect();
        Error::NotInImage(text.join(" ⊕ "))
    };
    let candidate = match labels.as_slice() {
        [l] if l.lambda == Eigenvalue::Zero => {
            if l.eta.z.radical {
                return Err(not_in_image());
            }
            let c = l.r + 1 + l.eta.s * (p + 1);
            GaloisRep::irreducible(field, c, Lambda::Known(l.eta.z.coeff))?
        }
        [l, _] if l.lambda != Eigenvalue::Zero => {
            let (alpha, beta) = match l.lambda {
                Eigenvalue::Known(x) => {
                    let a = x.mul(l.eta.z, field);
                    let b = l.eta.z.mul(x.inv(field).expect("nonzero"), field);
                    if a.radical || b.radical {
                        return Err(not_in_image());
                    }
                    (Lambda::Known(a.coeff), Lambda::Known(b.coeff))
                }
                Eigenvalue::Symbolic(x) if l.eta.z == Scalar::base(field.one()) => {
                    (x, x.inverse(field))
                }
                _ => return Err(not_in_image()),
            };
            GaloisRep::reducible(
                field,
                Summand { a: l.r + 1 + l.eta.s, lambda: alpha },
                Summand { a: l.eta.s, lambda: beta },
            )
        }
        _ => return Err(not_in_image()),
    };
    if ll_map(&candidate)? != labels {
        return Err(not_in_image());
    }
    Ok(candidate)
}

/// Whether `pi(r, 0, eta)` and `pi(r2, 0, eta2)` have the same Galois
/// preimage.
pub fn supersingular_equivalence(
    field: &ResidueField,
    r: i64,
    eta: Twist,
    r2: i64,
    eta2: Twist,
) -> bool {
    let a = SmoothRepLabel { r, lambda: Eigenvalue::Zero, eta, semisimplified: true };
    let b = SmoothRepLabel { r: r2, lambda: Eigenvalue::Zero, eta: eta2, semisimplified: true };
    a.normalized(field) == b.normalized(field)
}

/// Which of the subquotients `F_i` may be nonzero: each alternative lists
/// the contributing indices, every other `F_i` vanishes. A repeated index
/// marks a factor paired with itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPattern {
    pub b: i64,
    pub alternatives: Vec<Vec<usize>>,
}

impl FPattern {
    pub fn for_branch(b: i64, branch: Branch) -> Self {
        let alternatives = match branch {
            Branch::Irreducible(0) => vec![vec![1]],
            Branch::Irreducible(j) => {
                let j = j as usize;
                vec![vec![2 * j], vec![2 * j + 1]]
            }
            Branch::Reducible(i) => {
                let i = i as usize;
                let bu = b as usize;
                if b % 2 == 1 && 2 * i - 1 == bu {
                    vec![vec![bu, bu]]
                } else if b % 2 == 0 && 2 * i == bu {
                    vec![vec![bu - 1, bu + 1], vec![bu - 1, bu]]
                } else {
                    vec![vec![2 * i - 1, 2 * i]]
                }
            }
        };
        FPattern { b, alternatives }
    }

    pub fn contributes(&self, i: usize) -> bool {
        self.alternatives.iter().any(|a| a.contains(&i))
    }
}

impl fmt::Display for FPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alts: Vec<String> = self
            .alternatives
            .iter()
            .map(|a| {
                let names: Vec<String> = a.iter().map(|i| format!("F{i}")).collect();
                if names.len() == 1 {
                    names[0].clone()
                } else {
                    format!("({})", names.join(","))
                }
            })
            .collect();
        f.write_str(&alts.join(" or "))
    }
}

/// The selection pattern when `tau - t = offset`.
pub fn jh_selection_table(b: i64, offset: Valuation) -> Result<FPattern> {
    if b < 1 {
        return Err(Error::SlopeOutOfRange(format!("b = {b}")));
    }
    let branch = zigzag_branch(b, offset, Valuation::Finite(HalfInt::ZERO))?;
    Ok(FPattern::for_branch(b, branch))
}

/// A polynomial in `T` bounding a subquotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TPoly {
    /// `T - l`; `l = 0` gives `T`.
    Linear(Eigenvalue),
    /// `T^2 - dT + 1`; `None` when `d` is not determined at this `tau`.
    Quadratic(Option<Fq>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Zero,
    /// `F_i` is a quotient of `ind J_i / P(T)`.
    Quotient(TPoly),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Below,
    At,
    Above,
}

/// One statement: when `tau - t` relates to `center` as given, the listed
/// subquotients obey the listed constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gr19Statement {
    pub center: HalfInt,
    pub relation: Relation,
    pub constraints: Vec<(usize, Slot)>,
}

impl Gr19Statement {
    pub fn applies(&self, offset: Valuation) -> bool {
        let Valuation::Finite(x) = offset else {
            return self.relation == Relation::Above;
        };
        match self.relation {
            Relation::Below => x < self.center,
            Relation::At => x == self.center,
            Relation::Above => x > self.center,
        }
    }
}

/// Combined constraint on one subquotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotConstraint {
    Zero,
    /// Every listed polynomial kills `F_i`; an empty list means no constraint.
    Quotients(Vec<TPoly>),
}

pub type SlotTable = BTreeMap<usize, SlotConstraint>;

#[derive(Debug, Clone)]
pub struct Gr19Constraints {
    pub p: i64,
    pub r: i64,
    /// `tau - t`.
    pub offset: Valuation,
    pub lambda1: Option<Fq>,
    pub d: Option<Fq>,
    pub statements: Vec<Gr19Statement>,
}

impl Gr19Constraints {
    /// The nine statements with the given values of `lambda_1` and `d`.
    pub fn statements(field: &ResidueField, lambda1: Option<Fq>, d: Option<Fq>) -> Vec<Gr19Statement> {
        use Relation::*;
        let (l1, l1_inv) = match lambda1 {
            Some(x) => (
                Eigenvalue::Known(Scalar::base(x)),
                Eigenvalue::Known(Scalar::base(field.inv(x).expect("nonzero"))),
            ),
            None => {
                let u = Lambda::unknown(1);
                (Eigenvalue::Symbolic(u), Eigenvalue::Symbolic(u.inverse(field)))
            }
        };
        let q = |poly| Slot::Quotient(poly);
        let t_only = TPoly::Linear(Eigenvalue::Zero);
        let st = |twice: i64, relation, constraints| Gr19Statement {
            center: HalfInt::from_twice(twice),
            relation,
            constraints,
        };
        vec![
            st(0, Above, vec![(1, Slot::Zero)]),
            st(0, At, vec![(1, q(TPoly::Linear(l1_inv))), (2, q(TPoly::Linear(l1)))]),
            st(0, Below, vec![(2, Slot::Zero)]),
            st(1, Above, vec![(2, Slot::Zero)]),
            st(1, At, vec![(2, q(t_only)), (3, q(t_only))]),
            st(1, Below, vec![(3, Slot::Zero)]),
            st(2, Above, vec![(3, q(TPoly::Quadratic(Some(field.zero()))))]),
            st(2, At, vec![(3, q(TPoly::Quadratic(d)))]),
            st(2, Below, vec![(3, q(t_only))]),
        ]
    }

    pub fn applicable(&self) -> Vec<&Gr19Statement> {
        self.statements.iter().filter(|s| s.applies(self.offset)).collect()
    }

    /// Merges the applicable statements for indices `0..=max_index`; a
    /// vanishing statement overrides quotient statements. `F_0` always
    /// vanishes.
    pub fn slot_table(&self, max_index: usize) -> SlotTable {
        let mut table: SlotTable =
            (0..=max_index).map(|i| (i, SlotConstraint::Quotients(Vec::new()))).collect();
        table.insert(0, SlotConstraint::Zero);
        for st in self.applicable() {
            for &(i, slot) in &st.constraints {
                let entry = table.entry(i).or_insert(SlotConstraint::Quotients(Vec::new()));
                match (slot, &mut *entry) {
                    (Slot::Zero, _) => *entry = SlotConstraint::Zero,
                    (Slot::Quotient(poly), SlotConstraint::Quotients(v)) => v.push(poly),
                    (Slot::Quotient(_), SlotConstraint::Zero) => {}
                }
            }
        }
        table
    }
}

/// The nine statements at `a_p` of slope `3/2`, weight `k = r + 2`.
pub fn gr19_constraints(r: i64, a_p: &PadicElement) -> Result<Gr19Constraints> {
    let ctx = a_p.context();
    let field = ctx.field();
    let p = ctx.p() as i64;
    if p < 5 {
        return Err(Error::InvalidInput(format!("p = {p} must be at least 5")));
    }
    let z = zigzag_params(r + 2, a_p)?;
    if z.b != 3 || !z.exceptional {
        return Err(Error::SlopeOutOfRange(format!(
            "need slope 3/2 in the exceptional class, got v = {}",
            z.v
        )));
    }
    if r <= 3 {
        return Err(Error::InvalidInput(format!("r = {r} must exceed 3")));
    }
    let Valuation::Finite(t) = z.t else {
        return Err(Error::DegenerateT);
    };
    let offset = match z.tau {
        Valuation::Finite(tau) => Valuation::Finite(tau - t),
        Valuation::Infinite => Valuation::Infinite,
    };
    let at = |twice: i64| offset == Valuation::Finite(HalfInt::from_twice(twice));
    let lambda1 = if at(0) {
        match lambda_value(1, 3, r, &z.c)? {
            Lambda::Known(x) => Some(x),
            _ => None,
        }
    } else {
        None
    };
    let d = if at(2) {
        match lambda_value(2, 3, r, &z.c)? {
            Lambda::Known(x) => {
                Some(field.add(x, field.inv(x).expect("nonzero")))
            }
            Lambda::Root { trace, .. } => Some(trace),
            Lambda::Unknown { .. } => None,
        }
    } else {
        None
    };
    let statements = Gr19Constraints::statements(field, lambda1, d);
    Ok(Gr19Constraints { p, r, offset, lambda1, d, statements })
}

/// The eigenvalue `e` with `label ~ pi(m, e, w^s)`, if the label has that
/// shape.
fn eigen_at(field: &ResidueField, label: &SmoothRepLabel, j: &GammaModuleLabel) -> Option<Eigenvalue> {
    let p = field.p() as i64;
    let (m, s) = (j.m as i64, j.s as i64);
    let one = Scalar::base(field.one());
    match label.lambda {
        Eigenvalue::Zero => {
            let cand = SmoothRepLabel::new(field, m, Eigenvalue::Zero, Twist::omega(field, s)).ok()?;
            (cand == *label).then_some(Eigenvalue::Zero)
        }
        lambda => {
            let m = if m == p - 1 { 0 } else { m };
            if label.r != m || label.eta.s != s.rem_euclid(p - 1) {
                return None;
            }
            if label.eta.z == one {
                return Some(lambda);
            }
            match lambda {
                Eigenvalue::Known(x) if label.eta.z == one.neg(field) => {
                    Some(Eigenvalue::Known(x.neg(field)))
                }
                _ => None,
            }
        }
    }
}

fn satisfies(field: &ResidueField, e: Eigenvalue, poly: &TPoly) -> bool {
    match (poly, e) {
        (TPoly::Linear(x), e) => *x == e,
        (TPoly::Quadratic(_), Eigenvalue::Zero) => false,
        (TPoly::Quadratic(None), _) => true,
        (TPoly::Quadratic(Some(d)), Eigenvalue::Known(x)) => {
            // x^2 + 1 = d x
            let lhs = field.add(x.square(field), field.one());
            if x.radical {
                *d == field.zero() && lhs == field.zero()
            } else {
                lhs == field.mul(*d, x.coeff)
            }
        }
        (TPoly::Quadratic(Some(d)), Eigenvalue::Symbolic(Lambda::Root { trace, .. })) => trace == *d,
        (TPoly::Quadratic(Some(_)), Eigenvalue::Symbolic(_)) => false,
    }
}

/// Whether the dictionary image of `rep` fits the slot table: every label
/// is `ind J_i / P(T)` for some index `i` not forced to vanish, with `P`
/// satisfying every polynomial constraint on that slot.
pub fn llc_cross_check(rep: &GaloisRep, table: &SlotTable, jh: &[GammaModuleLabel]) -> Result<bool> {
    let field = rep.field();
    let labels = ll_map(rep)?;
    Ok(labels.iter().all(|label| {
        table.iter().any(|(&i, slot)| {
            let (Some(j), SlotConstraint::Quotients(polys)) = (jh.get(i), slot) else {
                return false;
            };
            match eigen_at(field, label, j) {
                Some(e) => polys.iter().all(|poly| satisfies(field, e, poly)),
                None => false,
            }
        })
    }))
}

/// Whether the dictionary image of `rep` is carried by the factors of one
/// alternative of the selection pattern, with any eigenvalue.
pub fn pattern_cross_check(rep: &GaloisRep, pattern: &FPattern, jh: &[GammaModuleLabel]) -> Result<bool> {
    let field = rep.field();
    let labels = ll_map(rep)?;
    Ok(pattern.alternatives.iter().any(|alt| {
        labels.iter().all(|label| {
            alt.iter().any(|&i| jh.get(i).is_some_and(|j| eigen_at(field, label, j).is_some()))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::branch_rep;
    use crate::gamma::jh_sequence;

    fn f(p: u64) -> ResidueField {
        ResidueField::new(p, 1).unwrap()
    }

    #[test]
    fn brackets() {
        assert_eq!(bracket_normalize(7, 0), 0);
        assert_eq!(bracket_normalize(7, -1), 5);
        assert_eq!(bracket_normalize(5, 5 - 3 - 3), 3);
    }

    #[test]
    fn supersingular_example() {
        let k = f(7);
        let rep = GaloisRep::induced(&k, 4);
        let labels = ll_map(&rep).unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].format(&k), "π(3, 0, 1)");
        assert_eq!(ll_inverse(&k, &labels).unwrap(), rep);
    }

    #[test]
    fn principal_series_examples() {
        let k = f(7);
        let l = Lambda::Known(k.from_int(3));
        let rep = GaloisRep::reducible_pair(&k, l, 3, 1);
        let labels = ll_map(&rep).unwrap();
        let text: Vec<String> = labels.iter().map(|x| x.format(&k)).collect();
        assert_eq!(text, ["π(1, 3, ω)", "π(3, 5, ω^3)"]);
        assert_eq!(ll_inverse(&k, &labels).unwrap(), rep);

        let rep = GaloisRep::reducible_pair(&k, l, 2, 2);
        let labels = ll_map(&rep).unwrap();
        assert!(labels.iter().all(|x| x.r == 5 && x.eta.s == 2));
    }

    #[test]
    fn single_principal_series_is_not_in_image() {
        let k = f(5);
        let l = SmoothRepLabel::new(&k, 0, Eigenvalue::Known(Scalar::base(k.one())), Twist::omega(&k, 0))
            .unwrap();
        assert!(matches!(ll_inverse(&k, &[l]), Err(Error::NotInImage(_))));
        assert!(!l.is_irreducible(&k));
        assert_eq!(l.constituents(&k), ["St⊗1", "1∘det"]);
    }

    #[test]
    fn non_square_products_use_radicals() {
        let k = f(5);
        let rep = GaloisRep::reducible(
            &k,
            Summand { a: 1, lambda: Lambda::Known(k.from_int(2)) },
            Summand { a: 3, lambda: Lambda::Known(k.one()) },
        );
        let labels = ll_map(&rep).unwrap();
        assert!(labels[0].eta.z.radical);
        assert_eq!(ll_inverse(&k, &labels).unwrap(), rep);
        let text = labels.iter().map(|l| l.to_text(&k)).collect::<Vec<_>>().join(" + ");
        assert_eq!(parse_labels(&text, &k).unwrap(), labels);
    }

    #[test]
    fn supersingular_equivalences() {
        let k = f(7);
        let w = |s| Twist::omega(&k, s);
        assert!(supersingular_equivalence(&k, 1, w(1), 5, w(2)));
        assert!(supersingular_equivalence(&k, 1, w(1), 1, w(1)));
        assert!(!supersingular_equivalence(&k, 1, w(1), 3, w(0)));
    }

    #[test]
    fn selection_timeline() {
        let h = |t| Valuation::Finite(HalfInt::from_twice(t));
        assert_eq!(jh_selection_table(3, h(-1)).unwrap().to_string(), "F1");
        assert_eq!(jh_selection_table(3, h(0)).unwrap().to_string(), "(F1,F2)");
        assert_eq!(jh_selection_table(3, h(1)).unwrap().to_string(), "F2 or F3");
        assert_eq!(jh_selection_table(3, h(2)).unwrap().to_string(), "(F3,F3)");
        assert_eq!(jh_selection_table(4, h(2)).unwrap().to_string(), "(F3,F5) or (F3,F4)");
        assert_eq!(jh_selection_table(4, h(5)).unwrap().to_string(), "F4 or F5");
    }

    #[test]
    fn symbolic_pairs_map_through() {
        let k = f(11);
        for b in 1..=10 {
            let jh = jh_sequence(11, b as u64).unwrap();
            for br in Branch::all(b) {
                let rep = branch_rep(&k, b, br, Lambda::unknown(br.index() as u32));
                let labels = ll_map(&rep).unwrap();
                assert_eq!(ll_inverse(&k, &labels).unwrap(), rep);
                let pattern = FPattern::for_branch(b, br);
                assert!(pattern_cross_check(&rep, &pattern, &jh).unwrap(), "b={b} {br}");
            }
        }
    }

    #[test]
    fn slope_three_halves_matches_statements() {
        use crate::engine::chotomy;
        use crate::padic::PadicContext;
        let mut seen = std::collections::BTreeSet::new();
        for p in [5u64, 7] {
            let ctx = PadicContext::with_defaults(p).unwrap();
            let jh = jh_sequence(p, 3).unwrap();
            for m in 1..40 {
                let r = 3 + m * (p as i64 - 1);
                for (a, b) in [(1, 0), (2, 0), (1, 1), (3, 2), (1, -1), (2, 1)] {
                    let ap = PadicElement::from_coordinates(&ctx, 3, &[a], &[b]);
                    let Ok(z) = zigzag_params(r + 2, &ap) else { continue };
                    let Ok((_, rep)) = chotomy(&z) else { continue };
                    let g = gr19_constraints(r, &ap).unwrap();
                    seen.insert(format!("{:?}", g.offset));
                    let table = g.slot_table(3);
                    assert!(llc_cross_check(&rep, &table, &jh).unwrap(), "p={p} r={r} {rep}");
                }
            }
        }
        assert!(seen.len() >= 4, "{seen:?}");
    }

    #[test]
    fn half_step_coincidence() {
        let k = f(7);
        let rep = GaloisRep::induced(&k, 3 + 7);
        let jh = jh_sequence(7, 3).unwrap();
        let stmts = Gr19Constraints::statements(&k, None, None);
        let g = Gr19Constraints {
            p: 7,
            r: 9,
            offset: Valuation::Finite(HalfInt::from_twice(1)),
            lambda1: None,
            d: None,
            statements: stmts,
        };
        let table = g.slot_table(3);
        assert_eq!(table[&2], SlotConstraint::Quotients(vec![TPoly::Linear(Eigenvalue::Zero)]));
        assert!(llc_cross_check(&rep, &table, &jh).unwrap());
        for i in [2usize, 3] {
            let mut only = table.clone();
            for (j, slot) in only.iter_mut() {
                if *j != i {
                    *slot = SlotConstraint::Zero;
                }
            }
            assert!(llc_cross_check(&rep, &only, &jh).unwrap(), "J_{i}/T alone");
        }
        let wrong = GaloisRep::induced(&k, 4);
        assert!(!llc_cross_check(&wrong, &table, &jh).unwrap());
    }
}
