//! Compactly induced representations `ind_{KZ}^G Sym^r` on the tree of
//! `PGL_2(Q_p)`, with the Hecke operator `T` and the action of `G`.
//!
//! An elementary function `[g, v]` is supported on `KZ g^-1` and satisfies
//! `[gk, v] = [g, k v]` for `k` in `KZ`; `G` acts by `h [g, v] = [hg, v]`.
//! Vertices are the cosets `g KZ`, each written `(p^a, c; 0, 1)` with `c`
//! a `p`-adic rational taken modulo `p^a`. The centre acts trivially.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{mod_pow, valuation_int};
use crate::error::{Error, Result};
use crate::field::{Fq, ResidueField};
use crate::padic::{PadicContext, PadicElement};

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let n = valuation_int(x.numer(), p)? as i64;
    let d = valuation_int(x.denom(), p)? as i64;
    Some(n - d)
}

fn pow_p(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A `2 x 2` rational matrix `(a b; c d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl QMat {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        QMat { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        QMat::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        QMat::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        QMat {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Result<QMat> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(QMat {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        })
    }

    fn scale(&self, s: &BigRational) -> QMat {
        QMat { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// The class of `c` in `Q_p / p^a Z_p`, represented in `[0, p^a)` with a
/// `p`-power denominator.
fn reduce_mod_power(c: &BigRational, p: u64, a: i64) -> BigRational {
    if c.is_zero() {
        return BigRational::zero();
    }
    let pb = BigInt::from(p);
    let e = valuation_int(c.denom(), p).expect("nonzero") as i64;
    if a + e <= 0 {
        return BigRational::zero();
    }
    let pe = num_traits::pow(pb.clone(), e as usize);
    let u = c.denom() / &pe;
    let q = num_traits::pow(pb, (a + e) as usize);
    let g = u.extended_gcd(&q);
    debug_assert!(g.gcd.is_one());
    let n = (c.numer() * g.x).mod_floor(&q);
    BigRational::new(n, pe)
}

/// A vertex `(p^a, c; 0, 1) KZ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeVertex {
    pub a: i64,
    pub c: BigRational,
}

impl TreeVertex {
    pub fn base() -> Self {
        TreeVertex { a: 0, c: BigRational::zero() }
    }

    pub fn matrix(&self, p: u64) -> QMat {
        QMat::new(pow_p(p, self.a), self.c.clone(), int(0), int(1))
    }

    /// Distance to the base vertex, from the elementary divisors of the
    /// representative.
    pub fn distance(&self, p: u64) -> u64 {
        let vc = rational_valuation(&self.c, p).unwrap_or(i64::MAX);
        let m = self.a.min(vc).min(0);
        (self.a - 2 * m) as u64
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p^{}, {}; 0, 1)", self.a, self.c)
    }
}

/// `g = vertex * p^m * k0` with `k0` in `GL_2(Z_p)`.
#[derive(Debug, Clone)]
pub struct KzFactor {
    pub m: i64,
    pub k0: QMat,
}

/// The canonical representative of `g KZ` and the factor in `KZ`
/// relating them.
pub fn normalize_coset(p: u64, g: &QMat) -> Result<(TreeVertex, KzFactor)> {
    let det = g.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let v = |x: &BigRational| rational_valuation(x, p);
    // Column operations by GL_2(Z_p) bring the bottom row to (0, p^e);
    // the surviving columns are (x, 0) and (y, p^e) with x p^e = +-det.
    let use_d = match (v(&g.c), v(&g.d)) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(vc), Some(vd)) => vd <= vc,
    };
    let (top, e) = if use_d {
        (&g.b / &g.d, v(&g.d).expect("nonzero"))
    } else {
        (&g.a / &g.c, v(&g.c).expect("nonzero"))
    };
    let a = v(&det).expect("nonzero") - 2 * e;
    let c = reduce_mod_power(&top, p, a);
    let vertex = TreeVertex { a, c };
    let k = vertex.matrix(p).inverse()?.mul(g);
    let m = k.entries().iter().filter_map(|x| v(x)).min().expect("invertible");
    let k0 = k.scale(&pow_p(p, -m));
    let unit_det = v(&k0.det()) == Some(0);
    let integral = k0.entries().iter().all(|x| v(x).map_or(true, |w| w >= 0));
    if !unit_det || !integral {
        return Err(Error::InvalidInput(format!("normalization of {g} left {k}")));
    }
    Ok((vertex, KzFactor { m, k0 }))
}

/// Coefficients of `Sym^r`: `Z/p^M`, or a finite field of characteristic `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffRing {
    ModPrimePower { p: u64, m: u32 },
    Residue(ResidueField),
}

impl CoeffRing {
    pub fn mod_prime_power(p: u64, m: u32) -> Result<Self> {
        if m == 0 || (p as f64).powi(m as i32) >= 2f64.powi(31) {
            return Err(Error::InvalidInput(format!("p^M = {p}^{m} out of range")));
        }
        Ok(CoeffRing::ModPrimePower { p, m })
    }

    pub fn p(&self) -> u64 {
        match self {
            CoeffRing::ModPrimePower { p, .. } => *p,
            CoeffRing::Residue(f) => f.p(),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            CoeffRing::ModPrimePower { p, m } => p.pow(*m),
            CoeffRing::Residue(f) => f.p(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CoeffRing::ModPrimePower { p, m } => format!("Z/{p}^{m}"),
            CoeffRing::Residue(f) => format!("F_{}^{}", f.p(), f.degree()),
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        match self {
            CoeffRing::ModPrimePower { .. } => (x + y) % self.modulus(),
            CoeffRing::Residue(f) => f.add(Fq(x), Fq(y)).0,
        }
    }

    pub fn neg(&self, x: u64) -> u64 {
        match self {
            CoeffRing::ModPrimePower { .. } => (self.modulus() - x) % self.modulus(),
            CoeffRing::Residue(f) => f.neg(Fq(x)).0,
        }
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            CoeffRing::ModPrimePower { .. } => x * y % self.modulus(),
            CoeffRing::Residue(f) => f.mul(Fq(x), Fq(y)).0,
        }
    }

    pub fn from_int(&self, n: i64) -> u64 {
        match self {
            CoeffRing::ModPrimePower { .. } => n.rem_euclid(self.modulus() as i64) as u64,
            CoeffRing::Residue(f) => f.from_int(n).0,
        }
    }

    /// Reduction of a rational with denominator prime to `p`.
    pub fn from_rational(&self, x: &BigRational) -> Option<u64> {
        let q = BigInt::from(self.modulus());
        let g = x.denom().extended_gcd(&q);
        if !g.gcd.is_one() {
            return None;
        }
        let n = (x.numer() * g.x).mod_floor(&q).to_i64()?;
        Some(self.from_int(n))
    }

    /// The Teichmüller lift of `l` in `F_p`, as an integer in `[0, p^M)`.
    pub fn teichmuller(&self, l: u64) -> i64 {
        match self {
            CoeffRing::ModPrimePower { p, m } => {
                let ctx = PadicContext::new(*p, 1, *m).expect("checked range");
                let field = ctx.field().clone();
                let t = PadicElement::teichmuller(&ctx, field.from_int(l as i64));
                let q = BigInt::from(self.modulus());
                t.to_integer_mod().expect("unit").mod_floor(&q).to_i64().expect("small")
            }
            CoeffRing::Residue(_) => l as i64,
        }
    }

    pub fn format(&self, x: u64) -> String {
        match self {
            CoeffRing::ModPrimePower { .. } => x.to_string(),
            CoeffRing::Residue(f) => f.format(Fq(x)),
        }
    }

    fn from_value(&self, v: &Value) -> Option<u64> {
        match self {
            CoeffRing::ModPrimePower { .. } => v.as_i64().map(|n| self.from_int(n)),
            CoeffRing::Residue(f) => match v {
                Value::String(s) => f.parse(s).ok().map(|x| x.0),
                _ => v.as_i64().map(|n| self.from_int(n)),
            },
        }
    }
}

fn poly_mul(ring: &CoeffRing, x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            out[i + j] = ring.add(out[i + j], ring.mul(a, b));
        }
    }
    out
}

/// `P(X, Y) -> P(aX + cY, bX + dY)` on `Sym^r`, coefficients indexed by the
/// power of `Y`.
pub fn act_on_sym(ring: &CoeffRing, m: [u64; 4], v: &[u64]) -> Vec<u64> {
    let [a, b, c, d] = m;
    let r = v.len() - 1;
    let first = [a, c];
    let second = [b, d];
    let mut pow1 = vec![vec![1u64]];
    let mut pow2 = vec![vec![1u64]];
    for i in 0..r {
        pow1.push(poly_mul(ring, &pow1[i], &first));
        pow2.push(poly_mul(ring, &pow2[i], &second));
    }
    let mut out = vec![0; r + 1];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0 {
            continue;
        }
        let term = poly_mul(ring, &pow1[r - j], &pow2[j]);
        for (i, t) in term.into_iter().enumerate() {
            out[i] = ring.add(out[i], ring.mul(vj, t));
        }
    }
    out
}

fn reduce_matrix(ring: &CoeffRing, k: &QMat) -> Result<[u64; 4]> {
    let conv = |x: &BigRational| {
        ring.from_rational(x)
            .ok_or_else(|| Error::InvalidInput(format!("{x} is not p-integral")))
    };
    Ok([conv(&k.a)?, conv(&k.b)?, conv(&k.c)?, conv(&k.d)?])
}

/// A finite sum of elementary functions `[g, v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFunction {
    pub ring: CoeffRing,
    pub r: usize,
    pub terms: BTreeMap<TreeVertex, Vec<u64>>,
}

impl TreeFunction {
    pub fn zero(ring: CoeffRing, r: usize) -> Self {
        TreeFunction { ring, r, terms: BTreeMap::new() }
    }

    /// `[g, v]`, stored at the canonical representative of `g KZ`.
    pub fn elementary(ring: CoeffRing, g: &QMat, v: &[u64]) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::WrongDegree(0));
        }
        let mut f = Self::zero(ring, v.len() - 1);
        f.add_elementary(g, v)?;
        Ok(f)
    }

    fn p(&self) -> u64 {
        self.ring.p()
    }

    fn add_elementary(&mut self, g: &QMat, v: &[u64]) -> Result<()> {
        let (vertex, k) = normalize_coset(self.p(), g)?;
        let kv = act_on_sym(&self.ring, reduce_matrix(&self.ring, &k.k0)?, v);
        self.add_at(vertex, &kv);
        Ok(())
    }

    fn add_at(&mut self, vertex: TreeVertex, v: &[u64]) {
        let ring = self.ring.clone();
        let entry = self.terms.entry(vertex.clone()).or_insert_with(|| vec![0; v.len()]);
        for (e, &x) in entry.iter_mut().zip(v) {
            *e = ring.add(*e, x);
        }
        if entry.iter().all(|&x| x == 0) {
            self.terms.remove(&vertex);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (vertex, v) in &other.terms {
            out.add_at(vertex.clone(), v);
        }
        out
    }

    pub fn scale(&self, s: u64) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.r);
        for (vertex, v) in &self.terms {
            let w: Vec<u64> = v.iter().map(|&x| self.ring.mul(s, x)).collect();
            out.add_at(vertex.clone(), &w);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `h f`.
    pub fn g_act(&self, h: &QMat) -> Result<Self> {
        let p = self.p();
        let mut out = Self::zero(self.ring.clone(), self.r);
        for (vertex, v) in &self.terms {
            out.add_elementary(&h.mul(&vertex.matrix(p)), v)?;
        }
        Ok(out)
    }

    /// `T [g, v] = sum_l [g (p, [l]; 0, 1), v(X, -[l]X + pY)] + [g (1, 0; 0, p), v(pX, Y)]`.
    pub fn apply_t(&self) -> Result<Self> {
        let p = self.p();
        let ring = &self.ring;
        let lifts: Vec<i64> = (0..p).map(|l| ring.teichmuller(l)).collect();
        let pr = ring.from_int(p as i64);
        let mut out = Self::zero(ring.clone(), self.r);
        for (vertex, v) in &self.terms {
            let g = vertex.matrix(p);
            for &t in &lifts {
                let h = QMat::from_ints(p as i64, t, 0, 1);
                let w = act_on_sym(ring, [1, ring.from_int(-t), 0, pr], v);
                out.add_elementary(&g.mul(&h), &w)?;
            }
            let h = QMat::from_ints(1, 0, 0, p as i64);
            let w = act_on_sym(ring, [pr, 0, 0, 1], v);
            out.add_elementary(&g.mul(&h), &w)?;
        }
        Ok(out)
    }

    pub fn apply_t_power(&self, n: u32) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.apply_t()?;
        }
        Ok(f)
    }

    pub fn support_radius(&self) -> u64 {
        let p = self.p();
        self.terms.keys().map(|v| v.distance(p)).max().unwrap_or(0)
    }

    /// Sum of the values; defined for `r = 0`.
    pub fn total_sum(&self) -> Result<u64> {
        self.weighted_sum(false)
    }

    /// Sum of the values weighted by `(-1)^distance`; defined for `r = 0`.
    pub fn alternating_sum(&self) -> Result<u64> {
        self.weighted_sum(true)
    }

    fn weighted_sum(&self, alternate: bool) -> Result<u64> {
        if self.r != 0 {
            return Err(Error::WrongDegree(self.r));
        }
        let p = self.p();
        Ok(self.terms.iter().fold(0, |acc, (vertex, v)| {
            let x = if alternate && vertex.distance(p) % 2 == 1 { self.ring.neg(v[0]) } else { v[0] };
            self.ring.add(acc, x)
        }))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(vertex, v)| {
                let vals: Vec<Value> = match &self.ring {
                    CoeffRing::ModPrimePower { .. } => v.iter().map(|&x| json!(x)).collect(),
                    CoeffRing::Residue(_) => v.iter().map(|&x| json!(self.ring.format(x))).collect(),
                };
                json!({"a": vertex.a, "c": vertex.c.to_string(), "value": vals})
            })
            .collect();
        json!({"p": self.p(), "r": self.r, "ring": self.ring.describe(), "terms": terms})
    }

    pub fn from_json(value: &Value, ring: CoeffRing) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("tree function JSON: {m}"));
        let r = value.get("r").and_then(Value::as_u64).ok_or_else(|| bad("r"))? as usize;
        let mut f = Self::zero(ring.clone(), r);
        for term in value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let a = term.get("a").and_then(Value::as_i64).ok_or_else(|| bad("a"))?;
            let c: BigRational = term
                .get("c")
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("c"))?;
            let vals = term.get("value").and_then(Value::as_array).ok_or_else(|| bad("value"))?;
            let v: Option<Vec<u64>> = vals.iter().map(|x| ring.from_value(x)).collect();
            let v = v.ok_or_else(|| bad("coefficient"))?;
            if v.len() != r + 1 {
                return Err(Error::WrongDegree(v.len().saturating_sub(1)));
            }
            f.add_elementary(&TreeVertex { a, c }.matrix(ring.p()), &v)?;
        }
        Ok(f)
    }

    /// One line per support vertex: distance, representative, value.
    pub fn support_table(&self) -> String {
        let p = self.p();
        let mut out = String::new();
        for (vertex, v) in &self.terms {
            let vals: Vec<String> = v.iter().map(|&x| self.ring.format(x)).collect();
            out.push_str(&format!("{}\t{}\t[{}]\n", vertex.distance(p), vertex, vals.join(", ")));
        }
        out
    }
}

/// Whether a mod `p` polynomial of `Sym^r` is divisible by `X^p Y - X Y^p`:
/// it must vanish at `(1, 0)` and at every `(x, 1)`.
pub fn theta_divisible(p: u64, v: &[u64]) -> bool {
    let r = v.len() - 1;
    if v[0] % p != 0 {
        return false;
    }
    (0..p).all(|x| {
        let s = v
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| (acc + c % p * mod_pow(x, (r - j) as u64, p)) % p);
        s == 0
    })
}

/// `true` when the matrix lies in `KZ`.
pub fn in_kz(p: u64, k: &QMat) -> bool {
    let v = |x: &BigRational| rational_valuation(x, p);
    let Some(m) = k.entries().iter().filter_map(|x| v(x)).min() else {
        return false;
    };
    let k0 = k.scale(&pow_p(p, -m));
    v(&k0.det()) == Some(0)
}

impl QMat {
    /// A sign-insensitive check that two matrices define the same vertex.
    pub fn same_vertex(&self, other: &QMat, p: u64) -> Result<bool> {
        Ok(in_kz(p, &self.inverse()?.mul(other)))
    }
}
