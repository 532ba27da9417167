//! Elements of the ramified quadratic extension `E = Q_{p^f}(sqrt p)`.
//!
//! The ring of integers is `W[pi]` with `pi^2 = p`, where `W` is the
//! unramified extension of `Z_p` of degree `f`. A nonzero element is stored
//! as `pi^val * (A + B pi)` with `A` a unit of `W`; the pair `(A, B)` is kept
//! modulo `p^M`. Every element also carries its relative precision, counted
//! in `pi`-digits, so that cancellation is tracked instead of silently
//! producing a wrong valuation.
//!
//! Valuations are normalized so that `v(p) = 1`; a single `pi`-digit has
//! valuation `1/2`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{mod_inv, valuation_int};
use crate::error::{Error, Result};
use crate::field::{Fq, ResidueField};

/// A number in `(1/2) Z`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Twice the value, i.e. the count of `pi`-digits.
    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn ceil(self) -> i64 {
        -(-self.0).div_euclid(2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Parses `3`, `-1`, `3/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("expected an integer or n/2, got `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            match d.trim() {
                "2" => Ok(HalfInt(n)),
                "1" => Ok(HalfInt(2 * n)),
                _ => Err(bad()),
            }
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(HalfInt(2 * n))
        }
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A valuation: a half-integer or `+infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(HalfInt),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<HalfInt> {
        match self {
            Valuation::Finite(h) => Some(h),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(h) => write!(f, "{h}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

type W = Vec<i128>;

/// Shared parameters: the prime, residue field, and working precision.
#[derive(Debug, PartialEq, Eq)]
pub struct PadicContext {
    field: ResidueField,
    /// Working precision `M`: coefficients of `W` are kept modulo `p^M`.
    precision: u32,
    modulus: i128,
    /// Monic lift of the residue modulus to `Z`.
    lift: Vec<i128>,
}

pub const DEFAULT_PRECISION: u32 = 12;
pub const DEFAULT_RESIDUE_DEGREE: usize = 2;

impl PadicContext {
    pub fn new(p: u64, f: usize, precision: u32) -> Result<Arc<Self>> {
        let field = ResidueField::new(p, f)?;
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        let modulus = (p as i128)
            .checked_pow(precision)
            .filter(|&m| m < (1i128 << 62))
            .ok_or_else(|| {
                Error::InvalidInput(format!("p^M = {p}^{precision} exceeds 2^62"))
            })?;
        let lift = match f {
            2 => {
                let q = (p - field.modulus()[0]) as i128;
                vec![-q, 0, 1]
            }
            _ => field.modulus().iter().map(|&c| c as i128).collect(),
        };
        Ok(Arc::new(Self { field, precision, modulus, lift }))
    }

    /// Context with residue degree 2 and precision 12.
    pub fn with_defaults(p: u64) -> Result<Arc<Self>> {
        Self::new(p, DEFAULT_RESIDUE_DEGREE, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn residue_degree(&self) -> usize {
        self.field.degree()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    /// Largest relative precision an element can carry, in `pi`-digits.
    pub fn max_relative_precision(&self) -> i64 {
        2 * self.precision as i64
    }

    fn f(&self) -> usize {
        self.field.degree()
    }

    fn red(&self, x: i128) -> i128 {
        x.rem_euclid(self.modulus)
    }

    fn w_zero(&self) -> W {
        vec![0; self.f()]
    }

    fn w_const(&self, c: i128) -> W {
        let mut w = self.w_zero();
        w[0] = self.red(c);
        w
    }

    fn w_from_big(&self, n: &BigInt) -> W {
        let m = BigInt::from(self.modulus);
        let r = n.mod_floor(&m);
        self.w_const(r.to_i128().expect("reduced below 2^62"))
    }

    fn w_add(&self, a: &W, b: &W) -> W {
        a.iter().zip(b).map(|(x, y)| self.red(x + y)).collect()
    }

    fn w_neg(&self, a: &W) -> W {
        a.iter().map(|x| self.red(-x)).collect()
    }

    fn w_sub(&self, a: &W, b: &W) -> W {
        a.iter().zip(b).map(|(x, y)| self.red(x - y)).collect()
    }

    fn w_scale(&self, a: &W, k: i128) -> W {
        let k = self.red(k);
        a.iter().map(|x| self.red(x * k)).collect()
    }

    fn w_mul(&self, a: &W, b: &W) -> W {
        let f = self.f();
        let mut prod = vec![0i128; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = self.red(prod[i + j] + x * y);
            }
        }
        while prod.len() > f {
            let lead = prod.pop().expect("nonempty");
            if lead != 0 {
                let shift = prod.len() - f;
                for k in 0..f {
                    prod[shift + k] = self.red(prod[shift + k] - self.lift[k] * lead);
                }
            }
        }
        prod
    }

    fn w_pow(&self, a: &W, mut e: u64) -> W {
        let mut acc = self.w_const(1);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.w_mul(&acc, &base);
            }
            base = self.w_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `p`-adic valuation of a `W` element, `None` if it vanishes mod `p^M`.
    fn w_val(&self, a: &W) -> Option<u32> {
        let p = self.p() as i128;
        a.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % p == 0 {
                    c /= p;
                    v += 1;
                }
                v
            })
            .min()
    }

    fn w_div_p(&self, a: &W) -> W {
        let p = self.p() as i128;
        a.iter()
            .map(|&c| {
                debug_assert_eq!(c % p, 0);
                c / p
            })
            .collect()
    }

    fn w_residue(&self, a: &W) -> Fq {
        let p = self.p() as i128;
        let c: Vec<u64> = a.iter().map(|&x| x.rem_euclid(p) as u64).collect();
        self.field.from_coeffs(&c)
    }

    fn w_from_fq(&self, x: Fq) -> W {
        self.field.coeffs(x).into_iter().map(|c| c as i128).collect()
    }

    fn w_inv(&self, a: &W) -> Option<W> {
        let r = self.w_residue(a);
        let r_inv = self.field.inv(r)?;
        let mut y = self.w_from_fq(r_inv);
        let two = self.w_const(2);
        // Newton iteration doubles the number of correct digits.
        let mut correct = 1u32;
        while correct < self.precision {
            let ay = self.w_mul(a, &y);
            y = self.w_mul(&y, &self.w_sub(&two, &ay));
            correct *= 2;
        }
        Some(y)
    }

    /// The Teichmuller lift of `x`, as an element of `W` modulo `p^M`.
    fn w_teichmuller(&self, x: Fq) -> W {
        let q = self.field.order();
        let mut y = self.w_from_fq(x);
        for _ in 0..=self.precision {
            let next = self.w_pow(&y, q);
            if next == y {
                break;
            }
            y = next;
        }
        y
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    /// `pi^val * (a + b pi)`, `a` a unit, known modulo `pi^rel`.
    Nonzero { val: i64, a: W, b: W, rel: i64 },
    /// Zero modulo `pi^abs`.
    Zero { abs: i64 },
}

/// An element of `E` known to finite precision.
#[derive(Clone)]
pub struct PadicElement {
    ctx: Arc<PadicContext>,
    repr: Repr,
}

impl PartialEq for PadicElement {
    /// Equal valuation, precision and Teichmuller digits.
    fn eq(&self, other: &Self) -> bool {
        if *self.ctx != *other.ctx {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => a == b,
            (Repr::Nonzero { val: v1, rel: r1, .. }, Repr::Nonzero { val: v2, rel: r2, .. }) => {
                v1 == v2 && r1 == r2 && self.digits() == other.digits()
            }
            _ => false,
        }
    }
}

impl PadicElement {
    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    /// Zero modulo `pi^abs`.
    pub fn zero_to_precision(ctx: &Arc<PadicContext>, abs: i64) -> Self {
        Self { ctx: ctx.clone(), repr: Repr::Zero { abs } }
    }

    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        Self::zero_to_precision(ctx, ctx.max_relative_precision())
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Arc<PadicContext>, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Arc<PadicContext>, n: &BigInt) -> Self {
        match valuation_int(n, ctx.p()) {
            None => Self::zero(ctx),
            Some(v) => {
                let unit = n / BigInt::from(ctx.p()).pow(v as u32);
                Self {
                    ctx: ctx.clone(),
                    repr: Repr::Nonzero {
                        val: 2 * v as i64,
                        a: ctx.w_from_big(&unit),
                        b: ctx.w_zero(),
                        rel: ctx.max_relative_precision(),
                    },
                }
            }
        }
    }

    pub fn from_rational(ctx: &Arc<PadicContext>, q: &BigRational) -> Result<Self> {
        let num = Self::from_bigint(ctx, q.numer());
        let den = Self::from_bigint(ctx, q.denom());
        num.div(&den)
    }

    /// The uniformizer `pi = sqrt(p)`.
    pub fn pi(ctx: &Arc<PadicContext>) -> Self {
        Self::pi_power(ctx, 1)
    }

    /// `pi^e = p^(e/2)` for any integer `e`.
    pub fn pi_power(ctx: &Arc<PadicContext>, e: i64) -> Self {
        Self {
            ctx: ctx.clone(),
            repr: Repr::Nonzero {
                val: e,
                a: ctx.w_const(1),
                b: ctx.w_zero(),
                rel: ctx.max_relative_precision(),
            },
        }
    }

    /// Teichmuller representative of a residue-field element.
    pub fn teichmuller(ctx: &Arc<PadicContext>, x: Fq) -> Self {
        if x.0 == 0 {
            return Self::zero(ctx);
        }
        Self {
            ctx: ctx.clone(),
            repr: Repr::Nonzero {
                val: 0,
                a: ctx.w_teichmuller(x),
                b: ctx.w_zero(),
                rel: ctx.max_relative_precision(),
            },
        }
    }

    /// Builds `pi^val * (a + b pi)` from integer coordinates in `W`
    /// (coefficients along the basis `1, x, ..., x^{f-1}`), normalizing.
    pub fn from_coordinates(ctx: &Arc<PadicContext>, val: i64, a: &[i64], b: &[i64]) -> Self {
        let to_w = |c: &[i64]| -> W {
            let mut w = ctx.w_zero();
            for (slot, &x) in w.iter_mut().zip(c) {
                *slot = ctx.red(x as i128);
            }
            w
        };
        let abs = val + ctx.max_relative_precision();
        normalize(ctx, val, to_w(a), to_w(b), abs)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// The valuation, `Infinite` when every stored digit vanishes.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Nonzero { val, .. } => Valuation::Finite(HalfInt(*val)),
            Repr::Zero { .. } => Valuation::Infinite,
        }
    }

    /// The valuation, or `PrecisionExhausted` for zero-to-precision values.
    pub fn finite_valuation(&self) -> Result<HalfInt> {
        match &self.repr {
            Repr::Nonzero { val, .. } => Ok(HalfInt(*val)),
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "value vanishes to precision O(p^{})",
                HalfInt(*abs)
            ))),
        }
    }

    /// Absolute precision: the element is known modulo `p^abs`.
    pub fn absolute_precision(&self) -> HalfInt {
        match &self.repr {
            Repr::Nonzero { val, rel, .. } => HalfInt(val + rel),
            Repr::Zero { abs } => HalfInt(*abs),
        }
    }

    /// Number of known `pi`-digits after the leading one (zero for
    /// zero-to-precision values).
    pub fn relative_precision(&self) -> i64 {
        match &self.repr {
            Repr::Nonzero { rel, .. } => *rel,
            Repr::Zero { .. } => 0,
        }
    }

    /// Whether `v(self) >= bound` is certain at the stored precision.
    /// Returns `None` when the precision does not decide the question.
    pub fn valuation_at_least(&self, bound: HalfInt) -> Option<bool> {
        match &self.repr {
            Repr::Nonzero { val, .. } => Some(*val >= bound.0),
            Repr::Zero { abs } => {
                if *abs >= bound.0 {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if *self.ctx != *other.ctx {
            return Err(Error::ContextMismatch(format!(
                "p={}, f={}, M={} vs p={}, f={}, M={}",
                self.ctx.p(),
                self.ctx.residue_degree(),
                self.ctx.precision(),
                other.ctx.p(),
                other.ctx.residue_degree(),
                other.ctx.precision()
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Nonzero { val, a, b, rel } => Repr::Nonzero {
                val: *val,
                a: self.ctx.w_neg(a),
                b: self.ctx.w_neg(b),
                rel: *rel,
            },
            z @ Repr::Zero { .. } => z.clone(),
        };
        Self { ctx: self.ctx.clone(), repr }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = &self.ctx;
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a1 }, Repr::Zero { abs: a2 }) => {
                Self::zero_to_precision(ctx, (*a1).min(*a2))
            }
            (Repr::Zero { abs }, Repr::Nonzero { .. }) => other.truncate(*abs),
            (Repr::Nonzero { .. }, Repr::Zero { abs }) => self.truncate(*abs),
            (
                Repr::Nonzero { val: v1, a: a1, b: b1, rel: r1 },
                Repr::Nonzero { val: v2, a: a2, b: b2, rel: r2 },
            ) => {
                let abs = (v1 + r1).min(v2 + r2);
                let (lo, hi) = if v1 <= v2 {
                    ((v1, a1, b1), (v2, a2, b2))
                } else {
                    ((v2, a2, b2), (v1, a1, b1))
                };
                let (sa, sb) = shift(ctx, hi.1, hi.2, hi.0 - lo.0);
                normalize(ctx, *lo.0, ctx.w_add(lo.1, &sa), ctx.w_add(lo.2, &sb), abs)
            }
        };
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Forgets everything below `pi^abs`.
    fn truncate(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Nonzero { val, a, b, rel } => {
                if *val >= abs {
                    Self::zero_to_precision(&self.ctx, abs.min(val + rel))
                } else {
                    Self {
                        ctx: self.ctx.clone(),
                        repr: Repr::Nonzero {
                            val: *val,
                            a: a.clone(),
                            b: b.clone(),
                            rel: (*rel).min(abs - val),
                        },
                    }
                }
            }
            Repr::Zero { abs: a0 } => Self::zero_to_precision(&self.ctx, (*a0).min(abs)),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = &self.ctx;
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a1 }, Repr::Zero { abs: a2 }) => {
                Self::zero_to_precision(ctx, a1 + a2)
            }
            (Repr::Zero { abs }, Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero { abs }) => {
                Self::zero_to_precision(ctx, abs + val)
            }
            (
                Repr::Nonzero { val: v1, a: a1, b: b1, rel: r1 },
                Repr::Nonzero { val: v2, a: a2, b: b2, rel: r2 },
            ) => {
                let p = ctx.p() as i128;
                let a = ctx.w_add(&ctx.w_mul(a1, a2), &ctx.w_scale(&ctx.w_mul(b1, b2), p));
                let b = ctx.w_add(&ctx.w_mul(a1, b2), &ctx.w_mul(a2, b1));
                // a1 a2 is a unit, so the product is already normalized.
                Self {
                    ctx: ctx.clone(),
                    repr: Repr::Nonzero { val: v1 + v2, a, b, rel: (*r1).min(*r2) },
                }
            }
        };
        Ok(out)
    }

    pub fn inv(&self) -> Result<Self> {
        let ctx = &self.ctx;
        match &self.repr {
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "cannot invert a value that vanishes to precision O(p^{})",
                HalfInt(*abs)
            ))),
            Repr::Nonzero { val, a, b, rel } => {
                // (a + b pi)^-1 = (a - b pi) / (a^2 - p b^2)
                let p = ctx.p() as i128;
                let norm = ctx.w_sub(&ctx.w_mul(a, a), &ctx.w_scale(&ctx.w_mul(b, b), p));
                let ni = ctx.w_inv(&norm).expect("norm of a unit is a unit");
                Ok(Self {
                    ctx: ctx.clone(),
                    repr: Repr::Nonzero {
                        val: -val,
                        a: ctx.w_mul(a, &ni),
                        b: ctx.w_neg(&ctx.w_mul(b, &ni)),
                        rel: *rel,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn mul_int(&self, n: i64) -> Result<Self> {
        self.mul(&Self::from_int(&self.ctx, n))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Image in the residue field; requires nonnegative valuation.
    pub fn residue(&self) -> Result<Fq> {
        match &self.repr {
            Repr::Zero { abs } if *abs >= 1 => Ok(Fq(0)),
            Repr::Zero { abs } => Err(Error::PrecisionExhausted(format!(
                "residue undetermined: value is O(p^{})",
                HalfInt(*abs)
            ))),
            Repr::Nonzero { val, a, .. } => match val.cmp(&0) {
                Ordering::Greater => Ok(Fq(0)),
                Ordering::Equal => Ok(self.ctx.w_residue(a)),
                Ordering::Less => Err(Error::InvalidInput(format!(
                    "residue of an element of negative valuation {}",
                    HalfInt(*val)
                ))),
            },
        }
    }

    /// The residue of the leading unit `x / pi^v(x)`.
    pub fn leading_digit(&self) -> Option<Fq> {
        match &self.repr {
            Repr::Nonzero { a, .. } => Some(self.ctx.w_residue(a)),
            Repr::Zero { .. } => None,
        }
    }

    /// Teichmuller digits `d_0, d_1, ...` of the unit part, so that
    /// `x = pi^v * sum [d_i] pi^i` to the stored precision.
    pub fn digits(&self) -> Vec<Fq> {
        let ctx = &self.ctx;
        let Repr::Nonzero { a, b, rel, .. } = &self.repr else {
            return Vec::new();
        };
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut out = Vec::with_capacity(*rel as usize);
        for _ in 0..*rel {
            let d = ctx.w_residue(&a);
            out.push(d);
            let a0 = ctx.w_sub(&a, &ctx.w_teichmuller(d));
            // (a0 + b pi) / pi = b + (a0 / p) pi
            let next_b = ctx.w_div_p(&a0);
            a = b;
            b = next_b;
        }
        out
    }
}

/// `pi^d * (a + b pi)` for `d >= 0`, modulo `p^M`.
fn shift(ctx: &PadicContext, a: &W, b: &W, d: i64) -> (W, W) {
    let p = ctx.p() as i128;
    let scale = |w: &W, e: i64| -> W {
        let k = if e as u32 >= ctx.precision { 0 } else { p.pow(e as u32) };
        ctx.w_scale(w, k)
    };
    if d % 2 == 0 {
        (scale(a, d / 2), scale(b, d / 2))
    } else {
        // pi (a + b pi) = p b + a pi
        let e = (d - 1) / 2;
        (scale(&ctx.w_scale(b, p), e), scale(a, e))
    }
}

/// Brings `pi^val (a + b pi)` (known mod `pi^abs`) into normal form.
fn normalize(ctx: &Arc<PadicContext>, val: i64, mut a: W, mut b: W, abs: i64) -> PadicElement {
    let budget = abs - val;
    let j = match (ctx.w_val(&a), ctx.w_val(&b)) {
        (None, None) => None,
        (Some(va), None) => Some(2 * va as i64),
        (None, Some(vb)) => Some(2 * vb as i64 + 1),
        (Some(va), Some(vb)) => Some((2 * va as i64).min(2 * vb as i64 + 1)),
    };
    let j = match j {
        Some(j) if j < budget => j,
        _ => return PadicElement::zero_to_precision(ctx, abs),
    };
    for _ in 0..j {
        let next_b = ctx.w_div_p(&a);
        a = b;
        b = next_b;
    }
    PadicElement {
        ctx: ctx.clone(),
        repr: Repr::Nonzero { val: val + j, a, b, rel: budget - j },
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs } => write!(f, "O(p^{})", HalfInt(*abs)),
            Repr::Nonzero { val, rel, .. } => {
                let field = self.ctx.field();
                let digits: Vec<String> =
                    self.digits().iter().take(6).map(|d| field.format(*d)).collect();
                write!(f, "p^({}) * [{}", HalfInt(*val), digits.join(", "))?;
                if *rel > 6 {
                    write!(f, ", ...")?;
                }
                write!(f, "] + O(p^{})", HalfInt(val + rel))
            }
        }
    }
}

/// The filtered phi-module with `phi(e1) = p^{k-1} e2`,
/// `phi(e2) = -e1 + a_p e2` and `Fil^i = E e1` for `1 <= i <= k-1`.
#[derive(Debug, Clone)]
pub struct FilteredPhiModule {
    k: i64,
    a_p: PadicElement,
}

impl FilteredPhiModule {
    pub fn new(k: i64, a_p: PadicElement) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidWeight(k));
        }
        if a_p.is_zero_to_precision() {
            return Err(Error::ZeroAp);
        }
        Ok(Self { k, a_p })
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    pub fn a_p(&self) -> &PadicElement {
        &self.a_p
    }

    /// Matrix of `phi` in the basis `(e1, e2)`, columns are images.
    pub fn phi_matrix(&self) -> [[PadicElement; 2]; 2] {
        let ctx = self.a_p.context();
        let zero = PadicElement::zero(ctx);
        let pk = PadicElement::from_bigint(ctx, &BigInt::from(ctx.p()).pow((self.k - 1) as u32));
        [[zero, PadicElement::from_int(ctx, -1)], [pk, self.a_p.clone()]]
    }

    /// Valuation of `det(phi)`, which is `k - 1`.
    pub fn determinant_valuation(&self) -> Result<HalfInt> {
        let m = self.phi_matrix();
        let det = m[0][0].mul(&m[1][1])?.sub(&m[0][1].mul(&m[1][0])?)?;
        det.finite_valuation()
    }

    /// Dimension of `Fil^i`.
    pub fn filtration_dimension(&self, i: i64) -> usize {
        if i <= 0 {
            2
        } else if i < self.k {
            1
        } else {
            0
        }
    }

    /// Positive slope: no phi-stable line is weakly admissible, i.e. the
    /// module is irreducible. A phi-stable line has a unit eigenvalue
    /// (and is then admissible) exactly when `v(a_p) = 0`.
    pub fn is_positive_slope_irreducible(&self) -> Result<bool> {
        Ok(self.a_p.finite_valuation()? > HalfInt::ZERO)
    }
}

/// Converts a nonnegative big integer `n` to the reduced rational `n / 1`.
pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sanity helper used by tests: `n mod p^M` inverse when it exists.
#[doc(hidden)]
pub fn inverse_mod_prime_power(n: i64, p: u64, m: u32) -> Option<i64> {
    let modulus = (p as i128).pow(m);
    mod_inv(n as i128, modulus).map(|x| x as i64)
}

impl PadicElement {
    /// The element as an integer of least absolute value, when it is an
    /// integer to the stored precision (no `pi` part, no `x` terms).
    pub fn to_integer_mod(&self) -> Option<BigInt> {
        let Repr::Nonzero { val, a, b, rel } = &self.repr else {
            return Some(BigInt::zero());
        };
        let p = BigInt::from(self.ctx.p());
        let known = ((rel + 1) / 2).min(self.ctx.precision as i64) as u32;
        let m = p.pow(known);
        let is_zero_mod = |c: &i128| BigInt::from(*c) % &m == BigInt::zero();
        if *val < 0 || val % 2 != 0 || !b.iter().all(is_zero_mod) || !a[1..].iter().all(is_zero_mod)
        {
            return None;
        }
        let unit = BigInt::from(a[0]) % &m;
        let unit = if unit > &m / 2 { unit - &m } else { unit };
        Some(unit * p.pow((val / 2) as u32))
    }

    pub fn is_one(&self) -> bool {
        self.to_integer_mod().is_some_and(|n| n.is_one())
    }

    pub fn is_negative_integer(&self) -> bool {
        self.to_integer_mod().is_some_and(|n| n.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx5() -> Arc<PadicContext> {
        PadicContext::with_defaults(5).unwrap()
    }

    fn half(t: i64) -> Valuation {
        Valuation::Finite(HalfInt::from_twice(t))
    }

    #[test]
    fn valuation_examples() {
        let c = ctx5();
        assert_eq!(PadicElement::from_int(&c, 5).valuation(), half(2));
        let x = PadicElement::pi_power(&c, 3).mul_int(2).unwrap();
        assert_eq!(x.valuation(), half(3));
        assert_eq!(PadicElement::from_int(&c, -230).valuation(), half(2));
    }

    #[test]
    fn multiplication_examples() {
        let c = ctx5();
        let p = PadicElement::from_int(&c, 5);
        assert_eq!(p.mul(&p).unwrap().valuation(), half(4));
        // (1 + sqrt 5)^2 = 6 + 2 sqrt 5
        let w = PadicElement::one(&c).add(&PadicElement::pi(&c)).unwrap();
        let w2 = w.mul(&w).unwrap();
        let expected = PadicElement::from_coordinates(&c, 0, &[6], &[2]);
        assert_eq!(w2.sub(&expected).unwrap().valuation(), Valuation::Infinite);
        assert_eq!(w2.valuation(), half(0));
        assert_eq!(w2.digits()[0], c.field().from_int(1));
        assert_ne!(w2.digits()[1], Fq(0));
        let z = PadicElement::zero(&c);
        assert!(w.mul(&z).unwrap().is_zero_to_precision());
    }

    #[test]
    fn addition_examples() {
        let c = ctx5();
        let p = PadicElement::from_int(&c, 5);
        assert!(p.add(&p.neg()).unwrap().is_zero_to_precision());
        let ap = PadicElement::pi(&c).mul_int(2).unwrap();
        let s = ap.mul(&ap).unwrap().add(&p).unwrap();
        assert_eq!(s.valuation(), half(4));
        assert_eq!(s.to_integer_mod(), Some(BigInt::from(25)));
        let t = PadicElement::from_int(&c, -2595).add(&ap).unwrap();
        assert_eq!(t.valuation(), half(1));
    }

    #[test]
    fn cancellation_loses_precision() {
        let c = PadicContext::new(5, 1, 4).unwrap();
        let a = PadicElement::from_int(&c, 1);
        let b = PadicElement::from_int(&c, 1 + 125);
        let d = b.sub(&a).unwrap();
        assert_eq!(d.valuation(), half(6));
        assert_eq!(d.absolute_precision(), HalfInt::from_int(4));
        let e = a.sub(&a).unwrap();
        assert!(e.finite_valuation().is_err());
    }

    #[test]
    fn teichmuller_examples() {
        let c = PadicContext::new(5, 1, 2).unwrap();
        let k = c.field();
        let t = PadicElement::teichmuller(&c, k.from_int(2));
        assert_eq!(t.to_integer_mod(), Some(BigInt::from(7)));
        assert!(PadicElement::teichmuller(&c, k.one()).is_one());
        assert!(PadicElement::teichmuller(&c, k.zero()).is_zero_to_precision());
    }

    #[test]
    fn inverse_and_division() {
        let c = ctx5();
        let w = PadicElement::from_coordinates(&c, 3, &[1, 1], &[2, 0]);
        let one = w.mul(&w.inv().unwrap()).unwrap();
        assert!(one.sub(&PadicElement::one(&c)).unwrap().is_zero_to_precision());
        let q = BigRational::new(BigInt::from(3), BigInt::from(50));
        let x = PadicElement::from_rational(&c, &q).unwrap();
        assert_eq!(x.valuation(), half(-4));
    }

    #[test]
    fn phi_module() {
        let c = ctx5();
        let ap = PadicElement::pi_power(&c, 3);
        let m = FilteredPhiModule::new(4, ap).unwrap();
        assert_eq!(m.determinant_valuation().unwrap(), HalfInt::from_int(3));
        assert!(m.is_positive_slope_irreducible().unwrap());
        assert_eq!(m.filtration_dimension(0), 2);
        assert_eq!(m.filtration_dimension(3), 1);
        assert_eq!(m.filtration_dimension(4), 0);
        let unit = FilteredPhiModule::new(4, PadicElement::from_int(&c, 3)).unwrap();
        assert!(!unit.is_positive_slope_irreducible().unwrap());
        assert!(matches!(
            FilteredPhiModule::new(1, PadicElement::from_int(&c, 5)),
            Err(Error::InvalidWeight(1))
        ));
    }
}
