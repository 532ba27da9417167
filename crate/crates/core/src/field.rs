//! The residue field `F_{p^f}`.
//!
//! Elements are stored as a single integer index `sum c_i p^i`, where
//! `c_0 + c_1 x + ... + c_{f-1} x^{f-1}` is the polynomial representative
//! modulo a fixed monic irreducible. For `f = 2` the modulus is `x^2 - q`
//! with `q` the least quadratic non-residue; for other degrees it is the
//! lexicographically least monic irreducible polynomial.

use std::fmt;

use crate::arith::{is_prime, least_non_residue, primitive_root};
use crate::error::{Error, Result};

/// An element of a [`ResidueField`], encoded by its coefficient index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: usize,
    /// Monic modulus, coefficients from the constant term upwards (length f+1).
    modulus: Vec<u64>,
    order: u64,
}

impl ResidueField {
    pub fn new(p: u64, f: usize) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
        }
        if f == 0 || f > 6 {
            return Err(Error::InvalidInput(format!("residue degree f = {f} must be in 1..=6")));
        }
        let order = p
            .checked_pow(f as u32)
            .filter(|&o| o < (1 << 40))
            .ok_or_else(|| Error::InvalidInput(format!("field of order {p}^{f} is too large")))?;
        let modulus = match f {
            1 => vec![0, 1],
            2 => vec![p - least_non_residue(p), 0, 1],
            _ => least_irreducible(p, f),
        };
        Ok(Self { p, f, modulus, order })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u64)
    }

    /// The element denoted `u` in a_p expressions: the class of `x` when
    /// `f >= 2`, the least primitive root of `F_p` when `f = 1`.
    pub fn unit_symbol(&self) -> Fq {
        if self.f == 1 {
            Fq(primitive_root(self.p))
        } else {
            Fq(self.p)
        }
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.f);
        let mut idx = a.0;
        for _ in 0..self.f {
            out.push(idx % self.p);
            idx /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fq {
        let reduced = self.reduce_poly(coeffs.iter().map(|&c| c % self.p).collect());
        let mut idx = 0;
        for &c in reduced.iter().rev() {
            idx = idx * self.p + c;
        }
        Fq(idx)
    }

    /// Elements of the prime field, i.e. with vanishing higher coefficients.
    pub fn is_prime_field_element(&self, a: Fq) -> bool {
        a.0 < self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.order).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_coeffs(&sum)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let c: Vec<u64> = self.coeffs(a).iter().map(|&u| (self.p - u) % self.p).collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; 2 * self.f - 1];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a.0 == 0 || self.pow(a, (self.order - 1) / 2) == self.one()
    }

    /// A square root by exhaustive search (the fields used here are small).
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if !self.is_square(a) {
            return None;
        }
        self.elements().find(|&z| self.mul(z, z) == a)
    }

    /// Roots of `T^2 - d T + 1` in this field, sorted, or `None` when the
    /// polynomial is irreducible.
    pub fn reciprocal_roots(&self, d: Fq) -> Option<(Fq, Fq)> {
        let four = self.from_int(4);
        let disc = self.sub(self.mul(d, d), four);
        let s = self.sqrt(disc)?;
        let half = self.inv(self.from_int(2)).expect("p is odd");
        let r1 = self.mul(self.add(d, s), half);
        let r2 = self.mul(self.sub(d, s), half);
        Some((r1.min(r2), r1.max(r2)))
    }

    /// Canonical representative of `{a, -a}`.
    pub fn sign_normalize(&self, a: Fq) -> Fq {
        a.min(self.neg(a))
    }

    pub fn format(&self, a: Fq) -> String {
        let c = self.coeffs(a);
        let mut s = c[0].to_string();
        for (i, &ci) in c.iter().enumerate().skip(1) {
            if ci == 0 {
                continue;
            }
            if i == 1 {
                s.push_str(&format!("+{ci}*x"));
            } else {
                s.push_str(&format!("+{ci}*x^{i}"));
            }
        }
        s
    }

    /// Parses literals such as `3`, `2+1*x`, `-1`, `4*x^2+x`.
    pub fn parse(&self, text: &str) -> Result<Fq> {
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err(0, "empty field literal"));
        }
        let mut coeffs = vec![0i64; self.f.max(1)];
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut c: i64 = if i > start {
                t[start..i].parse().map_err(|_| err(start, "integer overflow"))?
            } else {
                1
            };
            let mut power = 0usize;
            let mut star = false;
            if i > start && i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                star = true;
            }
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    power = t[ps..i].parse().map_err(|_| err(ps, "expected exponent"))?;
                }
            } else if i == start || star {
                return Err(err(i, "expected digit or x"));
            }
            if power >= self.f {
                return Err(err(start, "power of x exceeds the residue degree"));
            }
            c *= sign;
            coeffs[power] += c;
            if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                return Err(err(i, "unexpected character"));
            }
        }
        let p = self.p as i64;
        let c: Vec<u64> = coeffs.iter().map(|&x| x.rem_euclid(p) as u64).collect();
        Ok(self.from_coeffs(&c))
    }

    fn reduce_poly(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let f = self.f;
        while poly.len() > f {
            let lead = poly.pop().expect("nonempty");
            if lead != 0 {
                let shift = poly.len() - f;
                for (k, &m) in self.modulus[..f].iter().enumerate() {
                    let idx = shift + k;
                    poly[idx] = (poly[idx] + (self.p - m) * lead) % self.p;
                }
            }
        }
        poly.resize(f, 0);
        poly
    }
}

/// Lexicographically least monic irreducible polynomial of degree `f`.
fn least_irreducible(p: u64, f: usize) -> Vec<u64> {
    let total = p.pow(f as u32);
    for idx in 0..total {
        let mut poly = Vec::with_capacity(f + 1);
        let mut m = idx;
        for _ in 0..f {
            poly.push(m % p);
            m /= p;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = Vec::with_capacity(d + 1);
            let mut m = idx;
            for _ in 0..d {
                div.push(m % p);
                m /= p;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], monic: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let d = monic.len() - 1;
    while r.len() > d {
        let lead = r.pop().expect("nonempty");
        let shift = r.len() - d;
        for k in 0..d {
            r[shift + k] = (r[shift + k] + (p - monic[k]) * lead) % p;
        }
    }
    r
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
