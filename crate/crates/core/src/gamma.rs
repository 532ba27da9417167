//! Symmetric power modules `V_r = Sym^r F_p^2` for `GL_2(F_p)`, the
//! subspaces `V_r^{(i)}` of polynomials divisible by `theta^i` where
//! `theta = X^p Y - X Y^p`, and the Jordan-Holder labels of the graded
//! pieces in the exceptional setting.
//!
//! Polynomials of degree `r` are coefficient vectors in the basis
//! `X^{r-j} Y^j`, `j = 0..=r`, and `g = (a b; c d)` acts by
//! `P(X, Y) -> P(aX + cY, bX + dY)`.

use std::fmt;

use serde::Serialize;

use crate::arith::mod_pow;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

/// A 2x2 matrix `(a b; c d)` over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub fn new(p: u64, a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |x: i64| x.rem_euclid(p as i64) as u64;
        Mat2 { a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    pub fn det(&self, p: u64) -> u64 {
        (self.a * self.d % p + p - self.b * self.c % p) % p
    }

    pub fn mul(&self, o: &Mat2, p: u64) -> Mat2 {
        Mat2 {
            a: (self.a * o.a + self.b * o.c) % p,
            b: (self.a * o.b + self.b * o.d) % p,
            c: (self.c * o.a + self.d * o.c) % p,
            d: (self.c * o.b + self.d * o.d) % p,
        }
    }
}

/// A shear, the Weyl element, and `diag(g, 1)` for a primitive root `g`;
/// together they generate `GL_2(F_p)`.
pub fn generators(p: u64) -> Vec<Mat2> {
    let g = crate::arith::primitive_root(p) as i64;
    vec![Mat2::new(p, 1, 1, 0, 1), Mat2::new(p, 0, 1, 1, 0), Mat2::new(p, g, 0, 0, 1)]
}

fn poly_mul(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    out
}

fn poly_pow(x: &[u64], e: u64, p: u64) -> Vec<u64> {
    let mut acc = vec![1];
    for _ in 0..e {
        acc = poly_mul(&acc, x, p);
    }
    acc
}

/// `theta^i` as a homogeneous polynomial of degree `i(p+1)`.
pub fn theta_power(p: u64, i: u64) -> Vec<u64> {
    let mut theta = vec![0; p as usize + 2];
    theta[1] = 1; // X^p Y
    theta[p as usize] = p - 1; // -X Y^p
    poly_pow(&theta, i, p)
}

/// Matrix of `g` acting on `V_m`.
pub fn action_matrix(p: u64, m: u64, g: &Mat2) -> FpMatrix {
    let first = [g.a, g.c]; // aX + cY
    let second = [g.b, g.d]; // bX + dY
    let columns: Vec<Vec<u64>> = (0..=m)
        .map(|j| poly_mul(&poly_pow(&first, m - j, p), &poly_pow(&second, j, p), p))
        .collect();
    FpMatrix::from_columns(p, m as usize + 1, &columns)
}

/// Applies `g` to a polynomial of degree `m`.
pub fn act(p: u64, poly: &[u64], g: &Mat2) -> Vec<u64> {
    let m = poly.len() as u64 - 1;
    let mat = action_matrix(p, m, g);
    (0..=m as usize)
        .map(|i| (0..=m as usize).map(|j| mat.get(i, j) * poly[j]).sum::<u64>() % p)
        .collect()
}

/// Remainder of a univariate polynomial (ascending coefficients) modulo a
/// monic divisor.
fn poly_rem(mut num: Vec<u64>, den: &[u64], p: u64) -> Vec<u64> {
    let dd = den.len() - 1;
    while num.len() > dd {
        let lead = num.pop().expect("nonempty");
        if lead != 0 {
            let shift = num.len() - dd;
            for k in 0..dd {
                num[shift + k] = (num[shift + k] + p - lead * den[k] % p) % p;
            }
        }
    }
    num.resize(dd, 0);
    num
}

/// Linear conditions cutting out `V_r^{(i)}`: `Y^i | P` and
/// `(X^p - X)^i | P(X, 1)`. Rows are conditions, columns basis monomials.
fn divisibility_conditions(p: u64, r: u64, i: u64) -> FpMatrix {
    let mut xpx = vec![0u64; p as usize + 1];
    xpx[1] = p - 1;
    xpx[p as usize] = 1;
    let den = poly_pow(&xpx, i, p);
    let n_rem = den.len() - 1;
    let rows = i as usize + n_rem;
    let mut m = FpMatrix::zeros(p, rows, r as usize + 1);
    for j in 0..=r as usize {
        if (j as u64) < i {
            m.set(j, j, 1);
        }
        // X^{r-j} Y^j becomes X^{r-j} after setting Y = 1.
        let mut mono = vec![0u64; r as usize - j + 1];
        mono[r as usize - j] = 1;
        let rem = poly_rem(mono, &den, p);
        for (k, &x) in rem.iter().enumerate() {
            m.set(i as usize + k, j, x);
        }
    }
    m
}

/// `dim V_r^{(i)}` by direct linear algebra.
pub fn dim_theta_filtration(p: u64, r: u64, i: u64) -> usize {
    if i == 0 {
        return r as usize + 1;
    }
    r as usize + 1 - divisibility_conditions(p, r, i).rank()
}

/// The closed form `max(0, r - i(p+1) + 1)`.
pub fn dim_theta_filtration_formula(p: u64, r: u64, i: u64) -> usize {
    (r as i64 - (i * (p + 1)) as i64 + 1).max(0) as usize
}

/// Matrix of `Q -> theta^i Q` from `V_{r - i(p+1)}` to `V_r`.
pub fn theta_multiplication(p: u64, r: u64, i: u64) -> Result<FpMatrix> {
    let shift = i * (p + 1);
    if r < shift {
        return Err(Error::InvalidInput(format!("r = {r} < i(p+1) = {shift}")));
    }
    let s = r - shift;
    let th = theta_power(p, i);
    let columns: Vec<Vec<u64>> = (0..=s)
        .map(|j| {
            let mut col = vec![0u64; r as usize + 1];
            for (k, &x) in th.iter().enumerate() {
                col[j as usize + k] = x;
            }
            col
        })
        .collect();
    Ok(FpMatrix::from_columns(p, r as usize + 1, &columns))
}

/// Checks `V_r^{(i)} = theta^i V_{r-i(p+1)} (x) D^i`: multiplication by
/// `theta^i` is injective, its image is the whole divisible subspace, and
/// it intertwines the actions up to `det^i` for the generators and any
/// extra group elements supplied.
pub fn verify_subquotient_iso_with(p: u64, r: u64, i: u64, extra: &[Mat2]) -> Result<bool> {
    let m = theta_multiplication(p, r, i)?;
    let s = r - i * (p + 1);
    let rank = m.rank();
    if rank != s as usize + 1 {
        return Ok(false);
    }
    if rank != dim_theta_filtration(p, r, i) {
        return Ok(false);
    }
    // image inside the divisible subspace
    if i > 0 && divisibility_conditions(p, r, i).mul(&m).rank() != 0 {
        return Ok(false);
    }
    for g in generators(p).iter().chain(extra) {
        let lhs = action_matrix(p, r, g).mul(&m);
        let twist = mod_pow(g.det(p), i, p);
        let rhs = m.mul(&action_matrix(p, s, g)).scale(twist);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_subquotient_iso(p: u64, r: u64, i: u64) -> Result<bool> {
    let gens = generators(p);
    let words = [gens[0].mul(&gens[1], p), gens[1].mul(&gens[2], p).mul(&gens[0], p)];
    verify_subquotient_iso_with(p, r, i, &words)
}

/// `V_m (x) D^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GammaModuleLabel {
    pub m: u64,
    pub s: u64,
}

impl GammaModuleLabel {
    pub fn new(p: u64, m: i64, s: i64) -> Self {
        GammaModuleLabel { m: m as u64, s: s.rem_euclid(p as i64 - 1) as u64 }
    }

    pub fn dim(&self) -> u64 {
        self.m + 1
    }
}

impl fmt::Display for GammaModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s {
            0 => write!(f, "V_{}", self.m),
            1 => write!(f, "V_{}⊗D", self.m),
            s => write!(f, "V_{}⊗D^{}", self.m, s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JhPair {
    pub i: u64,
    /// `J_{2i}`.
    pub sub: GammaModuleLabel,
    /// `J_{2i+1}`.
    pub quotient: GammaModuleLabel,
    /// Set for `b = 2n`, `i = n`, where `J_{2n+1} = V_{p-1} (x) D^n` is
    /// projective and the extension splits.
    pub projective: bool,
}

/// Largest `i` for which `J_{2i}, J_{2i+1}` are defined.
pub fn jh_max_index(b: u64) -> u64 {
    let n = b.div_ceil(2);
    if b % 2 == 1 {
        n - 1
    } else {
        n
    }
}

/// `J_{2i} = V_{b-2i} (x) D^i` and `J_{2i+1} = V_{p-1-b+2i} (x) D^{b-i}`.
pub fn jh_factor_labels(p: u64, b: u64, i: u64) -> Result<JhPair> {
    if b == 0 || b > p - 1 {
        return Err(Error::SlopeOutOfRange(format!("b = {b}")));
    }
    if i > jh_max_index(b) {
        return Err(Error::IndexOutOfRange(i as i64));
    }
    let (p_, b_, i_) = (p as i64, b as i64, i as i64);
    Ok(JhPair {
        i,
        sub: GammaModuleLabel::new(p, b_ - 2 * i_, i_),
        quotient: GammaModuleLabel::new(p, p_ - 1 - b_ + 2 * i_, b_ - i_),
        projective: b % 2 == 0 && i == b / 2,
    })
}

/// `J_0, J_1, ...` in order.
pub fn jh_sequence(p: u64, b: u64) -> Result<Vec<GammaModuleLabel>> {
    let mut out = Vec::new();
    for i in 0..=jh_max_index(b) {
        let pair = jh_factor_labels(p, b, i)?;
        out.push(pair.sub);
        out.push(pair.quotient);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SumsReport {
    pub p: u64,
    pub b: u64,
    /// `dim J_{2i} + dim J_{2i+1}` for each `i`.
    pub columns: Vec<u64>,
    /// `dim J_{2i+1} + dim J_{2i+2}` for each `i` with `J_{2i+2}` defined.
    pub diagonals: Vec<u64>,
    /// The middle factor `J_{2n-1}`.
    pub middle: GammaModuleLabel,
    pub middle_ok: bool,
    pub all_ok: bool,
}

/// Column sums `p+1`, diagonal sums `p-1`, and the shape of `J_{2n-1}`.
pub fn column_and_diagonal_sums(p: u64, b: u64) -> Result<SumsReport> {
    let js = jh_sequence(p, b)?;
    let columns: Vec<u64> = js.chunks(2).map(|c| c[0].dim() + c[1].dim()).collect();
    let diagonals: Vec<u64> = (0..js.len() / 2 - 1)
        .map(|i| js[2 * i + 1].dim() + js[2 * i + 2].dim())
        .collect();
    let n = b.div_ceil(2);
    let middle = js[2 * n as usize - 1];
    let middle_ok = if b % 2 == 1 {
        middle == GammaModuleLabel::new(p, p as i64 - 2, n as i64) && (2 * middle.dim()) % (p - 1) == 0
    } else {
        let j2n = js[2 * n as usize];
        let j2n1 = js[2 * n as usize + 1];
        middle == GammaModuleLabel::new(p, p as i64 - 3, n as i64 + 1)
            && j2n == GammaModuleLabel::new(p, 0, n as i64)
            && j2n1 == GammaModuleLabel::new(p, p as i64 - 1, n as i64)
            && (middle.dim() + j2n.dim()) % (p - 1) == 0
            && (middle.dim() + j2n1.dim()) % (p - 1) == 0
    };
    let all_ok = columns.iter().all(|&c| c == p + 1)
        && diagonals.iter().all(|&d| d == p - 1)
        && middle_ok;
    Ok(SumsReport { p, b, columns, diagonals, middle, middle_ok, all_ok })
}
