//! Characteristic polynomials and rational eigenvalues.
//!
//! The characteristic polynomial is computed by fraction-free (Bareiss)
//! elimination of `xI - N` over `Z[x]`, where `N` is the matrix scaled to
//! integer entries. Rational roots are then located exactly: the squarefree
//! part is isolated with a Sturm sequence and each isolating interval is
//! narrowed until it can hold at most one fraction with the admissible
//! denominator, which is tested directly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::RatMatrix;
use crate::rational::{denominator_lcm, Rational};

/// Dense polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn constant(c: BigInt) -> Self {
        IntPoly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trimmed()
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = BigInt::zero();
        IntPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trimmed()
    }

    /// Exact quotient by a monic divisor. Panics if the division leaves a
    /// remainder, which would indicate a broken elimination invariant.
    fn div_exact_monic(&self, divisor: &Self) -> Self {
        let dn = divisor.0.len() - 1;
        assert!(divisor.0[dn].is_one(), "divisor must be monic");
        if self.0.len() <= dn {
            assert!(self.is_zero(), "inexact polynomial division");
            return IntPoly(Vec::new());
        }
        let mut rem = self.0.clone();
        let mut q = vec![BigInt::zero(); rem.len() - dn];
        for k in (0..q.len()).rev() {
            let c = rem[k + dn].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            q[k] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        IntPoly(q).trimmed()
    }
}

/// Dense polynomial over the rationals, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<Rational>);

impl RatPoly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        RatPoly(coeffs).trimmed()
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots
            .into_iter()
            .fold(RatPoly(vec![Rational::one()]), |p, r| {
                p.mul(&RatPoly(vec![-r.clone(), Rational::one()]))
            })
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn leading(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly(out).trimmed()
    }

    fn derivative(&self) -> Self {
        RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
        .trimmed()
    }

    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dn = divisor.0.len() - 1;
        if self.0.len() <= dn {
            return (RatPoly(Vec::new()), self.clone());
        }
        let lead_inv = divisor.leading().recip();
        let mut rem = self.0.clone();
        let mut q = vec![Rational::zero(); rem.len() - dn];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dn] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            q[k] = c;
        }
        (RatPoly(q).trimmed(), RatPoly(rem).trimmed())
    }

    fn monic(&self) -> Self {
        let inv = self.leading().recip();
        RatPoly(self.0.iter().map(|c| c * &inv).collect())
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Divides out `(x - r)` once, if it is a factor.
    fn deflate(&self, r: &Rational) -> Option<Self> {
        let (q, rem) = self.div_rem(&RatPoly(vec![-r.clone(), Rational::one()]));
        rem.is_zero().then_some(q)
    }

    /// Leading coefficient of the primitive integer multiple.
    fn primitive_leading(&self) -> BigInt {
        let l = denominator_lcm(self.0.iter());
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        (ints.last().expect("nonzero") / content).abs()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.derivative();
        let g = if d.is_zero() {
            self.clone()
        } else {
            self.div_rem(&self.gcd(&d)).0
        };
        let mut roots = squarefree_rational_roots(g);
        roots.sort();
        roots
    }

    /// Rational roots with multiplicities, ascending by root.
    pub fn rational_roots_with_multiplicity(&self) -> Vec<(Rational, usize)> {
        self.rational_roots()
            .into_iter()
            .map(|r| {
                let mut p = self.clone();
                let mut m = 0;
                while let Some(q) = p.deflate(&r) {
                    p = q;
                    m += 1;
                }
                (r, m)
            })
            .collect()
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_sequence(g: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![g.clone(), g.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(RatPoly(r.0.iter().map(|c| -c).collect()));
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign(&p.eval(x)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Rational roots of a squarefree polynomial.
fn squarefree_rational_roots(mut g: RatPoly) -> Vec<Rational> {
    let mut roots = Vec::new();
    'restart: loop {
        match g.degree() {
            None | Some(0) => break,
            Some(1) => {
                roots.push(-&g.0[0] / &g.0[1]);
                break;
            }
            _ => {}
        }
        let lc = g.primitive_leading();
        let lead = g.leading().abs();
        let bound = g.0[..g.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero)
            + Rational::one();
        let seq = sturm_sequence(&g);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 {
                if let Some(r) = narrow_to_rational(&g, lo, hi, &lc) {
                    g = g.deflate(&r).expect("root divides");
                    roots.push(r);
                    continue 'restart;
                }
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            if g.eval(&mid).is_zero() {
                g = g.deflate(&mid).expect("root divides");
                roots.push(mid);
                continue 'restart;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        break;
    }
    roots
}

/// Within `(lo, hi)` holding exactly one simple real root, find it if it is
/// rational. Any rational root has the form `k / lc`.
fn narrow_to_rational(
    g: &RatPoly,
    mut lo: Rational,
    mut hi: Rational,
    lc: &BigInt,
) -> Option<Rational> {
    let lc_r = Rational::from_integer(lc.clone());
    let two = Rational::from_integer(BigInt::from(2));
    let s_lo = sign(&g.eval(&lo));
    debug_assert!(s_lo != 0 && s_lo != sign(&g.eval(&hi)));
    while (&hi - &lo) * &lc_r >= Rational::one() {
        let mid = (&lo + &hi) / &two;
        let s = sign(&g.eval(&mid));
        if s == 0 {
            return Some(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = (&hi * &lc_r).floor();
    let cand = k / lc_r;
    (cand > lo && cand < hi && g.eval(&cand).is_zero()).then_some(cand)
}

/// `det(xI - m)`, monic of degree `m.rows()`.
pub fn characteristic_polynomial(m: &RatMatrix) -> RatPoly {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let n = m.rows();
    if n == 0 {
        return RatPoly(vec![Rational::one()]);
    }
    let scale = m.denominator_lcm();
    let scale_r = Rational::from_integer(scale.clone());
    // Entries of xI - N with N = scale * m integral.
    let mut a: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -(m.get(i, j) * &scale_r).to_integer();
                    if i == j {
                        IntPoly(vec![c, BigInt::one()]).trimmed()
                    } else {
                        IntPoly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    // Leading principal minors of xI - N are monic, so every pivot is a
    // nonzero monic polynomial and no row exchanges are needed.
    let mut prev = IntPoly(vec![BigInt::one()]);
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact_monic(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = &a[n - 1][n - 1];
    // det(xI - N) = scale^n det(yI - m) with x = scale*y.
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut power = Rational::one();
    let scale_n = num_traits::pow(scale_r.clone(), n);
    for c in &det.0 {
        coeffs.push(Rational::from_integer(c.clone()) * &power / &scale_n);
        power *= &scale_r;
    }
    RatPoly::new(coeffs)
}

/// All rational eigenvalues of a square matrix with algebraic multiplicity,
/// ascending. Irrational or complex eigenvalues are omitted; callers needing
/// the full spectrum compare the multiplicity total with the dimension.
pub fn rational_eigenvalues(m: &RatMatrix) -> Vec<(Rational, usize)> {
    characteristic_polynomial(m).rational_roots_with_multiplicity()
}
