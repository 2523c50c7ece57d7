//! The module families `R_d`, `E_d`, `O_d` and the Klein-four twists.
//!
//! Matrices act on column vectors: column `i` holds the coordinates of the
//! image of `v_i`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{HRep, ModuleMeta, RacahRep};
use crate::matrix::RatMatrix;
use crate::rational::{format_rational, frac, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("d must be odd for family E")]
    EvenDimensionE,
    #[error("d must be even for family O")]
    OddDimensionO,
    #[error("family R has no twist")]
    TwistOnR,
    #[error("operation requires family E or O, got R")]
    UnsupportedFamily,
    #[error("invalid module spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    R,
    E,
    O,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::R => "R",
            Family::E => "E",
            Family::O => "O",
        })
    }
}

impl FromStr for Family {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        match s.trim() {
            "R" | "r" => Ok(Family::R),
            "E" | "e" => Ok(Family::E),
            "O" | "o" => Ok(Family::O),
            other => Err(CatalogError::Parse {
                input: other.to_string(),
                reason: "family must be R, E or O".into(),
            }),
        }
    }
}

/// An element `(e1, e2)` of `{±1}²`, written as two signs.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum Twist {
    #[default]
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl Twist {
    pub const ALL: [Twist; 4] = [
        Twist::PlusPlus,
        Twist::PlusMinus,
        Twist::MinusPlus,
        Twist::MinusMinus,
    ];

    pub fn from_signs(e1: i8, e2: i8) -> Self {
        match (e1 >= 0, e2 >= 0) {
            (true, true) => Twist::PlusPlus,
            (true, false) => Twist::PlusMinus,
            (false, true) => Twist::MinusPlus,
            (false, false) => Twist::MinusMinus,
        }
    }

    pub fn signs(self) -> (i8, i8) {
        match self {
            Twist::PlusPlus => (1, 1),
            Twist::PlusMinus => (1, -1),
            Twist::MinusPlus => (-1, 1),
            Twist::MinusMinus => (-1, -1),
        }
    }

    /// Generator `k` of the twisted module acts as generator
    /// `permutation()[k]` of the original, in the order `t0, t1, t0v, t1v`.
    pub fn permutation(self) -> [usize; 4] {
        match self {
            Twist::PlusPlus => [0, 1, 2, 3],
            Twist::PlusMinus => [1, 0, 3, 2],
            Twist::MinusPlus => [2, 3, 0, 1],
            Twist::MinusMinus => [3, 2, 1, 0],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Twist::PlusPlus => "++",
            Twist::PlusMinus => "+-",
            Twist::MinusPlus => "-+",
            Twist::MinusMinus => "--",
        }
    }
}

impl Mul for Twist {
    type Output = Twist;
    fn mul(self, rhs: Twist) -> Twist {
        let (a1, a2) = self.signs();
        let (b1, b2) = rhs.signs();
        Twist::from_signs(a1 * b1, a2 * b2)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Twist {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        Twist::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| CatalogError::Parse {
                input: s.to_string(),
                reason: "eps must be one of ++, +-, -+, --".into(),
            })
    }
}

/// A point of one of the three families, with a twist for `E` and `O`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSpec {
    pub family: Family,
    pub d: u32,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub epsilon: Twist,
}

impl ModuleSpec {
    /// Checks parity and twist constraints.
    pub fn new(
        family: Family,
        d: u32,
        a: Rational,
        b: Rational,
        c: Rational,
        epsilon: Twist,
    ) -> Result<Self, CatalogError> {
        let spec = Self {
            family,
            d,
            a,
            b,
            c,
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        match self.family {
            Family::E if self.d.is_multiple_of(2) => Err(CatalogError::EvenDimensionE),
            Family::O if self.d % 2 == 1 => Err(CatalogError::OddDimensionO),
            Family::R if self.epsilon != Twist::PlusPlus => Err(CatalogError::TwistOnR),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.d as usize + 1
    }

    pub fn derived(&self) -> DerivedParams {
        DerivedParams::new(self.d, &self.a, &self.b, &self.c)
    }

    pub fn meta(&self) -> ModuleMeta {
        ModuleMeta {
            family: self.family,
            d: self.d,
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            epsilon: self.epsilon,
        }
    }
}

impl From<&ModuleMeta> for ModuleSpec {
    fn from(m: &ModuleMeta) -> Self {
        Self {
            family: m.family,
            d: m.d,
            a: m.a.clone(),
            b: m.b.clone(),
            c: m.c.clone(),
            epsilon: m.epsilon,
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:d={},a={},b={},c={}",
            self.family,
            self.d,
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c)
        )?;
        if self.family != Family::R {
            write!(f, ",eps={}", self.epsilon)?;
        }
        Ok(())
    }
}

impl FromStr for ModuleSpec {
    type Err = CatalogError;

    /// Parses `"E:d=3,a=2,b=3,c=7,eps=+-"`. `eps` is optional.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let err = |reason: &str| CatalogError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (fam, rest) = s
            .split_once(':')
            .ok_or_else(|| err("expected FAMILY:key=value,..."))?;
        let family: Family = fam.parse()?;
        let (mut d, mut a, mut b, mut c, mut eps) = (None, None, None, None, None);
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| err("expected key=value"))?;
            let parse_q = |v: &str| parse_rational(v).map_err(|e| err(&e.to_string()));
            match k.trim() {
                "d" => {
                    d = Some(
                        v.trim()
                            .parse::<u32>()
                            .map_err(|_| err("d must be a nonnegative integer"))?,
                    )
                }
                "a" => a = Some(parse_q(v)?),
                "b" => b = Some(parse_q(v)?),
                "c" => c = Some(parse_q(v)?),
                "eps" => eps = Some(v.parse::<Twist>()?),
                other => return Err(err(&format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| err(&format!("missing {k}"));
        Self::new(
            family,
            d.ok_or_else(|| missing("d"))?,
            a.ok_or_else(|| missing("a"))?,
            b.ok_or_else(|| missing("b"))?,
            c.ok_or_else(|| missing("c"))?,
            eps.unwrap_or_default(),
        )
    }
}

/// Auxiliary parameters shared by the `E_d` and `O_d` formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedParams {
    pub sigma: Rational,
    pub tau: Rational,
    pub lambda: Rational,
    pub mu: Rational,
    pub nu: Rational,
    /// `(i, rho_i)` for odd `i ≤ d`, with `rho_i = c² − (a+b−(d+1)/2+i)²`.
    pub rho: Vec<(u32, Rational)>,
}

impl DerivedParams {
    pub fn new(d: u32, a: &Rational, b: &Rational, c: &Rational) -> Self {
        let h = frac(d as i64 + 1, 2);
        let rho = (1..=d)
            .step_by(2)
            .map(|i| {
                let x = a + b - &h + int(i as i64);
                (i, c * c - &x * &x)
            })
            .collect();
        Self {
            sigma: a + b + c - &h,
            tau: a + b - c - &h,
            lambda: a - b - c - &h,
            mu: c - a - b - &h,
            nu: b - a - c - &h,
            rho,
        }
    }
}

/// `θ_i = (a + d/2 − i)(a + d/2 − i + 1)`.
pub fn r_theta(d: u32, a: &Rational, i: usize) -> Rational {
    let x = a + frac(d as i64, 2) - int(i as i64);
    &x * (&x + int(1))
}

/// `φ_i = i(i−d−1)(a+b+c+d/2−i+2)(a+b−c+d/2−i+1)`.
pub fn r_phi(d: u32, a: &Rational, b: &Rational, c: &Rational, i: usize) -> Rational {
    let (i, d) = (i as i64, d as i64);
    let half_d = frac(d, 2);
    int(i * (i - d - 1)) * (a + b + c + &half_d - int(i - 2)) * (a + b - c + half_d - int(i - 1))
}

/// `δ = (d/2)(d/2+1) + a(a+1) + b(b+1) + c(c+1)`.
pub fn r_delta(d: u32, a: &Rational, b: &Rational, c: &Rational) -> Rational {
    let p = |x: &Rational| x * (x + int(1));
    p(&frac(d as i64, 2)) + p(a) + p(b) + p(c)
}

/// The Racah module `R_d(a,b,c)`: `A` lower bidiagonal, `B` upper
/// bidiagonal, `C = δ − A − B`.
pub fn build_r(d: u32, a: &Rational, b: &Rational, c: &Rational) -> RacahRep {
    let n = d as usize + 1;
    let mut am = RatMatrix::zeros(n, n);
    let mut bm = RatMatrix::zeros(n, n);
    for i in 0..n {
        am.set(i, i, r_theta(d, a, i));
        bm.set(i, i, r_theta(d, b, i));
        if i > 0 {
            am.set(i, i - 1, int(1));
            bm.set(i - 1, i, r_phi(d, a, b, c, i));
        }
    }
    let delta = r_delta(d, a, b, c);
    let cm = &(&RatMatrix::scalar(n, &delta) - &am) - &bm;
    let meta = ModuleMeta {
        family: Family::R,
        d,
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        epsilon: Twist::PlusPlus,
    };
    RacahRep::new(am, bm, cm, Some(meta)).expect("square matrices of equal size")
}

/// Column-convention writer: `put(m, i, j, v)` adds `v` to the coefficient
/// of `v_j` in the image of `v_i`, ignoring out-of-range `j`.
fn put(m: &mut RatMatrix, i: usize, j: isize, v: Rational) {
    if j >= 0 && (j as usize) < m.rows() {
        m.add_at(j as usize, i, &v);
    }
}

fn meta_for(family: Family, d: u32, a: &Rational, b: &Rational, c: &Rational) -> ModuleMeta {
    ModuleMeta {
        family,
        d,
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        epsilon: Twist::PlusPlus,
    }
}

/// The even-dimensional module `E_d(a,b,c)`, `d` odd.
pub fn build_e(d: u32, a: &Rational, b: &Rational, c: &Rational) -> Result<HRep, CatalogError> {
    if d.is_multiple_of(2) {
        return Err(CatalogError::EvenDimensionE);
    }
    let n = d as usize + 1;
    let dp = DerivedParams::new(d, a, b, c);
    let (s, t) = (&dp.sigma, &dp.tau);
    let di = d as i64;
    let half = frac(1, 2);
    let mut t0 = RatMatrix::zeros(n, n);
    let mut t1 = RatMatrix::zeros(n, n);
    let mut t0v = RatMatrix::zeros(n, n);
    let mut t1v = RatMatrix::zeros(n, n);
    for i in 0..n {
        let (ii, ix) = (i as i64, i as isize);
        let st = |k: i64| (s + int(k)) * (t + int(k));
        if i == 0 || i == n - 1 {
            put(&mut t0, i, ix, frac(-(di + 1), 2));
        } else if i % 2 == 0 {
            put(&mut t0, i, ix - 1, int(ii * (di - ii + 1)));
            put(&mut t0, i, ix, frac(-(di - 2 * ii + 1), 2));
        } else {
            put(&mut t0, i, ix, frac(di - 2 * ii - 1, 2));
            put(&mut t0, i, ix + 1, int(1));
        }

        if i % 2 == 0 {
            if i > 0 {
                put(&mut t1, i, ix - 1, int(ii * (ii - di - 1)));
            }
            put(&mut t1, i, ix, a.clone());
            put(&mut t1, i, ix + 1, int(1));
        } else {
            put(&mut t1, i, ix, -a.clone());
        }

        if i % 2 == 0 {
            put(&mut t0v, i, ix, b.clone());
        } else {
            put(&mut t0v, i, ix - 1, -st(ii));
            put(&mut t0v, i, ix, -b.clone());
            if i != n - 1 {
                put(&mut t0v, i, ix + 1, int(-1));
            }
        }

        if i % 2 == 0 {
            put(&mut t1v, i, ix, -(s + t + int(2 * ii + 2)) * &half);
            put(&mut t1v, i, ix + 1, int(-1));
        } else {
            put(&mut t1v, i, ix - 1, st(ii));
            put(&mut t1v, i, ix, (s + t + int(2 * ii)) * &half);
        }
    }
    Ok(HRep::from_parts(
        [t0, t1, t0v, t1v],
        Some(meta_for(Family::E, d, a, b, c)),
    ))
}

/// The odd-dimensional module `O_d(a,b,c)`, `d` even.
pub fn build_o(d: u32, a: &Rational, b: &Rational, c: &Rational) -> Result<HRep, CatalogError> {
    if d % 2 == 1 {
        return Err(CatalogError::OddDimensionO);
    }
    let n = d as usize + 1;
    let dp = DerivedParams::new(d, a, b, c);
    let (s, t, l, m, nu) = (&dp.sigma, &dp.tau, &dp.lambda, &dp.mu, &dp.nu);
    let di = d as i64;
    let half = frac(1, 2);
    let mut t0 = RatMatrix::zeros(n, n);
    let mut t1 = RatMatrix::zeros(n, n);
    let mut t0v = RatMatrix::zeros(n, n);
    let mut t1v = RatMatrix::zeros(n, n);
    for i in 0..n {
        let (ii, ix) = (i as i64, i as isize);
        let last = i == n - 1;
        if i == 0 {
            put(&mut t0, i, ix, s * &half);
        } else if i % 2 == 0 {
            put(&mut t0, i, ix - 1, -int(ii) * (s + int(ii)));
            put(&mut t0, i, ix, (s + int(2 * ii)) * &half);
        } else {
            put(&mut t0, i, ix, -(s + int(2 * ii + 2)) * &half);
            put(&mut t0, i, ix + 1, int(1));
        }

        if i % 2 == 0 {
            if i > 0 {
                put(&mut t1, i, ix - 1, int(ii) * (s + int(ii)));
            }
            put(&mut t1, i, ix, l * &half);
            if !last {
                put(&mut t1, i, ix + 1, int(1));
            }
        } else {
            put(&mut t1, i, ix, -l * &half);
        }

        if i % 2 == 0 {
            put(&mut t0v, i, ix, nu * &half);
        } else {
            put(&mut t0v, i, ix - 1, int(di - ii + 1) * (t + int(ii)));
            put(&mut t0v, i, ix, -nu * &half);
            put(&mut t0v, i, ix + 1, int(-1));
        }

        if last {
            put(&mut t1v, i, ix, m * &half);
        } else if i % 2 == 0 {
            put(&mut t1v, i, ix, (m + int(2 * di - 2 * ii)) * &half);
            put(&mut t1v, i, ix + 1, int(-1));
        } else {
            put(&mut t1v, i, ix - 1, int(ii - di - 1) * (t + int(ii)));
            put(&mut t1v, i, ix, -(m + int(2 * di - 2 * ii + 2)) * &half);
        }
    }
    Ok(HRep::from_parts(
        [t0, t1, t0v, t1v],
        Some(meta_for(Family::O, d, a, b, c)),
    ))
}

/// Twists `h` by `eps`: generator `k` of the result is generator
/// `eps.permutation()[k]` of `h`. The recorded twist in the metadata is
/// composed with `eps`.
pub fn twist(h: &HRep, eps: Twist) -> HRep {
    let perm = eps.permutation();
    let g = h.generators();
    let gens = perm.map(|p| g[p].clone());
    let meta = h.meta().cloned().map(|mut m| {
        m.epsilon = eps * m.epsilon;
        m
    });
    HRep::from_parts(gens, meta)
}

/// Builds the 𝔥-module of an `E` or `O` spec, twist included.
pub fn build_h(spec: &ModuleSpec) -> Result<HRep, CatalogError> {
    spec.validate()?;
    let base = match spec.family {
        Family::E => build_e(spec.d, &spec.a, &spec.b, &spec.c)?,
        Family::O => build_o(spec.d, &spec.a, &spec.b, &spec.c)?,
        Family::R => return Err(CatalogError::UnsupportedFamily),
    };
    Ok(twist(&base, spec.epsilon))
}

/// Builds `R_d(a,b,c)` from an `R` spec.
pub fn build_racah(spec: &ModuleSpec) -> Result<RacahRep, CatalogError> {
    spec.validate()?;
    match spec.family {
        Family::R => Ok(build_r(spec.d, &spec.a, &spec.b, &spec.c)),
        _ => Err(CatalogError::UnsupportedFamily),
    }
}

/// Exact irreducibility test for the family. Twisting preserves
/// irreducibility, so the twist is ignored.
pub fn irreducibility_criterion(spec: &ModuleSpec) -> bool {
    let (a, b, c) = (&spec.a, &spec.b, &spec.c);
    let d = spec.d as i64;
    // The forbidden set is {start - i} over the given i.
    let (values, forbidden): (Vec<Rational>, Vec<Rational>) = match spec.family {
        Family::R => (
            vec![a + b + c + int(1), -a + b + c, a - b + c, a + b - c],
            (1..=d).map(|i| frac(d, 2) - int(i)).collect(),
        ),
        Family::E => (
            vec![a + b + c, -a + b + c, a - b + c, a + b - c],
            (0..d).step_by(2).map(|i| frac(d - 1, 2) - int(i)).collect(),
        ),
        Family::O => (
            vec![a + b + c, a - b - c, -a + b - c, -a - b + c],
            (2..=d)
                .step_by(2)
                .map(|i| frac(d + 1, 2) - int(i))
                .collect(),
        ),
    };
    values.iter().all(|v| !forbidden.contains(v))
}

/// Closed-form scalars `(k0, k1, k0v, k1v)` by which the squares of the
/// generators act, permuted by the twist.
pub fn central_scalars(spec: &ModuleSpec) -> Result<[Rational; 4], CatalogError> {
    let sq = |x: &Rational| x * x;
    let base = match spec.family {
        Family::E => [
            sq(&frac(spec.d as i64 + 1, 2)),
            sq(&spec.a),
            sq(&spec.b),
            sq(&spec.c),
        ],
        Family::O => {
            let p = spec.derived();
            let q = |x: &Rational| sq(x) * frac(1, 4);
            [q(&p.sigma), q(&p.lambda), q(&p.nu), q(&p.mu)]
        }
        Family::R => return Err(CatalogError::UnsupportedFamily),
    };
    Ok(spec.epsilon.permutation().map(|p| base[p].clone()))
}
