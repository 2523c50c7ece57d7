//! The two algebra presentations as exact matrix-identity checkers.
//!
//! An [`HRep`] assigns matrices to the generators `t0, t1, t0v, t1v` of the
//! universal additive DAHA; a [`RacahRep`] assigns matrices to `A, B, C` of
//! the universal Racah algebra, with `D = [A,B]/2` derived. Relations are
//! checked as exact matrix identities and failures are reported, never thrown.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Family, Twist};
use crate::matrix::{LinalgError, RatMatrix};
use crate::rational::{frac, int, serde_opt, serde_opt_array4, serde_str, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("generator {name} is {rows}x{cols}, expected {dim}x{dim}")]
    BadShape {
        name: &'static str,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("metadata says d = {d} but the module has dimension {dim}")]
    MetaDimension { d: u32, dim: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where a representation came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMeta {
    pub family: Family,
    pub d: u32,
    #[serde(with = "serde_str")]
    pub a: Rational,
    #[serde(with = "serde_str")]
    pub b: Rational,
    #[serde(with = "serde_str")]
    pub c: Rational,
    #[serde(default)]
    pub epsilon: Twist,
}

/// Generator names, in the order used by [`HRep::generators`].
pub const H_GENERATORS: [&str; 4] = ["t0", "t1", "t0v", "t1v"];

/// Matrices for `t0, t1, t0v, t1v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HRepWire", into = "HRepWire")]
pub struct HRep {
    dim: usize,
    gens: [RatMatrix; 4],
    meta: Option<ModuleMeta>,
}

#[derive(Serialize, Deserialize)]
struct HRepWire {
    dim: usize,
    t0: RatMatrix,
    t1: RatMatrix,
    t0v: RatMatrix,
    t1v: RatMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<ModuleMeta>,
}

impl TryFrom<HRepWire> for HRep {
    type Error = RepError;
    fn try_from(w: HRepWire) -> Result<Self, RepError> {
        let h = HRep::new(w.t0, w.t1, w.t0v, w.t1v, w.meta)?;
        if h.dim != w.dim {
            return Err(RepError::BadShape {
                name: "t0",
                rows: h.dim,
                cols: h.dim,
                dim: w.dim,
            });
        }
        Ok(h)
    }
}

impl From<HRep> for HRepWire {
    fn from(h: HRep) -> Self {
        let [t0, t1, t0v, t1v] = h.gens;
        HRepWire {
            dim: h.dim,
            t0,
            t1,
            t0v,
            t1v,
            meta: h.meta,
        }
    }
}

fn check_square(name: &'static str, m: &RatMatrix, dim: usize) -> Result<(), RepError> {
    if m.rows() != dim || m.cols() != dim {
        return Err(RepError::BadShape {
            name,
            rows: m.rows(),
            cols: m.cols(),
            dim,
        });
    }
    Ok(())
}

impl HRep {
    pub fn new(
        t0: RatMatrix,
        t1: RatMatrix,
        t0v: RatMatrix,
        t1v: RatMatrix,
        meta: Option<ModuleMeta>,
    ) -> Result<Self, RepError> {
        let dim = t0.rows();
        let gens = [t0, t1, t0v, t1v];
        for (name, m) in H_GENERATORS.iter().zip(&gens) {
            check_square(name, m, dim)?;
        }
        if let Some(m) = &meta {
            if m.d as usize + 1 != dim {
                return Err(RepError::MetaDimension { d: m.d, dim });
            }
        }
        Ok(Self { dim, gens, meta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t0(&self) -> &RatMatrix {
        &self.gens[0]
    }

    pub fn t1(&self) -> &RatMatrix {
        &self.gens[1]
    }

    pub fn t0v(&self) -> &RatMatrix {
        &self.gens[2]
    }

    pub fn t1v(&self) -> &RatMatrix {
        &self.gens[3]
    }

    /// `[t0, t1, t0v, t1v]`.
    pub fn generators(&self) -> &[RatMatrix; 4] {
        &self.gens
    }

    pub fn meta(&self) -> Option<&ModuleMeta> {
        self.meta.as_ref()
    }

    pub(crate) fn from_parts(gens: [RatMatrix; 4], meta: Option<ModuleMeta>) -> Self {
        let dim = gens[0].rows();
        Self { dim, gens, meta }
    }

    /// Replaces one generator matrix, keeping shape checks.
    pub fn with_generator(&self, index: usize, m: RatMatrix) -> Result<Self, RepError> {
        check_square(H_GENERATORS[index], &m, self.dim)?;
        let mut gens = self.gens.clone();
        gens[index] = m;
        Ok(Self {
            dim: self.dim,
            gens,
            meta: self.meta.clone(),
        })
    }
}

/// Matrices for `A, B, C`; `D = [A,B]/2` is derived on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RacahWire", into = "RacahWire")]
pub struct RacahRep {
    dim: usize,
    a: RatMatrix,
    b: RatMatrix,
    c: RatMatrix,
    d: RatMatrix,
    delta: Option<Rational>,
    meta: Option<ModuleMeta>,
}

#[derive(Serialize, Deserialize)]
struct RacahWire {
    dim: usize,
    #[serde(rename = "A")]
    a: RatMatrix,
    #[serde(rename = "B")]
    b: RatMatrix,
    #[serde(rename = "C")]
    c: RatMatrix,
    #[serde(default, with = "serde_opt", skip_serializing_if = "Option::is_none")]
    delta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<ModuleMeta>,
}

impl TryFrom<RacahWire> for RacahRep {
    type Error = RepError;
    fn try_from(w: RacahWire) -> Result<Self, RepError> {
        let dim = w.a.rows();
        for (name, m) in [("A", &w.a), ("B", &w.b), ("C", &w.c)] {
            check_square(name, m, w.dim)?;
        }
        let d = RacahRep::derive_d(&w.a, &w.b);
        Ok(RacahRep {
            dim,
            a: w.a,
            b: w.b,
            c: w.c,
            d,
            delta: w.delta,
            meta: w.meta,
        })
    }
}

impl From<RacahRep> for RacahWire {
    fn from(r: RacahRep) -> Self {
        RacahWire {
            dim: r.dim,
            a: r.a,
            b: r.b,
            c: r.c,
            delta: r.delta,
            meta: r.meta,
        }
    }
}

impl RacahRep {
    /// Builds the representation; `delta` is the scalar of `A+B+C` when that
    /// sum is a scalar matrix.
    pub fn new(
        a: RatMatrix,
        b: RatMatrix,
        c: RatMatrix,
        meta: Option<ModuleMeta>,
    ) -> Result<Self, RepError> {
        let dim = a.rows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c)] {
            check_square(name, m, dim)?;
        }
        let delta = (&(&a + &b) + &c).as_scalar();
        let d = Self::derive_d(&a, &b);
        Ok(Self {
            dim,
            a,
            b,
            c,
            d,
            delta,
            meta,
        })
    }

    fn derive_d(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
        a.commutator(b).scale(&frac(1, 2))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    pub fn c(&self) -> &RatMatrix {
        &self.c
    }

    pub fn d(&self) -> &RatMatrix {
        &self.d
    }

    pub fn delta(&self) -> Option<&Rational> {
        self.delta.as_ref()
    }

    pub fn meta(&self) -> Option<&ModuleMeta> {
        self.meta.as_ref()
    }

    /// `[A, B, C]`.
    pub fn generators(&self) -> [&RatMatrix; 3] {
        [&self.a, &self.b, &self.c]
    }
}

/// A residual that should have been zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub name: String,
    pub residual: RatMatrix,
}

/// Outcome of a relation check. Flags that do not apply to the checked
/// presentation are vacuously `true`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub ok: bool,
    pub h_sum_ok: bool,
    #[serde(with = "serde_opt_array4")]
    pub central_squares: Option<[Rational; 4]>,
    pub racah_d_ok: bool,
    pub central_elements_ok: bool,
    #[serde(with = "serde_opt")]
    pub alpha: Option<Rational>,
    #[serde(with = "serde_opt")]
    pub beta: Option<Rational>,
    #[serde(with = "serde_opt")]
    pub gamma: Option<Rational>,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    fn vacuous() -> Self {
        Self {
            ok: true,
            h_sum_ok: true,
            central_squares: None,
            racah_d_ok: true,
            central_elements_ok: true,
            alpha: None,
            beta: None,
            gamma: None,
            violations: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.ok = self.h_sum_ok
            && self.racah_d_ok
            && self.central_elements_ok
            && self.violations.is_empty();
        self
    }
}

/// Records `m` as a violation unless it is zero. Returns whether it was zero.
fn expect_zero(violations: &mut Vec<Violation>, name: impl Into<String>, m: RatMatrix) -> bool {
    if m.is_zero() {
        true
    } else {
        violations.push(Violation {
            name: name.into(),
            residual: m,
        });
        false
    }
}

/// Checks `t0+t1+t0v+t1v = -1` and that each square commutes with all four
/// generators.
pub fn check_h_relations(h: &HRep) -> RelationReport {
    let mut rep = RelationReport::vacuous();
    let n = h.dim();
    let g = h.generators();
    let sum = g.iter().fold(RatMatrix::identity(n), |acc, m| &acc + m);
    rep.h_sum_ok = expect_zero(&mut rep.violations, "t0+t1+t0v+t1v+1", sum);

    let squares: Vec<RatMatrix> = g.iter().map(|m| m * m).collect();
    let mut squares_central = true;
    for (sq, sname) in squares.iter().zip(H_GENERATORS) {
        for (gen, gname) in g.iter().zip(H_GENERATORS) {
            squares_central &= expect_zero(
                &mut rep.violations,
                format!("[{sname}^2,{gname}]"),
                sq.commutator(gen),
            );
        }
    }
    let scalars: Option<Vec<Rational>> = squares.iter().map(RatMatrix::as_scalar).collect();
    rep.central_squares = scalars.map(|v| v.try_into().expect("four squares"));
    rep.central_elements_ok = squares_central;
    rep.finish()
}

fn pronic_quarter(x: &RatMatrix) -> RatMatrix {
    // x(x+2)/4
    (x * &x.shift(&int(2))).scale(&frac(1, 4))
}

/// Pulls an `HRep` back along the homomorphism from the Racah algebra:
/// `A = (t1v+t0v)(t1v+t0v+2)/4`, `B = (t1+t1v)(t1+t1v+2)/4`,
/// `C = (t0v+t1)(t0v+t1+2)/4`.
pub fn zeta_pullback(h: &HRep) -> RacahRep {
    let a = pronic_quarter(&(h.t1v() + h.t0v()));
    let b = pronic_quarter(&(h.t1() + h.t1v()));
    let c = pronic_quarter(&(h.t0v() + h.t1()));
    RacahRep::new(a, b, c, h.meta().cloned()).expect("pullback matrices share the module dimension")
}

/// The three designated central combinations
/// `[A,D]+AC-BA`, `[B,D]+BA-CB`, `[C,D]+CB-AC`.
pub fn racah_central_elements(r: &RacahRep) -> [RatMatrix; 3] {
    let (a, b, c, d) = (r.a(), r.b(), r.c(), r.d());
    let alpha = &(&a.commutator(d) + &(a * c)) - &(b * a);
    let beta = &(&b.commutator(d) + &(b * a)) - &(c * b);
    let gamma = &(&c.commutator(d) + &(c * b)) - &(a * c);
    [alpha, beta, gamma]
}

/// Checks `[A,B]=[B,C]=[C,A]=2D` and centrality of the three combinations.
/// When `delta` is present, also checks `A+B+C = delta`.
pub fn check_racah_relations(r: &RacahRep) -> RelationReport {
    let mut rep = RelationReport::vacuous();
    let two_d = r.d().scale(&int(2));
    let (a, b, c, d) = (r.a(), r.b(), r.c(), r.d());
    let mut d_ok = expect_zero(&mut rep.violations, "[A,B]-2D", &a.commutator(b) - &two_d);
    d_ok &= expect_zero(&mut rep.violations, "[B,C]-2D", &b.commutator(c) - &two_d);
    d_ok &= expect_zero(&mut rep.violations, "[C,A]-2D", &c.commutator(a) - &two_d);
    rep.racah_d_ok = d_ok;

    let central = racah_central_elements(r);
    let mut central_ok = true;
    for (z, zname) in central.iter().zip(["alpha", "beta", "gamma"]) {
        for (g, gname) in [a, b, c, d].into_iter().zip(["A", "B", "C", "D"]) {
            central_ok &= expect_zero(
                &mut rep.violations,
                format!("[{zname},{gname}]"),
                z.commutator(g),
            );
        }
    }
    rep.central_elements_ok = central_ok;
    let [alpha, beta, gamma] = central.map(|m| m.as_scalar());
    rep.alpha = alpha;
    rep.beta = beta;
    rep.gamma = gamma;

    if let Some(delta) = r.delta() {
        let sum = &(a + b) + c;
        expect_zero(
            &mut rep.violations,
            "A+B+C-delta",
            sum.shift(&-delta.clone()),
        );
    }
    rep.finish()
}

/// Bannai–Ito generators of an `HRep` with their relation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiTriple {
    pub x: RatMatrix,
    pub y: RatMatrix,
    pub z: RatMatrix,
    pub report: RelationReport,
}

/// `X = t0+t1+1/2`, `Y = t0+t0v+1/2`, `Z = t0+t1v+1/2`; checks that each of
/// `{X,Y}-Z`, `{Y,Z}-X`, `{Z,X}-Y` commutes with `X, Y, Z`.
pub fn bi_triple(h: &HRep) -> BiTriple {
    let half = frac(1, 2);
    let x = (h.t0() + h.t1()).shift(&half);
    let y = (h.t0() + h.t0v()).shift(&half);
    let z = (h.t0() + h.t1v()).shift(&half);
    let mut rep = RelationReport::vacuous();
    let combos = [
        ("{X,Y}-Z", &x.anticommutator(&y) - &z),
        ("{Y,Z}-X", &y.anticommutator(&z) - &x),
        ("{Z,X}-Y", &z.anticommutator(&x) - &y),
    ];
    let mut ok = true;
    for (cname, m) in &combos {
        for (g, gname) in [(&x, "X"), (&y, "Y"), (&z, "Z")] {
            ok &= expect_zero(
                &mut rep.violations,
                format!("[{cname},{gname}]"),
                m.commutator(g),
            );
        }
    }
    rep.central_elements_ok = ok;
    BiTriple {
        x,
        y,
        z,
        report: rep.finish(),
    }
}

/// Whether `t0` commutes with `A`, `B` and `C` of the pullback.
pub fn check_t0_centralizes(h: &HRep) -> bool {
    let r = zeta_pullback(h);
    r.generators().iter().all(|g| h.t0().commutes_with(g))
}

/// The three anticommutator identities
/// `{t0+t1,[t1,t0]} = {t0+t0v,[t0v,t0]} = {t0+t1v,[t1v,t0]} = 0`.
pub fn check_anticommutator_identities(h: &HRep) -> bool {
    let t0 = h.t0();
    [h.t1(), h.t0v(), h.t1v()]
        .into_iter()
        .all(|t| (t0 + t).anticommutator(&t.commutator(t0)).is_zero())
}

/// Every check that applies to an `HRep`, merged into one report: the `H`
/// relations, the Racah relations of its pullback, `t0` commuting with
/// `A, B, C`, and the three anticommutator identities.
pub fn verify_h_module(h: &HRep) -> RelationReport {
    let mut rep = check_h_relations(h);
    let r = zeta_pullback(h);
    let racah = check_racah_relations(&r);
    rep.racah_d_ok = racah.racah_d_ok;
    rep.central_elements_ok &= racah.central_elements_ok;
    rep.alpha = racah.alpha;
    rep.beta = racah.beta;
    rep.gamma = racah.gamma;
    rep.violations.extend(racah.violations);

    let t0 = h.t0();
    for (g, name) in r.generators().into_iter().zip(["A", "B", "C"]) {
        expect_zero(
            &mut rep.violations,
            format!("[t0,{name}]"),
            t0.commutator(g),
        );
    }
    for (t, name) in [h.t1(), h.t0v(), h.t1v()]
        .into_iter()
        .zip(["t1", "t0v", "t1v"])
    {
        let m = (t0 + t).anticommutator(&t.commutator(t0));
        expect_zero(&mut rep.violations, format!("{{t0+{name},[{name},t0]}}"), m);
    }
    rep.finish()
}

/// The value of `delta` predicted from central scalars when `t0` acts as a
/// scalar: `(k0+k1+k0v+k1v)/4 - t0/2 - 3/4`.
pub fn delta_from_scalars(k: &[Rational; 4], t0: &Rational) -> Rational {
    let sum: Rational = k.iter().fold(Rational::zero(), |acc, x| acc + x);
    sum * frac(1, 4) - t0 * frac(1, 2) - frac(3, 4)
}
