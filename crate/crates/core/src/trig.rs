//! The weight `H(e^{i theta}) = prod_j (1 - cos(theta - theta_j))^{m_j}`,
//! its Fourier coefficients `h_l`, `Z_H = h_0`, and the potential `V`.
//!
//! Exact mode keeps `e^{i theta_j}` as a unit symbol `z_j` (or as one of the
//! four Gaussian-rational units when the angle is a multiple of pi/2).
//! Numeric mode works in complex floating point.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::GaussRat;
use crate::error::{AlgebraError, ParseError, TrigError};
use crate::laurent::{LaurentPoly, VarTable};

/// An angle stored as a multiple of pi, exactly when it was given as a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "AngleRepr")]
pub enum Angle {
    /// `num/den * pi`, reduced, `den > 0`.
    PiFraction { num: i64, den: i64 },
    /// `x * pi` for a floating-point `x`.
    PiFloat(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Text(String),
    Number(f64),
}

impl TryFrom<AngleRepr> for Angle {
    type Error = ParseError;
    fn try_from(r: AngleRepr) -> Result<Self, ParseError> {
        match r {
            AngleRepr::Text(s) => s.parse(),
            AngleRepr::Number(x) => Ok(Angle::PiFloat(x)),
        }
    }
}

impl From<Angle> for AngleRepr {
    fn from(a: Angle) -> Self {
        match a {
            Angle::PiFraction { .. } => AngleRepr::Text(a.to_string()),
            Angle::PiFloat(x) => AngleRepr::Number(x),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Angle {
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Angle::PiFraction { num: s * num / g, den: s * den / g }
    }

    pub fn radians(&self) -> f64 {
        PI * self.over_pi()
    }

    pub fn over_pi(&self) -> f64 {
        match *self {
            Angle::PiFraction { num, den } => num as f64 / den as f64,
            Angle::PiFloat(x) => x,
        }
    }

    /// `e^{i theta}` when it is one of `1, i, -1, -i`.
    pub fn exact_unit(&self) -> Option<GaussRat> {
        let Angle::PiFraction { num, den } = *self else { return None };
        // theta/pi = num/den must be a multiple of 1/2
        if (2 * num) % den != 0 {
            return None;
        }
        let quarter = ((2 * num) / den).rem_euclid(4);
        Some(GaussRat::i().pow(quarter as u32))
    }

    pub fn unit(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.radians())
    }
}

impl FromStr for Angle {
    type Err = ParseError;
    /// `p/q` or `p` gives an exact fraction; anything else parses as a float.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let bad = || ParseError::Angle(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Angle::pi_fraction(n, d));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Angle::pi_fraction(n, 1));
        }
        s.parse::<f64>().map(Angle::PiFloat).map_err(|_| bad())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::PiFraction { num, den } => write!(f, "{num}/{den}"),
            Angle::PiFloat(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    #[serde(rename = "thetaOverPi")]
    pub angle: Angle,
    #[serde(rename = "m")]
    pub multiplicity: u32,
}

/// Validated list of `(theta_j, m_j)`: distinct angles in `[0, 2pi)`, `m_j >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CriticalPoint>", into = "Vec<CriticalPoint>")]
pub struct CriticalPoints {
    points: Vec<CriticalPoint>,
}

impl TryFrom<Vec<CriticalPoint>> for CriticalPoints {
    type Error = TrigError;
    fn try_from(v: Vec<CriticalPoint>) -> Result<Self, TrigError> {
        CriticalPoints::new(v)
    }
}

impl From<CriticalPoints> for Vec<CriticalPoint> {
    fn from(c: CriticalPoints) -> Self {
        c.points
    }
}

impl CriticalPoints {
    pub fn new(points: Vec<CriticalPoint>) -> Result<Self, TrigError> {
        if points.is_empty() {
            return Err(TrigError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if p.multiplicity == 0 {
                return Err(TrigError::ZeroMultiplicity(i));
            }
            let x = p.angle.over_pi();
            if !(0.0..2.0).contains(&x) {
                return Err(TrigError::AngleOutOfRange(p.angle.radians()));
            }
            for q in &points[..i] {
                let same = match (q.angle, p.angle) {
                    (Angle::PiFraction { num: a, den: b }, Angle::PiFraction { num: c, den: d }) => a * d == b * c,
                    _ => (q.angle.over_pi() - x).abs() < 1e-12,
                };
                if same {
                    return Err(TrigError::DuplicateAngle(i));
                }
            }
        }
        Ok(CriticalPoints { points })
    }

    /// A single critical point at `theta/pi = num/den`.
    pub fn single(num: i64, den: i64, m: u32) -> Result<Self, TrigError> {
        Self::new(vec![CriticalPoint { angle: Angle::pi_fraction(num, den), multiplicity: m }])
    }

    pub fn points(&self) -> &[CriticalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `d = sum m_j`.
    pub fn degree(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity as usize).sum()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.multiplicity).collect()
    }

    pub fn units(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.angle.unit()).collect()
    }
}

/// Laurent-polynomial convolution power of `(1 - cos(theta - theta_j))` factors.
fn convolve<T: Clone>(a: &[T], b: &[T], zero: T, mul: impl Fn(&T, &T) -> T, add: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = add(&out[i + j], &mul(x, y));
        }
    }
    out
}

/// `H` with coefficients exact polynomials in the unit symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactTrigPoly {
    table: Arc<VarTable>,
    multiplicities: Vec<u32>,
    degree: usize,
    /// `h[l + d]` for `l in -d..=d`.
    h: Vec<LaurentPoly>,
}

impl ExactTrigPoly {
    /// Generic angles: `e^{i theta_j}` is the symbol `z_j`.
    pub fn generic(multiplicities: &[u32]) -> Result<Self, TrigError> {
        if multiplicities.is_empty() {
            return Err(TrigError::Empty);
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(TrigError::ZeroMultiplicity(i));
        }
        let table = VarTable::algebra(0, multiplicities.len());
        let units: Vec<Option<GaussRat>> = vec![None; multiplicities.len()];
        Ok(Self::build(table, multiplicities, &units))
    }

    /// Fixed angles, each of which must have a Gaussian-rational `e^{i theta}`.
    pub fn from_points(points: &CriticalPoints) -> Result<Self, TrigError> {
        let units = points
            .points()
            .iter()
            .map(|p| p.angle.exact_unit().map(Some).ok_or_else(|| TrigError::NonRepresentable(p.angle.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let table = VarTable::algebra(0, points.len());
        Ok(Self::build(table, &points.multiplicities(), &units))
    }

    fn build(table: Arc<VarTable>, multiplicities: &[u32], units: &[Option<GaussRat>]) -> Self {
        let mut h = vec![LaurentPoly::one(&table)];
        for (j, &m) in multiplicities.iter().enumerate() {
            let slot = table.unit_slots()[j];
            let (z, zi) = match &units[j] {
                None => (LaurentPoly::var(&table, slot), LaurentPoly::var_pow(&table, slot, -1)),
                Some(c) => (
                    LaurentPoly::constant(&table, c.clone()),
                    LaurentPoly::constant(&table, c.inv().expect("unit is nonzero")),
                ),
            };
            let half = GaussRat::frac(-1, 2);
            // coefficients of e^{-i theta}, 1, e^{i theta}
            let factor = [z.scale(&half), LaurentPoly::one(&table), zi.scale(&half)];
            for _ in 0..m {
                h = convolve(&h, &factor, LaurentPoly::zero(&table), |a, b| a * b, |a, b| a + b);
            }
        }
        let degree = multiplicities.iter().map(|&m| m as usize).sum();
        ExactTrigPoly { table, multiplicities: multiplicities.to_vec(), degree, h }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// `h_l`; zero outside `[-d, d]`.
    pub fn h(&self, l: i64) -> LaurentPoly {
        let d = self.degree as i64;
        if l < -d || l > d {
            LaurentPoly::zero(&self.table)
        } else {
            self.h[(l + d) as usize].clone()
        }
    }

    /// `Z_H`, which equals `h_0`.
    pub fn z_h(&self) -> LaurentPoly {
        self.h(0)
    }

    /// `sum_l h_l w^l` as a polynomial over `target`, with `w` at slot `var`.
    pub fn as_univariate(&self, target: &Arc<VarTable>, var: usize) -> Result<LaurentPoly, AlgebraError> {
        let d = self.degree as i64;
        let mut out = LaurentPoly::zero(target);
        for l in -d..=d {
            let c = self.h(l).reindex(target)?;
            out = &out + &(&c * &LaurentPoly::var_pow(target, var, l as i32));
        }
        Ok(out)
    }

    /// `v_l = -h_l / (Z_H |l|)`, `v_0 = 0`. Needs a constant `Z_H`.
    pub fn potential(&self) -> Result<Vec<LaurentPoly>, AlgebraError> {
        let z = self
            .z_h()
            .as_constant()
            .ok_or_else(|| AlgebraError::Precondition("Z_H is not a constant".into()))?;
        assert!(!z.is_zero(), "Z_H vanishes");
        let d = self.degree as i64;
        Ok((-d..=d)
            .map(|l| {
                if l == 0 {
                    LaurentPoly::zero(&self.table)
                } else {
                    let s = &GaussRat::from_int(-1) / &(&z * &GaussRat::from_int(l.abs()));
                    self.h(l).scale(&s)
                }
            })
            .collect())
    }

    /// Numeric `h_l` with `z_j = e^{i theta_j}`.
    pub fn specialize(&self, units: &[Complex64]) -> Vec<Complex64> {
        let slots = self.table.unit_slots();
        let mut vals = vec![Complex64::one(); self.table.len()];
        for (s, u) in slots.iter().zip(units) {
            vals[*s] = *u;
        }
        self.h.iter().map(|p| p.eval(&vals)).collect()
    }
}

/// `H` with complex floating-point coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTrigPoly {
    points: CriticalPoints,
    degree: usize,
    h: Vec<Complex64>,
}

impl NumericTrigPoly {
    pub fn new(points: &CriticalPoints) -> Self {
        let mut h = vec![Complex64::one()];
        for p in points.points() {
            let z = p.angle.unit();
            let factor = [-z / 2.0, Complex64::one(), -z.conj() / 2.0];
            for _ in 0..p.multiplicity {
                h = convolve(&h, &factor, Complex64::zero(), |a, b| a * b, |a, b| a + b);
            }
        }
        NumericTrigPoly { points: points.clone(), degree: points.degree(), h }
    }

    /// `H = 1` (degree zero), only useful as a quadrature weight.
    pub fn constant_one() -> Self {
        let points = CriticalPoints { points: Vec::new() };
        NumericTrigPoly { points, degree: 0, h: vec![Complex64::one()] }
    }

    pub fn points(&self) -> &CriticalPoints {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn h(&self, l: i64) -> Complex64 {
        let d = self.degree as i64;
        if l < -d || l > d {
            Complex64::zero()
        } else {
            self.h[(l + d) as usize]
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.h
    }

    pub fn z_h(&self) -> f64 {
        self.h(0).re
    }

    /// `sum_l h_l e^{i l theta}` (real up to rounding).
    pub fn eval(&self, theta: f64) -> f64 {
        let d = self.degree as i64;
        (-d..=d).map(|l| self.h(l) * Complex64::from_polar(1.0, l as f64 * theta)).sum::<Complex64>().re
    }

    /// Direct product `prod (1 - cos(theta - theta_j))^{m_j}`.
    pub fn eval_product(&self, theta: f64) -> f64 {
        self.points
            .points()
            .iter()
            .map(|p| (1.0 - (theta - p.angle.radians()).cos()).powi(p.multiplicity as i32))
            .product()
    }

    /// Trapezoid rule for `(1/2pi) int_0^{2pi} H`, exact for `grid > 2d`.
    pub fn quadrature_mean(&self, grid: usize) -> f64 {
        (0..grid).map(|i| self.eval(2.0 * PI * i as f64 / grid as f64)).sum::<f64>() / grid as f64
    }

    /// `v_l` for `l in -d..=d`.
    pub fn potential(&self) -> Vec<Complex64> {
        let z = self.z_h();
        assert!(z != 0.0, "Z_H vanishes");
        let d = self.degree as i64;
        (-d..=d).map(|l| if l == 0 { Complex64::zero() } else { -self.h(l) / (z * l.abs() as f64) }).collect()
    }
}
