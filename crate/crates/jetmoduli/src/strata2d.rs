//! Classification of surface jets: exact O(2) stabilizers of h-jets, orbit
//! equivalence with witnesses, curvature invariant vectors, and the census
//! of strata per order.
//!
//! All decisions run on Gauss rationals (complex numbers with rational real
//! and imaginary parts) in the z/zbar monomial basis, where a rotation by a
//! unit alpha scales the coefficient at (a, b) by alpha^(b-a) and the
//! reflection z -> beta zbar sends it to conj(c_{a,b}) beta^(b-a). There are
//! no tolerances anywhere on the decision path.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::jet::{JetScalar, MultiIndex};
use crate::metric::{curvature_data, curvature_point_data, gauss_curvature, MetricJet};
use crate::normal_form::{extract_h, metric_from_h, normalize, HPoly};
use crate::rational::{binomial, Rational};

/// Complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussRational::new(Rational::one(), Rational::zero())
    }

    pub fn i() -> Self {
        GaussRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_real(re: Rational) -> Self {
        GaussRational::new(re, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRational::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRational::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn scale(&self, f: &Rational) -> Self {
        GaussRational::new(&self.re * f, &self.im * f)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sqr().is_one()
    }

    /// Exact division; panics on zero divisor.
    pub fn div(&self, other: &Self) -> Self {
        let n = other.norm_sqr();
        assert!(!n.is_zero(), "division by zero Gauss rational");
        let prod = self.mul(&other.conj());
        GaussRational::new(prod.re / &n, prod.im / &n)
    }

    /// Integer power; negative exponents require unit modulus (then the
    /// inverse is the conjugate).
    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            debug_assert!(self.is_unit(), "negative powers only for units");
            return self.conj().powi(-e);
        }
        let mut acc = GaussRational::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::rational::format_canonical as fc;
        if self.im.is_zero() {
            return write!(f, "{}", fc(&self.re));
        }
        let im_mag = self.im.abs();
        let im_part = if im_mag.is_one() {
            "i".to_string()
        } else {
            format!("{}i", fc(&im_mag))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                write!(f, "{im_part}")
            }
        } else if self.im.is_negative() {
            write!(f, "{} - {im_part}", fc(&self.re))
        } else {
            write!(f, "{} + {im_part}", fc(&self.re))
        }
    }
}

/// A real polynomial written in the z/zbar basis: coefficients at (a, b)
/// stand for `z^a zbar^b`, with the reality condition
/// `c_{b,a} = conj(c_{a,b})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZBarPoly {
    degree: u32,
    coeffs: BTreeMap<(u32, u32), GaussRational>,
}

impl ZBarPoly {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, a: u32, b: u32) -> GaussRational {
        self.coeffs
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(GaussRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRational)> {
        self.coeffs.iter()
    }

    fn add_coeff(&mut self, key: (u32, u32), value: GaussRational) {
        if value.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(GaussRational::zero);
        *entry = entry.add(&value);
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Reality condition `c_{b,a} = conj(c_{a,b})`.
    pub fn is_real(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&(a, b), c)| self.coeff(b, a) == c.conj())
    }
}

/// Exact change of basis `x = (z + zbar)/2`, `y = (z - zbar)/(2i)`.
pub fn to_zbar(h: &HPoly) -> ZBarPoly {
    let mut out = ZBarPoly {
        degree: h.order(),
        coeffs: BTreeMap::new(),
    };
    let half = Rational::new(1.into(), 2.into());
    // (1/(2i))^b = (-i/2)^b
    let minus_i_half = GaussRational::new(Rational::zero(), -half.clone());
    for (idx, c) in h.series().terms() {
        let a = idx.exponent(0);
        let b = idx.exponent(1);
        // x^a y^b = (z + zbar)^a / 2^a * (z - zbar)^b * (-i/2)^b
        let base = GaussRational::from_real(half.pow(a as i32)).mul(&minus_i_half.powi(b as i64));
        for s in 0..=a {
            for t in 0..=b {
                let sign = if (b - t) % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                let count = Rational::from_integer(
                    binomial(a.into(), s.into()) * binomial(b.into(), t.into()),
                ) * sign;
                let key = (s + t, (a - s) + (b - t));
                out.add_coeff(key, base.scale(&(count * c)));
            }
        }
    }
    debug_assert!(out.is_real());
    out
}

/// Inverse transform back to a real polynomial in (x, y); the imaginary
/// parts must cancel, which is asserted.
pub fn from_zbar(p: &ZBarPoly) -> HPoly {
    let mut acc: BTreeMap<MultiIndex, GaussRational> = BTreeMap::new();
    for (&(a, b), c) in p.coeffs() {
        // z^a zbar^b = (x + iy)^a (x - iy)^b
        for s in 0..=a {
            for t in 0..=b {
                let ipow = GaussRational::i().powi(i64::from(a - s) - i64::from(b - t));
                let count = Rational::from_integer(
                    binomial(a.into(), s.into()) * binomial(b.into(), t.into()),
                );
                let key = MultiIndex::new(vec![s + t, (a - s) + (b - t)]);
                let v = c.mul(&ipow).scale(&count);
                let entry = acc.entry(key).or_insert_with(GaussRational::zero);
                *entry = entry.add(&v);
            }
        }
    }
    let mut series = JetScalar::zero(2, p.degree());
    for (idx, c) in acc {
        assert!(c.im.is_zero(), "reality violated at {idx}");
        series.set_coeff(idx, c.re);
    }
    HPoly::new(series).expect("two variables")
}

/// Classification result: the full orthogonal group, a dihedral group D_m of
/// order 2m, or a rotation group K_m of order m. The special orthogonal
/// group is deliberately not representable: no jet metric realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupType {
    O2,
    D(u32),
    K(u32),
}

impl GroupType {
    pub fn rotation_order(&self) -> Option<u32> {
        match self {
            GroupType::O2 => None,
            GroupType::D(m) | GroupType::K(m) => Some(*m),
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::O2 => write!(f, "O(2)"),
            GroupType::D(m) => write!(f, "D_{m}"),
            GroupType::K(m) => write!(f, "K_{m}"),
        }
    }
}

/// One equation `beta^exponent = value` with a unit-modulus right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRootConstraint {
    pub exponent: u32,
    pub value: GaussRational,
}

/// Joint solution datum: every g-th root of `w` solves the system
/// (`g = 0` means the system was empty and any unit works).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRootSolution {
    pub g: u32,
    pub w: GaussRational,
}

impl UnitRootSolution {
    /// A numeric representative (the principal g-th root of w). Presentation
    /// only: the decision itself is exact.
    pub fn numeric_witness(&self) -> (f64, f64) {
        if self.g == 0 {
            return (1.0, 0.0);
        }
        let re = self.w.re.to_f64().unwrap_or(f64::NAN);
        let im = self.w.im.to_f64().unwrap_or(f64::NAN);
        let theta = im.atan2(re) / f64::from(self.g);
        (theta.cos(), theta.sin())
    }
}

/// Decide whether one unit complex number satisfies `beta^{e_i} = u_i` for
/// all i. With `g = gcd(e_i)` and Bezout multipliers, any solution must have
/// `beta^g = w := prod u_i^{lambda_i}`; the system is solvable iff
/// `w^{e_i / g} = u_i` for every i, and then every g-th root of w works.
pub fn solve_unit_root_system(
    constraints: &[UnitRootConstraint],
) -> Result<Option<UnitRootSolution>, Error> {
    for c in constraints {
        if !c.value.is_unit() {
            return Err(Error::NotUnitModulus(c.value.to_string()));
        }
        assert!(c.exponent >= 1, "exponents must be positive");
    }
    if constraints.is_empty() {
        return Ok(Some(UnitRootSolution {
            g: 0,
            w: GaussRational::one(),
        }));
    }
    // Fold with the extended gcd: from beta^g = w and beta^e = u derive
    // beta^{gcd(g, e)} = w^x u^y.
    let mut g = i64::from(constraints[0].exponent);
    let mut w = constraints[0].value.clone();
    for c in &constraints[1..] {
        let e = i64::from(c.exponent);
        let ext = g.extended_gcd(&e);
        w = w.powi(ext.x).mul(&c.value.powi(ext.y));
        g = ext.gcd;
    }
    let g = g.unsigned_abs() as u32;
    for c in constraints {
        let check = w.powi(i64::from(c.exponent / g));
        if check != c.value {
            return Ok(None);
        }
    }
    Ok(Some(UnitRootSolution { g, w }))
}

/// Exact O(2) stabilizer of an h-jet.
///
/// Rotations: the support differences `|a - b|` either are all zero (the
/// rotation stabilizer is all of SO(2), and the answer is O(2) because such
/// a series is a real series in z zbar) or have gcd m, giving K_m.
/// Reflections: `z -> beta zbar` fixes h iff the unit-root system
/// `beta^{b-a} = c_{a,b} / conj(c_{a,b})` over the support is solvable;
/// if so the group is D_m, otherwise K_m.
pub fn stabilizer(h: &HPoly) -> GroupType {
    let zb = to_zbar(h);
    let mut diffs: Vec<u32> = Vec::new();
    for (&(a, b), _) in zb.coeffs() {
        if a != b {
            diffs.push(a.abs_diff(b));
        }
    }
    if diffs.is_empty() {
        return GroupType::O2;
    }
    let m = diffs.iter().fold(0u32, |acc, &d| acc.gcd(&d));
    let constraints = reflection_constraints(&zb, &zb);
    match solve_unit_root_system(&constraints).expect("quotients of conjugates are units") {
        Some(_) => GroupType::D(m),
        None => GroupType::K(m),
    }
}

/// Constraints for a reflection (or for rotation matching when `from != to`):
/// over the off-diagonal support with b > a, require
/// `beta^(b-a) = to_{a,b} / conj(from_{a,b})`. Entries with b < a carry the
/// conjugate equation and are redundant.
fn reflection_constraints(from: &ZBarPoly, to: &ZBarPoly) -> Vec<UnitRootConstraint> {
    let mut out = Vec::new();
    for (&(a, b), c) in from.coeffs() {
        if b > a {
            let target = to.coeff(a, b);
            out.push(UnitRootConstraint {
                exponent: b - a,
                value: target.div(&c.conj()),
            });
        }
    }
    out
}

/// Rotation-matching constraints: `alpha^(b-a) = to_{a,b} / from_{a,b}`.
fn rotation_constraints(from: &ZBarPoly, to: &ZBarPoly) -> Vec<UnitRootConstraint> {
    let mut out = Vec::new();
    for (&(a, b), c) in from.coeffs() {
        if b > a {
            let target = to.coeff(a, b);
            out.push(UnitRootConstraint {
                exponent: b - a,
                value: target.div(c),
            });
        }
    }
    out
}

/// The type map: normalize, extract h, and take its stabilizer.
pub fn type_of_jet(g: &MetricJet) -> Result<GroupType, Error> {
    if g.dim() != 2 {
        return Err(Error::NotDimensionTwo(g.dim()));
    }
    let normal = normalize(g)?;
    let h = extract_h(&normal)?;
    Ok(stabilizer(&h))
}

/// How two equivalent jets are matched: a rotation `z -> alpha z` or a
/// reflection `z -> beta zbar`, with the witness constrained by
/// `alpha^g = w` (g = 0 means any rotation/reflection parameter works).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitWitness {
    Rotation(UnitRootSolution),
    Reflection(UnitRootSolution),
}

impl fmt::Display for OrbitWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, sol) = match self {
            OrbitWitness::Rotation(s) => ("rotation", s),
            OrbitWitness::Reflection(s) => ("reflection", s),
        };
        if sol.g == 0 {
            write!(f, "{kind} witness unconstrained (any {kind} works)")
        } else {
            let (re, im) = sol.numeric_witness();
            write!(
                f,
                "{kind} witness alpha^{g} = {w}  (alpha ~ {re:.16} + {im:.16}i)",
                g = sol.g,
                w = sol.w
            )
        }
    }
}

/// Decide orbit equivalence of two surface jets of equal order. Both are
/// normalized; the residual freedom is exactly O(2) acting on the h-jets,
/// so equivalence reduces to a rotation or reflection matching of z/zbar
/// coefficient arrays, each an exact unit-root system.
pub fn orbit_equivalent(g1: &MetricJet, g2: &MetricJet) -> Result<Option<OrbitWitness>, Error> {
    if g1.dim() != 2 {
        return Err(Error::NotDimensionTwo(g1.dim()));
    }
    if g2.dim() != 2 {
        return Err(Error::NotDimensionTwo(g2.dim()));
    }
    if g1.order() != g2.order() {
        return Err(Error::OrderMismatch(g1.order(), g2.order()));
    }
    let h1 = extract_h(&normalize(g1)?)?;
    let h2 = extract_h(&normalize(g2)?)?;
    let zb1 = to_zbar(&h1);
    let zb2 = to_zbar(&h2);
    // O(2) preserves supports, diagonal coefficients and per-monomial moduli;
    // these are cheap exact preconditions.
    let support1: Vec<(u32, u32)> = zb1.coeffs().map(|(&k, _)| k).collect();
    let support2: Vec<(u32, u32)> = zb2.coeffs().map(|(&k, _)| k).collect();
    if support1 != support2 {
        return Ok(None);
    }
    for (&(a, b), c1) in zb1.coeffs() {
        let c2 = zb2.coeff(a, b);
        if a == b {
            if *c1 != c2 {
                return Ok(None);
            }
        } else if c1.norm_sqr() != c2.norm_sqr() {
            return Ok(None);
        }
    }
    if let Some(sol) = solve_unit_root_system(&rotation_constraints(&zb1, &zb2))? {
        return Ok(Some(OrbitWitness::Rotation(sol)));
    }
    if let Some(sol) = solve_unit_root_system(&reflection_constraints(&zb1, &zb2))? {
        return Ok(Some(OrbitWitness::Reflection(sol)));
    }
    Ok(None)
}

/// Invariant vector of an r-jet for r in {2, 3, 4}: (p1), (p1, p2), or
/// (p1..p5) — curvature, squared gradient norm, Hessian trace/determinant,
/// and the Hessian form on the gradient, all at the base point of the
/// normalized jet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVector {
    pub order: u8,
    pub values: Vec<Rational>,
}

pub fn invariants(g: &MetricJet, r: u8) -> Result<InvariantVector, Error> {
    if g.dim() != 2 {
        return Err(Error::NotDimensionTwo(g.dim()));
    }
    assert!((2..=4).contains(&r), "invariant vectors exist for r = 2, 3, 4");
    if g.order() < u32::from(r) {
        return Err(Error::OrderTooSmall {
            have: g.order(),
            need: u32::from(r),
        });
    }
    let normal = normalize(&g.truncated(u32::from(r)))?;
    let data = if r == 4 {
        curvature_data(&normal)?
    } else {
        curvature_point_data(&gauss_curvature(&normal)?)
    };
    let values = match r {
        2 => vec![data.k0.clone()],
        3 => vec![data.k0.clone(), data.grad_norm_sq()],
        _ => vec![
            data.k0.clone(),
            data.grad_norm_sq(),
            data.hess_trace(),
            data.hess_det(),
            data.hess_on_grad(),
        ],
    };
    Ok(InvariantVector { order: r, values })
}

/// The three exact inequalities cutting out the image of the order-4
/// invariant vector: `p2 >= 0`, `p3^2 - 4 p4 >= 0`,
/// `(2 p5 - p2 p3)^2 <= p2^2 (p3^2 - 4 p4)`.
pub fn y_membership(v: &InvariantVector) -> Result<bool, Error> {
    if v.order != 4 {
        return Err(Error::InvariantOrder(v.order));
    }
    let [p2, p3, p4, p5] = [&v.values[1], &v.values[2], &v.values[3], &v.values[4]];
    if p2.is_negative() {
        return Ok(false);
    }
    let disc = p3 * p3 - Rational::from_integer(4.into()) * p4;
    if disc.is_negative() {
        return Ok(false);
    }
    let lhs = {
        let t = Rational::from_integer(2.into()) * p5 - p2 * p3;
        &t * &t
    };
    Ok(lhs <= p2 * p2 * disc)
}

/// The exact stratum list of the order-`r` moduli space:
/// O(2); D_1..D_{r-2} from order 3 on; K_1..K_{r-4} from order 5 on,
/// with K_1 alone at r = 4. The count is 1, 1, 1, 2, 4, then 2r - 5.
pub fn census(r: u32) -> Vec<GroupType> {
    let mut out = vec![GroupType::O2];
    if r >= 3 {
        out.extend((1..=r - 2).map(GroupType::D));
    }
    if r == 4 {
        out.push(GroupType::K(1));
    } else if r >= 5 {
        out.extend((1..=r - 4).map(GroupType::K));
    }
    out
}

/// `p_m = Re(z^m)` (or `q_m = Im(z^m)`) as a real polynomial of the given
/// order (which must be at least m).
pub fn invariant_polynomial(m: u32, imaginary: bool, order: u32) -> Result<HPoly, Error> {
    assert!(m >= 1);
    if order < m {
        return Err(Error::OrderTooSmall {
            have: order,
            need: m,
        });
    }
    let mut series = JetScalar::zero(2, order);
    for k in 0..=m {
        // (x + iy)^m: the x^{m-k} y^k term carries i^k C(m, k).
        let c = Rational::from_integer(binomial(m.into(), k.into()));
        let contribution = match (imaginary, k % 4) {
            (false, 0) => c,
            (false, 2) => -c,
            (true, 1) => c,
            (true, 3) => -c,
            _ => continue,
        };
        series.set_coeff(MultiIndex::new(vec![m - k, k]), contribution);
    }
    HPoly::new(series)
}

/// Named constructions realizing each stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    /// h = 0: the flat jet, type O(2).
    Zero,
    /// h = p_m: type D_m (needs r >= m + 2).
    Pm,
    /// h = q_m: type D_m, a conjugate copy (needs r >= m + 2).
    Qm,
    /// h = p_m + (x^2 + y^2) q_m: type K_m (needs r >= m + 4).
    PmPlusR2Qm,
    /// h = x + xy: type K_1 (needs r >= 4).
    XPlusXy,
}

impl PresetKind {
    pub fn name(&self) -> &'static str {
        match self {
            PresetKind::Zero => "zero",
            PresetKind::Pm => "pm",
            PresetKind::Qm => "qm",
            PresetKind::PmPlusR2Qm => "pmq",
            PresetKind::XPlusXy => "xxy",
        }
    }

    fn min_order(&self, m: u32) -> u32 {
        match self {
            PresetKind::Zero => 0,
            PresetKind::Pm | PresetKind::Qm => m + 2,
            PresetKind::PmPlusR2Qm => m + 4,
            PresetKind::XPlusXy => 4,
        }
    }
}

/// The h-polynomial of a preset (m is ignored for `zero` and `xxy`).
pub fn preset_poly(kind: PresetKind, m: u32, r: u32) -> Result<HPoly, Error> {
    let min = kind.min_order(m);
    if r < min {
        return Err(Error::PresetOrder {
            preset: kind.name().into(),
            min,
            got: r,
        });
    }
    let h_order = r.saturating_sub(2);
    match kind {
        PresetKind::Zero => Ok(HPoly::zero(h_order)),
        PresetKind::Pm => invariant_polynomial(m, false, h_order),
        PresetKind::Qm => invariant_polynomial(m, true, h_order),
        PresetKind::PmPlusR2Qm => {
            let pm = invariant_polynomial(m, false, h_order)?;
            let qm = invariant_polynomial(m, true, h_order)?;
            let x = JetScalar::variable(2, h_order, 0)?;
            let y = JetScalar::variable(2, h_order, 1)?;
            let rho2 = x.mul(&x)?.add(&y.mul(&y)?)?;
            HPoly::new(pm.series().add(&rho2.mul(qm.series())?)?)
        }
        PresetKind::XPlusXy => {
            let x = JetScalar::variable(2, h_order, 0)?;
            let y = JetScalar::variable(2, h_order, 1)?;
            HPoly::new(x.add(&x.mul(&y)?)?)
        }
    }
}

/// Preset metric jet; its classified type is the advertised group.
pub fn preset_h(kind: PresetKind, m: u32, r: u32) -> Result<MetricJet, Error> {
    Ok(metric_from_h(&preset_poly(kind, m, r)?, r))
}
