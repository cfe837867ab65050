//! Truncated multivariate power series and jets of diffeomorphisms.
//!
//! A `JetScalar` is a polynomial of degree <= `order` in `dim` variables with
//! exact rational coefficients, standing for a Taylor expansion truncated at
//! `order`. Invariants kept by every constructor and operation:
//!
//! - stored multi-indices all have degree <= `order`;
//! - no explicit zero coefficients are stored (absent means zero);
//! - iteration order is graded lexicographic, so output is deterministic.
//!
//! Binary operations truncate to the minimum of the operand orders; this is
//! the jet-projection semantics, not an error.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::linalg::RatMat;
use crate::rational::Rational;

/// Exponent vector of a monomial; length is the ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Decrement one exponent; `None` if it is already zero.
    pub fn minus_axis(&self, axis: usize) -> Option<MultiIndex> {
        if self.0[axis] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[axis] -= 1;
        Some(MultiIndex(e))
    }

    fn first_nonzero_axis(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// The multi-index factorial `alpha! = alpha_1! ... alpha_n!`.
    pub fn factorial(&self) -> Rational {
        let mut acc = num_bigint::BigInt::one();
        for &e in &self.0 {
            acc *= crate::rational::factorial(e);
        }
        Rational::from_integer(acc)
    }
}

/// Graded lexicographic: degree first, then the exponent vector.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A truncated power series: finitely many rational coefficients indexed by
/// monomials of degree <= `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetScalar {
    dim: usize,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl JetScalar {
    pub fn zero(dim: usize, order: u32) -> Self {
        JetScalar {
            dim,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, order: u32, value: Rational) -> Self {
        let mut s = JetScalar::zero(dim, order);
        s.set_coeff(MultiIndex::zero(dim), value);
        s
    }

    pub fn one(dim: usize, order: u32) -> Self {
        JetScalar::constant(dim, order, Rational::one())
    }

    /// The coordinate function `z_axis`.
    pub fn variable(dim: usize, order: u32, axis: usize) -> Result<Self, Error> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        if order == 0 {
            return Ok(JetScalar::zero(dim, order));
        }
        let mut s = JetScalar::zero(dim, order);
        s.set_coeff(MultiIndex::unit(dim, axis), Rational::one());
        Ok(s)
    }

    pub fn from_coeffs<I>(dim: usize, order: u32, coeffs: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut s = JetScalar::zero(dim, order);
        for (idx, c) in coeffs {
            if idx.dim() != dim {
                return Err(Error::DimMismatch(idx.dim(), dim));
            }
            let degree = idx.degree();
            if degree > order {
                return Err(Error::DegreeAboveOrder {
                    index: idx.to_string(),
                    degree,
                    order,
                });
            }
            let v = s.coeff(&idx) + c;
            s.set_coeff(idx, v);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rational {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Nonzero coefficients in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub(crate) fn set_coeff(&mut self, idx: MultiIndex, value: Rational) {
        debug_assert!(idx.dim() == self.dim && idx.degree() <= self.order);
        if value.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, value);
        }
    }

    fn add_to_coeff(&mut self, idx: MultiIndex, value: &Rational) {
        if value.is_zero() {
            return;
        }
        let v = self.coeff(&idx) + value;
        self.set_coeff(idx, v);
    }

    fn check_dim(&self, other: &JetScalar) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Truncate to `min(order, self.order)`.
    pub fn truncated(&self, order: u32) -> JetScalar {
        let order = order.min(self.order);
        let mut out = JetScalar::zero(self.dim, order);
        for (idx, c) in &self.coeffs {
            if idx.degree() <= order {
                out.coeffs.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Raise the order bound without adding information. Only valid when the
    /// caller knows the missing coefficients cannot influence what it reads
    /// from the result (e.g. multiplying by a series with no constant term).
    pub(crate) fn assume_order(&self, order: u32) -> JetScalar {
        assert!(order >= self.order);
        let mut out = self.clone();
        out.order = order;
        out
    }

    pub fn add(&self, other: &JetScalar) -> Result<JetScalar, Error> {
        self.check_dim(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncated(order);
        for (idx, c) in &other.coeffs {
            if idx.degree() <= order {
                out.add_to_coeff(idx.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &JetScalar) -> Result<JetScalar, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> JetScalar {
        let mut out = JetScalar::zero(self.dim, self.order);
        for (idx, c) in &self.coeffs {
            out.coeffs.insert(idx.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> JetScalar {
        let mut out = JetScalar::zero(self.dim, self.order);
        if factor.is_zero() {
            return out;
        }
        for (idx, c) in &self.coeffs {
            out.coeffs.insert(idx.clone(), c * factor);
        }
        out
    }

    /// `self + factor * other`, in place; orders must already agree.
    fn accumulate_scaled(&mut self, other: &JetScalar, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (idx, c) in &other.coeffs {
            if idx.degree() <= self.order {
                self.add_to_coeff(idx.clone(), &(c * factor));
            }
        }
    }

    pub fn mul(&self, other: &JetScalar) -> Result<JetScalar, Error> {
        self.check_dim(other)?;
        let order = self.order.min(other.order);
        let mut out = JetScalar::zero(self.dim, order);
        for (ia, ca) in &self.coeffs {
            let da = ia.degree();
            if da > order {
                break; // graded order: everything after is too deep
            }
            for (ib, cb) in &other.coeffs {
                if da + ib.degree() > order {
                    break;
                }
                out.add_to_coeff(ia.plus(ib), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Partial derivative along `axis`; the order drops by one (floor 0).
    pub fn partial(&self, axis: usize) -> JetScalar {
        let order = self.order.saturating_sub(1);
        let mut out = JetScalar::zero(self.dim, order);
        for (idx, c) in &self.coeffs {
            if let Some(shifted) = idx.minus_axis(axis) {
                let e = Rational::from_integer(idx.exponent(axis).into());
                out.add_to_coeff(shifted, &(c * e));
            }
        }
        out
    }

    /// The degree-`d` homogeneous part, kept at the same order.
    pub fn homogeneous_part(&self, d: u32) -> JetScalar {
        let mut out = JetScalar::zero(self.dim, self.order);
        for (idx, c) in &self.coeffs {
            if idx.degree() == d {
                out.coeffs.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Euler scaling: multiply each homogeneous part of degree d by d
    /// (equals `sum_i z_i * d/dz_i`).
    pub fn euler_scaled(&self) -> JetScalar {
        let mut out = JetScalar::zero(self.dim, self.order);
        for (idx, c) in &self.coeffs {
            let d = Rational::from_integer(idx.degree().into());
            if !d.is_zero() {
                out.coeffs.insert(idx.clone(), c * d);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim, "evaluation point has wrong length");
        let mut acc = Rational::zero();
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for (axis, &e) in idx.exponents().iter().enumerate() {
                for _ in 0..e {
                    term *= &point[axis];
                }
            }
            acc += term;
        }
        acc
    }

    /// Composition `self ∘ map`, truncated to the common order.
    pub fn substitute(&self, map: &DiffeoJet) -> Result<JetScalar, Error> {
        if self.dim != map.dim {
            return Err(Error::DimMismatch(self.dim, map.dim));
        }
        let order = self.order.min(map.order);
        let mut cache = PowerCache::new(map, order);
        Ok(self.substitute_with(&mut cache))
    }

    pub(crate) fn substitute_with(&self, cache: &mut PowerCache) -> JetScalar {
        let order = self.order.min(cache.order);
        let mut out = JetScalar::zero(self.dim, order);
        for (idx, c) in &self.coeffs {
            if idx.degree() > order {
                break; // powers of a constant-free map start at that degree
            }
            let power = cache.product(idx);
            out.accumulate_scaled(&power.truncated(order), c);
        }
        out
    }

    /// Multiplicative inverse of a series with constant term 1, to the same
    /// order: the finite geometric series in `1 - self`.
    pub fn recip_one_plus(&self) -> Result<JetScalar, Error> {
        if !self.constant_term().is_one() {
            return Err(Error::NotIdentityFrame(format!(
                "series has constant term {}",
                self.constant_term()
            )));
        }
        let one = JetScalar::one(self.dim, self.order);
        let u = self.sub(&one)?; // no constant term
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&u)?.neg();
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    fn variable_names(dim: usize) -> Vec<String> {
        match dim {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            _ => (1..=dim).map(|i| format!("z{i}")).collect(),
        }
    }
}

impl fmt::Display for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = JetScalar::variable_names(self.dim);
        let mut first = true;
        for (idx, c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = idx
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(axis, &e)| {
                    if e == 1 {
                        names[axis].clone()
                    } else {
                        format!("{}^{e}", names[axis])
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{}", crate::rational::format_canonical(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(
                    f,
                    "{}*{}",
                    crate::rational::format_canonical(&mag),
                    monomial.join("*")
                )?;
            }
        }
        Ok(())
    }
}

/// Jet of an origin-preserving local diffeomorphism: one series per target
/// coordinate, with vanishing constant terms and an invertible linear part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffeoJet {
    dim: usize,
    order: u32,
    components: Vec<JetScalar>,
}

impl DiffeoJet {
    pub fn new(components: Vec<JetScalar>) -> Result<Self, Error> {
        let dim = components.len();
        assert!(dim > 0, "a diffeomorphism jet needs at least one component");
        let order = components[0].order();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimMismatch(c.dim(), dim));
            }
            if c.order() != order {
                return Err(Error::OrderMismatch(c.order(), order));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        if order < 1 {
            return Err(Error::OrderTooSmall { have: order, need: 1 });
        }
        let jet = DiffeoJet {
            dim,
            order,
            components,
        };
        if jet.linear_part().det().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(jet)
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        let components = (0..dim)
            .map(|axis| JetScalar::variable(dim, order, axis).expect("axis in range"))
            .collect();
        DiffeoJet::new(components).expect("identity jet is valid")
    }

    /// The linear map `z -> A z`, as a jet of the given order.
    pub fn from_linear(a: &RatMat, order: u32) -> Result<Self, Error> {
        let dim = a.rows();
        assert_eq!(a.cols(), dim, "linear part must be square");
        let mut components = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut c = JetScalar::zero(dim, order);
            for j in 0..dim {
                c.set_coeff(MultiIndex::unit(dim, j), a.get(i, j).clone());
            }
            components.push(c);
        }
        DiffeoJet::new(components)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn component(&self, k: usize) -> &JetScalar {
        &self.components[k]
    }

    pub fn components(&self) -> &[JetScalar] {
        &self.components
    }

    /// Matrix of degree-1 coefficients.
    pub fn linear_part(&self) -> RatMat {
        let mut a = RatMat::zeros(self.dim, self.dim);
        for (i, comp) in self.components.iter().enumerate() {
            for j in 0..self.dim {
                a.set(i, j, comp.coeff(&MultiIndex::unit(self.dim, j)));
            }
        }
        a
    }

    pub fn truncated(&self, order: u32) -> DiffeoJet {
        let order = order.min(self.order).max(1);
        DiffeoJet {
            dim: self.dim,
            order,
            components: self.components.iter().map(|c| c.truncated(order)).collect(),
        }
    }

    /// Composition `self ∘ inner`, truncated to the common order.
    pub fn compose(&self, inner: &DiffeoJet) -> Result<DiffeoJet, Error> {
        if self.dim != inner.dim {
            return Err(Error::DimMismatch(self.dim, inner.dim));
        }
        let order = self.order.min(inner.order);
        let mut cache = PowerCache::new(inner, order);
        let components = self
            .components
            .iter()
            .map(|c| c.substitute_with(&mut cache))
            .collect();
        DiffeoJet::new(components)
    }

    /// Inverse jet, solved degree by degree: iterate
    /// `inv <- A^{-1} (id - N(inv))` where `N` is the nonlinear part, which
    /// fixes one additional degree per pass.
    pub fn inverse(&self) -> DiffeoJet {
        let a_inv = self
            .linear_part()
            .inverse()
            .expect("constructor guarantees an invertible linear part");
        let linear_inv = DiffeoJet::from_linear(&a_inv, self.order).expect("invertible");
        // Nonlinear part of self: components minus their degree-1 slice.
        let nonlinear: Vec<JetScalar> = self
            .components
            .iter()
            .map(|c| c.sub(&c.homogeneous_part(1)).expect("same shape"))
            .collect();
        if nonlinear.iter().all(JetScalar::is_zero) {
            return linear_inv;
        }
        let identity = DiffeoJet::identity(self.dim, self.order);
        let mut inv = linear_inv.clone();
        for _ in 1..self.order {
            let mut cache = PowerCache::new(&inv, self.order);
            let corrected: Vec<JetScalar> = identity
                .components
                .iter()
                .zip(&nonlinear)
                .map(|(id_c, n_c)| {
                    id_c
                        .sub(&n_c.substitute_with(&mut cache))
                        .expect("same shape")
                })
                .collect();
            let shifted = DiffeoJet {
                dim: self.dim,
                order: self.order,
                components: corrected,
            };
            inv = linear_inv.compose_linear(&shifted);
        }
        inv
    }

    /// Apply a linear jet (self must be linear) to another jet's components.
    fn compose_linear(&self, inner: &DiffeoJet) -> DiffeoJet {
        let a = self.linear_part();
        let mut components = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = JetScalar::zero(self.dim, inner.order);
            for j in 0..self.dim {
                acc.accumulate_scaled(&inner.components[j], a.get(i, j));
            }
            components.push(acc);
        }
        DiffeoJet {
            dim: self.dim,
            order: inner.order,
            components,
        }
    }
}

/// Memoized monomial powers `prod_i map_i^{alpha_i}` for one substitution
/// target. The memo is an implementation detail; sharing it across the
/// coefficients of a tensor of series is what keeps pullbacks cheap.
pub(crate) struct PowerCache<'a> {
    components: &'a [JetScalar],
    order: u32,
    memo: BTreeMap<MultiIndex, JetScalar>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(map: &'a DiffeoJet, order: u32) -> Self {
        PowerCache {
            components: &map.components,
            order: order.min(map.order),
            memo: BTreeMap::new(),
        }
    }

    pub(crate) fn product(&mut self, idx: &MultiIndex) -> JetScalar {
        if let Some(hit) = self.memo.get(idx) {
            return hit.clone();
        }
        let dim = self.components[0].dim();
        let value = match idx.first_nonzero_axis() {
            None => JetScalar::one(dim, self.order),
            Some(axis) => {
                let parent = idx.minus_axis(axis).expect("axis is nonzero");
                let base = self.product(&parent);
                base.mul(&self.components[axis].truncated(self.order))
                    .expect("dimensions agree")
            }
        };
        self.memo.insert(idx.clone(), value.clone());
        value
    }
}
