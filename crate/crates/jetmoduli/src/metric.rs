//! Metric jets and their curvature data.
//!
//! A `MetricJet` stores the upper triangle of a symmetric matrix of series;
//! the constant-term matrix must be symmetric positive definite, and every
//! operation past plain pullback additionally requires it to be the identity
//! (see [`MetricJet::identity_frame`] for the exact frame fix).
//!
//! Curvature conventions: the Riemann tensor is built from
//! `R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}`
//! and the Gaussian curvature of a surface is `K = g_{1l} R^l_{122} / det g`,
//! which makes the round sphere come out at `K = +1`.

use num_traits::Zero;

use crate::error::Error;
use crate::jet::{DiffeoJet, JetScalar, MultiIndex, PowerCache};
use crate::linalg::RatMat;
use crate::rational::{sqrt_exact, Rational};

/// Index into the packed upper triangle (i <= j) of an n x n symmetric array.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

pub(crate) fn pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// The r-jet of a Riemannian metric at the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricJet {
    dim: usize,
    order: u32,
    entries: Vec<JetScalar>, // packed upper triangle, graded (i <= j)
}

impl MetricJet {
    /// Build from the packed upper triangle `g_11, g_12, .., g_1n, g_22, ..`.
    pub fn new(dim: usize, order: u32, entries: Vec<JetScalar>) -> Result<Self, Error> {
        if entries.len() != pair_count(dim) {
            return Err(Error::DimMismatch(entries.len(), pair_count(dim)));
        }
        for e in &entries {
            if e.dim() != dim {
                return Err(Error::DimMismatch(e.dim(), dim));
            }
            if e.order() != order {
                return Err(Error::OrderMismatch(e.order(), order));
            }
        }
        let g = MetricJet {
            dim,
            order,
            entries,
        };
        if !g.constant_matrix().is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(g)
    }

    /// The flat (Euclidean) metric jet.
    pub fn flat(dim: usize, order: u32) -> Self {
        let entries = (0..dim)
            .flat_map(|i| {
                (i..dim).map(move |j| {
                    if i == j {
                        JetScalar::one(dim, order)
                    } else {
                        JetScalar::zero(dim, order)
                    }
                })
            })
            .collect();
        MetricJet {
            dim,
            order,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Symmetric access to `g_ij`.
    pub fn entry(&self, i: usize, j: usize) -> &JetScalar {
        &self.entries[pair_index(self.dim, i, j)]
    }

    pub fn entries(&self) -> &[JetScalar] {
        &self.entries
    }

    pub fn constant_matrix(&self) -> RatMat {
        let mut m = RatMat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.entry(i, j).constant_term());
            }
        }
        m
    }

    pub fn is_identity_frame(&self) -> bool {
        self.constant_matrix() == RatMat::identity(self.dim)
    }

    pub(crate) fn require_identity_frame(&self) -> Result<(), Error> {
        if self.is_identity_frame() {
            Ok(())
        } else {
            let diag: Vec<String> = (0..self.dim)
                .map(|i| crate::rational::format_canonical(&self.entry(i, i).constant_term()))
                .collect();
            Err(Error::NotIdentityFrame(format!(
                "g(0) has diagonal ({})",
                diag.join(", ")
            )))
        }
    }

    pub fn truncated(&self, order: u32) -> MetricJet {
        let order = order.min(self.order);
        MetricJet {
            dim: self.dim,
            order,
            entries: self.entries.iter().map(|e| e.truncated(order)).collect(),
        }
    }

    /// Rescale to an identity constant term when this is possible exactly:
    /// `g(0) = L D L^T` and every pivot of `D` is the square of a rational.
    /// Otherwise the input is refused; nothing is ever degraded to floats.
    pub fn identity_frame(&self) -> Result<MetricJet, Error> {
        if self.is_identity_frame() {
            return Ok(self.clone());
        }
        let g0 = self.constant_matrix();
        let (l, d) = g0.ldl().ok_or(Error::NotPositiveDefinite)?;
        let mut b = l; // becomes L * sqrt(D)
        for j in 0..self.dim {
            let root = sqrt_exact(&d[j]).ok_or_else(|| {
                Error::NotIdentityFrame(format!(
                    "LDL^T pivot {} is not the square of a rational",
                    crate::rational::format_canonical(&d[j])
                ))
            })?;
            for i in 0..self.dim {
                let v = b.get(i, j) * &root;
                b.set(i, j, v);
            }
        }
        // With g(0) = B B^T, the linear map A = B^{-T} gives A^T g(0) A = I.
        let a = b
            .transpose()
            .inverse()
            .expect("B has nonzero pivots");
        let tau = DiffeoJet::from_linear(&a, self.order + 1)?;
        pullback(&tau, self)
    }
}

/// Pullback `tau^* g`, truncated to the order of `g`.
///
/// Needs `tau` one order deeper than `g` because the chain rule spends one
/// derivative on the Jacobian.
pub fn pullback(tau: &DiffeoJet, g: &MetricJet) -> Result<MetricJet, Error> {
    if tau.dim() != g.dim() {
        return Err(Error::DimMismatch(tau.dim(), g.dim()));
    }
    if tau.order() < g.order() + 1 {
        return Err(Error::PullbackOrder {
            have: tau.order(),
            need: g.order(),
            need_tau: g.order() + 1,
        });
    }
    let n = g.dim();
    let order = g.order();
    // Jacobian d tau_k / d z_i, order r.
    let jac: Vec<Vec<JetScalar>> = (0..n)
        .map(|k| (0..n).map(|i| tau.component(k).partial(i).truncated(order)).collect())
        .collect();
    let mut cache = PowerCache::new(tau, order);
    let pulled: Vec<JetScalar> = g
        .entries()
        .iter()
        .map(|e| e.truncated(order).substitute_with(&mut cache))
        .collect();
    let mut entries = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i..n {
            let mut acc = JetScalar::zero(n, order);
            for k in 0..n {
                for l in 0..n {
                    let term = pulled[pair_index(n, k, l)]
                        .mul(&jac[k][i])?
                        .mul(&jac[l][j])?;
                    acc = acc.add(&term)?;
                }
            }
            entries.push(acc);
        }
    }
    MetricJet::new(n, order, entries)
}

/// Inverse metric as a packed symmetric array of series, via the Neumann
/// series of `E = g - I` (finite because `E` has no constant term).
pub fn inverse_metric(g: &MetricJet) -> Result<Vec<JetScalar>, Error> {
    g.require_identity_frame()?;
    let n = g.dim();
    let order = g.order();
    let zero = JetScalar::zero(n, order);
    // E as a full matrix.
    let mut e: Vec<Vec<JetScalar>> = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = g.entry(i, j).clone();
            if i == j {
                v = v.sub(&JetScalar::one(n, order))?;
            }
            e[i][j] = v;
        }
    }
    // Accumulate sum of (-E)^k, k = 0..=order.
    let mut inv: Vec<Vec<JetScalar>> = vec![vec![zero.clone(); n]; n];
    let mut power: Vec<Vec<JetScalar>> = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        inv[i][i] = JetScalar::one(n, order);
        power[i][i] = JetScalar::one(n, order);
    }
    for _ in 0..order {
        let mut next = vec![vec![zero.clone(); n]; n];
        let mut all_zero = true;
        for i in 0..n {
            for j in 0..n {
                let mut acc = JetScalar::zero(n, order);
                for k in 0..n {
                    acc = acc.add(&power[i][k].mul(&e[k][j])?.neg())?;
                }
                if !acc.is_zero() {
                    all_zero = false;
                }
                next[i][j] = acc;
            }
        }
        power = next;
        if all_zero {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                inv[i][j] = inv[i][j].add(&power[i][j])?;
            }
        }
    }
    let mut packed = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i..n {
            packed.push(inv[i][j].clone());
        }
    }
    Ok(packed)
}

/// Christoffel symbols, packed as `gamma[k][pair(i,j)]`, one order below `g`.
pub fn christoffel(g: &MetricJet) -> Result<Vec<Vec<JetScalar>>, Error> {
    g.require_identity_frame()?;
    let n = g.dim();
    let order = g.order().saturating_sub(1);
    let ginv = inverse_metric(g)?;
    // First partials of the metric entries, truncated to order r - 1.
    let partials: Vec<Vec<JetScalar>> = g
        .entries()
        .iter()
        .map(|e| (0..n).map(|axis| e.partial(axis)).collect())
        .collect();
    let d = |i: usize, j: usize, axis: usize| &partials[pair_index(n, i, j)][axis];
    let mut gamma = vec![Vec::with_capacity(pair_count(n)); n];
    let half = Rational::new(1.into(), 2.into());
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = JetScalar::zero(n, order);
                for l in 0..n {
                    let bracket = d(j, l, i)
                        .add(d(i, l, j))?
                        .sub(d(i, j, l))?;
                    let term = ginv[pair_index(n, k, l)].truncated(order).mul(&bracket)?;
                    acc = acc.add(&term)?;
                }
                gamma[k].push(acc.scale(&half));
            }
        }
    }
    Ok(gamma)
}

/// Gaussian curvature of a surface jet as a series of order `r - 2`.
pub fn gauss_curvature(g: &MetricJet) -> Result<JetScalar, Error> {
    if g.dim() != 2 {
        return Err(Error::NotDimensionTwo(g.dim()));
    }
    g.require_identity_frame()?;
    if g.order() < 2 {
        return Err(Error::OrderTooSmall {
            have: g.order(),
            need: 2,
        });
    }
    let n = 2;
    let order = g.order() - 2;
    let gamma = christoffel(g)?;
    let gm = |k: usize, i: usize, j: usize| &gamma[k][pair_index(n, i, j)];
    // R^l_{122} = d_1 G^l_{22} - d_2 G^l_{12} + G^l_{1m} G^m_{22} - G^l_{2m} G^m_{12}
    let mut lowered = JetScalar::zero(n, order);
    for l in 0..n {
        let mut r = gm(l, 1, 1)
            .partial(0)
            .sub(&gm(l, 0, 1).partial(1))?
            .truncated(order);
        for m in 0..n {
            let plus = gm(l, 0, m).truncated(order).mul(&gm(m, 1, 1).truncated(order))?;
            let minus = gm(l, 1, m).truncated(order).mul(&gm(m, 0, 1).truncated(order))?;
            r = r.add(&plus)?.sub(&minus)?;
        }
        lowered = lowered.add(&g.entry(0, l).truncated(order).mul(&r)?)?;
    }
    // Divide by det g = g11 g22 - g12^2 (constant term 1 in this frame).
    let det = g
        .entry(0, 0)
        .truncated(order)
        .mul(&g.entry(1, 1).truncated(order))?
        .sub(&g.entry(0, 1).truncated(order).mul(&g.entry(0, 1).truncated(order))?)?;
    lowered.mul(&det.recip_one_plus()?)
}

/// Curvature value, gradient and covariant Hessian at the base point.
///
/// Defined for normal-form surface jets of order at least 4; there the
/// Christoffel symbols vanish at the origin, so the covariant Hessian equals
/// the plain second-partials matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureData {
    pub k0: Rational,
    pub grad: [Rational; 2],
    pub hess: [[Rational; 2]; 2],
}

pub fn curvature_data(g: &MetricJet) -> Result<CurvatureData, Error> {
    if g.dim() != 2 {
        return Err(Error::NotDimensionTwo(g.dim()));
    }
    if g.order() < 4 {
        return Err(Error::OrderTooSmall {
            have: g.order(),
            need: 4,
        });
    }
    if !crate::normal_form::gauss_check(g)? {
        return Err(Error::NotNormalForm);
    }
    let k = gauss_curvature(g)?;
    Ok(curvature_point_data(&k))
}

/// Read point data off a curvature series: k0 always; the gradient needs
/// order >= 1 and the Hessian order >= 2, below which the corresponding
/// slots are simply zero — callers decide what is meaningful.
pub fn curvature_point_data(k: &JetScalar) -> CurvatureData {
    let two = Rational::from_integer(2.into());
    let cf = |a: u32, b: u32| k.coeff(&MultiIndex::new(vec![a, b]));
    CurvatureData {
        k0: k.constant_term(),
        grad: [cf(1, 0), cf(0, 1)],
        hess: [
            [&two * cf(2, 0), cf(1, 1)],
            [cf(1, 1), &two * cf(0, 2)],
        ],
    }
}

impl CurvatureData {
    pub fn zero() -> Self {
        let z = Rational::zero();
        CurvatureData {
            k0: z.clone(),
            grad: [z.clone(), z.clone()],
            hess: [[z.clone(), z.clone()], [z.clone(), z]],
        }
    }

    pub fn grad_norm_sq(&self) -> Rational {
        &self.grad[0] * &self.grad[0] + &self.grad[1] * &self.grad[1]
    }

    pub fn hess_trace(&self) -> Rational {
        &self.hess[0][0] + &self.hess[1][1]
    }

    pub fn hess_det(&self) -> Rational {
        &self.hess[0][0] * &self.hess[1][1] - &self.hess[0][1] * &self.hess[0][1]
    }

    /// The Hessian form evaluated on the gradient.
    pub fn hess_on_grad(&self) -> Rational {
        let hx = &self.hess[0][0] * &self.grad[0] + &self.hess[0][1] * &self.grad[1];
        let hy = &self.hess[0][1] * &self.grad[0] + &self.hess[1][1] * &self.grad[1];
        hx * &self.grad[0] + hy * &self.grad[1]
    }
}
