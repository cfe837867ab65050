//! Reduction of metric jets to Gauss-Lemma normal form and what falls out of
//! it: normal tensors, the two-dimensional h-representation, and the
//! dimension counts for normal-tensor spaces and moduli spaces.
//!
//! The normalizing diffeomorphism is the jet of the exponential map, obtained
//! by solving the geodesic equation `z'' + Gamma(z)(z', z') = 0` formally,
//! degree by degree. Its pullback satisfies the Gauss identity
//! `sum_j g_ij z_j = z_i`, which is the testable postcondition.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::jet::{DiffeoJet, JetScalar, MultiIndex, PowerCache};
use crate::linalg::RatMat;
use crate::metric::{christoffel, pair_index, pullback, MetricJet};
use crate::rational::{binomial, Rational};

/// Jet of `v -> exp_g(v)` to order `r + 1`, for a metric jet with `g(0) = I`.
///
/// Solving the geodesic equation with `z(0) = 0`, `z'(0) = v` as a power
/// series in the flow time couples the time grading to the degree in `v`
/// (geodesics scale), so the unknown of degree `d` satisfies
/// `d (d - 1) w_d = -[degree-d part] of Gamma(W)(E W, E W)`,
/// where `E` is the Euler degree-scaling operator and the right-hand side
/// only involves parts of `W` below degree `d`.
pub fn exp_map_jet(g: &MetricJet) -> Result<DiffeoJet, Error> {
    g.require_identity_frame()?;
    let n = g.dim();
    let target = g.order() + 1;
    if g.order() == 0 {
        return Ok(DiffeoJet::identity(n, target));
    }
    let gamma = christoffel(g)?; // order r - 1
    let mut w = DiffeoJet::identity(n, target);
    for d in 2..=target {
        // Everything below is read modulo degree d, so truncate the state.
        let w_trunc = w.truncated(d);
        let mut cache = PowerCache::new(&w_trunc, d);
        let velocities: Vec<JetScalar> = (0..n)
            .map(|i| w_trunc.component(i).euler_scaled())
            .collect();
        let scale = -Rational::new(1.into(), (u64::from(d) * u64::from(d - 1)).into());
        let mut components = Vec::with_capacity(n);
        for k in 0..n {
            let mut q = JetScalar::zero(n, d);
            for i in 0..n {
                for j in 0..n {
                    // The degree-d part of the product only sees Gamma(W) up
                    // to degree d - 2 (both velocity factors have degree
                    // >= 1), so the order bound may be raised after the
                    // substitution.
                    let coeff = gamma[k][pair_index(n, i, j)]
                        .truncated(d.saturating_sub(2))
                        .substitute_with(&mut cache)
                        .assume_order(d);
                    let term = coeff.mul(&velocities[i])?.mul(&velocities[j])?;
                    q = q.add(&term)?;
                }
            }
            let correction = q.homogeneous_part(d).scale(&scale);
            let mut comp = w.component(k).clone();
            for (idx, c) in correction.terms() {
                let v = comp.coeff(idx) + c;
                comp.set_coeff(idx.clone(), v);
            }
            components.push(comp);
        }
        w = DiffeoJet::new(components)?;
    }
    Ok(w)
}

/// Pull the metric back along its own exponential jet; the result satisfies
/// [`gauss_check`] and generates the same orbit under the orthogonal group.
pub fn normalize(g: &MetricJet) -> Result<MetricJet, Error> {
    g.require_identity_frame()?;
    if g.order() == 0 {
        return Ok(g.clone());
    }
    let tau = exp_map_jet(g)?;
    pullback(&tau, g)
}

/// The Gauss Lemma identity: `sum_j g_ij z_j = z_i` as jets of order `r + 1`
/// (the products are fully determined by the order-`r` data of `g`).
pub fn gauss_check(g: &MetricJet) -> Result<bool, Error> {
    g.require_identity_frame()?;
    let n = g.dim();
    let target = g.order() + 1;
    for i in 0..n {
        let mut lhs = JetScalar::zero(n, target);
        for j in 0..n {
            let zj = JetScalar::variable(n, target, j)?;
            lhs = lhs.add(&g.entry(i, j).assume_order(target).mul(&zj)?)?;
        }
        if lhs != JetScalar::variable(n, target, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order-`s` normal tensor: the s-th partials `g_{ij,k_1..k_s}` of a
/// normal-form metric at the base point. Stored canonically with `i <= j`
/// and the trailing indices sorted; the remaining constraint (vanishing
/// cyclic sum over the last `s + 1` indices) is validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalTensor {
    dim: usize,
    tensor_order: u32,
    components: BTreeMap<(usize, usize, Vec<usize>), Rational>,
}

impl NormalTensor {
    pub fn new(
        dim: usize,
        tensor_order: u32,
        components: BTreeMap<(usize, usize, Vec<usize>), Rational>,
    ) -> Result<Self, Error> {
        for (i, j, ks) in components.keys() {
            if *i > *j || ks.len() != tensor_order as usize || ks.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::TensorSymmetry(format!(
                    "component key ({i},{j},{ks:?}) is not canonical"
                )));
            }
            if *j >= dim || ks.iter().any(|&k| k >= dim) {
                return Err(Error::TensorSymmetry(format!(
                    "component key ({i},{j},{ks:?}) out of range for dimension {dim}"
                )));
            }
        }
        let t = NormalTensor {
            dim,
            tensor_order,
            components,
        };
        t.check_cyclic_sums()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor_order(&self) -> u32 {
        self.tensor_order
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Component with arbitrary index order in both symmetric groups.
    pub fn get(&self, i: usize, j: usize, ks: &[usize]) -> Rational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let mut ks = ks.to_vec();
        ks.sort_unstable();
        self.components
            .get(&(i, j, ks))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Canonical nonzero components.
    pub fn components(&self) -> impl Iterator<Item = (&(usize, usize, Vec<usize>), &Rational)> {
        self.components.iter()
    }

    /// The cyclic sum over the last `s + 1` indices must vanish:
    /// `T_{i j k_1..k_s} + T_{i k_s j k_1..k_{s-1}} + ... + T_{i k_1..k_s j} = 0`.
    fn check_cyclic_sums(&self) -> Result<(), Error> {
        let s = self.tensor_order as usize;
        for i in 0..self.dim {
            for tail in sorted_tuples(self.dim, s + 1) {
                let mut acc = Rational::zero();
                for t in 0..=s {
                    let j = tail[t];
                    let rest: Vec<usize> = tail
                        .iter()
                        .enumerate()
                        .filter(|(pos, _)| *pos != t)
                        .map(|(_, &k)| k)
                        .collect();
                    acc += self.get(i, j, &rest);
                }
                if !acc.is_zero() {
                    return Err(Error::TensorSymmetry(format!(
                        "cyclic sum over (i={i}, {tail:?}) is {acc}, not zero"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All sorted `len`-tuples over `0..dim` (multisets in canonical order).
fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(dim: usize, len: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for k in start..dim {
            current.push(k);
            rec(dim, len, k, current, out);
            current.pop();
        }
    }
    rec(dim, len, 0, &mut current, &mut out);
    out
}

/// Normal tensors `g^s` for `s = 2..=r` of a normal-form metric jet.
///
/// The stored components are the actual partial derivatives, i.e. the jet
/// coefficients multiplied by the multi-index factorial; the first-order
/// tensor is checked to vanish, as it must.
pub fn normal_tensors(g: &MetricJet) -> Result<Vec<NormalTensor>, Error> {
    if !gauss_check(g)? {
        return Err(Error::NotNormalForm);
    }
    let n = g.dim();
    // Degree-1 coefficients of a normal form always vanish.
    for i in 0..n {
        for j in i..n {
            if !g.entry(i, j).homogeneous_part(1).is_zero() {
                return Err(Error::TensorSymmetry(
                    "first-order normal tensor does not vanish".into(),
                ));
            }
        }
    }
    let mut tensors = Vec::new();
    for s in 2..=g.order() {
        let mut components = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                for (idx, c) in g.entry(i, j).terms() {
                    if idx.degree() != s {
                        continue;
                    }
                    let mut ks = Vec::with_capacity(s as usize);
                    for (axis, &e) in idx.exponents().iter().enumerate() {
                        for _ in 0..e {
                            ks.push(axis);
                        }
                    }
                    components.insert((i, j, ks), c * idx.factorial());
                }
            }
        }
        tensors.push(NormalTensor::new(n, s, components)?);
    }
    Ok(tensors)
}

/// Rebuild the normal-form metric jet from its normal tensors (the inverse
/// of [`normal_tensors`]).
pub fn metric_from_normal_tensors(
    dim: usize,
    order: u32,
    tensors: &[NormalTensor],
) -> Result<MetricJet, Error> {
    let mut entries: Vec<JetScalar> = MetricJet::flat(dim, order).entries().to_vec();
    for t in tensors {
        if t.dim() != dim {
            return Err(Error::DimMismatch(t.dim(), dim));
        }
        for ((i, j, ks), value) in t.components() {
            let mut exponents = vec![0u32; dim];
            for &k in ks {
                exponents[k] += 1;
            }
            let idx = MultiIndex::new(exponents);
            if idx.degree() > order {
                return Err(Error::DegreeAboveOrder {
                    index: idx.to_string(),
                    degree: idx.degree(),
                    order,
                });
            }
            let coeff = value / idx.factorial();
            let slot = &mut entries[pair_index(dim, *i, *j)];
            let v = slot.coeff(&idx) + coeff;
            slot.set_coeff(idx, v);
        }
    }
    MetricJet::new(dim, order, entries)
}

/// The residual datum of a two-dimensional normal form:
/// `g = dx^2 + dy^2 + h(x,y) (y dx - x dy)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPoly {
    series: JetScalar,
}

impl HPoly {
    pub fn new(series: JetScalar) -> Result<Self, Error> {
        if series.dim() != 2 {
            return Err(Error::NotDimensionTwo(series.dim()));
        }
        Ok(HPoly { series })
    }

    pub fn zero(order: u32) -> Self {
        HPoly {
            series: JetScalar::zero(2, order),
        }
    }

    pub fn constant(c: Rational, order: u32) -> Self {
        HPoly {
            series: JetScalar::constant(2, order, c),
        }
    }

    pub fn series(&self) -> &JetScalar {
        &self.series
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }
}

/// `g_11 = 1 + h y^2`, `g_12 = -h x y`, `g_22 = 1 + h x^2`, truncated to
/// order `r`. Any part of `h` beyond degree `r - 2` is discarded by the
/// truncation, so low orders degenerate gracefully to the flat jet.
pub fn metric_from_h(h: &HPoly, r: u32) -> MetricJet {
    let one = JetScalar::one(2, r);
    let hs = h.series().assume_order(r.max(h.order()));
    let x = JetScalar::variable(2, r.max(1), 0).unwrap_or_else(|_| JetScalar::zero(2, r));
    let y = JetScalar::variable(2, r.max(1), 1).unwrap_or_else(|_| JetScalar::zero(2, r));
    let hx = hs.truncated(r).mul(&x.truncated(r)).unwrap();
    let hy = hs.truncated(r).mul(&y.truncated(r)).unwrap();
    let g11 = one.add(&hy.mul(&y.truncated(r)).unwrap()).unwrap();
    let g12 = hx.mul(&y.truncated(r)).unwrap().neg();
    let g22 = one.add(&hx.mul(&x.truncated(r)).unwrap()).unwrap();
    MetricJet::new(2, r, vec![g11, g12, g22]).expect("h-form metrics are positive definite at 0")
}

/// Solve the h-representation for a normal-form surface jet, validating all
/// three coefficient identities.
pub fn extract_h(g: &MetricJet) -> Result<HPoly, Error> {
    if g.dim() != 2 {
        return Err(Error::NotDimensionTwo(g.dim()));
    }
    if !gauss_check(g)? {
        return Err(Error::HFormInconsistent(
            "input fails the Gauss identity".into(),
        ));
    }
    let r = g.order();
    let h_order = r.saturating_sub(2);
    let mut h = JetScalar::zero(2, h_order);
    // g_22 - 1 = h x^2 determines every coefficient of h.
    let one = JetScalar::one(2, r);
    let g22_minus = g.entry(1, 1).sub(&one)?;
    for (idx, c) in g22_minus.terms() {
        let a = idx.exponent(0);
        let b = idx.exponent(1);
        if a < 2 {
            return Err(Error::HFormInconsistent(format!(
                "g_22 has a term {idx} not divisible by x^2"
            )));
        }
        h.set_coeff(MultiIndex::new(vec![a - 2, b]), c.clone());
    }
    let candidate = HPoly { series: h };
    if &metric_from_h(&candidate, r) != g {
        return Err(Error::HFormInconsistent(
            "coefficient identities for g_11 / g_12 fail".into(),
        ));
    }
    Ok(candidate)
}

/// Dimension of the space of order-`s` normal tensors in dimension `n`,
/// by the closed formula `C(n+1,2) C(n+s-1,s) - n C(n+s,s+1)`.
pub fn dim_normal(n: u32, s: u32) -> u64 {
    assert!(n >= 1 && s >= 1, "dim_normal needs n >= 1, s >= 1");
    let n64 = u64::from(n);
    let s64 = u64::from(s);
    let value = binomial(n64 + 1, 2) * binomial(n64 + s64 - 1, s64)
        - num_bigint::BigInt::from(n64) * binomial(n64 + s64, s64 + 1);
    value.to_u64().expect("dimension fits in u64")
}

/// The same count, from the constraints themselves: variables are the
/// canonically stored components (the two symmetry families), rows are the
/// cyclic sums, and the answer is the kernel dimension of the system,
/// computed by exact elimination.
pub fn dim_normal_bruteforce(n: u32, s: u32) -> u64 {
    assert!(n >= 1 && s >= 1);
    let n = n as usize;
    let s = s as usize;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let tails = sorted_tuples(n, s);
    let var_index = |i: usize, j: usize, ks: &[usize]| -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let p = pair_index(n, i, j);
        let t = tails.binary_search(&ks.to_vec()).expect("sorted tail");
        p * tails.len() + t
    };
    let nvars = pairs.len() * tails.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        for tail in sorted_tuples(n, s + 1) {
            let mut row = vec![Rational::zero(); nvars];
            for t in 0..=s {
                let j = tail[t];
                let mut rest: Vec<usize> = tail
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| *pos != t)
                    .map(|(_, &k)| k)
                    .collect();
                rest.sort_unstable();
                row[var_index(i, j, &rest)] += Rational::one();
            }
            rows.push(row);
        }
    }
    let rank = RatMat::from_rows(rows).rank();
    (nvars - rank) as u64
}

/// Dimension of the moduli space of `r`-jets in dimension `n`, by the
/// piecewise closed formulas.
pub fn dim_moduli(n: u32, r: u32) -> u64 {
    if r <= 1 || n == 1 {
        return 0;
    }
    match n {
        2 if r == 2 => 1,
        2 => (u64::from(r) + 1) * (u64::from(r) - 2) / 2,
        _ => {
            // n + ((r-1)n^2 - (r+1)n) / (2(r+1)) * C(n+r, r), exact.
            let n_i = i64::from(n);
            let r_i = i64::from(r);
            let num = Rational::new(
                ((r_i - 1) * n_i * n_i - (r_i + 1) * n_i).into(),
                (2 * (r_i + 1)).into(),
            );
            let total = Rational::from_integer(n_i.into())
                + num * Rational::from_integer(binomial((n_i + r_i) as u64, r_i as u64));
            assert!(total.is_integer(), "moduli dimension formula is integral");
            assert!(!total.is_negative());
            total.to_integer().to_u64().expect("dimension fits in u64")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn metric_1d(coeffs: Vec<(u32, Rational)>, order: u32) -> MetricJet {
        let entry = JetScalar::from_coeffs(
            1,
            order,
            coeffs
                .into_iter()
                .map(|(e, c)| (MultiIndex::new(vec![e]), c)),
        )
        .unwrap();
        MetricJet::new(1, order, vec![entry]).unwrap()
    }

    fn g_one_plus_2x(order: u32) -> MetricJet {
        metric_1d(vec![(0, int(1)), (1, int(2))], order)
    }

    #[test]
    fn exp_of_flat_is_identity() {
        for n in 1..=3 {
            let e = exp_map_jet(&MetricJet::flat(n, 4)).unwrap();
            assert_eq!(e, DiffeoJet::identity(n, 5));
        }
    }

    #[test]
    fn exp_in_one_dimension_matches_hand_recursion() {
        // g = (1 + 2x) dx^2: exp(v) = v - v^2/2 + (2/3) v^3 - ...
        let e = exp_map_jet(&g_one_plus_2x(2)).unwrap();
        let c = e.component(0);
        assert_eq!(c.coeff(&MultiIndex::new(vec![1])), int(1));
        assert_eq!(c.coeff(&MultiIndex::new(vec![2])), rat(-1, 2));
        assert_eq!(c.coeff(&MultiIndex::new(vec![3])), rat(2, 3));
    }

    #[test]
    fn exp_degree_two_term_is_half_christoffel() {
        // The first recursion step gives w_2 = -1/2 Gamma(0)(v, v).
        let h = HPoly::new(
            JetScalar::from_coeffs(
                2,
                1,
                vec![
                    (MultiIndex::new(vec![1, 0]), int(2)),
                    (MultiIndex::new(vec![0, 1]), rat(-3, 5)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        // Not a normal-form input: perturb with a plain quadratic entry.
        let mut entries = metric_from_h(&h, 3).entries().to_vec();
        entries[0] = entries[0]
            .add(&JetScalar::from_coeffs(2, 3, vec![(MultiIndex::new(vec![1, 0]), rat(1, 2))]).unwrap())
            .unwrap();
        let g = MetricJet::new(2, 3, entries).unwrap();
        let gamma = christoffel(&g).unwrap();
        let e = exp_map_jet(&g).unwrap();
        for k in 0..2 {
            for (i, j, idx) in [
                (0usize, 0usize, MultiIndex::new(vec![2, 0])),
                (0, 1, MultiIndex::new(vec![1, 1])),
                (1, 1, MultiIndex::new(vec![0, 2])),
            ] {
                let gamma0 = gamma[k][pair_index(2, i, j)].constant_term();
                let factor = if i == j { rat(-1, 2) } else { int(-1) };
                assert_eq!(
                    e.component(k).coeff(&idx),
                    factor * gamma0,
                    "k={k} i={i} j={j}"
                );
            }
        }
    }

    #[test]
    fn normalize_one_dimensional_jets_to_flat() {
        for r in 1..=5 {
            let g = g_one_plus_2x(r);
            let normal = normalize(&g).unwrap();
            assert_eq!(normal, MetricJet::flat(1, r), "order {r}");
        }
    }

    #[test]
    fn normalize_is_idempotent_on_normal_forms() {
        let h = HPoly::new(
            JetScalar::from_coeffs(
                2,
                2,
                vec![
                    (MultiIndex::new(vec![0, 0]), rat(1, 3)),
                    (MultiIndex::new(vec![1, 1]), int(2)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let g = metric_from_h(&h, 4);
        assert_eq!(exp_map_jet(&g).unwrap(), DiffeoJet::identity(2, 5));
        assert_eq!(normalize(&g).unwrap(), g);
    }

    #[test]
    fn gauss_check_examples() {
        assert!(gauss_check(&MetricJet::flat(3, 4)).unwrap());
        // (1 + x) dx^2 fails: (1 + x) x != x.
        let g = metric_1d(vec![(0, int(1)), (1, int(1))], 2);
        assert!(!gauss_check(&g).unwrap());
        let h = HPoly::constant(rat(-1, 3), 3);
        assert!(gauss_check(&metric_from_h(&h, 5)).unwrap());
    }

    #[test]
    fn normal_tensors_of_flat_vanish() {
        let tensors = normal_tensors(&MetricJet::flat(2, 5)).unwrap();
        assert_eq!(tensors.len(), 4);
        assert!(tensors.iter().all(NormalTensor::is_zero));
    }

    #[test]
    fn normal_tensor_components_for_h_equals_x() {
        // h = x gives g_11 = 1 + x y^2, g_12 = -x^2 y, g_22 = 1 + x^3.
        let h = HPoly::new(JetScalar::variable(2, 1, 0).unwrap()).unwrap();
        let g = metric_from_h(&h, 3);
        let tensors = normal_tensors(&g).unwrap();
        let t3 = &tensors[1];
        assert_eq!(t3.tensor_order(), 3);
        assert_eq!(t3.get(0, 0, &[0, 1, 1]), int(2));
        assert_eq!(t3.get(1, 1, &[0, 0, 0]), int(6));
        assert_eq!(t3.get(0, 1, &[0, 0, 1]), int(-2));
        // Order 2 is empty for this h.
        assert!(tensors[0].is_zero());
    }

    #[test]
    fn normal_tensor_round_trip() {
        let h = HPoly::new(
            JetScalar::from_coeffs(
                2,
                3,
                vec![
                    (MultiIndex::new(vec![0, 0]), rat(-1, 3)),
                    (MultiIndex::new(vec![1, 0]), int(1)),
                    (MultiIndex::new(vec![2, 1]), rat(2, 7)),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let g = metric_from_h(&h, 5);
        let tensors = normal_tensors(&g).unwrap();
        let rebuilt = metric_from_normal_tensors(2, 5, &tensors).unwrap();
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn non_normal_input_is_rejected() {
        let g = metric_1d(vec![(0, int(1)), (1, int(1))], 2);
        assert_eq!(normal_tensors(&g).unwrap_err(), Error::NotNormalForm);
    }

    #[test]
    fn h_form_round_trips() {
        // h = 0 <-> flat.
        let flat = MetricJet::flat(2, 4);
        assert!(extract_h(&flat).unwrap().is_zero());
        assert_eq!(metric_from_h(&HPoly::zero(2), 4), flat);
        // h = -1/3 writes the spec'd entries.
        let h = HPoly::constant(rat(-1, 3), 0);
        let g = metric_from_h(&h, 2);
        assert_eq!(g.entry(0, 0).coeff(&MultiIndex::new(vec![0, 2])), rat(-1, 3));
        assert_eq!(g.entry(0, 1).coeff(&MultiIndex::new(vec![1, 1])), rat(1, 3));
        assert_eq!(g.entry(1, 1).coeff(&MultiIndex::new(vec![2, 0])), rat(-1, 3));
        // p_3 round-trips through order 5.
        let p3 = crate::strata2d::invariant_polynomial(3, false, 3).unwrap();
        let g = metric_from_h(&p3, 5);
        assert_eq!(extract_h(&g).unwrap(), p3);
    }

    #[test]
    fn extract_h_flags_non_h_metrics() {
        // Normal in the Gauss sense is required first.
        let g = metric_1d(vec![(0, int(1)), (1, int(2))], 3);
        assert!(matches!(extract_h(&g), Err(Error::NotDimensionTwo(1))));
        let mut entries = MetricJet::flat(2, 4).entries().to_vec();
        entries[0] = entries[0]
            .add(&JetScalar::from_coeffs(2, 4, vec![(MultiIndex::new(vec![2, 0]), int(1))]).unwrap())
            .unwrap();
        let g = MetricJet::new(2, 4, entries).unwrap();
        assert!(matches!(extract_h(&g), Err(Error::HFormInconsistent(_))));
    }

    #[test]
    fn dim_normal_formula_values() {
        assert_eq!(dim_normal(2, 1), 0);
        assert_eq!(dim_normal(2, 2), 1);
        for s in 2..=8 {
            assert_eq!(dim_normal(2, s), u64::from(s) - 1);
        }
        assert_eq!(dim_normal(3, 2), 6);
    }

    #[test]
    fn dim_normal_bruteforce_matches_formula_small() {
        for n in 1..=3 {
            for s in 1..=4 {
                assert_eq!(
                    dim_normal_bruteforce(n, s),
                    dim_normal(n, s),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn dim_moduli_values() {
        assert_eq!(dim_moduli(2, 2), 1);
        assert_eq!(dim_moduli(1, 7), 0);
        assert_eq!(dim_moduli(2, 5), 9);
        assert_eq!(dim_moduli(5, 0), 0);
        assert_eq!(dim_moduli(4, 1), 0);
        // n >= 3 general formula agrees with the quotient count
        // sum_s dim N_s - dim O(n) (the generic stabilizer is trivial).
        assert_eq!(dim_moduli(3, 2), 6 - 3);
        assert_eq!(dim_moduli(4, 2), dim_normal(4, 2) - 6);
        assert_eq!(dim_moduli(3, 3), dim_normal(3, 2) + dim_normal(3, 3) - 3);
        assert_eq!(dim_moduli(3, 3), 18);
    }

    #[test]
    fn moduli_dimension_matches_h_space_count() {
        for r in 3..=10 {
            let sum: u64 = (2..=r).map(|s| dim_normal(2, s)).sum();
            assert_eq!(sum, u64::from(r) * (u64::from(r) - 1) / 2);
            assert_eq!(dim_moduli(2, r), sum - 1);
        }
    }
}
