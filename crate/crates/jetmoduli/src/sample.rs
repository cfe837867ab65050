//! Seeded, reproducible sampling of jets.
//!
//! Used by the property/acceptance suites and by the CLI's `make --preset
//! random --seed N`. The generator is pinned (ChaCha8) so a seed means the
//! same object everywhere, independent of platform or crate updates.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::jet::{DiffeoJet, JetScalar, MultiIndex};
use crate::linalg::RatMat;
use crate::metric::{pair_count, MetricJet};
use crate::normal_form::HPoly;
use crate::rational::{int, rat, Rational};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational: numerator in [-3, 3], denominator in {1, 2, 3}.
pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=3);
    rat(num, den)
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = rational(rng);
        if r != int(0) {
            return r;
        }
    }
}

/// Sparse random series: each monomial with degree in `degrees` is present
/// with probability ~1/2.
pub fn jet_scalar(
    rng: &mut ChaCha8Rng,
    dim: usize,
    order: u32,
    degrees: std::ops::RangeInclusive<u32>,
) -> JetScalar {
    let mut out = JetScalar::zero(dim, order);
    for idx in monomials(dim, order) {
        if degrees.contains(&idx.degree()) && rng.gen_bool(0.5) {
            let c = rational(rng);
            if c != int(0) {
                out = out
                    .add(&JetScalar::from_coeffs(dim, order, vec![(idx.clone(), c)]).unwrap())
                    .unwrap();
            }
        }
    }
    out
}

fn monomials(dim: usize, order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    fn rec(axis: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if axis == current.len() {
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        for e in 0..=remaining {
            current[axis] = e;
            rec(axis + 1, remaining - e, current, out);
        }
        current[axis] = 0;
    }
    rec(0, order, &mut current, &mut out);
    out
}

/// Random metric jet with identity constant term and random coefficients in
/// degrees 1..=r (not normal-form in general).
pub fn metric_jet(rng: &mut ChaCha8Rng, dim: usize, order: u32) -> MetricJet {
    loop {
        let entries: Vec<JetScalar> = (0..pair_count(dim))
            .map(|_| jet_scalar(rng, dim, order, 1..=order))
            .collect();
        let flat = MetricJet::flat(dim, order);
        let entries: Vec<JetScalar> = entries
            .iter()
            .zip(flat.entries())
            .map(|(e, f)| e.add(f).unwrap())
            .collect();
        if let Ok(g) = MetricJet::new(dim, order, entries) {
            return g;
        }
    }
}

/// Random h-jet (two variables, all degrees allowed).
pub fn hpoly(rng: &mut ChaCha8Rng, order: u32) -> HPoly {
    HPoly::new(jet_scalar(rng, 2, order, 0..=order)).expect("dimension 2")
}

/// Random normal-form metric jet, through a random h.
pub fn normal_metric_2d(rng: &mut ChaCha8Rng, order: u32) -> MetricJet {
    crate::normal_form::metric_from_h(&hpoly(rng, order.saturating_sub(2)), order)
}

/// A rational rotation from a random Pythagorean pair:
/// cos = (a^2 - b^2)/(a^2 + b^2), sin = 2ab/(a^2 + b^2).
pub fn pythagorean_rotation(rng: &mut ChaCha8Rng) -> RatMat {
    let a = rng.gen_range(1i64..=5);
    let b = rng.gen_range(0i64..=5);
    let den = a * a + b * b;
    let c = rat(a * a - b * b, den);
    let s = rat(2 * a * b, den);
    RatMat::from_rows(vec![vec![c.clone(), s.clone()], vec![-s, c]])
}

/// Random exactly-orthogonal rational matrix: a product of Pythagorean plane
/// rotations, axis sign flips and a coordinate permutation.
pub fn orthogonal_matrix(rng: &mut ChaCha8Rng, dim: usize) -> RatMat {
    let mut m = RatMat::identity(dim);
    // Permutation.
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut p = RatMat::zeros(dim, dim);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, int(1));
    }
    m = m.mul(&p);
    // Sign flips.
    let mut signs = RatMat::identity(dim);
    for i in 0..dim {
        if rng.gen_bool(0.5) {
            signs.set(i, i, int(-1));
        }
    }
    m = m.mul(&signs);
    // Plane rotations.
    for i in 0..dim {
        for j in i + 1..dim {
            if rng.gen_bool(0.7) {
                let rot2 = pythagorean_rotation(rng);
                let mut plane = RatMat::identity(dim);
                plane.set(i, i, rot2.get(0, 0).clone());
                plane.set(i, j, rot2.get(0, 1).clone());
                plane.set(j, i, rot2.get(1, 0).clone());
                plane.set(j, j, rot2.get(1, 1).clone());
                m = m.mul(&plane);
            }
        }
    }
    m
}

/// Random origin-fixing diffeomorphism jet whose linear part is exactly
/// orthogonal (so pullbacks keep the identity frame), with random terms in
/// degrees 2..=order.
pub fn diffeo_orthogonal(rng: &mut ChaCha8Rng, dim: usize, order: u32) -> DiffeoJet {
    let linear = orthogonal_matrix(rng, dim);
    diffeo_with_linear(rng, linear, order)
}

/// Random origin-fixing diffeomorphism jet with an arbitrary invertible
/// rational linear part.
pub fn diffeo_general(rng: &mut ChaCha8Rng, dim: usize, order: u32) -> DiffeoJet {
    let linear = loop {
        let mut a = RatMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                a.set(i, j, rational(rng));
            }
        }
        if !a.det().is_zero() {
            break a;
        }
    };
    diffeo_with_linear(rng, linear, order)
}

fn diffeo_with_linear(rng: &mut ChaCha8Rng, linear: RatMat, order: u32) -> DiffeoJet {
    let dim = linear.rows();
    let base = DiffeoJet::from_linear(&linear, order).expect("invertible by construction");
    if order < 2 {
        return base;
    }
    let components: Vec<JetScalar> = base
        .components()
        .iter()
        .map(|c| c.add(&jet_scalar(rng, dim, order, 2..=order)).unwrap())
        .collect();
    DiffeoJet::new(components).expect("higher-order terms keep the linear part")
}

/// A metric jet guaranteed to have nonzero coefficients somewhere (useful
/// when a test needs a non-flat sample).
pub fn nonflat_metric_jet(rng: &mut ChaCha8Rng, dim: usize, order: u32) -> MetricJet {
    loop {
        let g = metric_jet(rng, dim, order);
        if g != MetricJet::flat(dim, order) {
            return g;
        }
    }
}

/// Random unit Gauss rational from a Pythagorean triple (used by tests that
/// need exact points on the circle).
pub fn unit_gauss_rational(rng: &mut ChaCha8Rng) -> crate::strata2d::GaussRational {
    let rot = pythagorean_rotation(rng);
    crate::strata2d::GaussRational::new(rot.get(0, 0).clone(), rot.get(1, 0).clone())
}

/// Expose the nonzero helper for tests that need a guaranteed-nonzero value.
pub fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    nonzero_rational(rng)
}
