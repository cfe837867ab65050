//! Shared test support: an independent finite-difference curvature oracle.
//!
//! The oracle computes Gaussian curvature through the Brioschi formula with
//! all derivatives of the metric entries replaced by fourth-order central
//! finite differences, evaluated in exact rational arithmetic. It shares no
//! code with the Christoffel/Riemann pipeline it cross-checks: the only
//! inexactness is the stencil truncation error, O(step^4).

#![allow(dead_code)]

use jetmoduli::jet::JetScalar;
use jetmoduli::linalg::RatMat;
use jetmoduli::metric::MetricJet;
use jetmoduli::rational::{int, rat, Rational};
use num_traits::Zero;

fn eval_at(f: &JetScalar, at: &[Rational; 2], dx: &Rational, dy: &Rational) -> Rational {
    f.eval(&[&at[0] + dx, &at[1] + dy])
}

/// Fourth-order central first derivative along `axis`.
fn fd1(f: &JetScalar, at: &[Rational; 2], axis: usize, h: &Rational) -> Rational {
    let shift = |k: i64| -> Rational {
        let d = Rational::from_integer(k.into()) * h;
        if axis == 0 {
            eval_at(f, at, &d, &Rational::zero())
        } else {
            eval_at(f, at, &Rational::zero(), &d)
        }
    };
    (-shift(2) + int(8) * shift(1) - int(8) * shift(-1) + shift(-2)) / (int(12) * h)
}

/// Fourth-order central second derivative along one axis.
fn fd2_same(f: &JetScalar, at: &[Rational; 2], axis: usize, h: &Rational) -> Rational {
    let shift = |k: i64| -> Rational {
        let d = Rational::from_integer(k.into()) * h;
        if axis == 0 {
            eval_at(f, at, &d, &Rational::zero())
        } else {
            eval_at(f, at, &Rational::zero(), &d)
        }
    };
    (-shift(2) + int(16) * shift(1) - int(30) * shift(0) + int(16) * shift(-1) - shift(-2))
        / (int(12) * h * h)
}

/// Mixed second derivative: the x-stencil applied to y-stencil values.
fn fd2_mixed(f: &JetScalar, at: &[Rational; 2], h: &Rational) -> Rational {
    let dy_at = |k: i64| -> Rational {
        let shifted = [&at[0] + &(Rational::from_integer(k.into()) * h), at[1].clone()];
        fd1(f, &shifted, 1, h)
    };
    (-dy_at(2) + int(8) * dy_at(1) - int(8) * dy_at(-1) + dy_at(-2)) / (int(12) * h)
}

fn fd2(f: &JetScalar, at: &[Rational; 2], a1: usize, a2: usize, h: &Rational) -> Rational {
    if a1 == a2 {
        fd2_same(f, at, a1, h)
    } else {
        fd2_mixed(f, at, h)
    }
}

/// Gaussian curvature at a point by the Brioschi formula, with every
/// derivative taken by finite differences.
pub fn fd_gauss_curvature(g: &MetricJet, at: &[Rational; 2], h: &Rational) -> Rational {
    assert_eq!(g.dim(), 2, "the oracle covers surfaces only");
    let e = g.entry(0, 0);
    let f = g.entry(0, 1);
    let gg = g.entry(1, 1);
    let half = rat(1, 2);

    let e0 = eval_at(e, at, &Rational::zero(), &Rational::zero());
    let f0 = eval_at(f, at, &Rational::zero(), &Rational::zero());
    let g0 = eval_at(gg, at, &Rational::zero(), &Rational::zero());

    let e_x = fd1(e, at, 0, h);
    let e_y = fd1(e, at, 1, h);
    let g_x = fd1(gg, at, 0, h);
    let g_y = fd1(gg, at, 1, h);
    let f_x = fd1(f, at, 0, h);
    let f_y = fd1(f, at, 1, h);
    let e_yy = fd2(e, at, 1, 1, h);
    let g_xx = fd2(gg, at, 0, 0, h);
    let f_xy = fd2(f, at, 0, 1, h);

    let m1 = RatMat::from_rows(vec![
        vec![
            -&half * &e_yy + &f_xy - &half * &g_xx,
            &half * &e_x,
            &f_x - &half * &e_y,
        ],
        vec![&f_y - &half * &g_x, e0.clone(), f0.clone()],
        vec![&half * &g_y, f0.clone(), g0.clone()],
    ]);
    let m2 = RatMat::from_rows(vec![
        vec![Rational::zero(), &half * &e_y, &half * &g_x],
        vec![&half * &e_y, e0.clone(), f0.clone()],
        vec![&half * &g_x, f0.clone(), g0.clone()],
    ]);
    let det = &e0 * &g0 - &f0 * &f0;
    (m1.det() - m2.det()) / (&det * &det)
}

/// Gradient of the curvature at the origin, by the same stencil applied to
/// oracle curvature values.
pub fn fd_curvature_gradient(g: &MetricJet, h: &Rational) -> [Rational; 2] {
    let k_at = |dx: i64, dy: i64| -> Rational {
        let p = [
            Rational::from_integer(dx.into()) * h,
            Rational::from_integer(dy.into()) * h,
        ];
        fd_gauss_curvature(g, &p, h)
    };
    let gx = (-k_at(2, 0) + int(8) * k_at(1, 0) - int(8) * k_at(-1, 0) + k_at(-2, 0))
        / (int(12) * h);
    let gy = (-k_at(0, 2) + int(8) * k_at(0, 1) - int(8) * k_at(0, -1) + k_at(0, -2))
        / (int(12) * h);
    [gx, gy]
}

/// |a - b| <= bound, all exact.
pub fn within(a: &Rational, b: &Rational, bound: &Rational) -> bool {
    let diff = a - b;
    let diff = if diff < Rational::zero() { -diff } else { diff };
    diff <= *bound
}

/// 10^-k as an exact rational.
pub fn pow10_neg(k: u32) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(10u32).pow(k))
}
