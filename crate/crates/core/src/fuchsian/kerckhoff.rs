//! Minimization of `l_lambda + l_mu` over the Teichmüller space of the punctured torus.
//!
//! Points are parametrized by a global chart `(p, s)` of the Fricke surface
//! `x^2 + y^2 + z^2 = xyz` with `x = 2 + e^p`. For fixed `x` the remaining
//! coordinates lie on the hyperbola `u^2 (x/2 - 1) - w^2 (x/2 + 1) = x^2`,
//! where `y = (u + w) / sqrt 2` and `z = (u - w) / sqrt 2`, parametrized by
//! `u = x cosh s / sqrt(x/2 - 1)` and `w = x sinh s / sqrt(x/2 + 1)`.
//! The chart is a diffeomorphism onto the component with `x, y, z > 2`.

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use super::{
    axis, length_with_generators, normal_form_generators, FuchsianGroup, LeafSet, TeichPoint,
    WeightedMulticurve, Word,
};
use crate::error::{Error, Result};
use crate::geometry::{minkowski, radial_project};

/// Trace coordinates of a chart point.
pub fn teich_from_chart(p: f64, s: f64) -> TeichPoint {
    let x = 2.0 + p.exp();
    let u = x * s.cosh() / (x / 2.0 - 1.0).sqrt();
    let w = x * s.sinh() / (x / 2.0 + 1.0).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    TeichPoint {
        x,
        y: (u + w) * r,
        z: (u - w) * r,
    }
}

/// Chart coordinates of a point of Teichmüller space.
pub fn chart_from_teich(tp: &TeichPoint) -> Result<(f64, f64)> {
    let tp = TeichPoint::new(tp.x, tp.y, tp.z)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let w = (tp.y - tp.z) * r;
    let x = tp.x;
    Ok(((x - 2.0).ln(), (w * (x / 2.0 + 1.0).sqrt() / x).asinh()))
}

/// Settings of the minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerckhoffOptions {
    /// Iteration cap of the simplex phase.
    pub max_simplex_iterations: usize,
    /// Iteration cap of the Newton phase.
    pub max_newton_iterations: usize,
    /// Required norm of the chart gradient.
    pub gradient_tol: f64,
    /// Step of the central differences for the gradient.
    pub gradient_step: f64,
    /// Step of the central differences for the Hessian.
    pub hessian_step: f64,
}

impl Default for KerckhoffOptions {
    fn default() -> Self {
        Self {
            max_simplex_iterations: 2000,
            max_newton_iterations: 50,
            gradient_tol: 1e-7,
            gradient_step: 1e-5,
            hessian_step: 1e-4,
        }
    }
}

/// Result of [`kerckhoff_point`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KerckhoffResult {
    /// Minimizer.
    pub point: TeichPoint,
    /// Chart coordinates `(p, s)` of the minimizer.
    pub chart: [f64; 2],
    /// Value of `l_lambda + l_mu` at the minimizer.
    pub objective: f64,
    /// Norm of the central-difference chart gradient at the minimizer.
    pub gradient_norm: f64,
    /// Condition number of the chart Hessian.
    pub hessian_condition: f64,
    /// Iterations of the simplex phase.
    pub simplex_iterations: usize,
    /// Iterations of the Newton phase.
    pub newton_iterations: usize,
    /// Filling heuristic evaluated at the initial point.
    pub filling: FillingReport,
}

/// Outcome of the filling heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillingReport {
    /// Tested words with the number of lifts of `lambda + mu` crossing one period of their axis.
    pub tested: Vec<(Word, usize)>,
    /// Whether every tested curve is crossed.
    pub plausibly_filling: bool,
}

fn objective(p: f64, s: f64, lambda: &WeightedMulticurve, mu: &WeightedMulticurve) -> f64 {
    let tp = teich_from_chart(p, s);
    let (a, b) = normal_form_generators(&tp);
    length_with_generators(&a, &b, lambda) + length_with_generators(&a, &b, mu)
}

/// Filling heuristic: every short non-peripheral word must have a period of
/// its axis, pushed slightly off the axis, crossed by a lift of `lambda + mu`.
pub fn filling_report(
    gp: &FuchsianGroup,
    lambda: &WeightedMulticurve,
    mu: &WeightedMulticurve,
) -> Result<FillingReport> {
    let leaves = LeafSet::new_crossing(gp, &lambda.union(mu))?;
    let mut tested = Vec::new();
    for len in 1..=3 {
        for w in Word::all_of_length(len) {
            let l = w.letters();
            if l[0] == l[l.len() - 1].inverse() {
                continue;
            }
            let m = gp.eval_sl2(&w);
            let Ok(ax) = axis(&m) else { continue };
            if (m.trace().abs() - 2.0).abs() < 1e-9 {
                continue;
            }
            let p = ax.closest_point();
            let delta: f64 = 1e-3;
            let p = p * delta.cosh() + ax.normal() * delta.sinh();
            let q = gp.eval_lorentz(&w) * p;
            debug_assert!(minkowski(&p, &p) < 0.0);
            let n = leaves
                .crossings(&radial_project(&p), &radial_project(&q))?
                .len();
            tested.push((w, n));
        }
    }
    let plausibly_filling = tested.iter().all(|(_, n)| *n > 0);
    Ok(FillingReport {
        tested,
        plausibly_filling,
    })
}

/// Minimizer of `l_lambda + l_mu` started from `init`.
///
/// A Nelder-Mead search in the chart is followed by Newton steps with
/// central-difference derivatives until the gradient norm is below
/// `options.gradient_tol`.
pub fn kerckhoff_point(
    lambda: &WeightedMulticurve,
    mu: &WeightedMulticurve,
    init: &TeichPoint,
    options: &KerckhoffOptions,
) -> Result<KerckhoffResult> {
    let gp = FuchsianGroup::from_traces(init)?;
    let filling = filling_report(&gp, lambda, mu)?;
    if !filling.plausibly_filling {
        let missing: Vec<String> = filling
            .tested
            .iter()
            .filter(|(_, n)| *n == 0)
            .map(|(w, _)| w.to_string())
            .collect();
        return Err(Error::BadMulticurve(format!(
            "lambda + mu misses {}",
            missing.join(", ")
        )));
    }
    let f = |v: &Vector2<f64>| objective(v[0], v[1], lambda, mu);
    let (p0, s0) = chart_from_teich(init)?;
    let (mut v, simplex_iterations) = nelder_mead(
        &f,
        Vector2::new(p0, s0),
        0.3,
        options.max_simplex_iterations,
    );

    let mut newton_iterations = 0;
    let mut g = gradient(&f, &v, options.gradient_step);
    while g.norm() >= options.gradient_tol * 1e-2
        && newton_iterations < options.max_newton_iterations
    {
        let h = hessian(&f, &v, options.hessian_step);
        let step = match h.cholesky() {
            Some(c) => -c.solve(&g),
            None => -g * 1e-2,
        };
        let f0 = f(&v);
        let mut alpha = 1.0;
        while alpha > 1e-6 && f(&(v + step * alpha)) > f0 + 1e-15 * f0.abs() {
            alpha /= 2.0;
        }
        v += step * alpha;
        g = gradient(&f, &v, options.gradient_step);
        newton_iterations += 1;
        if alpha <= 1e-6 {
            break;
        }
    }
    let gradient_norm = g.norm();
    if !(gradient_norm < options.gradient_tol) {
        return Err(Error::NoConvergence(format!(
            "gradient norm {gradient_norm:.3e}"
        )));
    }
    let eig = SymmetricEigen::new(hessian(&f, &v, options.hessian_step)).eigenvalues;
    let (lo, hi) = (eig.min().abs(), eig.max().abs());
    let tp = teich_from_chart(v[0], v[1]);
    Ok(KerckhoffResult {
        point: TeichPoint::new(tp.x, tp.y, tp.z)?,
        chart: [v[0], v[1]],
        objective: f(&v),
        gradient_norm,
        hessian_condition: hi.max(lo) / hi.min(lo),
        simplex_iterations,
        newton_iterations,
        filling,
    })
}

/// Central-difference gradient.
pub(crate) fn gradient<F: Fn(&Vector2<f64>) -> f64>(
    f: &F,
    v: &Vector2<f64>,
    h: f64,
) -> Vector2<f64> {
    let mut g = Vector2::zeros();
    for i in 0..2 {
        let mut e = Vector2::zeros();
        e[i] = h;
        g[i] = (f(&(v + e)) - f(&(v - e))) / (2.0 * h);
    }
    g
}

fn hessian<F: Fn(&Vector2<f64>) -> f64>(f: &F, v: &Vector2<f64>, h: f64) -> Matrix2<f64> {
    let mut m = Matrix2::zeros();
    let e = [Vector2::new(h, 0.0), Vector2::new(0.0, h)];
    let f0 = f(v);
    for i in 0..2 {
        m[(i, i)] = (f(&(v + e[i])) - 2.0 * f0 + f(&(v - e[i]))) / (h * h);
    }
    let d = (f(&(v + e[0] + e[1])) - f(&(v + e[0] - e[1])) - f(&(v - e[0] + e[1]))
        + f(&(v - e[0] - e[1])))
        / (4.0 * h * h);
    m[(0, 1)] = d;
    m[(1, 0)] = d;
    m
}

/// Nelder-Mead simplex search in the plane with the standard coefficients.
fn nelder_mead<F: Fn(&Vector2<f64>) -> f64>(
    f: &F,
    x0: Vector2<f64>,
    step: f64,
    max_iter: usize,
) -> (Vector2<f64>, usize) {
    let mut pts = [
        x0,
        x0 + Vector2::new(step, 0.0),
        x0 + Vector2::new(0.0, step),
    ];
    let mut vals = pts.map(|p| f(&p));
    for it in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);
        let size = (pts[1] - pts[0]).norm().max((pts[2] - pts[0]).norm());
        if size < 1e-10 || (vals[2] - vals[0]).abs() < 1e-15 * (1.0 + vals[0].abs()) {
            return (pts[0], it);
        }
        let c = (pts[0] + pts[1]) / 2.0;
        let xr = c + (c - pts[2]);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = c + (c - pts[2]) * 2.0;
            let fe = f(&xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let xc = c + (xr - c) * 0.5;
                (xc, f(&xc))
            } else {
                let xc = c + (pts[2] - c) * 0.5;
                (xc, f(&xc))
            };
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    pts[i] = pts[0] + (pts[i] - pts[0]) * 0.5;
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    (pts[best], max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn chart_roundtrip() {
        for (p, s) in [(0.0, 0.0), (1.3, -0.7), (-2.0, 2.5)] {
            let tp = teich_from_chart(p, s);
            assert!(tp.fricke_defect().abs() < 1e-9 * tp.x * tp.y * tp.z);
            let (p2, s2) = chart_from_teich(&tp).unwrap();
            assert_abs_diff_eq!(p, p2, epsilon = 1e-10);
            assert_abs_diff_eq!(s, s2, epsilon = 1e-10);
        }
    }

    #[test]
    fn square_torus_is_the_symmetric_minimizer() {
        let lambda = WeightedMulticurve::single("A", 1.0).unwrap();
        let mu = WeightedMulticurve::single("B", 1.0).unwrap();
        let r = kerckhoff_point(
            &lambda,
            &mu,
            &TeichPoint::new(3.0, 3.0, 3.0).unwrap(),
            &KerckhoffOptions::default(),
        )
        .unwrap();
        let root8 = 8f64.sqrt();
        assert_abs_diff_eq!(r.point.x, root8, epsilon = 1e-7);
        assert_abs_diff_eq!(r.point.y, root8, epsilon = 1e-7);
        assert_abs_diff_eq!(r.point.z, 4.0, epsilon = 1e-7);
    }
}
