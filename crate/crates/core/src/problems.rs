//! Built-in analytic test corpus with exact gradients, a parameterized
//! quadratic generator, and a finite-difference gradient auditor.
//!
//! All randomness comes from an explicit SplitMix64 generator so identical
//! seeds give bitwise-identical problem instances on every platform.
//!
//! Corpus members and their conventional start points:
//! - seeded SPD quadratics `quad_n{n}_k{kappa}` (n in {2,20,100,1000},
//!   kappa in {1e1,1e3,1e5}), f = x^T A x / 2 + b^T x with A = Q D Q^T,
//!   eigenvalues log-uniform in [1, kappa] with the extremes pinned, and b
//!   chosen so the minimizer is a seeded random point; x0 = 0.
//! - extended Rosenbrock `rosenbrock_{n}` (n in {2,100,1000}),
//!   x0 = (-1.2, 1, ...).
//! - extended Powell singular `powell_{n}` (n in {20,100}),
//!   x0 = (3, -1, 0, 1, ...).
//! - trigonometric `trig_{n}` (n in {10,100}), x0 = (1/n, ..., 1/n).
//! - Beale `beale`, x0 = (1, 1); Wood `wood`, x0 = (-3, -1, -3, -1).
//! - diagonal quartic `quartic_{n}` (n in {25,100}),
//!   f = sum (x_i - i)^4, x0 = (2, ..., 2).
//! - penalty-I style `penalty1_{n}` (n in {10,50}), a = 1e-5,
//!   x0 = (1, 2, ..., n).

use serde::Deserialize;

use crate::model::ObjectiveProblem;
use crate::{dot, norm_inf, Error};

/// SplitMix64: the 64-bit mixing generator of Steele, Lea and Flood.
/// state += 0x9E3779B97F4A7C15; z ^= z>>30, *= 0xBF58476D1CE4E5B9;
/// z ^= z>>27, *= 0x94D049BB133111EB; z ^= z>>31.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Parameters of a seeded SPD quadratic instance.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct QuadraticSpec {
    pub n: usize,
    /// Target condition number, >= 1.
    pub cond: f64,
    pub seed: u64,
}

/// Number of Householder reflectors in the orthogonal factor.
const REFLECTORS: usize = 8;

/// A quadratic q(x) = x^T A x / 2 + b^T x held in factored form
/// A = Q D Q^T with Q a fixed-count Householder product, so evaluation is
/// O(n) per reflector and the spectrum is known exactly.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    pub spec: QuadraticSpec,
    pub eigenvalues: Vec<f64>,
    reflectors: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub x_star: Vec<f64>,
    pub x0: Vec<f64>,
}

impl QuadraticProblem {
    /// Seeded instance with a random minimizer in [-1, 1]^n and x0 = 0.
    pub fn new(spec: QuadraticSpec) -> Result<Self, Error> {
        let mut q = Self::build(spec)?;
        let mut rng = SplitMix64::new(spec.seed ^ 0xB0B0_5EED);
        q.x_star = (0..spec.n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        q.b = q.apply_a(&q.x_star).iter().map(|v| -v).collect();
        q.x0 = vec![0.0; spec.n];
        Ok(q)
    }

    /// Seeded instance with the minimizer at the origin (b = 0) and a random
    /// x0 in [-1, 1]^n. Useful when quantities must scale down with f.
    pub fn homogeneous(spec: QuadraticSpec) -> Result<Self, Error> {
        let mut q = Self::build(spec)?;
        let mut rng = SplitMix64::new(spec.seed ^ 0xB0B0_5EED);
        q.x_star = vec![0.0; spec.n];
        q.b = vec![0.0; spec.n];
        q.x0 = (0..spec.n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        Ok(q)
    }

    fn build(spec: QuadraticSpec) -> Result<Self, Error> {
        if spec.n < 1 {
            return Err(Error::InvalidProblem("quadratic needs n >= 1".into()));
        }
        if spec.cond < 1.0 {
            return Err(Error::InvalidProblem(format!(
                "condition number {} < 1 rejected",
                spec.cond
            )));
        }
        let n = spec.n;
        let mut rng = SplitMix64::new(spec.seed);
        // log-uniform spectrum with the extremes pinned so the realized
        // condition number equals `cond` exactly
        let mut eigenvalues = Vec::with_capacity(n);
        for i in 0..n {
            let lam = if i == 0 {
                1.0
            } else if i == n - 1 {
                spec.cond
            } else {
                spec.cond.powf(rng.next_f64())
            };
            eigenvalues.push(lam);
        }
        let mut reflectors = Vec::with_capacity(REFLECTORS);
        for _ in 0..REFLECTORS {
            loop {
                let v: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
                if dot(&v, &v) > 1e-6 {
                    reflectors.push(v);
                    break;
                }
            }
        }
        Ok(QuadraticProblem {
            spec,
            eigenvalues,
            reflectors,
            b: vec![0.0; n],
            x_star: vec![0.0; n],
            x0: vec![0.0; n],
        })
    }

    fn reflect(v: &[f64], x: &mut [f64]) {
        let c = 2.0 * dot(v, x) / dot(v, v);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= c * vi;
        }
    }

    /// w = Q^T x (reflectors applied first-to-last).
    pub fn apply_qt(&self, x: &[f64]) -> Vec<f64> {
        let mut w = x.to_vec();
        for v in &self.reflectors {
            Self::reflect(v, &mut w);
        }
        w
    }

    /// Q w (reflectors applied last-to-first).
    pub fn apply_q(&self, w: &[f64]) -> Vec<f64> {
        let mut x = w.to_vec();
        for v in self.reflectors.iter().rev() {
            Self::reflect(v, &mut x);
        }
        x
    }

    /// A x = Q D Q^T x.
    pub fn apply_a(&self, x: &[f64]) -> Vec<f64> {
        let mut w = self.apply_qt(x);
        for (wi, lam) in w.iter_mut().zip(&self.eigenvalues) {
            *wi *= lam;
        }
        self.apply_q(&w)
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        let w = self.apply_qt(x);
        let quad: f64 = w
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&wi, &lam)| lam * wi * wi)
            .sum();
        0.5 * quad + dot(&self.b, x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.apply_a(x);
        ax.iter().zip(&self.b).map(|(&a, &bi)| a + bi).collect()
    }

    pub fn f_star(&self) -> f64 {
        self.f(&self.x_star)
    }

    pub fn into_problem(self, name: impl Into<String>) -> ObjectiveProblem {
        let f_star = self.f_star();
        let x0 = self.x0.clone();
        let q = std::sync::Arc::new(self);
        let qf = q.clone();
        ObjectiveProblem::new(
            name,
            x0,
            move |x: &[f64]| qf.f(x),
            move |x: &[f64]| q.grad(x),
        )
        .with_f_star(f_star)
    }
}

/// Seeded SPD quadratic as an [`ObjectiveProblem`].
pub fn make_quadratic(spec: QuadraticSpec) -> Result<ObjectiveProblem, Error> {
    let name = format!("quad_n{}_k{:.0}", spec.n, spec.cond);
    Ok(QuadraticProblem::new(spec)?.into_problem(name))
}

/// Extended Rosenbrock, n even, x0 = (-1.2, 1, ...).
pub fn rosenbrock(n: usize) -> ObjectiveProblem {
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "extended Rosenbrock needs even n"
    );
    let x0: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { -1.2 } else { 1.0 })
        .collect();
    ObjectiveProblem::new(
        format!("rosenbrock_{n}"),
        x0,
        move |x: &[f64]| {
            let mut f = 0.0;
            for j in (0..x.len()).step_by(2) {
                let (a, b) = (x[j], x[j + 1]);
                f += 100.0 * (b - a * a).powi(2) + (1.0 - a).powi(2);
            }
            f
        },
        move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            for j in (0..x.len()).step_by(2) {
                let (a, b) = (x[j], x[j + 1]);
                g[j] = -400.0 * a * (b - a * a) - 2.0 * (1.0 - a);
                g[j + 1] = 200.0 * (b - a * a);
            }
            g
        },
    )
    .with_f_star(0.0)
}

/// Extended Powell singular, n multiple of 4, x0 = (3, -1, 0, 1, ...).
pub fn powell_singular(n: usize) -> ObjectiveProblem {
    assert!(
        n >= 4 && n.is_multiple_of(4),
        "extended Powell needs n = 4m"
    );
    let x0: Vec<f64> = (0..n)
        .map(|i| match i % 4 {
            0 => 3.0,
            1 => -1.0,
            2 => 0.0,
            _ => 1.0,
        })
        .collect();
    ObjectiveProblem::new(
        format!("powell_{n}"),
        x0,
        move |x: &[f64]| {
            let mut f = 0.0;
            for j in (0..x.len()).step_by(4) {
                let (a, b, c, d) = (x[j], x[j + 1], x[j + 2], x[j + 3]);
                f += (a + 10.0 * b).powi(2)
                    + 5.0 * (c - d).powi(2)
                    + (b - 2.0 * c).powi(4)
                    + 10.0 * (a - d).powi(4);
            }
            f
        },
        move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            for j in (0..x.len()).step_by(4) {
                let (a, b, c, d) = (x[j], x[j + 1], x[j + 2], x[j + 3]);
                let t1 = 2.0 * (a + 10.0 * b);
                let t2 = 10.0 * (c - d);
                let t3 = 4.0 * (b - 2.0 * c).powi(3);
                let t4 = 40.0 * (a - d).powi(3);
                g[j] = t1 + t4;
                g[j + 1] = 10.0 * t1 + t3;
                g[j + 2] = t2 - 2.0 * t3;
                g[j + 3] = -t2 - t4;
            }
            g
        },
    )
    .with_f_star(0.0)
}

/// Trigonometric function of Moré–Garbow–Hillstrom, x0 = (1/n, ..., 1/n).
/// q_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i, f = sum q_i^2.
pub fn trigonometric(n: usize) -> ObjectiveProblem {
    assert!(n >= 1);
    let x0 = vec![1.0 / n as f64; n];
    let residuals = move |x: &[f64]| -> (Vec<f64>, f64) {
        let cos_sum: f64 = x.iter().map(|v| v.cos()).sum();
        let nf = x.len() as f64;
        let q: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| nf - cos_sum + (i as f64 + 1.0) * (1.0 - xi.cos()) - xi.sin())
            .collect();
        let sum_q = q.iter().sum();
        (q, sum_q)
    };
    let res_f = residuals;
    ObjectiveProblem::new(
        format!("trig_{n}"),
        x0,
        move |x: &[f64]| {
            let (q, _) = res_f(x);
            q.iter().map(|&v| v * v).sum()
        },
        move |x: &[f64]| {
            let (q, sum_q) = residuals(x);
            x.iter()
                .enumerate()
                .map(|(j, &xj)| {
                    let jf = j as f64 + 1.0;
                    2.0 * (sum_q * xj.sin() + q[j] * (jf * xj.sin() - xj.cos()))
                })
                .collect()
        },
    )
    .with_f_star(0.0)
}

/// Beale, x0 = (1, 1), minimum 0 at (3, 0.5).
pub fn beale() -> ObjectiveProblem {
    const C: [f64; 3] = [1.5, 2.25, 2.625];
    ObjectiveProblem::new(
        "beale",
        vec![1.0, 1.0],
        |x: &[f64]| {
            (1..=3)
                .map(|j| (C[j - 1] - x[0] * (1.0 - x[1].powi(j as i32))).powi(2))
                .sum()
        },
        |x: &[f64]| {
            let mut g = vec![0.0, 0.0];
            for j in 1..=3i32 {
                let yj = x[1].powi(j);
                let r = C[j as usize - 1] - x[0] * (1.0 - yj);
                g[0] += 2.0 * r * (yj - 1.0);
                g[1] += 2.0 * r * x[0] * j as f64 * x[1].powi(j - 1);
            }
            g
        },
    )
    .with_f_star(0.0)
}

/// Wood, x0 = (-3, -1, -3, -1), minimum 0 at (1, 1, 1, 1).
pub fn wood() -> ObjectiveProblem {
    ObjectiveProblem::new(
        "wood",
        vec![-3.0, -1.0, -3.0, -1.0],
        |x: &[f64]| {
            100.0 * (x[1] - x[0] * x[0]).powi(2)
                + (1.0 - x[0]).powi(2)
                + 90.0 * (x[3] - x[2] * x[2]).powi(2)
                + (1.0 - x[2]).powi(2)
                + 10.1 * ((x[1] - 1.0).powi(2) + (x[3] - 1.0).powi(2))
                + 19.8 * (x[1] - 1.0) * (x[3] - 1.0)
        },
        |x: &[f64]| {
            vec![
                -400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]),
                200.0 * (x[1] - x[0] * x[0]) + 20.2 * (x[1] - 1.0) + 19.8 * (x[3] - 1.0),
                -360.0 * x[2] * (x[3] - x[2] * x[2]) - 2.0 * (1.0 - x[2]),
                180.0 * (x[3] - x[2] * x[2]) + 20.2 * (x[3] - 1.0) + 19.8 * (x[1] - 1.0),
            ]
        },
    )
    .with_f_star(0.0)
}

/// Diagonal quartic f = sum (x_i - i)^4, x0 = (2, ..., 2).
pub fn diagonal_quartic(n: usize) -> ObjectiveProblem {
    assert!(n >= 1);
    ObjectiveProblem::new(
        format!("quartic_{n}"),
        vec![2.0; n],
        |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, &xi)| (xi - (i as f64 + 1.0)).powi(4))
                .sum()
        },
        |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, &xi)| 4.0 * (xi - (i as f64 + 1.0)).powi(3))
                .collect()
        },
    )
    .with_f_star(0.0)
}

/// Penalty-I style: f = a sum (x_i - 1)^2 + (sum x_j^2 - 1/4)^2 with
/// a = 1e-5, x0 = (1, 2, ..., n).
pub fn penalty1(n: usize) -> ObjectiveProblem {
    const A: f64 = 1e-5;
    let x0: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    ObjectiveProblem::new(
        format!("penalty1_{n}"),
        x0,
        |x: &[f64]| {
            let s: f64 = x.iter().map(|&v| v * v).sum();
            let p: f64 = x.iter().map(|&v| (v - 1.0).powi(2)).sum();
            A * p + (s - 0.25).powi(2)
        },
        |x: &[f64]| {
            let s: f64 = x.iter().map(|&v| v * v).sum();
            x.iter()
                .map(|&v| 2.0 * A * (v - 1.0) + 4.0 * v * (s - 0.25))
                .collect()
        },
    )
}

/// Default corpus seed; `bench run --seed` reseeds the quadratic instances.
pub const DEFAULT_SEED: u64 = 42;

/// The built-in corpus (25 problems) with the default seed.
pub fn corpus() -> Vec<ObjectiveProblem> {
    corpus_seeded(DEFAULT_SEED)
}

/// The built-in corpus with quadratic instances derived from `seed`.
pub fn corpus_seeded(seed: u64) -> Vec<ObjectiveProblem> {
    let mut out = Vec::new();
    for &n in &[2usize, 20, 100, 1000] {
        for &cond in &[1e1f64, 1e3, 1e5] {
            let mix = SplitMix64::new(seed ^ (n as u64) ^ cond.to_bits()).next_u64();
            let spec = QuadraticSpec { n, cond, seed: mix };
            out.push(make_quadratic(spec).expect("valid spec"));
        }
    }
    for &n in &[2usize, 100, 1000] {
        out.push(rosenbrock(n));
    }
    out.push(powell_singular(20));
    out.push(powell_singular(100));
    out.push(trigonometric(10));
    out.push(trigonometric(100));
    out.push(beale());
    out.push(wood());
    out.push(diagonal_quartic(25));
    out.push(diagonal_quartic(100));
    out.push(penalty1(10));
    out.push(penalty1(50));
    out
}

/// Looks up a corpus problem by name.
pub fn by_name(name: &str, seed: u64) -> Result<ObjectiveProblem, Error> {
    corpus_seeded(seed)
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Central-difference audit of the analytic gradient at seeded random probe
/// points around x0; returns the max over probes of
/// ||g_fd - g||_inf / max(1, ||g||_inf).
pub fn grad_check(problem: &ObjectiveProblem, probes: usize, h: f64) -> Result<f64, Error> {
    assert!(h > 0.0);
    let mut rng = SplitMix64::new(0x6AD_C11EC);
    let n = problem.n;
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let x: Vec<f64> = problem
            .x0
            .iter()
            .map(|&v| v + rng.uniform(-0.5, 0.5))
            .collect();
        let g = problem.grad(&x);
        let mut xp = x.clone();
        let mut err: f64 = 0.0;
        for i in 0..n {
            xp[i] = x[i] + h;
            let fp = problem.f(&xp);
            xp[i] = x[i] - h;
            let fm = problem.f(&xp);
            xp[i] = x[i];
            if !fp.is_finite() || !fm.is_finite() {
                return Err(Error::NonFinite(format!("probe {:?}", &x[..n.min(8)])));
            }
            let fd = (fp - fm) / (2.0 * h);
            err = err.max((fd - g[i]).abs());
        }
        worst = worst.max(err / norm_inf(&g).max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm_sq;

    #[test]
    fn splitmix_is_reproducible() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        // reference values of the published algorithm, seed 1234567
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
    }

    #[test]
    fn quadratic_scalar_instance() {
        // n=1, cond=1: A = [1]; with minimizer x* the gradient is x - x*.
        let q = QuadraticProblem::new(QuadraticSpec {
            n: 1,
            cond: 1.0,
            seed: 3,
        })
        .unwrap();
        assert_eq!(q.eigenvalues, vec![1.0]);
        let g = q.grad(&q.x_star);
        assert!(g[0].abs() < 1e-12);
        // hand instance A=[1], b=[-1]: minimizer 1, f(x*) = -1/2
        let f = |x: f64| 0.5 * x * x - x;
        assert_eq!(f(1.0), -0.5);
    }

    #[test]
    fn quadratic_minimizer_has_zero_gradient() {
        let q = QuadraticProblem::new(QuadraticSpec {
            n: 2,
            cond: 10.0,
            seed: 11,
        })
        .unwrap();
        let g = q.grad(&q.x_star);
        assert!(norm_inf(&g) <= 1e-12);
    }

    #[test]
    fn quadratic_condition_number_is_exact() {
        let q = QuadraticProblem::new(QuadraticSpec {
            n: 20,
            cond: 100.0,
            seed: 5,
        })
        .unwrap();
        // recompute the extreme eigenvalues through the factorization: map
        // unit vectors through Q and take Rayleigh quotients of A
        let (mut imin, mut imax) = (0, 0);
        for (i, &lam) in q.eigenvalues.iter().enumerate() {
            if lam < q.eigenvalues[imin] {
                imin = i;
            }
            if lam > q.eigenvalues[imax] {
                imax = i;
            }
        }
        let rayleigh = |i: usize| {
            let mut e = vec![0.0; 20];
            e[i] = 1.0;
            let v = q.apply_q(&e);
            dot(&v, &q.apply_a(&v)) / norm_sq(&v)
        };
        let (lo, hi) = (rayleigh(imin), rayleigh(imax));
        assert!((hi / lo - 100.0).abs() < 1e-10 * 100.0);
        assert!((lo - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadratic_rejects_bad_cond() {
        assert!(make_quadratic(QuadraticSpec {
            n: 4,
            cond: 0.5,
            seed: 1,
        })
        .is_err());
    }

    #[test]
    fn quadratic_spec_loads_from_json() {
        let spec: QuadraticSpec =
            serde_json::from_str(r#"{"n": 6, "cond": 50.0, "seed": 123}"#).unwrap();
        assert_eq!(spec.n, 6);
        assert_eq!(spec.cond, 50.0);
        let p = make_quadratic(spec).unwrap();
        assert_eq!(p.n, 6);
        assert_eq!(p.name, "quad_n6_k50");
    }

    #[test]
    fn quadratic_instances_are_bitwise_reproducible() {
        let spec = QuadraticSpec {
            n: 30,
            cond: 1e3,
            seed: 99,
        };
        let a = QuadraticProblem::new(spec).unwrap();
        let b = QuadraticProblem::new(spec).unwrap();
        let x: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        assert_eq!(a.f(&x).to_bits(), b.f(&x).to_bits());
        let (ga, gb) = (a.grad(&x), b.grad(&x));
        for i in 0..30 {
            assert_eq!(ga[i].to_bits(), gb[i].to_bits());
        }
    }

    #[test]
    fn corpus_composition() {
        let c = corpus();
        assert!(c.len() >= 25, "corpus has {} problems", c.len());
        let rosen = c.iter().find(|p| p.name == "rosenbrock_2").unwrap();
        assert_eq!(rosen.x0, vec![-1.2, 1.0]);
        let names: Vec<_> = c.iter().map(|p| p.name.as_str()).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len(), "names must be unique");
    }

    #[test]
    fn corpus_gradients_pass_finite_difference_audit() {
        for p in corpus() {
            if p.n > 100 {
                continue; // large instances are covered by the small ones
            }
            let err = grad_check(&p, 3, 1e-6).unwrap();
            assert!(err <= 1e-5, "{}: grad_check error {err:e}", p.name);
        }
    }

    #[test]
    fn grad_check_flags_corrupted_gradient() {
        let q = QuadraticProblem::new(QuadraticSpec {
            n: 2,
            cond: 1.0,
            seed: 8,
        })
        .unwrap();
        let q2 = q.clone();
        let bad = ObjectiveProblem::new(
            "corrupted",
            q.x0.clone(),
            move |x: &[f64]| q.f(x),
            move |x: &[f64]| {
                let mut g = q2.grad(x);
                g[0] += 1.0;
                g
            },
        );
        let err = grad_check(&bad, 3, 1e-6).unwrap();
        assert!(err >= 0.1, "detector saw only {err:e}");
    }

    #[test]
    fn grad_check_reports_nonfinite_probe() {
        let p = ObjectiveProblem::new(
            "blows_up",
            vec![0.0],
            |x: &[f64]| 1.0 / (x[0].abs() - 0.0).max(0.0).recip().recip() + f64::NAN,
            |_| vec![0.0],
        );
        assert!(matches!(grad_check(&p, 1, 1e-6), Err(Error::NonFinite(_))));
    }

    #[test]
    fn quadratic_exact_values_small_case() {
        // quadratic central differences are exact up to rounding
        let p = make_quadratic(QuadraticSpec {
            n: 5,
            cond: 10.0,
            seed: 17,
        })
        .unwrap();
        let err = grad_check(&p, 4, 1e-6).unwrap();
        assert!(err <= 1e-6, "error {err:e}");
    }
}
