//! Matrix-free Krylov solvers: conjugate gradients (plain and
//! Jacobi-preconditioned) for symmetric positive-definite systems and
//! MINRES for symmetric indefinite ones.
//!
//! All reductions are sequential folds in index order, so a run is
//! bit-reproducible at a fixed thread count. Operators are closures from
//! slice to vector; callers translate their physical tolerances into the
//! absolute Euclidean residual tolerance used here.
//!
//! A warm start at the exact solution returns immediately with the input
//! untouched — the coupled stepper relies on this to make equilibrium
//! states exact fixed points.

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Conjugate gradients on `A x = b` with `A` symmetric positive-definite.
/// Stops when the Euclidean residual norm drops to `tol` (absolute).
pub fn cg(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, SolveStats) {
    let mut x = x0.to_vec();
    let ax = apply(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut rs = dot(&r, &r);
    if rs.sqrt() <= tol {
        return (
            x,
            SolveStats {
                iterations: 0,
                residual: rs.sqrt(),
                converged: true,
            },
        );
    }
    let mut p = r.clone();
    for k in 1..=max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            // loss of positive-definiteness (should not happen for our
            // operators); report non-convergence rather than diverging
            return (
                x,
                SolveStats {
                    iterations: k,
                    residual: rs.sqrt(),
                    converged: false,
                },
            );
        }
        let alpha = rs / pap;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += alpha * pi;
        }
        for (ri, api) in r.iter_mut().zip(&ap) {
            *ri -= alpha * api;
        }
        let rs_new = dot(&r, &r);
        if rs_new.sqrt() <= tol {
            return (
                x,
                SolveStats {
                    iterations: k,
                    residual: rs_new.sqrt(),
                    converged: true,
                },
            );
        }
        let beta = rs_new / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
    }
    (
        x,
        SolveStats {
            iterations: max_iter,
            residual: rs.sqrt(),
            converged: false,
        },
    )
}

/// Jacobi-preconditioned conjugate gradients: `diag` holds the positive
/// diagonal of `A` (the preconditioner is its inverse).
pub fn pcg_jacobi(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    diag: &[f64],
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, SolveStats) {
    debug_assert!(diag.iter().all(|d| *d > 0.0), "Jacobi needs a positive diagonal");
    let mut x = x0.to_vec();
    let ax = apply(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut rn = norm(&r);
    if rn <= tol {
        return (
            x,
            SolveStats {
                iterations: 0,
                residual: rn,
                converged: true,
            },
        );
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for k in 1..=max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return (
                x,
                SolveStats {
                    iterations: k,
                    residual: rn,
                    converged: false,
                },
            );
        }
        let alpha = rz / pap;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += alpha * pi;
        }
        for (ri, api) in r.iter_mut().zip(&ap) {
            *ri -= alpha * api;
        }
        rn = norm(&r);
        if rn <= tol {
            return (
                x,
                SolveStats {
                    iterations: k,
                    residual: rn,
                    converged: true,
                },
            );
        }
        for (zi, (ri, di)) in z.iter_mut().zip(r.iter().zip(diag)) {
            *zi = ri / di;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
        rz = rz_new;
    }
    (
        x,
        SolveStats {
            iterations: max_iter,
            residual: rn,
            converged: false,
        },
    )
}

/// MINRES for symmetric (possibly indefinite) `A x = b`, after
/// Paige & Saunders. Stops on the recurred residual-norm estimate `|η|`,
/// which equals the true residual norm in exact arithmetic.
pub fn minres(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, SolveStats) {
    let n = b.len();
    let mut x = x0.to_vec();
    let ax = apply(&x);
    let r0: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let beta1 = norm(&r0);
    if beta1 <= tol {
        return (
            x,
            SolveStats {
                iterations: 0,
                residual: beta1,
                converged: true,
            },
        );
    }
    let mut v_prev = vec![0.0; n];
    let mut v: Vec<f64> = r0.iter().map(|ri| ri / beta1).collect();
    let mut beta = beta1;
    let mut eta = beta1;
    let (mut gamma_old, mut gamma) = (1.0_f64, 1.0_f64);
    let (mut sigma_old, mut sigma) = (0.0_f64, 0.0_f64);
    let mut w_old = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 1..=max_iter {
        let mut av = apply(&v);
        let alpha = dot(&v, &av);
        for i in 0..n {
            av[i] -= alpha * v[i] + beta * v_prev[i];
        }
        let beta_new = norm(&av);
        // Givens QR update of the tridiagonal factorization
        let delta = gamma * alpha - gamma_old * sigma * beta;
        let rho1 = (delta * delta + beta_new * beta_new).sqrt();
        let rho2 = sigma * alpha + gamma_old * gamma * beta;
        let rho3 = sigma_old * beta;
        let gamma_new = delta / rho1;
        let sigma_new = beta_new / rho1;
        let mut w_new = vec![0.0; n];
        for i in 0..n {
            w_new[i] = (v[i] - rho3 * w_old[i] - rho2 * w[i]) / rho1;
        }
        let step = gamma_new * eta;
        for i in 0..n {
            x[i] += step * w_new[i];
        }
        eta = -sigma_new * eta;
        let res = eta.abs();
        if res <= tol || beta_new == 0.0 {
            return (
                x,
                SolveStats {
                    iterations: k,
                    residual: res,
                    converged: res <= tol,
                },
            );
        }
        v_prev = std::mem::take(&mut v);
        v = av.iter().map(|t| t / beta_new).collect();
        beta = beta_new;
        gamma_old = gamma;
        gamma = gamma_new;
        sigma_old = sigma;
        sigma = sigma_new;
        w_old = std::mem::take(&mut w);
        w = w_new;
    }
    (
        x,
        SolveStats {
            iterations: max_iter,
            residual: eta.abs(),
            converged: false,
        },
    )
}
