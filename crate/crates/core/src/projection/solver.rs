use super::poisson::{PoissonSystem, NONE};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    /// Relative residual target `|b - Ax| / |b|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 2000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

const MIC_TAU: f64 = 0.97;
const MIC_SIGMA: f64 = 0.25;

/// Solves `A q = b` with MIC(0)-preconditioned conjugate gradients.
///
/// `b` is the scaled right-hand side of [`PoissonSystem::scaled_rhs`]. Connected
/// groups of rows with no Dirichlet neighbour are singular; their part of `b` is
/// shifted to zero mean first. On non-convergence the best iterate is returned
/// with `converged = false`.
pub fn solve_ppe<const D: usize>(sys: &PoissonSystem<D>, params: &SolverParams) -> (Vec<f64>, SolveStats) {
    let n = sys.len();
    let mut b = sys.scaled_rhs();
    project_out_nullspace(sys, &mut b);
    let mut x = vec![0.0; n];
    let b_norm = norm(&b);
    if n == 0 || b_norm == 0.0 {
        return (x, SolveStats { iterations: 0, residual: 0.0, converged: true });
    }
    let precon = mic0(sys);
    let mut r = b;
    let mut z = vec![0.0; n];
    apply_precon(sys, &precon, &r, &mut z);
    let mut s = z.clone();
    let mut sigma = dot(&z, &r);
    let mut as_ = vec![0.0; n];
    let mut best = (f64::INFINITY, x.clone());
    for it in 1..=params.max_iter {
        sys.apply(&s, &mut as_);
        let denom = dot(&s, &as_);
        if denom <= 0.0 {
            break;
        }
        let alpha = sigma / denom;
        for i in 0..n {
            x[i] += alpha * s[i];
            r[i] -= alpha * as_[i];
        }
        let rel = norm(&r) / b_norm;
        if rel <= params.tol {
            return (x, SolveStats { iterations: it, residual: rel, converged: true });
        }
        if rel < best.0 {
            best = (rel, x.clone());
        }
        apply_precon(sys, &precon, &r, &mut z);
        let sigma_new = dot(&z, &r);
        let beta = sigma_new / sigma;
        sigma = sigma_new;
        for i in 0..n {
            s[i] = z[i] + beta * s[i];
        }
    }
    let (rel, x) = best;
    log::warn!("pressure solve did not converge: residual {rel:.3e} after {} iterations", params.max_iter);
    (x, SolveStats { iterations: params.max_iter, residual: rel, converged: false })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn mic0<const D: usize>(sys: &PoissonSystem<D>) -> Vec<f64> {
    let n = sys.len();
    let mut pc = vec![0.0; n];
    for r in 0..n {
        let diag = sys.diag[r];
        let mut e = diag;
        for a in 0..D {
            let m = sys.minus_row[r][a];
            if m == NONE {
                continue;
            }
            let off = sys.plus[m][a] * pc[m];
            e -= off * off;
            let rest: f64 = (0..D).filter(|&b| b != a).map(|b| sys.plus[m][b]).sum();
            e -= MIC_TAU * sys.plus[m][a] * rest * pc[m] * pc[m];
        }
        if e < MIC_SIGMA * diag {
            e = diag;
        }
        pc[r] = if e > 0.0 { 1.0 / e.sqrt() } else { 0.0 };
    }
    pc
}

fn apply_precon<const D: usize>(sys: &PoissonSystem<D>, pc: &[f64], r: &[f64], z: &mut [f64]) {
    let n = sys.len();
    let mut q = vec![0.0; n];
    for i in 0..n {
        let mut t = r[i];
        for a in 0..D {
            let m = sys.minus_row[i][a];
            if m != NONE {
                t += sys.plus[m][a] * pc[m] * q[m];
            }
        }
        q[i] = t * pc[i];
    }
    for i in (0..n).rev() {
        let mut t = q[i];
        for a in 0..D {
            let p = sys.plus_row[i][a];
            if p != NONE {
                t += sys.plus[i][a] * pc[i] * z[p];
            }
        }
        z[i] = t * pc[i];
    }
}

/// Shifts `b` to zero mean on every connected group of rows without a Dirichlet row.
fn project_out_nullspace<const D: usize>(sys: &PoissonSystem<D>, b: &mut [f64]) {
    let n = sys.len();
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut group = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        group.clear();
        seen[start] = true;
        stack.push(start);
        let mut grounded = false;
        while let Some(r) = stack.pop() {
            group.push(r);
            grounded |= sys.dirichlet[r];
            for a in 0..D {
                for nb in [sys.plus_row[r][a], sys.minus_row[r][a]] {
                    if nb != NONE && !seen[nb] {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        if !grounded {
            group.sort_unstable();
            let mean = group.iter().map(|&r| b[r]).sum::<f64>() / group.len() as f64;
            for &r in &group {
                b[r] -= mean;
            }
        }
    }
}
