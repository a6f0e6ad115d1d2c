//! Aggregation multigrid preconditioner for the network Laplacian.
//!
//! Coarse levels are quotient networks: nodes are grouped by two rounds of
//! heavy-edge pairing, and the Galerkin operator of piecewise-constant
//! prolongation sums the conductances between groups. Coarse problems are
//! solved by two steps of flexible CG (a K-cycle), which keeps the
//! iteration count nearly independent of the grid size.

use rayon::prelude::*;

/// Rows per block in reductions; fixed so results do not depend on the
/// thread count.
pub(super) const CHUNK: usize = 4096;

/// Levels with at most this many nodes are factored directly.
const COARSEST: usize = 512;
/// Jacobi damping.
const OMEGA: f64 = 2.0 / 3.0;
/// Residual reduction at which the K-cycle skips its second step.
const K_CYCLE_TOL: f64 = 0.25;

pub(super) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let parts: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    parts.iter().sum()
}

/// `diag · x - offdiag · x`, with the off-diagonal conductances stored
/// positive in CSR form.
#[derive(Debug, Clone)]
pub(super) struct Matrix {
    pub diag: Vec<f64>,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl Matrix {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                for (k, o) in chunk.iter_mut().enumerate() {
                    let r = c * CHUNK + k;
                    let mut s = self.diag[r] * x[r];
                    for t in self.row_ptr[r]..self.row_ptr[r + 1] {
                        s -= self.vals[t] * x[self.cols[t] as usize];
                    }
                    *o = s;
                }
            });
    }

    fn residual(&self, b: &[f64], x: &[f64], out: &mut [f64]) {
        self.apply(x, out);
        out.par_iter_mut().zip(b).for_each(|(o, bi)| *o = bi - *o);
    }

    /// Pairs each node with its unpaired neighbour of largest conductance,
    /// in index order. Returns the group of every node and the group count.
    fn pairing(&self) -> (Vec<u32>, usize) {
        let mut group = vec![u32::MAX; self.len()];
        let mut count = 0u32;
        for u in 0..self.len() {
            if group[u] != u32::MAX {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for t in self.row_ptr[u]..self.row_ptr[u + 1] {
                let v = self.cols[t] as usize;
                if group[v] == u32::MAX && best.is_none_or(|(_, w)| self.vals[t] > w) {
                    best = Some((v, self.vals[t]));
                }
            }
            group[u] = count;
            if let Some((v, _)) = best {
                group[v] = count;
            }
            count += 1;
        }
        (group, count as usize)
    }

    /// The Galerkin product `Pᵀ A P` for the piecewise-constant `P` of
    /// `group`.
    fn galerkin(&self, group: &[u32], count: usize) -> Matrix {
        let mut start = vec![0usize; count + 1];
        for &g in group {
            start[g as usize + 1] += 1;
        }
        for k in 1..=count {
            start[k] += start[k - 1];
        }
        let mut fill = start.clone();
        let mut members = vec![0u32; group.len()];
        for (u, &g) in group.iter().enumerate() {
            members[fill[g as usize]] = u as u32;
            fill[g as usize] += 1;
        }
        let mut diag = vec![0.0; count];
        let mut row_ptr = Vec::with_capacity(count + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut slot = vec![usize::MAX; count];
        for g in 0..count {
            let row_start = cols.len();
            for &u in &members[start[g]..start[g + 1]] {
                let u = u as usize;
                diag[g] += self.diag[u];
                for t in self.row_ptr[u]..self.row_ptr[u + 1] {
                    let h = group[self.cols[t] as usize] as usize;
                    if h == g {
                        diag[g] -= self.vals[t];
                    } else if slot[h] == usize::MAX {
                        slot[h] = cols.len();
                        cols.push(h as u32);
                        vals.push(self.vals[t]);
                    } else {
                        vals[slot[h]] += self.vals[t];
                    }
                }
            }
            for &h in &cols[row_start..] {
                slot[h as usize] = usize::MAX;
            }
            row_ptr.push(cols.len());
        }
        Matrix {
            diag,
            row_ptr,
            cols,
            vals,
        }
    }

    fn dense_cholesky(&self) -> Vec<f64> {
        let n = self.len();
        let mut a = vec![0.0; n * n];
        for r in 0..n {
            a[r * n + r] = self.diag[r];
            for t in self.row_ptr[r]..self.row_ptr[r + 1] {
                a[r * n + self.cols[t] as usize] -= self.vals[t];
            }
        }
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= a[j * n + k] * a[j * n + k];
            }
            let d = d.max(f64::MIN_POSITIVE).sqrt();
            a[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= a[i * n + k] * a[j * n + k];
                }
                a[i * n + j] = s / d;
            }
        }
        a
    }
}

struct Level {
    /// Group of each node of the finer level.
    group: Vec<u32>,
    a: Matrix,
}

pub(super) struct Hierarchy {
    levels: Vec<Level>,
    /// Lower Cholesky factor of the coarsest operator, row major.
    factor: Vec<f64>,
}

impl Hierarchy {
    pub fn new(fine: &Matrix) -> Hierarchy {
        let mut levels: Vec<Level> = Vec::new();
        loop {
            let a = levels.last().map_or(fine, |l| &l.a);
            if a.len() <= COARSEST {
                break;
            }
            let (g1, n1) = a.pairing();
            let a1 = a.galerkin(&g1, n1);
            let (g2, n2) = a1.pairing();
            if n2 * 10 > a.len() * 6 {
                break;
            }
            let group: Vec<u32> = g1.iter().map(|&g| g2[g as usize]).collect();
            let coarse = a1.galerkin(&g2, n2);
            levels.push(Level { group, a: coarse });
        }
        let factor = levels.last().map_or(fine, |l| &l.a).dense_cholesky();
        Hierarchy { levels, factor }
    }

    #[cfg(test)]
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn matrix<'a>(&'a self, fine: &'a Matrix, l: usize) -> &'a Matrix {
        if l == 0 {
            fine
        } else {
            &self.levels[l - 1].a
        }
    }

    fn solve_coarsest(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let f = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= f[i * n + k] * y[k];
            }
            y[i] /= f[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= f[k * n + i] * y[k];
            }
            y[i] /= f[i * n + i];
        }
        y
    }

    /// Applies the preconditioner at level `l` to `r`.
    pub fn cycle(&self, fine: &Matrix, l: usize, r: &[f64]) -> Vec<f64> {
        if l == self.levels.len() {
            return self.solve_coarsest(r);
        }
        let a = self.matrix(fine, l);
        let coarse = &self.levels[l];
        let mut z: Vec<f64> = r
            .par_iter()
            .zip(&a.diag)
            .map(|(ri, d)| OMEGA * ri / d)
            .collect();
        let mut res = vec![0.0; r.len()];
        a.residual(r, &z, &mut res);
        let mut rc = vec![0.0; coarse.a.len()];
        for (u, &g) in coarse.group.iter().enumerate() {
            rc[g as usize] += res[u];
        }
        let ec = if l + 1 == self.levels.len() {
            self.solve_coarsest(&rc)
        } else {
            self.k_cycle(fine, l + 1, &rc)
        };
        z.par_iter_mut()
            .zip(&coarse.group)
            .for_each(|(zi, &g)| *zi += ec[g as usize]);
        a.residual(r, &z, &mut res);
        z.par_iter_mut()
            .zip(&res)
            .zip(&a.diag)
            .for_each(|((zi, ri), d)| *zi += OMEGA * ri / d);
        z
    }

    /// Two steps of flexible CG on level `l`, each preconditioned by a
    /// cycle.
    fn k_cycle(&self, fine: &Matrix, l: usize, r: &[f64]) -> Vec<f64> {
        let a = self.matrix(fine, l);
        let c = self.cycle(fine, l, r);
        let mut v = vec![0.0; r.len()];
        a.apply(&c, &mut v);
        let rho1 = dot(&c, &v);
        let alpha1 = dot(&c, r);
        if rho1 <= 0.0 {
            return c;
        }
        let r2: Vec<f64> = r
            .iter()
            .zip(&v)
            .map(|(ri, vi)| ri - alpha1 / rho1 * vi)
            .collect();
        if dot(&r2, &r2) <= K_CYCLE_TOL * K_CYCLE_TOL * dot(r, r) {
            return c.iter().map(|ci| alpha1 / rho1 * ci).collect();
        }
        let d = self.cycle(fine, l, &r2);
        let mut w = vec![0.0; r.len()];
        a.apply(&d, &mut w);
        let gamma = dot(&d, &v);
        let beta = dot(&d, &w);
        let alpha2 = dot(&d, &r2);
        let rho2 = beta - gamma * gamma / rho1;
        if rho2 <= 0.0 {
            return c.iter().map(|ci| alpha1 / rho1 * ci).collect();
        }
        let s1 = alpha1 / rho1 - gamma * alpha2 / (rho1 * rho2);
        let s2 = alpha2 / rho2;
        c.iter().zip(&d).map(|(ci, di)| s1 * ci + s2 * di).collect()
    }
}
