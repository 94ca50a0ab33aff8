//! Classical joint distributions and their maximal correlation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, C64};
use crate::rng;

/// Default threshold for an entry to count as an edge of the support graph.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-12;

/// Joint probability matrix `P` over finite alphabets, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    /// Accepts nonnegative entries summing to one within 1e-12 (the sum is
    /// then normalized exactly).
    pub fn new(rows: usize, cols: usize, p: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || p.len() != rows * cols {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {rows}x{cols} distribution",
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self {
            rows,
            cols,
            p: p.into_iter().map(|x| x / total).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// `[[p00, p01], [p10, p11]]`.
    pub fn binary(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        Self::new(2, 2, vec![p00, p01, p10, p11])
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.p[i * self.cols + k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k)).sum())
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|k| (0..self.rows).map(|i| self.get(i, k)).sum())
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
}

/// `p̃_ik = p_ik / √(p_i·p_k)`; symbols with zero marginal give zero rows or
/// columns. Returned as a complex matrix with zero imaginary parts.
pub fn tilde_matrix(p: &JointDistribution) -> ComplexMatrix {
    let (pa, pb) = (p.row_marginal(), p.col_marginal());
    let (rows, cols) = p.shape();
    ComplexMatrix::from_fn(rows, cols, |i, k| {
        let d = pa[i] * pb[k];
        if d > 0.0 {
            C64::new(p.get(i, k) / d.sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Second singular value of the tilde matrix (zero when an alphabet has a
/// single symbol).
pub fn classical_maximal_correlation(p: &JointDistribution) -> Result<f64> {
    let s = svd(&tilde_matrix(p))?;
    let mu = s.singular_values.get(1).copied().unwrap_or(0.0);
    Ok(mu.clamp(0.0, 1.0))
}

/// `|p00·p11 − p01·p10| / √((p00+p01)(p00+p10)(p10+p11)(p01+p11))`.
pub fn binary_mu_exact(p: &JointDistribution) -> Result<f64> {
    let (p00, p01, p10, p11) = binary_entries(p)?;
    let denom = (p00 + p01) * (p00 + p10) * (p10 + p11) * (p01 + p11);
    if denom <= 0.0 {
        return Err(Error::ZeroMarginal);
    }
    Ok((p00 * p11 - p01 * p10).abs() / denom.sqrt())
}

/// Lower bound `1 − ε/(p00 p11) − 2ε²/(p00 p11)` with `ε = max(p01, p10)`.
pub fn lemma_lower_bound(p: &JointDistribution) -> Result<f64> {
    let (p00, p01, p10, p11) = binary_entries(p)?;
    if p00 <= 0.0 || p11 <= 0.0 {
        return Err(Error::ZeroDiagonal);
    }
    let eps = p01.max(p10);
    let d = p00 * p11;
    Ok(1.0 - eps / d - 2.0 * eps * eps / d)
}

fn binary_entries(p: &JointDistribution) -> Result<(f64, f64, f64, f64)> {
    if p.shape() != (2, 2) {
        return Err(Error::InvalidDistribution(format!(
            "expected a 2x2 distribution, got {}x{}",
            p.rows, p.cols
        )));
    }
    Ok((p.get(0, 0), p.get(0, 1), p.get(1, 0), p.get(1, 1)))
}

/// Split of both alphabets into two blocks with no probability across them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub u0: Vec<usize>,
    pub u1: Vec<usize>,
    pub v0: Vec<usize>,
    pub v1: Vec<usize>,
}

/// Connected-component analysis of the bipartite support graph (edge `ik`
/// iff `p_ik > tol`, zero-marginal symbols dropped). With two or more
/// components the first one becomes block 0 and everything else block 1.
pub fn is_decomposable(p: &JointDistribution, tol: f64) -> (bool, Option<Partition>) {
    let (rows, cols) = p.shape();
    let (pa, pb) = (p.row_marginal(), p.col_marginal());
    // Nodes: rows 0..rows, then columns rows..rows+cols.
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..rows {
        for k in 0..cols {
            if p.get(i, k) > tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + k));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let active: Vec<usize> = (0..rows)
        .filter(|&i| pa[i] > tol)
        .chain((0..cols).filter(|&k| pb[k] > tol).map(|k| rows + k))
        .collect();
    let mut roots: Vec<usize> = active.iter().map(|&n| find(&mut parent, n)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() < 2 {
        return (false, None);
    }
    let first = find(&mut parent, active[0]);
    let mut part = Partition {
        u0: vec![],
        u1: vec![],
        v0: vec![],
        v1: vec![],
    };
    for i in 0..rows {
        if pa[i] > tol && find(&mut parent, i) == first {
            part.u0.push(i);
        } else {
            part.u1.push(i);
        }
    }
    for k in 0..cols {
        if pb[k] > tol && find(&mut parent, rows + k) == first {
            part.v0.push(k);
        } else {
            part.v1.push(k);
        }
    }
    (true, Some(part))
}

/// Seeded random distribution; each entry is zeroed with probability
/// `zero_prob` (at least one entry stays positive).
pub fn random_distribution(rows: usize, cols: usize, zero_prob: f64, seed: u64) -> JointDistribution {
    let mut r = rng::seeded(seed);
    let mut w: Vec<f64> = (0..rows * cols)
        .map(|_| {
            let x: f64 = r.random::<f64>() + 1e-3;
            if r.random::<f64>() < zero_prob {
                0.0
            } else {
                x
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    normalize(rows, cols, w)
}

/// Seeded distribution supported on two blocks `U0×V0 ∪ U1×V1` with full
/// support inside each block. Needs `rows, cols ≥ 2`.
pub fn random_block_distribution(rows: usize, cols: usize, seed: u64) -> (JointDistribution, Partition) {
    assert!(rows >= 2 && cols >= 2, "block distribution needs two symbols per side");
    let mut r = rng::seeded(seed);
    let split_rows = r.random_range(1..rows);
    let split_cols = r.random_range(1..cols);
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    shuffle(&mut r, &mut row_perm);
    shuffle(&mut r, &mut col_perm);
    let mut u0: Vec<usize> = row_perm[..split_rows].to_vec();
    let mut u1: Vec<usize> = row_perm[split_rows..].to_vec();
    let mut v0: Vec<usize> = col_perm[..split_cols].to_vec();
    let mut v1: Vec<usize> = col_perm[split_cols..].to_vec();
    for v in [&mut u0, &mut u1, &mut v0, &mut v1] {
        v.sort_unstable();
    }
    let mut w = vec![0.0; rows * cols];
    for (us, vs) in [(&u0, &v0), (&u1, &v1)] {
        for &i in us.iter() {
            for &k in vs.iter() {
                w[i * cols + k] = r.random::<f64>() + 0.05;
            }
        }
    }
    (normalize(rows, cols, w), Partition { u0, u1, v0, v1 })
}

fn shuffle<R: Rng>(r: &mut R, v: &mut [usize]) {
    for i in (1..v.len()).rev() {
        let j = r.random_range(0..=i);
        v.swap(i, j);
    }
}

fn normalize(rows: usize, cols: usize, w: Vec<f64>) -> JointDistribution {
    let total: f64 = w.iter().sum();
    JointDistribution {
        rows,
        cols,
        p: w.into_iter().map(|x| x / total).collect(),
    }
}
