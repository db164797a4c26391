//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use num_traits::Zero;
use qperm::exactla::{self, BigRational};
use qperm::weingarten::{monomial_integral_with, GramStructure, MonomialSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Catalan numbers by the convolution recurrence.
pub fn catalan_table(max: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for m in 0..max {
        c.push((0..=m).map(|i| c[i] * c[m - i]).sum());
    }
    c
}

/// Bell numbers via the Bell triangle.
pub fn bell_table(max: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..max {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

/// All multi-indices in {1..n}^k.
pub fn all_indices(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// Monomial integrals of orders 0..=k_max at a fixed n, with the Weingarten
/// matrices computed once.
pub struct Integrator {
    pub n: u64,
    levels: Vec<(GramStructure, exactla::RationalMatrix)>,
}

impl Integrator {
    pub fn new(n: u64, k_max: usize) -> Self {
        let levels = (1..=k_max)
            .map(|k| {
                let st = GramStructure::new(k).unwrap();
                let w = exactla::inverse(&st.gram(n)).unwrap();
                (st, w)
            })
            .collect();
        Integrator { n, levels }
    }

    /// ∫ u_{i1 j1} … u_{ik jk}; the empty monomial integrates to 1.
    pub fn integral(&self, rows: &[usize], cols: &[usize]) -> BigRational {
        if rows.is_empty() {
            return BigRational::from_integer(1.into());
        }
        let (st, w) = &self.levels[rows.len() - 1];
        let spec = MonomialSpec::new(self.n, rows.to_vec(), cols.to_vec()).unwrap();
        monomial_integral_with(st.family(), w, &spec).unwrap()
    }
}

fn without(v: &[usize], pos: usize) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, &x)| x)
        .collect()
}

fn insert(v: &[usize], pos: usize, x: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w.insert(pos, x);
    w
}

/// Σ_j over one column (resp. row) position drops that factor, for every
/// order-k monomial shape. Returns the number of identities checked.
pub fn check_sum_out(int: &Integrator, k: usize) -> Result<usize, String> {
    let n = int.n as usize;
    let mut checked = 0;
    for rows in all_indices(k, n) {
        for rest in all_indices(k - 1, n) {
            for pos in 0..k {
                let reduced_rows = without(&rows, pos);
                // Columns: sum over the column at `pos`.
                let lhs = (1..=n).fold(BigRational::zero(), |acc, j| {
                    acc + int.integral(&rows, &insert(&rest, pos, j))
                });
                let rhs = int.integral(&reduced_rows, &rest);
                if lhs != rhs {
                    return Err(format!("column sum-out rows={rows:?} rest={rest:?} pos={pos}"));
                }
                // Rows: the roles of the multi-indices swap.
                let lhs = (1..=n).fold(BigRational::zero(), |acc, i| {
                    acc + int.integral(&insert(&rest, pos, i), &rows)
                });
                let rhs = int.integral(&rest, &reduced_rows);
                if lhs != rhs {
                    return Err(format!("row sum-out cols={rows:?} rest={rest:?} pos={pos}"));
                }
                checked += 2;
            }
        }
    }
    Ok(checked)
}

/// Adjacent factors u_ij u_il with j ≠ l integrate to 0 wherever they sit, and
/// so do u_ji u_li with j ≠ l.
pub fn check_orthogonality(int: &Integrator, k: usize) -> Result<usize, String> {
    let n = int.n as usize;
    let mut checked = 0;
    for rows in all_indices(k, n) {
        for cols in all_indices(k, n) {
            for pos in 0..k - 1 {
                let same_row = rows[pos] == rows[pos + 1] && cols[pos] != cols[pos + 1];
                let same_col = cols[pos] == cols[pos + 1] && rows[pos] != rows[pos + 1];
                if same_row || same_col {
                    let v = int.integral(&rows, &cols);
                    if !v.is_zero() {
                        return Err(format!("rows={rows:?} cols={cols:?} gives {v}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// A factor repeated in adjacent positions collapses: u_ij u_ij = u_ij.
pub fn check_idempotence(int: &Integrator, k: usize) -> Result<usize, String> {
    let n = int.n as usize;
    let mut checked = 0;
    for rows in all_indices(k - 1, n) {
        for cols in all_indices(k - 1, n) {
            for pos in 0..k - 1 {
                let r2 = insert(&rows, pos, rows[pos]);
                let c2 = insert(&cols, pos, cols[pos]);
                if int.integral(&r2, &c2) != int.integral(&rows, &cols) {
                    return Err(format!("rows={rows:?} cols={cols:?} pos={pos}"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Integrals are unchanged when all row indices are relabelled by σ and all
/// column indices by τ.
pub fn check_relabeling(int: &Integrator, k: usize, pairs: usize, rng: &mut impl Rng) -> Result<usize, String> {
    let n = int.n as usize;
    let shapes = all_indices(k, n);
    let mut checked = 0;
    for _ in 0..pairs {
        let mut sigma: Vec<usize> = (1..=n).collect();
        let mut tau: Vec<usize> = (1..=n).collect();
        sigma.shuffle(rng);
        tau.shuffle(rng);
        for _ in 0..8 {
            let rows = shapes.choose(rng).unwrap();
            let cols = shapes.choose(rng).unwrap();
            let r2: Vec<usize> = rows.iter().map(|&i| sigma[i - 1]).collect();
            let c2: Vec<usize> = cols.iter().map(|&j| tau[j - 1]).collect();
            if int.integral(rows, cols) != int.integral(&r2, &c2) {
                return Err(format!("rows={rows:?} cols={cols:?} sigma={sigma:?} tau={tau:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
