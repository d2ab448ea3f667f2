//! Exact sparse linear solve by incremental column elimination.
//!
//! Columns are processed in the given order and kept fully reduced against
//! earlier pivots, so the returned solution is supported on the earliest
//! linearly independent columns and every free variable is zero.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::GaussianRational;

pub type SparseVec = BTreeMap<usize, GaussianRational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSolution {
    /// Nonzero entries of `x`, keyed by column index.
    pub x: SparseVec,
    /// Column indices chosen as pivots.
    pub pivots: Vec<usize>,
}

struct Pivot {
    column: usize,
    /// Fully reduced column with a 1 at its pivot row.
    vector: SparseVec,
    /// The combination of original columns that produces `vector`.
    combination: SparseVec,
}

fn axpy(target: &mut SparseVec, a: &GaussianRational, x: &SparseVec) {
    for (k, v) in x {
        let delta = a * v;
        match target.get_mut(k) {
            Some(t) => {
                *t += &delta;
                if t.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(*k, delta);
                }
            }
        }
    }
}

fn scale(x: &mut SparseVec, a: &GaussianRational) {
    for v in x.values_mut() {
        *v = &*v * a;
    }
}

/// Solves `Σ_j x_j · columns[j] = rhs`, or returns `None` when inconsistent.
pub fn solve_sparse(columns: &[SparseVec], rhs: &SparseVec) -> Option<SparseSolution> {
    let mut pivots: Vec<Pivot> = Vec::new();
    let mut pivot_of_row: BTreeMap<usize, usize> = BTreeMap::new();
    let reduce =
        |vec: &mut SparseVec, comb: &mut SparseVec, pivots: &[Pivot], pivot_of_row: &BTreeMap<usize, usize>| {
            let hits: Vec<(usize, GaussianRational)> =
                vec.iter().filter_map(|(r, v)| pivot_of_row.get(r).map(|&p| (p, v.clone()))).collect();
            for (p, v) in hits {
                let neg = -v;
                axpy(vec, &neg, &pivots[p].vector);
                axpy(comb, &neg, &pivots[p].combination);
            }
        };
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut comb = SparseVec::new();
        comb.insert(j, GaussianRational::from_int(1));
        reduce(&mut v, &mut comb, &pivots, &pivot_of_row);
        let Some((&row, lead)) = v.iter().next() else {
            continue;
        };
        let inv = lead.inv().expect("nonzero leading entry");
        scale(&mut v, &inv);
        scale(&mut comb, &inv);
        for p in pivots.iter_mut() {
            if let Some(c) = p.vector.get(&row).cloned() {
                let neg = -c;
                axpy(&mut p.vector, &neg, &v);
                axpy(&mut p.combination, &neg, &comb);
            }
        }
        pivot_of_row.insert(row, pivots.len());
        pivots.push(Pivot { column: j, vector: v, combination: comb });
    }
    let mut residual = rhs.clone();
    let mut x = SparseVec::new();
    let hits: Vec<(usize, GaussianRational)> =
        residual.iter().filter_map(|(r, v)| pivot_of_row.get(r).map(|&p| (p, v.clone()))).collect();
    for (p, v) in hits {
        axpy(&mut residual, &-v.clone(), &pivots[p].vector);
        axpy(&mut x, &v, &pivots[p].combination);
    }
    if !residual.is_empty() {
        return None;
    }
    Some(SparseSolution { x, pivots: pivots.iter().map(|p| p.column).collect() })
}
