//! Exact sparse rank over cyclotomic fields.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cyclo::CycNum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("elimination needs more than {budget} stored entries (reached {reached})")]
pub struct BudgetExceeded {
    pub budget: usize,
    pub reached: usize,
}

pub type SparseRow = BTreeMap<usize, CycNum>;

/// Rank by Gaussian elimination with a Markowitz-style pivot choice: the
/// shortest remaining row, and in it the column with fewest entries.
pub fn rank(rows: Vec<SparseRow>, ncols: usize, budget: Option<usize>) -> Result<usize, BudgetExceeded> {
    let mut rows: Vec<SparseRow> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    let mut by_len: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut nnz = 0usize;
    for (i, r) in rows.iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        nnz += r.len();
        by_len.insert((r.len(), i));
        for &c in r.keys() {
            col_rows[c].insert(i);
        }
    }
    let check = |nnz: usize| match budget {
        Some(b) if nnz > b => Err(BudgetExceeded { budget: b, reached: nnz }),
        _ => Ok(()),
    };
    check(nnz)?;
    let mut rank = 0;
    while let Some(&(len, pr)) = by_len.iter().next() {
        by_len.remove(&(len, pr));
        let pivot_row = std::mem::take(&mut rows[pr]);
        nnz -= pivot_row.len();
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        let (&pc, _) = pivot_row
            .iter()
            .min_by_key(|(c, _)| (col_rows[**c].len(), **c))
            .expect("nonempty row");
        rank += 1;
        let inv = pivot_row[&pc].inverse().expect("nonzero pivot");
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let row = &mut rows[r];
            by_len.remove(&(row.len(), r));
            let before = row.len();
            let factor = &row[&pc] * &inv;
            for (&c, v) in &pivot_row {
                let delta = &factor * v;
                match row.get_mut(&c) {
                    Some(x) => {
                        *x -= &delta;
                        if x.is_zero() {
                            row.remove(&c);
                            col_rows[c].remove(&r);
                        }
                    }
                    None => {
                        row.insert(c, -delta);
                        col_rows[c].insert(r);
                    }
                }
            }
            // The pivot column is eliminated exactly.
            debug_assert!(!row.contains_key(&pc));
            nnz = nnz + row.len() - before;
            if !row.is_empty() {
                by_len.insert((row.len(), r));
            }
        }
        check(nnz)?;
    }
    Ok(rank)
}
