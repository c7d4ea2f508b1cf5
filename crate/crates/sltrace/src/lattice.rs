//! Integer row lattices with exact membership via row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// The Z-span of a finite generator list in Z^dim.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    /// Echelon rows with strictly increasing pivot columns; pivots positive.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Self {
        let mut work: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator of wrong length");
                g.iter().map(|&x| BigInt::from(x)).collect()
            })
            .filter(|g: &Vec<BigInt>| g.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the remaining rows.
            loop {
                let mut nz: Vec<usize> = (0..work.len()).filter(|&r| !work[r][col].is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by(|&a, &b| work[a][col].abs().cmp(&work[b][col].abs()));
                let p = nz[0];
                let pivot_row = work[p].clone();
                for &r in &nz[1..] {
                    let f = work[r][col].div_floor(&pivot_row[col]);
                    for (x, y) in work[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(p) = (0..work.len()).find(|&r| !work[r][col].is_zero()) {
                let mut row = work.swap_remove(p);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                rows.push((col, row));
            }
            work.retain(|g| g.iter().any(|x| !x.is_zero()));
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        assert_eq!(k.len(), self.dim);
        let mut v: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
        for (col, row) in &self.rows {
            // Columns left of the pivot must already be cleared.
            if v[..*col].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (f, r) = v[*col].div_rem(&row[*col]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    /// The echelon basis as machine integers, when it fits.
    pub fn basis(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|(_, r)| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }
}
