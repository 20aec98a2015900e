//! Linear algebra over F2: row-reduction with a replayable log of row
//! additions, and permutations as transposition lists.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("rows of unequal length")]
    Ragged,
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<usize>),
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> F2Matrix {
        F2Matrix { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn identity(n: usize) -> F2Matrix {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<F2Matrix, F2Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(F2Error::Ragged);
        }
        Ok(F2Matrix { rows: rows.len(), cols, bits: rows.concat() })
    }

    /// Rows given as 0/1 integers, for literals in tests and examples.
    pub fn from_ints(rows: &[&[u8]]) -> Result<F2Matrix, F2Error> {
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&b| b != 0).collect()).collect();
        F2Matrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.bits[r * self.cols + c] = b;
    }

    pub fn row(&self, r: usize) -> &[bool] {
        &self.bits[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().filter(|&&b| b).count()
    }

    /// `row[tgt] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, tgt: usize) {
        assert_ne!(src, tgt, "row added to itself");
        for c in 0..self.cols {
            if self.bits[src * self.cols + c] {
                self.bits[tgt * self.cols + c] ^= true;
            }
        }
    }

    /// Whether the matrix is in reduced row-echelon form.
    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..self.rows {
            match self.row(r).iter().position(|&b| b) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|l| p <= l) {
                        return false;
                    }
                    if (0..self.rows).any(|o| o != r && self.get(o, p)) {
                        return false;
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = self.row(r).iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Row additions in application order; `(src, tgt)` means `row[tgt] ^= row[src]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOpLog {
    pub ops: Vec<(usize, usize)>,
}

impl RowOpLog {
    pub fn replay(&self, m: &mut F2Matrix) {
        for &(s, t) in &self.ops {
            m.add_row(s, t);
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// How the forward pass of the elimination proceeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Elimination {
    /// Column by column.
    #[default]
    Plain,
    /// Columns in blocks of the given width; rows that agree on a block are
    /// cancelled against each other before the block is eliminated.
    Blockwise(usize),
}

/// Reduced row-echelon form using only row additions. The pivot in each
/// column comes from the lowest-index eligible row.
pub fn gauss_jordan(m: &F2Matrix) -> (F2Matrix, RowOpLog) {
    gauss_jordan_with(m, Elimination::Plain)
}

pub fn gauss_jordan_with(m: &F2Matrix, mode: Elimination) -> (F2Matrix, RowOpLog) {
    let mut a = m.clone();
    let mut log = RowOpLog::default();
    let mut op = |a: &mut F2Matrix, s: usize, t: usize| {
        a.add_row(s, t);
        log.ops.push((s, t));
    };
    let width = match mode {
        Elimination::Plain => 1,
        Elimination::Blockwise(w) => w.max(1),
    };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    let mut start = 0;
    while start < a.cols && next < a.rows {
        let end = (start + width).min(a.cols);
        if width > 1 {
            for r in next..a.rows {
                if a.row(r)[start..end].iter().all(|&b| !b) {
                    continue;
                }
                for s in r + 1..a.rows {
                    if a.row(s)[start..end] == a.row(r)[start..end] {
                        op(&mut a, r, s);
                    }
                }
            }
        }
        for c in start..end {
            if next == a.rows {
                break;
            }
            let Some(p) = (next..a.rows).find(|&r| a.get(r, c)) else { continue };
            if p != next {
                op(&mut a, p, next);
            }
            for r in next + 1..a.rows {
                if a.get(r, c) {
                    op(&mut a, next, r);
                }
            }
            pivots.push((next, c));
            next += 1;
        }
        start = end;
    }
    for &(r, c) in pivots.iter().rev() {
        for o in 0..r {
            if a.get(o, c) {
                op(&mut a, r, o);
            }
        }
    }
    (a, log)
}

pub fn rank(m: &F2Matrix) -> usize {
    let (r, _) = gauss_jordan(m);
    (0..r.rows()).filter(|&i| r.row_weight(i) > 0).count()
}

/// Transpositions that move the content of position `q` to `perm[q]` when
/// applied in order, each exchanging the contents of two positions. At most
/// `n - c` swaps for a permutation with `c` cycles.
pub fn permutation_to_swaps(perm: &[usize]) -> Result<Vec<(usize, usize)>, F2Error> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(F2Error::NotPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    // occupant[pos] is the original position whose content sits at pos
    let mut occupant: Vec<usize> = (0..n).collect();
    let mut pos_of: Vec<usize> = (0..n).collect();
    let mut swaps = Vec::new();
    for target in 0..n {
        let want = (0..n).find(|&q| perm[q] == target).expect("bijection");
        let here = pos_of[want];
        if here != target {
            swaps.push((target.min(here), target.max(here)));
            let other = occupant[target];
            occupant.swap(target, here);
            pos_of[want] = target;
            pos_of[other] = here;
        }
    }
    Ok(swaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> F2Matrix {
        let bits: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(0.5)).collect()).collect();
        F2Matrix::from_rows(&bits).unwrap()
    }

    /// Rank by enumerating all row subsets: the row space has 2^rank elements.
    fn brute_rank(m: &F2Matrix) -> usize {
        let mut span = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << m.rows()) {
            let mut acc = vec![false; m.cols()];
            for r in 0..m.rows() {
                if mask >> r & 1 == 1 {
                    for (a, &b) in acc.iter_mut().zip(m.row(r)) {
                        *a ^= b;
                    }
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn identity_is_fixed() {
        let id = F2Matrix::identity(4);
        let (r, log) = gauss_jordan(&id);
        assert_eq!(r, id);
        assert!(log.is_empty());
    }

    #[test]
    fn two_by_two() {
        let m = F2Matrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        let (r, log) = gauss_jordan(&m);
        assert_eq!(r, F2Matrix::identity(2));
        assert_eq!(log.ops, vec![(1, 0)]);
    }

    #[test]
    fn zero_rows_sink() {
        let m = F2Matrix::from_ints(&[&[0, 0, 0], &[0, 1, 1], &[0, 1, 0]]).unwrap();
        let (r, log) = gauss_jordan(&m);
        assert_eq!(r, F2Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap());
        let mut replayed = m.clone();
        log.replay(&mut replayed);
        assert_eq!(replayed, r);
    }

    #[test]
    fn random_eight_by_twelve() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_matrix(&mut rng, 8, 12);
            for mode in [Elimination::Plain, Elimination::Blockwise(3)] {
                let (r, log) = gauss_jordan_with(&m, mode);
                assert!(r.is_rref(), "{r:?}");
                let mut replayed = m.clone();
                log.replay(&mut replayed);
                assert_eq!(replayed, r);
                assert_eq!(rank(&m), brute_rank(&m));
            }
        }
    }

    #[test]
    fn blockwise_agrees_with_plain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let m = random_matrix(&mut rng, 10, 10);
            assert_eq!(gauss_jordan(&m).0, gauss_jordan_with(&m, Elimination::Blockwise(2)).0);
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert_eq!(F2Matrix::from_rows(&[vec![true], vec![]]), Err(F2Error::Ragged));
    }

    fn apply_swaps(n: usize, swaps: &[(usize, usize)]) -> Vec<usize> {
        // content[pos] = original position now sitting at pos
        let mut content: Vec<usize> = (0..n).collect();
        for &(a, b) in swaps {
            content.swap(a, b);
        }
        content
    }

    #[test]
    fn swaps_small_cases() {
        assert_eq!(permutation_to_swaps(&[0, 1, 2]).unwrap(), vec![]);
        assert_eq!(permutation_to_swaps(&[1, 0]).unwrap(), vec![(0, 1)]);
        assert!(permutation_to_swaps(&[0, 0]).is_err());
        assert!(permutation_to_swaps(&[2, 0]).is_err());
    }

    proptest! {
        #[test]
        fn swaps_realize_permutation(perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle()) {
            let swaps = permutation_to_swaps(&perm).unwrap();
            let content = apply_swaps(8, &swaps);
            for (q, &p) in perm.iter().enumerate() {
                prop_assert_eq!(content[p], q);
            }
            let mut seen = [false; 8];
            let mut cycles = 0;
            for s in 0..8 {
                if !seen[s] {
                    cycles += 1;
                    let mut x = s;
                    while !seen[x] {
                        seen[x] = true;
                        x = perm[x];
                    }
                }
            }
            prop_assert!(swaps.len() <= 8 - cycles);
        }

        #[test]
        fn rref_is_idempotent(seed in 0u64..5000, rows in 1usize..7, cols in 1usize..9) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let (r, _) = gauss_jordan(&m);
            let (again, log) = gauss_jordan(&r);
            prop_assert_eq!(again, r);
            prop_assert!(log.is_empty());
        }
    }
}
