//! Bit matrices over GF(2), rows packed into 64-bit words.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    /// One row per support list; each listed column is set.
    pub fn from_supports<'a>(cols: usize, supports: impl IntoIterator<Item = &'a [usize]>) -> Self {
        let supports: Vec<&[usize]> = supports.into_iter().collect();
        let mut m = Self::zeros(supports.len(), cols);
        for (r, s) in supports.iter().enumerate() {
            for &c in s.iter() {
                m.flip(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn row_slice(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if self.get(r, c) != v {
            self.flip(r, c);
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    /// Columns set in row `r`.
    pub fn support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Row `r` as a single word; only valid when `cols <= 64`.
    pub fn row_word(&self, r: usize) -> u64 {
        assert!(self.cols <= 64);
        self.data[r * self.words]
    }

    pub fn copy_row_from(&mut self, r: usize, other: &Gf2Matrix, k: usize) {
        assert_eq!(self.cols, other.cols);
        let src = other.row_slice(k).to_vec();
        self.data[r * self.words..(r + 1) * self.words].copy_from_slice(&src);
    }

    /// `self` stacked above `other`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            words: self.words,
            data,
        }
    }

    /// Matrix-vector product; `x[c]` is the value of column `c`.
    pub fn apply(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        let mut packed = vec![0u64; self.words];
        for (c, &b) in x.iter().enumerate() {
            if b {
                packed[c / 64] |= 1 << (c % 64);
            }
        }
        (0..self.rows)
            .map(|r| {
                self.row_slice(r)
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 1
            })
            .collect()
    }

    /// Rank by Gaussian elimination, pivoting on the first row with a
    /// nonzero entry in each column.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row_slice(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
