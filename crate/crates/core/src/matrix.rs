use alloc::vec;
use alloc::vec::Vec;

/// Dense square matrix of reduced field values, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    /// Panics unless every row has length `rows.len()`.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), dim, "matrix is not square");
            entries.extend_from_slice(r);
        }
        SquareMatrix { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.entries[i * self.dim + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}
