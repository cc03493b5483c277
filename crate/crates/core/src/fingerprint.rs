//! Polynomial fingerprints over a prime field.
//!
//! The fingerprint of `a = (a_1, ..., a_m)` at `t` is `sum a_i t^(i-1)`, the
//! coordinates read as field elements. Two distinct vectors of length `m`
//! agree on at most `m` points of the field.

use alloc::vec::Vec;

use crate::field::{FieldElem, PrimeField};
use crate::matrix::SquareMatrix;

/// Evaluates the polynomial with coefficient vector `coeffs` at `t` by Horner's
/// rule. Panics if a coordinate is not below the modulus of `t`.
pub fn fp_vector(coeffs: &[u64], t: FieldElem) -> FieldElem {
    let field = t.field();
    coeffs
        .iter()
        .rev()
        .fold(field.zero(), |acc, &c| acc * t + field.elem_exact(c))
}

/// Fingerprint of a 0/1 vector packed into the low `len` bits of `bits`
/// (bit `i` is coordinate `i + 1`).
pub fn fp_bits(bits: u64, len: usize, t: FieldElem) -> FieldElem {
    let field = t.field();
    let one = field.one();
    let mut acc = field.zero();
    for i in (0..len).rev() {
        acc = acc * t;
        if (bits >> i) & 1 == 1 {
            acc = acc + one;
        }
    }
    acc
}

/// Row-wise fingerprints of a square matrix together with the points used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FingerprintVector {
    entries: Vec<FieldElem>,
    points: Vec<FieldElem>,
}

impl FingerprintVector {
    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    /// Entry values as plain integers, convenient as a lookup key.
    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(FieldElem::value).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `FP(M, T)`: component `i` is the fingerprint of row `i` at `points[i]`.
pub fn fp_matrix(m: &SquareMatrix, points: &[FieldElem]) -> FingerprintVector {
    assert_eq!(
        points.len(),
        m.dim(),
        "one evaluation point per matrix row is required"
    );
    let entries = m
        .rows()
        .zip(points)
        .map(|(row, &t)| fp_vector(row, t))
        .collect();
    FingerprintVector {
        entries,
        points: points.to_vec(),
    }
}

/// Number of `t` in `F_p` at which the fingerprints of `a` and `b` coincide.
///
/// Scans the whole field, so `p` must be small. Panics if `a == b`, if the
/// lengths differ, or if a coordinate is not below `p`.
pub fn count_collisions(a: &[u64], b: &[u64], field: PrimeField) -> u64 {
    assert_eq!(a.len(), b.len(), "vectors must have equal length");
    assert!(a != b, "collision count of identical vectors is the whole field");
    assert!(field.modulus() <= 1 << 20, "field too large to enumerate");
    field
        .elements()
        .filter(|&t| fp_vector(a, t) == fp_vector(b, t))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn vector_examples() {
        let f7 = f(7);
        assert_eq!(fp_vector(&[1, 0, 1], f7.elem(2)).value(), 5);
        assert_eq!(fp_bits(0b101, 3, f7.elem(2)).value(), 5);
        for t in f7.elements() {
            assert!(fp_vector(&[0; 5], t).is_zero());
        }
        assert_eq!(fp_vector(&[4, 3, 6], f7.zero()).value(), 4);
        assert_eq!(fp_vector(&[], f7.elem(3)).value(), 0);
    }

    #[test]
    fn matrix_examples() {
        let f7 = f(7);
        let m = SquareMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let fp = fp_matrix(&m, &[f7.elem(3), f7.elem(5)]);
        assert_eq!(fp.values(), vec![3, 1]);
        let z = fp_matrix(&SquareMatrix::zeros(3), &[f7.elem(1), f7.elem(2), f7.elem(6)]);
        assert_eq!(z.values(), vec![0, 0, 0]);
        let c = fp_matrix(&SquareMatrix::from_rows(&[vec![6]]), &[f7.elem(4)]);
        assert_eq!(c.values(), vec![6]);
    }

    #[test]
    #[should_panic(expected = "one evaluation point per matrix row")]
    fn matrix_length_mismatch() {
        fp_matrix(&SquareMatrix::zeros(2), &[f(7).one()]);
    }

    #[test]
    #[should_panic(expected = "not below the modulus")]
    fn oversized_coordinate() {
        fp_vector(&[7], f(7).one());
    }

    #[test]
    fn collision_examples() {
        assert_eq!(count_collisions(&[1, 0], &[0, 1], f(5)), 1);
        assert_eq!(count_collisions(&[3, 1, 4], &[2, 1, 4], f(11)), 0);
    }

    #[test]
    #[should_panic(expected = "identical vectors")]
    fn collision_of_equal_vectors() {
        count_collisions(&[1, 2], &[1, 2], f(5));
    }

    #[test]
    fn bits_agree_with_vector_form() {
        let f13 = f(13);
        for bits in 0u64..64 {
            let coeffs: Vec<u64> = (0..6).map(|i| (bits >> i) & 1).collect();
            for t in f13.elements() {
                assert_eq!(fp_bits(bits, 6, t), fp_vector(&coeffs, t));
            }
        }
    }

    proptest! {
        #[test]
        fn linear_in_coefficients(
            a in proptest::collection::vec(0u64..101, 0..8),
            seed in proptest::collection::vec(0u64..101, 8),
            t in 0u64..101,
        ) {
            let field = f(101);
            let b = &seed[..a.len()];
            let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + y) % 101).collect();
            let t = field.elem(t);
            prop_assert_eq!(fp_vector(&a, t) + fp_vector(b, t), fp_vector(&sum, t));
        }

        #[test]
        fn lemma_bound_on_random_pairs(
            a in proptest::collection::vec(0u64..101, 6),
            b in proptest::collection::vec(0u64..101, 6),
        ) {
            prop_assume!(a != b);
            prop_assert!(count_collisions(&a, &b, f(101)) <= 6);
        }
    }
}
