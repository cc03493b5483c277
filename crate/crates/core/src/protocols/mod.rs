//! Reconstruction protocols.
//!
//! | id                  | rounds | error                         |
//! |---------------------|--------|-------------------------------|
//! | `hereditary-1r`     | 1      | two-sided, at most `1/n`      |
//! | `weak-2r`           | 2      | none, input promised in class |
//! | `strong-3r`         | 3      | none                          |
//! | `strong-2r-rand`    | 2      | non-members only, `1/n`       |
//! | `general-1r-weak`   | 1      | none, input promised in class |
//! | `general-1r-strong` | 1      | non-members only, `1/n`       |
//!
//! All of them treat the class, and hence its canonical enumeration, as
//! common knowledge: nodes have unbounded local computation, so anything
//! derived from the class alone (primes, separators, lookup tables) is
//! computed once when the protocol is built.
//!
//! Field elements travel as `ceil(log2 p)`-bit big-endian fields, packed.

mod hereditary;
mod one_round;
mod separator;
mod two_round;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

pub use hereditary::HereditaryOneRound;
pub use one_round::OneRoundGeneral;
pub use separator::{find_separating_t, separation_prime, separator_seed, SeparatorT};
pub use two_round::{TwoRound, TwoRoundVariant};

use crate::ecc::CodeParams;
use crate::engine::{BitReader, BitString, Protocol};
use crate::field::{FieldElem, FieldError, PrimeField};
use crate::graphs::{GraphClass, GraphError, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("protocol parameters overflow 64-bit arithmetic")]
    ParameterOverflow,
    #[error("class `{0}` is not declared hereditary")]
    NotHereditary(String),
    #[error("redundancy k = {k} must lie in 1..={n}")]
    InvalidRedundancy { n: usize, k: usize },
    #[error("no separating vector for `{class}` at n = {n}, k = {k} after {attempts} draws")]
    SearchExhausted {
        class: String,
        n: usize,
        k: usize,
        attempts: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolId {
    Hereditary1R,
    Weak2R,
    Strong3R,
    Strong2RRand,
    General1RWeak,
    General1RStrong,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 6] = [
        ProtocolId::Hereditary1R,
        ProtocolId::Weak2R,
        ProtocolId::Strong3R,
        ProtocolId::Strong2RRand,
        ProtocolId::General1RWeak,
        ProtocolId::General1RStrong,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::Hereditary1R => "hereditary-1r",
            ProtocolId::Weak2R => "weak-2r",
            ProtocolId::Strong3R => "strong-3r",
            ProtocolId::Strong2RRand => "strong-2r-rand",
            ProtocolId::General1RWeak => "general-1r-weak",
            ProtocolId::General1RStrong => "general-1r-strong",
        }
    }

    /// Uses no coins.
    pub fn is_deterministic(self) -> bool {
        matches!(
            self,
            ProtocolId::Weak2R | ProtocolId::Strong3R | ProtocolId::General1RWeak
        )
    }

    /// Must reject inputs outside the class.
    pub fn is_strong(self) -> bool {
        !matches!(self, ProtocolId::Weak2R | ProtocolId::General1RWeak)
    }

    /// Never mishandles a member, whatever the coins.
    pub fn is_one_sided(self) -> bool {
        matches!(self, ProtocolId::Strong2RRand | ProtocolId::General1RStrong)
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProtocolId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| alloc::format!("unknown protocol `{s}`"))
    }
}

/// A reconstruction protocol built for one class and one order `n`.
pub trait Reconstruction: Protocol + Send {
    fn id(&self) -> ProtocolId;

    fn n(&self) -> usize;

    /// Closed-form message length of each round, in bits.
    fn predicted_round_bits(&self) -> Vec<usize>;
}

impl<P: Reconstruction + ?Sized> Reconstruction for Box<P> {
    fn id(&self) -> ProtocolId {
        (**self).id()
    }
    fn n(&self) -> usize {
        (**self).n()
    }
    fn predicted_round_bits(&self) -> Vec<usize> {
        (**self).predicted_round_bits()
    }
}

/// Builds protocol `id` for `class` on `n` nodes.
pub fn build(id: ProtocolId, class: &GraphClass, n: usize) -> Result<Box<dyn Reconstruction>, ProtocolError> {
    Ok(match id {
        ProtocolId::Hereditary1R => Box::new(HereditaryOneRound::new(class, n)?),
        ProtocolId::Weak2R => Box::new(TwoRound::new(class, n, TwoRoundVariant::Weak)?),
        ProtocolId::Strong3R => Box::new(TwoRound::new(class, n, TwoRoundVariant::StrongThreeRound)?),
        ProtocolId::Strong2RRand => Box::new(TwoRound::new(class, n, TwoRoundVariant::StrongRandomized)?),
        ProtocolId::General1RWeak => Box::new(OneRoundGeneral::new(class, n, false)?),
        ProtocolId::General1RStrong => Box::new(OneRoundGeneral::new(class, n, true)?),
    })
}

/// Redundancy for the one-round general protocol: minimizes
/// `B(k) = 2 L / k + (k + 1) log2 n` over `k` in `1..=n`, ties to the smaller
/// `k`, where `L = log2 |G_n|`.
pub fn choose_k(log2_class_size: f64, n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let log_n = libm::log2(n as f64);
    let cost = |k: usize| 2.0 * log2_class_size / k as f64 + (k as f64 + 1.0) * log_n;
    let mut best = 1;
    for k in 2..=n {
        if cost(k) < cost(best) {
            best = k;
        }
    }
    best
}

/// Prime of the candidate check: the least prime above `n^2`.
pub fn check_prime(n: usize) -> Result<PrimeField, ProtocolError> {
    Ok(PrimeField::above((n * n) as u64)?)
}

/// Class-dependent state shared by the coded protocols: the code, the
/// separator and the fingerprint-to-member lookup.
#[derive(Debug, Clone)]
pub(crate) struct CodedSetup {
    pub n: usize,
    pub k: usize,
    pub members: Vec<LabeledGraph>,
    pub separator: SeparatorT,
    pub lookup: BTreeMap<Vec<u64>, usize>,
}

impl CodedSetup {
    pub fn new(class: &GraphClass, n: usize, k: usize) -> Result<Self, ProtocolError> {
        let (separator, lookup) = separator::search(class, n, k)?;
        Ok(CodedSetup {
            n,
            k,
            members: class.enumerate(n)?.to_vec(),
            separator,
            lookup,
        })
    }

    pub fn code(&self) -> &CodeParams {
        &self.separator.params
    }

    pub fn p(&self) -> PrimeField {
        self.separator.prime_p
    }

    pub fn q(&self) -> PrimeField {
        self.code().q()
    }

    pub fn point(&self, i: usize) -> FieldElem {
        self.separator.points[i]
    }

    /// The unique member with this coded fingerprint, if any.
    pub fn candidate(&self, fingerprint: &[u64]) -> Option<&LabeledGraph> {
        self.lookup.get(fingerprint).map(|&i| &self.members[i])
    }
}

pub(crate) fn push_elem(b: &mut BitString, x: FieldElem) {
    b.push_bits(x.value(), x.field().element_bits());
}

/// Reads one element of `field`; `None` on a short message or an unreduced
/// value.
pub(crate) fn read_elem(r: &mut BitReader<'_>, field: PrimeField) -> Option<FieldElem> {
    let v = r.read(field.element_bits())?;
    (v < field.modulus()).then(|| field.elem_exact(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_k_examples() {
        assert_eq!(choose_k(100.0, 16), 7);
        assert_eq!(choose_k(0.0, 16), 1);
        assert_eq!(choose_k(0.0, 2), 1);
        assert_eq!(choose_k(5.0, 1), 1);
        // L = 2 log2 n: B(1) = 4 log n + 2 log n = 6 log n,
        // B(2) = 2 log n + 3 log n = 5 log n, B(3) = 4/3 log n + 4 log n.
        assert_eq!(choose_k(2.0 * 3.0, 8), 2);
    }

    #[test]
    fn choose_k_is_argmin() {
        for n in 2..=16usize {
            for l in [0.0, 1.0, 7.5, 20.0, 100.0, 400.0] {
                let k = choose_k(l, n);
                let b = |k: usize| 2.0 * l / k as f64 + (k as f64 + 1.0) * (n as f64).log2();
                assert!((1..=n).all(|j| b(k) <= b(j)));
                assert!((1..k).all(|j| b(j) > b(k)));
            }
        }
    }

    #[test]
    fn ids_roundtrip() {
        for id in ProtocolId::ALL {
            assert_eq!(id.as_str().parse::<ProtocolId>(), Ok(id));
        }
        assert!("nope".parse::<ProtocolId>().is_err());
    }
}
