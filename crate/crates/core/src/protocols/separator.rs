use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ProtocolError;
use crate::ecc::{encode_graph, CodeParams};
use crate::engine::coins::{fnv1a, CoinStream};
use crate::field::{FieldElem, PrimeField};
use crate::fingerprint::fp_matrix;
use crate::graphs::{ceil_log2_over, GraphClass, LabeledGraph};

/// Evaluation points that give every member of `G_n` a distinct coded
/// fingerprint `FP(C(G), T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorT {
    pub points: Vec<FieldElem>,
    pub params: CodeParams,
    pub class_name: String,
    pub prime_p: PrimeField,
    /// Number of candidate vectors drawn, the accepted one included.
    pub attempts: u64,
}

impl SeparatorT {
    /// `FP(C(G), T)` as plain integers.
    pub fn coded_fingerprint(&self, g: &LabeledGraph) -> Vec<u64> {
        fp_matrix(encode_graph(g, &self.params).matrix(), &self.points).values()
    }
}

/// The prime used for separation at `(n, k)`: the least prime above
/// `(n + k) * 2^ceil(2 log2 |G_n| / k)`, which over-approximates
/// `(n + k) |G_n|^(2/k)`.
pub fn separation_prime(n: usize, k: usize, class_size: u64) -> Result<PrimeField, ProtocolError> {
    let exponent = ceil_log2_over(u128::from(class_size) * u128::from(class_size), k as u32);
    let bound = (n as u64 + k as u64)
        .checked_shl(exponent)
        .filter(|b| b >> exponent == n as u64 + k as u64)
        .ok_or(ProtocolError::ParameterOverflow)?;
    Ok(PrimeField::above(bound)?)
}

/// Seed of the shared search stream: FNV-1a over the class name followed by
/// `n`, `k` and `p` as little-endian `u64`s.
pub fn separator_seed(class_name: &str, n: usize, k: usize, p: u64) -> u64 {
    let mut bytes = Vec::with_capacity(class_name.len() + 24);
    bytes.extend_from_slice(class_name.as_bytes());
    bytes.extend_from_slice(&(n as u64).to_le_bytes());
    bytes.extend_from_slice(&(k as u64).to_le_bytes());
    bytes.extend_from_slice(&p.to_le_bytes());
    fnv1a(&bytes)
}

/// Searches the shared deterministic stream for a separating `T`. Every node
/// running this gets the same answer with no communication.
pub fn find_separating_t(class: &GraphClass, n: usize, k: usize) -> Result<SeparatorT, ProtocolError> {
    search(class, n, k).map(|(sep, _)| sep)
}

/// Like [`find_separating_t`], also returning the member index of every
/// coded fingerprint.
pub(crate) fn search(
    class: &GraphClass,
    n: usize,
    k: usize,
) -> Result<(SeparatorT, BTreeMap<Vec<u64>, usize>), ProtocolError> {
    if k == 0 || k > n {
        return Err(ProtocolError::InvalidRedundancy { n, k });
    }
    let members = class.enumerate(n)?;
    let size = members.len() as u64;
    let p = separation_prime(n, k, size)?;
    let params = CodeParams::new(n, k)?;
    let coded: Vec<_> = members.iter().map(|g| encode_graph(g, &params)).collect();
    let mut stream = CoinStream::new(separator_seed(class.name(), n, k, p.modulus()));
    let budget = (10 * u128::from(size) * u128::from(size)).max(1);

    let mut attempts = 0u128;
    while attempts < budget {
        attempts += 1;
        let points: Vec<FieldElem> = (0..n + k)
            .map(|_| p.elem_exact(stream.below(p.modulus())))
            .collect();
        let mut table = BTreeMap::new();
        let separated = coded.iter().enumerate().all(|(i, c)| {
            table
                .insert(fp_matrix(c.matrix(), &points).values(), i)
                .is_none()
        });
        if separated {
            let sep = SeparatorT {
                points,
                params,
                class_name: class.name().to_string(),
                prime_p: p,
                attempts: attempts as u64,
            };
            return Ok((sep, table));
        }
    }
    Err(ProtocolError::SearchExhausted {
        class: class.name().to_string(),
        n,
        k,
        attempts: attempts as u64,
    })
}
