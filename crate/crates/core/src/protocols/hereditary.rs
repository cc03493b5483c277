use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{push_elem, read_elem, ProtocolError, ProtocolId, Reconstruction};
use crate::engine::{BitString, NodeContext, Outcome, Outgoing, Protocol, RoundMode};
use crate::field::{FieldElem, PrimeField};
use crate::fingerprint::fp_bits;
use crate::graphs::{GraphClass, LabeledGraph};

/// One-round strong reconstruction for hereditary classes.
///
/// Node `i` draws `t_i` uniformly from `F_p` and broadcasts
/// `(t_i, FP(x_i, t_i))`. Everyone then looks for members `H` of `G_n` with
/// `FP(H, T) = FP(G, T)` and outputs `H` if exactly one exists, rejecting
/// otherwise. `p` is the least prime above `3 n^3 2^ceil(f(n)/n)`.
#[derive(Debug, Clone)]
pub struct HereditaryOneRound {
    name: String,
    n: usize,
    p: PrimeField,
    members: Vec<LabeledGraph>,
    // Distinct adjacency rows seen at each position over all members, and for
    // each member the index of its row in that list.
    distinct_rows: Vec<Vec<u64>>,
    row_index: Vec<Vec<u32>>,
}

impl HereditaryOneRound {
    pub fn new(class: &GraphClass, n: usize) -> Result<Self, ProtocolError> {
        if !class.is_hereditary() {
            return Err(ProtocolError::NotHereditary(class.name().to_string()));
        }
        let members = class.enumerate(n)?.to_vec();
        let p = Self::prime_for(class, n)?;

        let mut distinct_rows: Vec<Vec<u64>> = vec![Vec::new(); n];
        for g in &members {
            for (pos, rows) in distinct_rows.iter_mut().enumerate() {
                rows.push(g.row(pos));
            }
        }
        for rows in &mut distinct_rows {
            rows.sort_unstable();
            rows.dedup();
        }
        let row_index = members
            .iter()
            .map(|g| {
                (0..n)
                    .map(|pos| distinct_rows[pos].binary_search(&g.row(pos)).unwrap() as u32)
                    .collect()
            })
            .collect();

        Ok(HereditaryOneRound {
            name: ProtocolId::Hereditary1R.as_str().to_string(),
            n,
            p,
            members,
            distinct_rows,
            row_index,
        })
    }

    /// Least prime above `3 n^3 2^c` with `c = ceil(f(n) / n)` computed exactly.
    pub fn prime_for(class: &GraphClass, n: usize) -> Result<PrimeField, ProtocolError> {
        // An empty class at every level makes the search trivially fail; the
        // prime then only needs to exist.
        let c = class.growth_exponent(n).unwrap_or(0);
        let base = 3u64
            .checked_mul((n as u64).pow(3))
            .ok_or(ProtocolError::ParameterOverflow)?;
        let bound = base
            .checked_shl(c)
            .filter(|b| b >> c == base)
            .ok_or(ProtocolError::ParameterOverflow)?;
        Ok(PrimeField::above(bound)?)
    }

    pub fn p(&self) -> PrimeField {
        self.p
    }

    fn decode(&self, msg: &BitString) -> Option<(FieldElem, FieldElem)> {
        let mut r = msg.reader();
        let t = read_elem(&mut r, self.p)?;
        let fp = read_elem(&mut r, self.p)?;
        Some((t, fp))
    }
}

impl Protocol for HereditaryOneRound {
    fn name(&self) -> &str {
        &self.name
    }

    fn rounds(&self) -> usize {
        1
    }

    fn mode(&self, _round: usize) -> RoundMode {
        RoundMode::Broadcast
    }

    fn messages(&self, ctx: &mut NodeContext, _round: usize) -> Outgoing {
        let t = self.p.elem_exact(ctx.coins().below(self.p.modulus()));
        let mut b = BitString::new();
        push_elem(&mut b, t);
        push_elem(&mut b, fp_bits(ctx.local_input(), self.n, t));
        Outgoing::Broadcast(b)
    }

    fn finalize(&self, ctx: &NodeContext) -> Outcome {
        // matches[pos][d]: does distinct row d fit the fingerprint heard from
        // node pos?
        let mut matches: Vec<Vec<bool>> = Vec::with_capacity(self.n);
        for pos in 0..self.n {
            let Some((t, fp)) = self.decode(ctx.heard(0, pos)) else {
                return Outcome::Reject;
            };
            matches.push(
                self.distinct_rows[pos]
                    .iter()
                    .map(|&row| fp_bits(row, self.n, t) == fp)
                    .collect(),
            );
        }
        let mut found = None;
        for (idx, rows) in self.row_index.iter().enumerate() {
            if rows.iter().enumerate().all(|(pos, &d)| matches[pos][d as usize]) {
                if found.is_some() {
                    return Outcome::Reject;
                }
                found = Some(idx);
            }
        }
        match found {
            Some(idx) => Outcome::Reconstructed(self.members[idx].clone()),
            None => Outcome::Reject,
        }
    }
}

impl Reconstruction for HereditaryOneRound {
    fn id(&self) -> ProtocolId {
        ProtocolId::Hereditary1R
    }

    fn n(&self) -> usize {
        self.n
    }

    fn predicted_round_bits(&self) -> Vec<usize> {
        vec![2 * self.p.element_bits() as usize]
    }
}
