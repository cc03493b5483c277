use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{check_prime, push_elem, read_elem, CodedSetup, ProtocolError, ProtocolId, Reconstruction};
use crate::engine::{BitString, NodeContext, Outcome, Outgoing, Protocol, RoundMode};
use crate::field::PrimeField;
use crate::fingerprint::{fp_bits, fp_vector};
use crate::graphs::{GraphClass, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoRoundVariant {
    /// Deterministic, correct whenever the input is in the class.
    Weak,
    /// Deterministic strong reconstruction: a third round confirms the
    /// candidate row by row.
    StrongThreeRound,
    /// Strong reconstruction in two rounds; the candidate is checked against a
    /// random fingerprint of `G` sent alongside round two.
    StrongRandomized,
}

/// Coded reconstruction with redundancy `k = n`.
///
/// Round 1 (unicast): node `i` sends `C(x_i)_{n+j}` to node `j`, after which
/// node `i` knows rows `i` and `n + i` of `C(G)`.
/// Round 2 (broadcast): node `i` sends `FP(C(G)_i, T_i)` and
/// `FP(C(G)_{n+i}, T_{n+i})` for the class separator `T`, so everyone knows
/// `FP(C(G), T)` and with it the unique matching member, the candidate.
#[derive(Debug, Clone)]
pub struct TwoRound {
    name: String,
    variant: TwoRoundVariant,
    setup: CodedSetup,
    check: Option<PrimeField>,
}

impl TwoRound {
    pub fn new(class: &GraphClass, n: usize, variant: TwoRoundVariant) -> Result<Self, ProtocolError> {
        let setup = CodedSetup::new(class, n, n)?;
        let check = match variant {
            TwoRoundVariant::StrongRandomized => Some(check_prime(n)?),
            _ => None,
        };
        Ok(TwoRound {
            name: Self::id_of(variant).as_str().to_string(),
            variant,
            setup,
            check,
        })
    }

    fn id_of(variant: TwoRoundVariant) -> ProtocolId {
        match variant {
            TwoRoundVariant::Weak => ProtocolId::Weak2R,
            TwoRoundVariant::StrongThreeRound => ProtocolId::Strong3R,
            TwoRoundVariant::StrongRandomized => ProtocolId::Strong2RRand,
        }
    }

    pub fn variant(&self) -> TwoRoundVariant {
        self.variant
    }

    /// Fingerprint prime.
    pub fn p(&self) -> PrimeField {
        self.setup.p()
    }

    /// Code alphabet, the least prime above `2n`.
    pub fn q(&self) -> PrimeField {
        self.setup.q()
    }

    /// Candidate-check prime, for the randomized variant.
    pub fn check_prime(&self) -> Option<PrimeField> {
        self.check
    }

    pub fn separator(&self) -> &super::SeparatorT {
        &self.setup.separator
    }

    /// Coded fingerprint assembled from the round-two broadcasts.
    fn heard_fingerprint(&self, ctx: &NodeContext) -> Option<Vec<u64>> {
        let n = self.setup.n;
        let mut key = vec![0u64; 2 * n];
        for j in 0..n {
            let msg = ctx.heard(1, j);
            let mut r = msg.reader();
            key[j] = read_elem(&mut r, self.p())?.value();
            key[n + j] = read_elem(&mut r, self.p())?.value();
        }
        Some(key)
    }

    fn candidate(&self, ctx: &NodeContext) -> Option<&LabeledGraph> {
        self.heard_fingerprint(ctx)
            .and_then(|key| self.setup.candidate(&key))
    }

    fn round_one(&self, ctx: &NodeContext) -> Outgoing {
        let q = self.q();
        let redundancy = self.setup.code().redundancy(ctx.local_input());
        Outgoing::Unicast(
            redundancy
                .iter()
                .map(|&sym| {
                    let mut b = BitString::new();
                    push_elem(&mut b, q.elem_exact(sym));
                    b
                })
                .collect(),
        )
    }

    fn round_two(&self, ctx: &mut NodeContext) -> Outgoing {
        let n = self.setup.n;
        let i = ctx.id();
        let q = self.q();

        let row_i = self.setup.code().encode_bits(ctx.local_input());
        let mut row_ni = vec![0u64; 2 * n];
        for (j, slot) in row_ni.iter_mut().take(n).enumerate() {
            let Some(sym) = read_elem(&mut ctx.heard(0, j).reader(), q) else {
                // Malformed round-one symbol: leave it zero.
                continue;
            };
            *slot = sym.value();
        }

        let mut b = BitString::new();
        push_elem(&mut b, fp_vector(&row_i, self.setup.point(i)));
        push_elem(&mut b, fp_vector(&row_ni, self.setup.point(n + i)));
        if let Some(check) = self.check {
            let s = check.elem_exact(ctx.coins().below(check.modulus()));
            push_elem(&mut b, s);
            push_elem(&mut b, fp_bits(ctx.local_input(), n, s));
        }
        Outgoing::Broadcast(b)
    }

    /// Does `h` pass the random fingerprint check heard in round two?
    fn passes_check(&self, ctx: &NodeContext, h: &LabeledGraph, check: PrimeField) -> bool {
        let n = self.setup.n;
        let p = self.p();
        (0..n).all(|j| {
            let mut r = ctx.heard(1, j).reader();
            let parsed = (|| {
                read_elem(&mut r, p)?;
                read_elem(&mut r, p)?;
                let s = read_elem(&mut r, check)?;
                let fp = read_elem(&mut r, check)?;
                Some((s, fp))
            })();
            matches!(parsed, Some((s, fp)) if fp_bits(h.row(j), n, s) == fp)
        })
    }
}

impl Protocol for TwoRound {
    fn name(&self) -> &str {
        &self.name
    }

    fn rounds(&self) -> usize {
        match self.variant {
            TwoRoundVariant::StrongThreeRound => 3,
            _ => 2,
        }
    }

    fn mode(&self, round: usize) -> RoundMode {
        if round == 0 {
            RoundMode::Unicast
        } else {
            RoundMode::Broadcast
        }
    }

    fn messages(&self, ctx: &mut NodeContext, round: usize) -> Outgoing {
        match round {
            0 => self.round_one(ctx),
            1 => self.round_two(ctx),
            _ => {
                let confirmed = self
                    .candidate(ctx)
                    .is_some_and(|h| h.row(ctx.id()) == ctx.local_input());
                let mut b = BitString::new();
                b.push_bit(confirmed);
                Outgoing::Broadcast(b)
            }
        }
    }

    fn finalize(&self, ctx: &NodeContext) -> Outcome {
        let candidate = self.candidate(ctx);
        match self.variant {
            TwoRoundVariant::Weak => match candidate {
                Some(h) => Outcome::Reconstructed(h.clone()),
                None => Outcome::PromiseViolation,
            },
            TwoRoundVariant::StrongThreeRound => {
                let all_confirm = (0..self.setup.n).all(|j| {
                    let m = ctx.heard(2, j);
                    m.len() == 1 && m.bit(0)
                });
                match candidate {
                    Some(h) if all_confirm => Outcome::Reconstructed(h.clone()),
                    _ => Outcome::Reject,
                }
            }
            TwoRoundVariant::StrongRandomized => {
                let check = self.check.expect("randomized variant has a check prime");
                match candidate {
                    Some(h) if self.passes_check(ctx, h, check) => Outcome::Reconstructed(h.clone()),
                    _ => Outcome::Reject,
                }
            }
        }
    }
}

impl Reconstruction for TwoRound {
    fn id(&self) -> ProtocolId {
        Self::id_of(self.variant)
    }

    fn n(&self) -> usize {
        self.setup.n
    }

    fn predicted_round_bits(&self) -> Vec<usize> {
        let q = self.q().element_bits() as usize;
        let mut second = 2 * self.p().element_bits() as usize;
        if let Some(check) = self.check {
            second += 2 * check.element_bits() as usize;
        }
        match self.variant {
            TwoRoundVariant::StrongThreeRound => vec![q, second, 1],
            _ => vec![q, second],
        }
    }
}
