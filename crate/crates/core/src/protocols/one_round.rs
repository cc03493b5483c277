use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{check_prime, choose_k, push_elem, read_elem, CodedSetup, ProtocolError, ProtocolId, Reconstruction};
use crate::engine::{BitString, NodeContext, Outcome, Outgoing, Protocol, RoundMode};
use crate::field::{FieldElem, PrimeField};
use crate::fingerprint::{fp_bits, fp_vector};
use crate::graphs::{GraphClass, LabeledGraph};

/// One-round reconstruction of an arbitrary class.
///
/// Node `i` broadcasts `FP(C(x_i), T_i)` and its `k` redundancy symbols
/// `C(x_i)_{n+1..n+k}`. The symbols give everyone the bottom rows of `C(G)`,
/// hence the full `FP(C(G), T)` and the candidate. In strong mode node `i`
/// also sends `(s_i, FP(x_i, s_i))` over `F_p'`, `p'` the least prime above
/// `n^2`, and the candidate is accepted only if it matches these.
#[derive(Debug, Clone)]
pub struct OneRoundGeneral {
    name: String,
    strong: bool,
    setup: CodedSetup,
    check: Option<PrimeField>,
}

struct Heard {
    fingerprint: FieldElem,
    redundancy: Vec<u64>,
    check: Option<(FieldElem, FieldElem)>,
}

impl OneRoundGeneral {
    pub fn new(class: &GraphClass, n: usize, strong: bool) -> Result<Self, ProtocolError> {
        let size = class.cardinality(n)?;
        let log_size = if size > 0 { libm::log2(size as f64) } else { 0.0 };
        Self::with_redundancy(class, n, choose_k(log_size, n), strong)
    }

    /// Same protocol with an explicit redundancy `k`.
    pub fn with_redundancy(class: &GraphClass, n: usize, k: usize, strong: bool) -> Result<Self, ProtocolError> {
        let setup = CodedSetup::new(class, n, k)?;
        let check = if strong { Some(check_prime(n)?) } else { None };
        let id = if strong {
            ProtocolId::General1RStrong
        } else {
            ProtocolId::General1RWeak
        };
        Ok(OneRoundGeneral {
            name: id.as_str().to_string(),
            strong,
            setup,
            check,
        })
    }

    pub fn k(&self) -> usize {
        self.setup.k
    }

    pub fn p(&self) -> PrimeField {
        self.setup.p()
    }

    /// Code alphabet, the least prime above `n + k`.
    pub fn q(&self) -> PrimeField {
        self.setup.q()
    }

    pub fn check_prime(&self) -> Option<PrimeField> {
        self.check
    }

    pub fn separator(&self) -> &super::SeparatorT {
        &self.setup.separator
    }

    fn decode(&self, msg: &BitString) -> Option<Heard> {
        let mut r = msg.reader();
        let fingerprint = read_elem(&mut r, self.p())?;
        let redundancy = (0..self.setup.k)
            .map(|_| read_elem(&mut r, self.q()).map(|e| e.value()))
            .collect::<Option<Vec<_>>>()?;
        let check = match self.check {
            Some(c) => Some((read_elem(&mut r, c)?, read_elem(&mut r, c)?)),
            None => None,
        };
        Some(Heard {
            fingerprint,
            redundancy,
            check,
        })
    }

    fn candidate<'a>(&'a self, heard: &[Heard]) -> Option<&'a LabeledGraph> {
        let (n, k) = (self.setup.n, self.setup.k);
        let mut key: Vec<u64> = heard.iter().map(|h| h.fingerprint.value()).collect();
        for r in 0..k {
            let mut row = vec![0u64; n + k];
            for (j, h) in heard.iter().enumerate() {
                row[j] = h.redundancy[r];
            }
            key.push(fp_vector(&row, self.setup.point(n + r)).value());
        }
        self.setup.candidate(&key)
    }
}

impl Protocol for OneRoundGeneral {
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
        let code = self.setup.code();
        let word = code.encode_bits(ctx.local_input());
        let mut b = BitString::new();
        push_elem(&mut b, fp_vector(&word, self.setup.point(ctx.id())));
        for &sym in &word[self.setup.n..] {
            push_elem(&mut b, self.q().elem_exact(sym));
        }
        if let Some(check) = self.check {
            let s = check.elem_exact(ctx.coins().below(check.modulus()));
            push_elem(&mut b, s);
            push_elem(&mut b, fp_bits(ctx.local_input(), self.setup.n, s));
        }
        Outgoing::Broadcast(b)
    }

    fn finalize(&self, ctx: &NodeContext) -> Outcome {
        let n = self.setup.n;
        let heard: Option<Vec<Heard>> = (0..n).map(|j| self.decode(ctx.heard(0, j))).collect();
        let Some(heard) = heard else {
            return if self.strong {
                Outcome::Reject
            } else {
                Outcome::PromiseViolation
            };
        };
        match (self.candidate(&heard), self.strong) {
            (Some(h), false) => Outcome::Reconstructed(h.clone()),
            (None, false) => Outcome::PromiseViolation,
            (Some(h), true) => {
                let verified = heard.iter().enumerate().all(|(j, m)| {
                    let (s, fp) = m.check.expect("strong messages carry a check");
                    fp_bits(h.row(j), n, s) == fp
                });
                if verified {
                    Outcome::Reconstructed(h.clone())
                } else {
                    Outcome::Reject
                }
            }
            (None, true) => Outcome::Reject,
        }
    }
}

impl Reconstruction for OneRoundGeneral {
    fn id(&self) -> ProtocolId {
        if self.strong {
            ProtocolId::General1RStrong
        } else {
            ProtocolId::General1RWeak
        }
    }

    fn n(&self) -> usize {
        self.setup.n
    }

    fn predicted_round_bits(&self) -> Vec<usize> {
        let mut bits = self.p().element_bits() as usize + self.setup.k * self.q().element_bits() as usize;
        if let Some(check) = self.check {
            bits += 2 * check.element_bits() as usize;
        }
        vec![bits]
    }
}
