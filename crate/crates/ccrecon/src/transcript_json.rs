//! JSON form of a run: node ids are 1-based, bit strings are
//! `{"len": bits, "hex": "..."}` with the last byte zero-padded.

use ccrecon_core::engine::{BitString, Message};
use ccrecon_core::{Execution, LabeledGraph, Outcome, Transcript};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bits {
    pub len: usize,
    pub hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageJson {
    pub from: usize,
    pub to: usize,
    pub bits: Bits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundJson {
    pub messages: Vec<MessageJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OutcomeJson {
    Reconstructed { n: usize, edges: Vec<[usize; 2]> },
    Reject,
    PromiseViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptJson {
    pub n: usize,
    pub protocol: String,
    pub seed: u64,
    pub rounds: Vec<RoundJson>,
    pub bandwidth: usize,
    pub cost: usize,
    pub outcomes: Vec<OutcomeJson>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("message {from}->{to}: bad hex for {len} bits")]
    Bits { from: usize, to: usize, len: usize },
    #[error("node id {0} outside 1..=n")]
    NodeId(usize),
    #[error("reconstructed graph has an invalid edge {0:?}")]
    Edge([usize; 2]),
}

impl From<&Outcome> for OutcomeJson {
    fn from(o: &Outcome) -> Self {
        match o {
            Outcome::Reconstructed(g) => OutcomeJson::Reconstructed {
                n: g.n(),
                edges: g.edges().map(|(u, v)| [u + 1, v + 1]).collect(),
            },
            Outcome::Reject => OutcomeJson::Reject,
            Outcome::PromiseViolation => OutcomeJson::PromiseViolation,
        }
    }
}

impl OutcomeJson {
    pub fn to_outcome(&self) -> Result<Outcome, DecodeError> {
        Ok(match self {
            OutcomeJson::Reconstructed { n, edges } => {
                let mut g = LabeledGraph::empty(*n);
                for &[u, v] in edges {
                    if u < 1 || u >= v || v > *n {
                        return Err(DecodeError::Edge([u, v]));
                    }
                    g.add_edge(u - 1, v - 1);
                }
                Outcome::Reconstructed(g)
            }
            OutcomeJson::Reject => Outcome::Reject,
            OutcomeJson::PromiseViolation => Outcome::PromiseViolation,
        })
    }
}

impl TranscriptJson {
    pub fn from_execution(run: &Execution) -> Self {
        let t = &run.transcript;
        TranscriptJson {
            n: t.n,
            protocol: t.protocol.clone(),
            seed: t.seed,
            rounds: t
                .rounds
                .iter()
                .map(|msgs| RoundJson {
                    messages: msgs
                        .iter()
                        .map(|m| MessageJson {
                            from: m.from + 1,
                            to: m.to + 1,
                            bits: Bits {
                                len: m.bits.len(),
                                hex: m.bits.to_hex(),
                            },
                        })
                        .collect(),
                })
                .collect(),
            bandwidth: t.bandwidth(),
            cost: t.cost(),
            outcomes: run.outcomes.iter().map(OutcomeJson::from).collect(),
        }
    }

    pub fn to_transcript(&self) -> Result<Transcript, DecodeError> {
        let node = |id: usize| {
            if (1..=self.n).contains(&id) {
                Ok(id - 1)
            } else {
                Err(DecodeError::NodeId(id))
            }
        };
        let mut rounds = Vec::with_capacity(self.rounds.len());
        for r in &self.rounds {
            let mut msgs = Vec::with_capacity(r.messages.len());
            for m in &r.messages {
                let bits = BitString::from_hex(&m.bits.hex, m.bits.len).ok_or(DecodeError::Bits {
                    from: m.from,
                    to: m.to,
                    len: m.bits.len,
                })?;
                msgs.push(Message {
                    from: node(m.from)?,
                    to: node(m.to)?,
                    bits,
                });
            }
            rounds.push(msgs);
        }
        Ok(Transcript {
            n: self.n,
            protocol: self.protocol.clone(),
            seed: self.seed,
            rounds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ccrecon_core::execute;
    use ccrecon_core::graphs::forests;
    use ccrecon_core::protocols::{build, ProtocolId};

    #[test]
    fn roundtrip_two_round() {
        let f = forests();
        let proto = build(ProtocolId::Strong2RRand, &f, 4).unwrap();
        let g = LabeledGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let run = execute(&proto, &g, 17, None).unwrap();
        let json = TranscriptJson::from_execution(&run);
        assert_eq!(json.rounds[0].messages.len(), 12);
        assert_eq!(json.rounds[0].messages[0].from, 1);
        assert_eq!(json.rounds[0].messages[0].to, 2);

        let text = serde_json::to_string(&json).unwrap();
        let back: TranscriptJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        assert_eq!(back.to_transcript().unwrap(), run.transcript);
        let outcomes: Vec<_> = back.outcomes.iter().map(|o| o.to_outcome().unwrap()).collect();
        assert_eq!(outcomes, run.outcomes);
    }

    #[test]
    fn outcome_shape() {
        let o = OutcomeJson::from(&Outcome::Reconstructed(LabeledGraph::from_edges(3, &[(1, 2)])));
        assert_eq!(
            serde_json::to_string(&o).unwrap(),
            r#"{"kind":"reconstructed","n":3,"edges":[[2,3]]}"#
        );
        assert_eq!(
            serde_json::to_string(&OutcomeJson::PromiseViolation).unwrap(),
            r#"{"kind":"promise-violation"}"#
        );
    }

    #[test]
    fn rejects_bad_hex() {
        let mut json = TranscriptJson::from_execution(
            &execute(&build(ProtocolId::Weak2R, &forests(), 2).unwrap(), &LabeledGraph::empty(2), 0, None)
                .unwrap(),
        );
        json.rounds[0].messages[0].bits.hex = "zz".into();
        assert!(matches!(json.to_transcript(), Err(DecodeError::Bits { .. })));
    }
}
