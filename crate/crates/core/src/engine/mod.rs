//! Synchronous congested-clique execution.
//!
//! `n` nodes, all pairwise linked, run a fixed number of rounds. In round `r`
//! each node computes its outgoing messages from its own id, its local input
//! (its adjacency row), its coins and what it received in rounds before `r`.
//! Rounds are barriers. Every message crossing a link is logged in the
//! [`Transcript`]; its bandwidth is the longest message seen and its cost is
//! rounds times bandwidth.

mod bits;
pub mod coins;

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub use bits::{BitReader, BitString};
pub use coins::CoinStream;

use crate::graphs::{GraphClass, GraphError, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundMode {
    /// A node may send a different message on each link.
    Unicast,
    /// A node sends the same message on all its links.
    Broadcast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinMode {
    Private,
    Public,
}

/// What one node sends in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outgoing {
    Broadcast(BitString),
    /// One message per destination, indexed by node; the sender's own slot is
    /// kept locally and never crosses a link.
    Unicast(Vec<BitString>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Outcome {
    Reconstructed(LabeledGraph),
    Reject,
    /// A weak protocol found no class member consistent with what it heard,
    /// which can only happen when the input is outside the class.
    PromiseViolation,
}

impl Outcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, Outcome::Reconstructed(_))
    }
}

/// Everything a node may look at.
#[derive(Debug, Clone)]
pub struct NodeContext {
    id: usize,
    n: usize,
    local_input: u64,
    inbox: Vec<Vec<BitString>>,
    own: Vec<BitString>,
    coins: CoinStream,
}

impl NodeContext {
    fn new(id: usize, n: usize, local_input: u64, coins: CoinStream) -> Self {
        NodeContext {
            id,
            n,
            local_input,
            inbox: Vec::new(),
            own: Vec::new(),
            coins,
        }
    }

    /// Reassembles a context from a recorded view. Used to replay what another
    /// node would have seen; the coin stream is not part of a view.
    pub fn from_view(
        id: usize,
        n: usize,
        local_input: u64,
        inbox: Vec<Vec<BitString>>,
        own: Vec<BitString>,
    ) -> Self {
        assert_eq!(inbox.len(), own.len());
        NodeContext {
            id,
            n,
            local_input,
            inbox,
            own,
            coins: CoinStream::new(0),
        }
    }

    /// 0-based node index.
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x_v` as a bitmask: bit `j` is set iff this node is adjacent to `j`.
    pub fn local_input(&self) -> u64 {
        self.local_input
    }

    pub fn neighbor(&self, j: usize) -> bool {
        (self.local_input >> j) & 1 == 1
    }

    pub fn rounds_completed(&self) -> usize {
        self.inbox.len()
    }

    /// Message received from `from` in a completed round.
    pub fn received(&self, round: usize, from: usize) -> &BitString {
        assert_ne!(from, self.id, "a node has no link to itself");
        &self.inbox[round][from]
    }

    /// What this node kept for itself in a completed round: its broadcast, or
    /// its own slot of a unicast.
    pub fn own_message(&self, round: usize) -> &BitString {
        &self.own[round]
    }

    /// The message of node `from` as this node knows it: received for others,
    /// kept for itself.
    pub fn heard(&self, round: usize, from: usize) -> &BitString {
        if from == self.id {
            self.own_message(round)
        } else {
            self.received(round, from)
        }
    }

    pub fn coins(&mut self) -> &mut CoinStream {
        &mut self.coins
    }
}

/// A synchronous congested-clique algorithm.
pub trait Protocol: Sync {
    fn name(&self) -> &str;

    fn rounds(&self) -> usize;

    fn mode(&self, round: usize) -> RoundMode;

    fn coin_mode(&self) -> CoinMode {
        CoinMode::Private
    }

    /// Messages of `ctx`'s node in `round` (0-based).
    fn messages(&self, ctx: &mut NodeContext, round: usize) -> Outgoing;

    /// Output after the last round. Cannot draw coins.
    fn finalize(&self, ctx: &NodeContext) -> Outcome;

    /// Whether all nodes must output the same thing.
    fn requires_agreement(&self) -> bool {
        true
    }
}

macro_rules! forward_protocol {
    ($($ty:ty),*) => {$(
        impl<P: Protocol + ?Sized> Protocol for $ty {
            fn name(&self) -> &str {
                (**self).name()
            }
            fn rounds(&self) -> usize {
                (**self).rounds()
            }
            fn mode(&self, round: usize) -> RoundMode {
                (**self).mode(round)
            }
            fn coin_mode(&self) -> CoinMode {
                (**self).coin_mode()
            }
            fn messages(&self, ctx: &mut NodeContext, round: usize) -> Outgoing {
                (**self).messages(ctx, round)
            }
            fn finalize(&self, ctx: &NodeContext) -> Outcome {
                (**self).finalize(ctx)
            }
            fn requires_agreement(&self) -> bool {
                (**self).requires_agreement()
            }
        }
    )*};
}

forward_protocol!(&P, alloc::boxed::Box<P>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(
        "bandwidth violation: node {} sent {bits} bits to node {} in round {} (cap {cap})",
        node + 1, to + 1, round + 1
    )]
    BandwidthViolation {
        node: usize,
        to: usize,
        round: usize,
        bits: usize,
        cap: usize,
    },
    #[error("node {} sent different messages in broadcast round {}", node + 1, round + 1)]
    BroadcastViolation { node: usize, round: usize },
    #[error("node {} produced {got} unicast messages in round {}, expected {expected}", node + 1, round + 1)]
    MalformedOutgoing {
        node: usize,
        round: usize,
        got: usize,
        expected: usize,
    },
    #[error("nodes {} and {} disagree on the output", first + 1, other + 1)]
    ConsistencyViolation { first: usize, other: usize },
    #[error("only one-round protocols can be made broadcast, got {rounds} rounds")]
    UnsupportedTransform { rounds: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub from: usize,
    pub to: usize,
    pub bits: BitString,
}

/// Per-round, per-link log of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub n: usize,
    pub protocol: String,
    pub seed: u64,
    /// Messages of each round, ordered by `(from, to)`.
    pub rounds: Vec<Vec<Message>>,
}

impl Transcript {
    /// `b`: the longest message over all links and rounds.
    pub fn bandwidth(&self) -> usize {
        (0..self.rounds.len())
            .map(|r| self.round_bandwidth(r))
            .max()
            .unwrap_or(0)
    }

    pub fn round_bandwidth(&self, round: usize) -> usize {
        self.rounds[round]
            .iter()
            .map(|m| m.bits.len())
            .max()
            .unwrap_or(0)
    }

    pub fn round_bandwidths(&self) -> Vec<usize> {
        (0..self.rounds.len()).map(|r| self.round_bandwidth(r)).collect()
    }

    /// `R`.
    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }

    /// `R * b`.
    pub fn cost(&self) -> usize {
        self.rounds_used() * self.bandwidth()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub outcomes: Vec<Outcome>,
    pub transcript: Transcript,
}

impl Execution {
    /// The common output. Only meaningful for protocols requiring agreement,
    /// where [`execute`] has already checked it.
    pub fn outcome(&self) -> &Outcome {
        &self.outcomes[0]
    }
}

/// Runs `protocol` on input `g`. Deterministic in `(protocol, g, seed)`.
pub fn execute<P: Protocol + ?Sized>(
    protocol: &P,
    g: &LabeledGraph,
    seed: u64,
    bandwidth_cap: Option<usize>,
) -> Result<Execution, EngineError> {
    let n = g.n();
    let mut nodes: Vec<NodeContext> = (0..n)
        .map(|v| {
            let s = match protocol.coin_mode() {
                CoinMode::Private => coins::node_seed(seed, v),
                CoinMode::Public => seed,
            };
            NodeContext::new(v, n, g.row(v), CoinStream::new(s))
        })
        .collect();

    let mut rounds = Vec::with_capacity(protocol.rounds());
    for round in 0..protocol.rounds() {
        let mode = protocol.mode(round);
        let mut sent: Vec<Vec<BitString>> = Vec::with_capacity(n);
        for (v, ctx) in nodes.iter_mut().enumerate() {
            let per_dest = match protocol.messages(ctx, round) {
                Outgoing::Broadcast(b) => vec![b; n],
                Outgoing::Unicast(list) => {
                    if list.len() != n {
                        return Err(EngineError::MalformedOutgoing {
                            node: v,
                            round,
                            got: list.len(),
                            expected: n,
                        });
                    }
                    if mode == RoundMode::Broadcast {
                        let mut others = list.iter().enumerate().filter(|(j, _)| *j != v);
                        if let Some((_, first)) = others.next() {
                            if others.any(|(_, m)| m != first) {
                                return Err(EngineError::BroadcastViolation { node: v, round });
                            }
                        }
                    }
                    list
                }
            };
            sent.push(per_dest);
        }

        let mut log = Vec::with_capacity(n * n.saturating_sub(1));
        for (from, per_dest) in sent.iter().enumerate() {
            for (to, bits) in per_dest.iter().enumerate() {
                if to == from {
                    continue;
                }
                if let Some(cap) = bandwidth_cap {
                    if bits.len() > cap {
                        return Err(EngineError::BandwidthViolation {
                            node: from,
                            to,
                            round,
                            bits: bits.len(),
                            cap,
                        });
                    }
                }
                log.push(Message {
                    from,
                    to,
                    bits: bits.clone(),
                });
            }
        }

        for (v, ctx) in nodes.iter_mut().enumerate() {
            let inbox: Vec<BitString> = (0..n)
                .map(|from| {
                    if from == v {
                        BitString::new()
                    } else {
                        sent[from][v].clone()
                    }
                })
                .collect();
            ctx.inbox.push(inbox);
            ctx.own.push(core::mem::take(&mut sent[v][v]));
        }
        rounds.push(log);
    }

    let outcomes: Vec<Outcome> = nodes.iter().map(|ctx| protocol.finalize(ctx)).collect();
    if protocol.requires_agreement() {
        if let Some(other) = outcomes.iter().position(|o| *o != outcomes[0]) {
            return Err(EngineError::ConsistencyViolation { first: 0, other });
        }
    }
    Ok(Execution {
        outcomes,
        transcript: Transcript {
            n,
            protocol: protocol.name().to_string(),
            seed,
            rounds,
        },
    })
}

/// One-round broadcast simulation of a one-round protocol: node `j`
/// broadcasts the message it would send to node 1 followed by one bit telling
/// whether it is adjacent to node 1. Afterwards every node holds node 1's
/// view and outputs what node 1 would.
#[derive(Debug, Clone)]
pub struct BroadcastTransform<P> {
    inner: P,
    name: String,
}

pub fn unicast_to_broadcast<P: Protocol>(protocol: P) -> Result<BroadcastTransform<P>, EngineError> {
    if protocol.rounds() != 1 {
        return Err(EngineError::UnsupportedTransform {
            rounds: protocol.rounds(),
        });
    }
    let mut name = protocol.name().to_string();
    name.push_str("+broadcast");
    Ok(BroadcastTransform {
        inner: protocol,
        name,
    })
}

impl<P> BroadcastTransform<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Protocol> Protocol for BroadcastTransform<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn rounds(&self) -> usize {
        1
    }

    fn mode(&self, _round: usize) -> RoundMode {
        RoundMode::Broadcast
    }

    fn coin_mode(&self) -> CoinMode {
        self.inner.coin_mode()
    }

    fn messages(&self, ctx: &mut NodeContext, round: usize) -> Outgoing {
        let mut msg = match self.inner.messages(ctx, round) {
            Outgoing::Broadcast(b) => b,
            Outgoing::Unicast(mut list) => core::mem::take(&mut list[0]),
        };
        msg.push_bit(ctx.neighbor(0));
        Outgoing::Broadcast(msg)
    }

    fn finalize(&self, ctx: &NodeContext) -> Outcome {
        let n = ctx.n();
        let mut input = 0u64;
        let mut inbox = vec![BitString::new(); n];
        let mut own = BitString::new();
        for j in 0..n {
            let heard = ctx.heard(0, j);
            let Some(cut) = heard.len().checked_sub(1) else {
                return Outcome::Reject;
            };
            if heard.bit(cut) {
                input |= 1 << j;
            }
            if j == 0 {
                own = heard.prefix(cut);
            } else {
                inbox[j] = heard.prefix(cut);
            }
        }
        let view = NodeContext::from_view(0, n, input, vec![inbox], vec![own]);
        self.inner.finalize(&view)
    }

    fn requires_agreement(&self) -> bool {
        true
    }
}

/// Information-theoretic sanity check `n + (n-1) R b >= log2 |G_n|` for a
/// successful deterministic reconstruction run.
pub fn cost_lower_bound_check(
    class: &GraphClass,
    n: usize,
    transcript: &Transcript,
) -> Result<bool, GraphError> {
    let size = class.cardinality(n)?;
    let bits = n as u128 + (n as u128 - 1) * transcript.cost() as u128;
    Ok(size <= 1 || bits >= 64 || (1u128 << bits) >= u128::from(size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{all_graphs, empty_graphs, forests};

    /// Every node broadcasts its degree in two bits; all accept the triangle
    /// iff every degree heard is 2.
    struct DegreeBroadcast;

    impl Protocol for DegreeBroadcast {
        fn name(&self) -> &str {
            "degree-broadcast"
        }
        fn rounds(&self) -> usize {
            1
        }
        fn mode(&self, _: usize) -> RoundMode {
            RoundMode::Broadcast
        }
        fn messages(&self, ctx: &mut NodeContext, _: usize) -> Outgoing {
            let mut b = BitString::new();
            b.push_bits(u64::from(ctx.local_input().count_ones()), 2);
            Outgoing::Broadcast(b)
        }
        fn finalize(&self, ctx: &NodeContext) -> Outcome {
            let all_two = (0..ctx.n()).all(|j| ctx.heard(0, j).reader().read(2) == Some(2));
            if all_two {
                Outcome::Reconstructed(LabeledGraph::complete(ctx.n()))
            } else {
                Outcome::Reject
            }
        }
    }

    /// Node i tells node j whether they are adjacent, plus one coin bit per link.
    struct EchoRow;

    impl Protocol for EchoRow {
        fn name(&self) -> &str {
            "echo-row"
        }
        fn rounds(&self) -> usize {
            1
        }
        fn mode(&self, _: usize) -> RoundMode {
            RoundMode::Unicast
        }
        fn messages(&self, ctx: &mut NodeContext, _: usize) -> Outgoing {
            let n = ctx.n();
            let list = (0..n)
                .map(|j| {
                    let mut b = BitString::new();
                    if j != ctx.id() {
                        b.push_bit(ctx.neighbor(j));
                        b.push_bit(ctx.coins().below(2) == 1);
                    }
                    b
                })
                .collect();
            Outgoing::Unicast(list)
        }
        fn finalize(&self, ctx: &NodeContext) -> Outcome {
            // Node 1's view determines the edges at node 1; report the star
            // of those edges so every node can be compared with node 1.
            let mut g = LabeledGraph::empty(ctx.n());
            for j in 0..ctx.n() {
                if j != ctx.id() && ctx.received(0, j).bit(0) {
                    g.add_edge(ctx.id(), j);
                }
            }
            Outcome::Reconstructed(g)
        }
        fn requires_agreement(&self) -> bool {
            false
        }
    }

    #[test]
    fn degree_broadcast_on_triangle() {
        let run = execute(&DegreeBroadcast, &LabeledGraph::complete(3), 7, None).unwrap();
        assert_eq!(run.transcript.bandwidth(), 2);
        assert_eq!(run.transcript.rounds_used(), 1);
        assert_eq!(run.transcript.cost(), 2);
        assert_eq!(run.transcript.rounds[0].len(), 6);
        assert!(run.outcomes.iter().all(|o| o.is_accept()));
    }

    #[test]
    fn bandwidth_cap_enforced() {
        let err = execute(&DegreeBroadcast, &LabeledGraph::complete(3), 7, Some(1)).unwrap_err();
        assert_eq!(
            err,
            EngineError::BandwidthViolation {
                node: 0,
                to: 1,
                round: 0,
                bits: 2,
                cap: 1
            }
        );
        assert!(execute(&DegreeBroadcast, &LabeledGraph::complete(3), 7, Some(2)).is_ok());
    }

    #[test]
    fn disagreement_detected() {
        struct Split;
        impl Protocol for Split {
            fn name(&self) -> &str {
                "split"
            }
            fn rounds(&self) -> usize {
                0
            }
            fn mode(&self, _: usize) -> RoundMode {
                RoundMode::Broadcast
            }
            fn messages(&self, _: &mut NodeContext, _: usize) -> Outgoing {
                unreachable!()
            }
            fn finalize(&self, ctx: &NodeContext) -> Outcome {
                if ctx.id() == 2 {
                    Outcome::Reject
                } else {
                    Outcome::PromiseViolation
                }
            }
        }
        let err = execute(&Split, &LabeledGraph::empty(3), 0, None).unwrap_err();
        assert_eq!(err, EngineError::ConsistencyViolation { first: 0, other: 2 });
    }

    #[test]
    fn broadcast_mode_checked() {
        struct Liar;
        impl Protocol for Liar {
            fn name(&self) -> &str {
                "liar"
            }
            fn rounds(&self) -> usize {
                1
            }
            fn mode(&self, _: usize) -> RoundMode {
                RoundMode::Broadcast
            }
            fn messages(&self, ctx: &mut NodeContext, _: usize) -> Outgoing {
                Outgoing::Unicast(
                    (0..ctx.n())
                        .map(|j| {
                            let mut b = BitString::new();
                            b.push_bit(j == 2);
                            b
                        })
                        .collect(),
                )
            }
            fn finalize(&self, _: &NodeContext) -> Outcome {
                Outcome::Reject
            }
        }
        let err = execute(&Liar, &LabeledGraph::empty(3), 0, None).unwrap_err();
        assert_eq!(err, EngineError::BroadcastViolation { node: 0, round: 0 });
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let a = execute(&EchoRow, &g, 11, None).unwrap();
        let b = execute(&EchoRow, &g, 11, None).unwrap();
        assert_eq!(a, b);
        let differs = (0..20).any(|s| execute(&EchoRow, &g, s, None).unwrap().transcript != a.transcript);
        assert!(differs);
    }

    #[test]
    fn messages_depend_only_on_incident_inputs() {
        let g = LabeledGraph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
        let base = execute(&EchoRow, &g, 3, None).unwrap().transcript;
        let mut h = g.clone();
        h.toggle_edge(1, 3);
        let flipped = execute(&EchoRow, &h, 3, None).unwrap().transcript;
        for (m, m2) in base.rounds[0].iter().zip(&flipped.rounds[0]) {
            if m.from != 1 && m.from != 3 {
                assert_eq!(m, m2);
            }
        }
    }

    #[test]
    fn transform_of_unicast_protocol() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (0, 3), (2, 3)]);
        let original = execute(&EchoRow, &g, 5, None).unwrap();
        let bcast = unicast_to_broadcast(EchoRow).unwrap();
        let run = execute(&bcast, &g, 5, None).unwrap();
        assert!(run.outcomes.iter().all(|o| *o == original.outcomes[0]));
        assert_eq!(run.transcript.bandwidth(), original.transcript.bandwidth() + 1);
        // Node 1 announces it is not adjacent to itself.
        let from_node1 = &run.transcript.rounds[0][0].bits;
        assert!(!from_node1.bit(from_node1.len() - 1));
    }

    #[test]
    fn transform_rejects_multi_round() {
        #[derive(Debug)]
        struct Two;
        impl Protocol for Two {
            fn name(&self) -> &str {
                "two"
            }
            fn rounds(&self) -> usize {
                2
            }
            fn mode(&self, _: usize) -> RoundMode {
                RoundMode::Unicast
            }
            fn messages(&self, _: &mut NodeContext, _: usize) -> Outgoing {
                Outgoing::Broadcast(BitString::new())
            }
            fn finalize(&self, _: &NodeContext) -> Outcome {
                Outcome::Reject
            }
        }
        assert_eq!(
            unicast_to_broadcast(Two).unwrap_err(),
            EngineError::UnsupportedTransform { rounds: 2 }
        );
    }

    #[test]
    fn lower_bound_examples() {
        let g = LabeledGraph::complete(3);
        let run = execute(&DegreeBroadcast, &g, 0, None).unwrap();
        assert_eq!(cost_lower_bound_check(&all_graphs(), 3, &run.transcript), Ok(true));
        assert_eq!(cost_lower_bound_check(&empty_graphs(), 3, &run.transcript), Ok(true));
        // A silent run on forests of order 6 carries only the 6 local bits,
        // fewer than log2 2932.
        let silent = Transcript {
            n: 6,
            protocol: "silent".into(),
            seed: 0,
            rounds: vec![],
        };
        assert_eq!(cost_lower_bound_check(&forests(), 6, &silent), Ok(false));
    }
}
