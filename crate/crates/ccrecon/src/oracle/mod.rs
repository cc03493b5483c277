//! Brute-force verification of every probabilistic and combinatorial claim
//! the protocols rest on.
//!
//! Ground truth comes from class enumeration and from [`reference`], which
//! recomputes fingerprints, codewords and thresholds without touching the
//! core crate's fingerprint, code or protocol modules.

pub mod reference;
pub mod stats;
pub mod suites;

use ccrecon_core::ecc::{encode_graph, row_distance, CodeParams};
use ccrecon_core::engine::{cost_lower_bound_check, unicast_to_broadcast, CoinStream, EngineError};
use ccrecon_core::field::{FieldError, PrimeField};
use ccrecon_core::fingerprint::count_collisions;
use ccrecon_core::graphs::GraphError;
use ccrecon_core::protocols::{build, find_separating_t, OneRoundGeneral, ProtocolError, ProtocolId, Reconstruction};
use ccrecon_core::{execute, GraphClass, LabeledGraph, Outcome};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("{protocol} on {class}, n = {n}: input {graph} gave {outcome} (seed {seed})")]
    Deterministic {
        protocol: ProtocolId,
        class: String,
        n: usize,
        graph: String,
        outcome: String,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedRange {
    pub first: u64,
    pub count: u64,
}

impl SeedRange {
    pub fn new(first: u64, count: u64) -> Self {
        SeedRange { first, count }
    }

    fn iter(self) -> std::ops::Range<u64> {
        self.first..self.first + self.count
    }
}

/// Outcome of checking one claim. `pass` holds iff
/// `empirical_rate <= bound + confidence_radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub claim: String,
    pub trials: u64,
    pub failures: u64,
    pub empirical_rate: f64,
    pub bound: f64,
    pub confidence_radius: f64,
    pub pass: bool,
    /// Claim-specific extreme value (largest collision count, smallest
    /// distance, search attempts, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl TrialReport {
    /// Zero-tolerance claim.
    pub fn exact(claim: impl Into<String>, trials: u64, failures: u64) -> Self {
        TrialReport {
            claim: claim.into(),
            trials,
            failures,
            empirical_rate: rate(failures, trials),
            bound: 0.0,
            confidence_radius: 0.0,
            pass: failures == 0,
            observed: None,
            seeds: None,
            first_failure: None,
        }
    }

    /// Claim "failure probability at most `bound`", judged at 99% confidence.
    pub fn rate(claim: impl Into<String>, trials: u64, failures: u64, bound: f64) -> Self {
        let lower = stats::clopper_pearson_lower(failures, trials, stats::CONFIDENCE);
        TrialReport {
            claim: claim.into(),
            trials,
            failures,
            empirical_rate: rate(failures, trials),
            bound,
            confidence_radius: stats::confidence_radius(failures, trials),
            pass: failures == 0 || lower <= bound,
            observed: None,
            seeds: None,
            first_failure: None,
        }
    }

    pub fn observed(mut self, v: u64) -> Self {
        self.observed = Some(v);
        self
    }

    pub fn seeds(mut self, s: SeedRange) -> Self {
        self.seeds = Some(s);
        self
    }

    pub fn first_failure(mut self, f: Option<String>) -> Self {
        self.first_failure = f;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: {}/{} failures (rate {:.4}, bound {:.4} + {:.4})",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.failures,
            self.trials,
            self.empirical_rate,
            self.bound,
            self.confidence_radius
        )
    }
}

/// Measured round widths: a single node has no links, so nothing is sent.
fn expected_widths(predicted: Vec<usize>, n: usize) -> Vec<usize> {
    if n == 1 {
        vec![0; predicted.len()]
    } else {
        predicted
    }
}

fn rate(failures: u64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        failures as f64 / trials as f64
    }
}

fn bit_vector(bits: u64, len: usize) -> Vec<u64> {
    (0..len).map(|i| (bits >> i) & 1).collect()
}

/// Every graph on `n` nodes in code order.
pub fn all_graphs_on(n: usize) -> Vec<LabeledGraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(|c| LabeledGraph::from_code(n, c)).collect()
}

/// Distinct 0/1 vectors of length `n` agree as fingerprints over `F_p` at no
/// more than `n` points. Exhaustive over all pairs when that is cheap,
/// otherwise `samples` random pairs drawn from `seed`.
pub fn verify_lemma1(n: usize, p: u64, samples: u64, seed: u64) -> Result<TrialReport, OracleError> {
    if p > 1 << 20 || !reference::is_prime(p) {
        return Err(OracleError::Precondition(format!("p = {p} must be a prime at most 2^20")));
    }
    if n == 0 || n > 63 {
        return Err(OracleError::Precondition(format!("vector length {n} outside 1..=63")));
    }
    let field = PrimeField::new(p)?;
    let vectors = 1u128 << n;
    let all_pairs = vectors * (vectors - 1) / 2;
    let exhaustive = all_pairs * u128::from(p) * n as u128 <= 200_000_000;

    let pairs: Vec<(u64, u64)> = if exhaustive {
        let v = vectors as u64;
        (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect()
    } else {
        let mut coins = CoinStream::new(seed);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        (0..samples)
            .map(|_| loop {
                let a = coins.next_u64() & mask;
                let b = coins.next_u64() & mask;
                if a != b {
                    break (a, b);
                }
            })
            .collect()
    };

    let results: Vec<(u64, bool)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (va, vb) = (bit_vector(a, n), bit_vector(b, n));
            let roots = reference::agreeing_points(&va, &vb, p);
            (roots, roots == count_collisions(&va, &vb, field))
        })
        .collect();

    let mut failures = 0;
    let mut first = None;
    let mut worst = 0;
    for (&(a, b), &(roots, agree)) in pairs.iter().zip(&results) {
        worst = worst.max(roots);
        if roots > n as u64 || !agree {
            failures += 1;
            first.get_or_insert_with(|| format!("{a:#x} vs {b:#x}: {roots} agreeing points"));
        }
    }
    let mut report = TrialReport::exact(
        format!(
            "fingerprint collisions <= {n} over F_{p} ({})",
            if exhaustive { "all pairs" } else { "sampled pairs" }
        ),
        pairs.len() as u64,
        failures,
    )
    .observed(worst)
    .first_failure(first);
    if !exhaustive {
        report = report.seeds(SeedRange::new(seed, 1));
    }
    Ok(report)
}

/// All distinct bit vectors of length `n` have codewords differing in at
/// least `k` positions; the core encoder must also agree with Newton
/// interpolation on every vector. `observed` is the smallest distance seen.
pub fn verify_code_distance(n: usize, k: usize) -> Result<TrialReport, OracleError> {
    if n == 0 || n > 8 || k > n {
        return Err(OracleError::Precondition(format!("need 1 <= n <= 8 and k <= n, got n = {n}, k = {k}")));
    }
    let claim = format!("codeword distance >= {k} (n = {n})");
    if k == 0 {
        return Ok(TrialReport::exact(claim + ", vacuous", 0, 0));
    }
    let params = CodeParams::new(n, k)?;
    let q = reference::next_prime((n + k) as u128);
    let words: Vec<Vec<u64>> = (0..1u64 << n).map(|x| params.encode_bits(x)).collect();

    let mut failures = 0;
    let mut first = None;
    for (x, w) in words.iter().enumerate() {
        if params.q().modulus() != q || *w != reference::newton_codeword(&bit_vector(x as u64, n), k, q) {
            failures += 1;
            first.get_or_insert_with(|| format!("encoder disagrees with interpolation on {x:#b}"));
        }
    }
    let mut min = u64::MAX;
    let mut trials = words.len() as u64;
    for a in 0..words.len() {
        for b in a + 1..words.len() {
            trials += 1;
            let d = words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count() as u64;
            min = min.min(d);
            if d < k as u64 {
                failures += 1;
                first.get_or_insert_with(|| format!("{a:#b} vs {b:#b}: distance {d}"));
            }
        }
    }
    let report = TrialReport::exact(claim, trials, failures).first_failure(first);
    Ok(if min == u64::MAX { report } else { report.observed(min) })
}

/// All distinct graphs on `n` nodes have coded matrices at row distance
/// above `k`, and the core's `C(G)` matches the reference construction.
/// `observed` is the smallest row distance seen.
pub fn verify_coded_row_distance(n: usize, k: usize) -> Result<TrialReport, OracleError> {
    if n == 0 || n > 5 || k == 0 || k > n {
        return Err(OracleError::Precondition(format!("need 1 <= n <= 5 and 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let params = CodeParams::new(n, k)?;
    let q = params.q().modulus();
    let graphs = all_graphs_on(n);
    let coded: Vec<_> = graphs.iter().map(|g| encode_graph(g, &params)).collect();

    let mut failures = 0;
    let mut trials = 0;
    let mut first = None;
    for (g, c) in graphs.iter().zip(&coded) {
        trials += 1;
        if !c.matrix().rows().eq(reference::coded_matrix(g, k, q).iter().map(Vec::as_slice)) {
            failures += 1;
            first.get_or_insert_with(|| format!("C({g}) disagrees with the reference"));
        }
    }
    let mut min = u64::MAX;
    for a in 0..coded.len() {
        for b in a + 1..coded.len() {
            trials += 1;
            let d = row_distance(coded[a].matrix(), coded[b].matrix()) as u64;
            min = min.min(d);
            if d <= k as u64 {
                failures += 1;
                first.get_or_insert_with(|| format!("{} vs {}: row distance {d}", graphs[a], graphs[b]));
            }
        }
    }
    let report = TrialReport::exact(format!("row distance of C(G) > {k} (n = {n})"), trials, failures)
        .first_failure(first);
    Ok(if min == u64::MAX { report } else { report.observed(min) })
}

/// The separator search succeeds, uses the expected primes, and its points
/// separate every pair of members under the reference fingerprint.
/// `observed` is the number of draws the search needed.
pub fn verify_separator(class: &GraphClass, n: usize, k: usize) -> Result<TrialReport, OracleError> {
    let sep = find_separating_t(class, n, k)?;
    let members = class.enumerate(n)?;
    let size = members.len() as u64;
    let p = reference::next_prime(reference::separation_threshold(n, k, size));
    let q = reference::next_prime((n + k) as u128);

    let claim = format!("separator for {} n = {n} k = {k} (p = {p})", class.name());
    let mut first = None;
    let mut failures = 0;
    if sep.prime_p.modulus() != p || sep.params.q().modulus() != q {
        failures += 1;
        first = Some(format!(
            "primes p = {}, q = {} differ from expected {p}, {q}",
            sep.prime_p.modulus(),
            sep.params.q().modulus()
        ));
    }
    let points: Vec<u64> = sep.points.iter().map(|t| t.value()).collect();
    if points.len() != n + k || points.iter().any(|&t| t >= p) {
        failures += 1;
        first.get_or_insert_with(|| "malformed point vector".to_string());
    }
    let pairs = size * size.saturating_sub(1) / 2;
    if failures == 0 {
        let collisions = reference::colliding_pairs(members, k, q, &points, p);
        if collisions > 0 {
            first.get_or_insert_with(|| format!("{collisions} colliding pairs"));
        }
        failures += collisions;
    }
    Ok(TrialReport::exact(claim, pairs, failures)
        .observed(sep.attempts)
        .first_failure(first))
}

/// Deleting any one vertex of a member leaves a member.
pub fn verify_hereditary_class(class: &GraphClass, n_max: usize) -> Result<TrialReport, OracleError> {
    let mut trials = 0;
    let mut failures = 0;
    let mut first = None;
    for n in 2..=n_max {
        for g in class.enumerate(n)? {
            for v in 0..n {
                trials += 1;
                let h = g.induced_by_mask(((1u64 << n) - 1) & !(1 << v));
                if !class.contains(&h) {
                    failures += 1;
                    first.get_or_insert_with(|| format!("{g} minus node {} is not a member", v + 1));
                }
            }
        }
    }
    Ok(TrialReport::exact(
        format!("{} closed under vertex deletion up to n = {n_max}", class.name()),
        trials,
        failures,
    )
    .first_failure(first))
}

#[derive(Default, Clone)]
struct Tally {
    runs: u64,
    failures: u64,
    bandwidth_mismatch: u64,
    lower_bound_fail: u64,
    lower_bound_checked: u64,
    first_failure: Option<String>,
    first_bandwidth: Option<String>,
}

/// Sweeps `id` over all members of `class` at `n` (and, for strong
/// protocols with `non_members`, over every other graph on `n` nodes),
/// comparing outputs with enumeration truth.
///
/// Deterministic protocols run once per graph and any wrong output is a hard
/// error. Randomized ones run once per seed; their reports compare failure
/// rates with the guaranteed bound, both pooled and for the worst graph.
pub fn verify_protocol(
    class: &GraphClass,
    n: usize,
    id: ProtocolId,
    seeds: SeedRange,
    non_members: bool,
) -> Result<Vec<TrialReport>, OracleError> {
    let proto = build(id, class, n)?;
    let predicted = expected_widths(proto.predicted_round_bits(), n);
    let seeds = if id.is_deterministic() {
        SeedRange::new(seeds.first, 1)
    } else {
        seeds
    };

    let mut inputs: Vec<(LabeledGraph, bool)> = class.enumerate(n)?.iter().map(|g| (g.clone(), true)).collect();
    let member_count = inputs.len();
    if id.is_strong() && non_members {
        inputs.extend(all_graphs_on(n).into_iter().filter(|g| !class.contains(g)).map(|g| (g, false)));
    }

    let tallies: Vec<Result<Tally, OracleError>> = inputs
        .par_iter()
        .map(|(g, member)| {
            let mut t = Tally::default();
            for seed in seeds.iter() {
                let run = execute(&proto, g, seed, None)?;
                t.runs += 1;
                let out = run.outcome();
                let ok = if *member {
                    *out == Outcome::Reconstructed(g.clone())
                } else {
                    !out.is_accept()
                };
                if !ok {
                    if id.is_deterministic() {
                        return Err(OracleError::Deterministic {
                            protocol: id,
                            class: class.name().to_string(),
                            n,
                            graph: g.to_string(),
                            outcome: describe(out),
                            seed,
                        });
                    }
                    t.failures += 1;
                    t.first_failure
                        .get_or_insert_with(|| format!("{g} seed {seed} -> {}", describe(out)));
                }
                let measured = run.transcript.round_bandwidths();
                if measured != predicted {
                    t.bandwidth_mismatch += 1;
                    t.first_bandwidth
                        .get_or_insert_with(|| format!("{g} seed {seed}: {measured:?} vs {predicted:?}"));
                }
                if id.is_deterministic() && *member && ok {
                    t.lower_bound_checked += 1;
                    if !cost_lower_bound_check(class, n, &run.transcript)? {
                        t.lower_bound_fail += 1;
                    }
                }
            }
            Ok(t)
        })
        .collect();
    let tallies = tallies.into_iter().collect::<Result<Vec<_>, _>>()?;

    let label = format!("{id} {} n = {n}", class.name());
    let inv_n = 1.0 / n as f64;
    let member_bound = if id == ProtocolId::Hereditary1R { inv_n } else { 0.0 };
    let non_member_bound = if id.is_deterministic() { 0.0 } else { inv_n };

    let (members, others) = tallies.split_at(member_count);
    let mut reports = Vec::new();
    let mut claim_reports = |part: &[Tally], what: &str, bound: f64| {
        if part.is_empty() {
            return;
        }
        let runs = part.iter().map(|t| t.runs).sum();
        let failures = part.iter().map(|t| t.failures).sum();
        let first = part.iter().find_map(|t| t.first_failure.clone());
        let pooled = if id.is_deterministic() {
            TrialReport::exact(format!("{label}: {what}"), runs, failures)
        } else {
            TrialReport::rate(format!("{label}: {what}"), runs, failures, bound).seeds(seeds)
        };
        reports.push(pooled.first_failure(first));
        if !id.is_deterministic() {
            let worst = part.iter().max_by_key(|t| t.failures).expect("non-empty");
            reports.push(
                TrialReport::rate(
                    format!("{label}: {what}, worst single graph"),
                    worst.runs,
                    worst.failures,
                    bound,
                )
                .seeds(seeds)
                .first_failure(worst.first_failure.clone()),
            );
        }
    };
    claim_reports(members, "members reconstructed exactly", member_bound);
    claim_reports(others, "non-members rejected", non_member_bound);

    let runs = tallies.iter().map(|t| t.runs).sum();
    let mismatches = tallies.iter().map(|t| t.bandwidth_mismatch).sum();
    reports.push(
        TrialReport::exact(format!("{label}: round bits equal {predicted:?}"), runs, mismatches)
            .first_failure(tallies.iter().find_map(|t| t.first_bandwidth.clone())),
    );
    if id.is_deterministic() {
        let checked = tallies.iter().map(|t| t.lower_bound_checked).sum();
        let failed = tallies.iter().map(|t| t.lower_bound_fail).sum();
        reports.push(TrialReport::exact(
            format!("{label}: n + (n-1) R b >= log2 |G_n|"),
            checked,
            failed,
        ));
    }
    Ok(reports)
}

/// The broadcast form of the one-round general protocol gives the same
/// outputs as the original on every graph with `n` nodes, using exactly one
/// more bit. `observed` is the transformed bandwidth.
pub fn verify_broadcast_transform(class: &GraphClass, n: usize, strong: bool, seed: u64) -> Result<TrialReport, OracleError> {
    let proto = OneRoundGeneral::new(class, n, strong)?;
    let bcast = unicast_to_broadcast(&proto)?;
    let graphs = all_graphs_on(n);
    let results: Vec<Result<Option<String>, OracleError>> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let s = seed.wrapping_add(i as u64);
            let a = execute(&proto, g, s, None)?;
            let b = execute(&bcast, g, s, None)?;
            let (wa, wb) = (a.transcript.bandwidth(), b.transcript.bandwidth());
            let want = if n == 1 { 0 } else { wa + 1 };
            Ok(if a.outcomes != b.outcomes {
                Some(format!("{g} seed {s}: outputs differ"))
            } else if wb != want {
                Some(format!("{g} seed {s}: bandwidth {wb}, expected {want}"))
            } else {
                None
            })
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let failures = results.iter().filter(|r| r.is_some()).count() as u64;
    let b = expected_widths(proto.predicted_round_bits(), n)[0] as u64 + u64::from(n > 1);
    Ok(TrialReport::exact(
        format!(
            "broadcast transform of {} on {} graphs, n = {n}",
            if strong { "general-1r-strong" } else { "general-1r-weak" },
            class.name()
        ),
        graphs.len() as u64,
        failures,
    )
    .observed(b)
    .first_failure(results.into_iter().flatten().next()))
}

pub fn describe(o: &Outcome) -> String {
    match o {
        Outcome::Reconstructed(g) => format!("reconstructed {g}"),
        Outcome::Reject => "reject".to_string(),
        Outcome::PromiseViolation => "promise violation".to_string(),
    }
}
