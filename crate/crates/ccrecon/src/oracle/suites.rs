//! Named groups of checks, as run by `ccrecon verify`.

use ccrecon_core::graphs::{all_graphs, class_by_name, forests};
use ccrecon_core::protocols::ProtocolId;
use ccrecon_core::GraphClass;

use super::{
    verify_broadcast_transform, verify_code_distance, verify_coded_row_distance, verify_hereditary_class,
    verify_lemma1, verify_protocol, verify_separator, OracleError, SeedRange, TrialReport,
};

/// Classes with the orders to check them at.
pub struct Selection {
    pub entries: Vec<(GraphClass, Vec<usize>)>,
}

impl Selection {
    /// Forests up to 5 nodes, all graphs up to 4, the singleton class of
    /// edgeless graphs up to 4.
    pub fn standard() -> Self {
        Selection {
            entries: vec![
                (forests(), (1..=5).collect()),
                (all_graphs(), (1..=4).collect()),
                (class_by_name("empty-graphs").expect("catalog class"), (1..=4).collect()),
            ],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|(_, ns)| ns.is_empty())
    }
}

pub fn lemma1() -> Result<Vec<TrialReport>, OracleError> {
    let mut out = Vec::new();
    for (n, p) in [(2, 5), (4, 13), (6, 101), (8, 257)] {
        out.push(verify_lemma1(n, p, 0, 0)?);
    }
    out.push(verify_lemma1(12, 4099, 300, 0)?);
    Ok(out)
}

pub fn distance() -> Result<Vec<TrialReport>, OracleError> {
    let mut out = Vec::new();
    for n in 1..=8 {
        for k in [0, 1, 2, 4].into_iter().filter(|&k| k <= n) {
            out.push(verify_code_distance(n, k)?);
        }
    }
    for n in 1..=4 {
        let mut ks: Vec<usize> = [1, 2, n].into_iter().filter(|&k| k <= n).collect();
        ks.dedup();
        for k in ks {
            out.push(verify_coded_row_distance(n, k)?);
        }
    }
    Ok(out)
}

pub fn separator(sel: &Selection) -> Result<Vec<TrialReport>, OracleError> {
    let mut out = Vec::new();
    for (class, ns) in &sel.entries {
        for &n in ns {
            let mut ks: Vec<usize> = [2, n].into_iter().filter(|&k| k <= n).collect();
            ks.dedup();
            for k in ks {
                out.push(verify_separator(class, n, k)?);
            }
        }
    }
    Ok(out)
}

pub fn protocols(sel: &Selection, seeds: SeedRange) -> Result<Vec<TrialReport>, OracleError> {
    let mut out = Vec::new();
    for (class, ns) in &sel.entries {
        for &n in ns {
            for id in ProtocolId::ALL {
                if id == ProtocolId::Hereditary1R && !class.is_hereditary() {
                    continue;
                }
                out.extend(verify_protocol(class, n, id, seeds, true)?);
            }
            for strong in [false, true] {
                out.push(verify_broadcast_transform(class, n, strong, seeds.first)?);
            }
        }
    }
    Ok(out)
}

pub fn hereditary(sel: &Selection, seeds: SeedRange) -> Result<Vec<TrialReport>, OracleError> {
    let mut out = Vec::new();
    for (class, ns) in &sel.entries {
        if !class.is_hereditary() {
            continue;
        }
        if let Some(&top) = ns.iter().max() {
            out.push(verify_hereditary_class(class, top.min(class.n_max()))?);
        }
        for &n in ns {
            out.extend(verify_protocol(class, n, ProtocolId::Hereditary1R, seeds, true)?);
        }
    }
    Ok(out)
}
