//! The characterisation: a unital is classical exactly when some pair of its
//! points has a 2-point stabiliser of order q²−1.
//!
//! The two sides are computed without reference to each other: the
//! stabiliser side only enumerates diagonal projectivities in pair frames,
//! the classical side only solves for a Hermitian Gram matrix.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::collineation::{two_point_stabilizer, StabilizerCertificate};
use crate::error::Result;
use crate::unital::{classicality_check, HermitianForm, Unital};

/// Pairs examined per parallel batch in an early-exit scan. Fixed so the
/// examined count does not depend on the worker count.
const BATCH: usize = 32;

/// Default sampling cap: exhaustive below q = 7.
pub fn default_max_pairs(q: u32) -> Option<usize> {
    (q >= 7).then_some(500)
}

/// All index pairs i < j of an n-point set, lexicographically.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// At most `max` pairs, drawn uniformly without replacement and kept in
/// lexicographic order; every pair when `max` is absent or large enough.
pub fn select_pairs(n: usize, max: Option<usize>, seed: u64) -> Vec<(usize, usize)> {
    let pairs = all_pairs(n);
    match max {
        Some(k) if k < pairs.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, pairs.len(), k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| pairs[i]).collect()
        }
        _ => pairs,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairWitness {
    pub p: String,
    pub q: String,
    pub certificate: StabilizerCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairScan {
    pub total_pairs: usize,
    pub selected: usize,
    pub examined: usize,
    /// Stabiliser order → number of examined pairs.
    pub histogram: BTreeMap<usize, usize>,
    /// First examined pair whose stabiliser has order q²−1.
    pub witness: Option<PairWitness>,
}

/// Stabiliser orders over the chosen pairs. With `stop_at_full` the scan
/// ends after the batch containing the first pair of order q²−1.
pub fn scan_pairs(u: &Unital, pairs: &[(usize, usize)], stop_at_full: bool) -> Result<PairScan> {
    let full = u.tower().q2() as usize - 1;
    let pts = u.points();
    let mut histogram = BTreeMap::new();
    let mut witness = None;
    let mut examined = 0;
    let batch = if stop_at_full { BATCH } else { pairs.len().max(1) };
    for chunk in pairs.chunks(batch) {
        let certs = chunk
            .par_iter()
            .map(|&(i, j)| two_point_stabilizer(u, &pts[i], &pts[j]))
            .collect::<Result<Vec<_>>>()?;
        for (&(i, j), cert) in chunk.iter().zip(certs) {
            *histogram.entry(cert.order).or_insert(0) += 1;
            if witness.is_none() && cert.order == full {
                witness = Some(PairWitness {
                    p: pts[i].to_string(),
                    q: pts[j].to_string(),
                    certificate: cert,
                });
            }
        }
        examined += chunk.len();
        if stop_at_full && witness.is_some() {
            break;
        }
    }
    Ok(PairScan {
        total_pairs: pts.len() * (pts.len() - 1) / 2,
        selected: pairs.len(),
        examined,
        histogram,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremVerdict {
    pub kind: String,
    pub size: usize,
    /// Some examined pair has stabiliser order q²−1.
    pub transitive_pair: bool,
    /// A Gram matrix with absolute set U exists.
    pub classical: bool,
    pub agrees: bool,
    pub scan: PairScan,
    pub form: Option<HermitianForm>,
}

/// Evaluates both sides of the characterisation on one unital.
pub fn check_theorem(u: &Unital, max_pairs: Option<usize>, seed: u64) -> Result<TheoremVerdict> {
    let pairs = select_pairs(u.len(), max_pairs, seed);
    let (scan, form) = rayon::join(|| scan_pairs(u, &pairs, true), || classicality_check(u));
    let (scan, form) = (scan?, form?);
    let transitive_pair = scan.witness.is_some();
    let classical = form.is_some();
    Ok(TheoremVerdict {
        kind: u.kind().to_string(),
        size: u.len(),
        transitive_pair,
        classical,
        agrees: transitive_pair == classical,
        scan,
        form,
    })
}
